//! Grid files, Wavefront OBJ export and the JSON report.
//!
//! Grid file layout (text, one record per node, `u` fastest):
//!
//! ```text
//! isocmc-grid 1
//! domain <u_min> <u_max> <v_min> <v_max>
//! size <n_u> <n_v>
//! H <h>
//! provenance <free text, one line>
//! <x> <y> <ell>
//! ...
//! ```
//!
//! Reals are written with 17 significant digits, so values survive a round
//! trip bit for bit.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::analysis::CurvatureSummary;
use crate::classify::ClassificationResult;
use crate::error::{Error, Result};
use crate::graphgeo::{ScalarField, Stats};
use crate::grid::{Grid, Rect};
use crate::vdist::VdistReport;
use crate::weierstrass::SurfaceSample;

pub const GRID_MAGIC: &str = "isocmc-grid";
pub const GRID_VERSION: u32 = 1;
pub const REPORT_SCHEMA_VERSION: &str = "1";

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes vertices `v x y ell` in storage order and two triangles per grid
/// cell, split along the `(i, j)`–`(i+1, j+1)` diagonal. Indices are 1-based.
pub fn write_obj(s: &SurfaceSample, mut w: impl Write) -> Result<()> {
    let g = s.grid;
    for k in 0..g.len() {
        writeln!(w, "v {} {} {}", real(s.x[k]), real(s.y[k]), real(s.ell[k]))?;
    }
    for j in 0..g.nv - 1 {
        for i in 0..g.nu - 1 {
            let a = g.index(i, j) + 1;
            let b = g.index(i + 1, j) + 1;
            let c = g.index(i + 1, j + 1) + 1;
            let d = g.index(i, j + 1) + 1;
            writeln!(w, "f {a} {b} {c}")?;
            writeln!(w, "f {a} {c} {d}")?;
        }
    }
    Ok(())
}

pub fn export_obj(s: &SurfaceSample, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_obj(s, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Vertices and triangles of an OBJ file (only `v` and `f` lines are read).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ObjMesh {
    pub vertices: Vec<[f64; 3]>,
    /// 1-based, as in the file.
    pub faces: Vec<[usize; 3]>,
}

pub fn read_obj(r: impl BufRead) -> Result<ObjMesh> {
    let mut mesh = ObjMesh::default();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        let mut parts = line.split_whitespace();
        let bad = |msg: &str| Error::Format {
            line: n + 1,
            msg: msg.to_string(),
        };
        match parts.next() {
            Some("v") => {
                let v: Vec<f64> = parts
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("bad vertex"))?;
                let [x, y, z] = v[..] else {
                    return Err(bad("vertex needs three coordinates"));
                };
                mesh.vertices.push([x, y, z]);
            }
            Some("f") => {
                let f: Vec<usize> = parts
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("bad face"))?;
                let [a, b, c] = f[..] else {
                    return Err(bad("only triangles are supported"));
                };
                mesh.faces.push([a, b, c]);
            }
            _ => {}
        }
    }
    Ok(mesh)
}

/// Contents of a grid file.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFile {
    pub grid: Grid,
    pub h: f64,
    pub provenance: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub ell: Vec<f64>,
}

impl GridFile {
    pub fn from_sample(s: &SurfaceSample, provenance: &str) -> Self {
        GridFile {
            grid: s.grid,
            h: s.h,
            provenance: provenance.replace(['\n', '\r'], " "),
            x: s.x.clone(),
            y: s.y.clone(),
            ell: s.ell.clone(),
        }
    }

    /// Heights as a graph over the recorded `(x, y)` lattice.
    pub fn to_scalar_field(&self) -> Result<ScalarField> {
        let sample = SurfaceSample {
            grid: self.grid,
            x: self.x.clone(),
            y: self.y.clone(),
            ell: self.ell.clone(),
            h: self.h,
            phi: Vec::new(),
        };
        ScalarField::from_sample(&sample)
    }
}

pub fn write_grid(g: &GridFile, mut w: impl Write) -> Result<()> {
    let d = g.grid.domain;
    writeln!(w, "{GRID_MAGIC} {GRID_VERSION}")?;
    writeln!(
        w,
        "domain {} {} {} {}",
        real(d.u_min),
        real(d.u_max),
        real(d.v_min),
        real(d.v_max)
    )?;
    writeln!(w, "size {} {}", g.grid.nu, g.grid.nv)?;
    writeln!(w, "H {}", real(g.h))?;
    writeln!(w, "provenance {}", g.provenance.replace(['\n', '\r'], " "))?;
    for k in 0..g.grid.len() {
        writeln!(w, "{} {} {}", real(g.x[k]), real(g.y[k]), real(g.ell[k]))?;
    }
    Ok(())
}

pub fn save_grid(g: &GridFile, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_grid(g, &mut w)?;
    w.flush()?;
    Ok(())
}

fn parse_reals(line: usize, fields: &[&str], want: usize) -> Result<Vec<f64>> {
    if fields.len() != want {
        return Err(Error::Format {
            line,
            msg: format!("expected {want} numbers, found {}", fields.len()),
        });
    }
    let vals = fields
        .iter()
        .map(|s| s.parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Format {
            line,
            msg: e.to_string(),
        })?;
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Format {
            line,
            msg: "non-finite value".into(),
        });
    }
    Ok(vals)
}

pub fn read_grid(r: impl BufRead) -> Result<GridFile> {
    let mut lines = r.lines().enumerate().map(|(n, l)| l.map(|l| (n + 1, l)));
    let mut seen = 0;
    let mut header = |key: &str| -> Result<(usize, String)> {
        let (n, line) = lines.next().ok_or(Error::Format {
            line: seen + 1,
            msg: format!("missing `{key}` header"),
        })??;
        seen = n;
        let rest = line
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(' ').or(r.is_empty().then_some("")))
            .ok_or_else(|| Error::Format {
                line: n,
                msg: format!("expected `{key}` header"),
            })?;
        Ok((n, rest.to_string()))
    };

    let (n, ver) = header(GRID_MAGIC)?;
    if ver.trim() != GRID_VERSION.to_string() {
        return Err(Error::Format {
            line: n,
            msg: format!("unsupported version `{ver}`"),
        });
    }
    let (n, dom) = header("domain")?;
    let d = parse_reals(n, &dom.split_whitespace().collect::<Vec<_>>(), 4)?;
    let domain = Rect::new(d[0], d[1], d[2], d[3]).map_err(|e| Error::Format {
        line: n,
        msg: e.to_string(),
    })?;
    let (n, size) = header("size")?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Format {
            line: n,
            msg: "bad grid size".into(),
        })?;
    let [nu, nv] = dims[..] else {
        return Err(Error::Format {
            line: n,
            msg: "size needs two counts".into(),
        });
    };
    let grid = Grid::new(domain, nu, nv).map_err(|e| Error::Format {
        line: n,
        msg: e.to_string(),
    })?;
    let (n, hline) = header("H")?;
    let h = parse_reals(n, &hline.split_whitespace().collect::<Vec<_>>(), 1)?[0];
    let (_, provenance) = header("provenance")?;

    let expected = grid.len();
    let (mut x, mut y, mut ell) = (
        Vec::with_capacity(expected),
        Vec::with_capacity(expected),
        Vec::with_capacity(expected),
    );
    let mut found = 0usize;
    for item in lines {
        let (n, line) = item?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        found += 1;
        if found > expected {
            continue;
        }
        let v = parse_reals(n, &fields, 3)?;
        x.push(v[0]);
        y.push(v[1]);
        ell.push(v[2]);
    }
    if found != expected {
        return Err(Error::CountMismatch { expected, found });
    }
    Ok(GridFile {
        grid,
        h,
        provenance,
        x,
        y,
        ell,
    })
}

pub fn load_grid(path: impl AsRef<Path>) -> Result<GridFile> {
    read_grid(BufReader::new(File::open(path)?))
}

/// Echo of the inputs that produced a report.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct InputEcho {
    pub tool: String,
    pub subcommand: String,
    pub h2: Option<String>,
    pub omega: Option<String>,
    pub h: Option<f64>,
    pub h_list: Option<Vec<f64>>,
    pub k: Option<f64>,
    pub domain: Option<Rect>,
    pub grid: Option<[usize; 2]>,
    pub radii: Option<Vec<f64>>,
    pub grid_file: Option<String>,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

/// JSON report, schema version 1: top-level keys `version`, `input`,
/// `curvature`, `classification`, `vdist`. Absent sections are `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDoc {
    pub version: String,
    pub input: InputEcho,
    pub curvature: Option<CurvatureSummary>,
    pub classification: Option<ClassificationResult>,
    pub vdist: Option<VdistReport>,
}

impl ReportDoc {
    pub fn new(input: InputEcho) -> Self {
        ReportDoc {
            version: REPORT_SCHEMA_VERSION.to_string(),
            input,
            curvature: None,
            classification: None,
            vdist: None,
        }
    }

    /// Every number in the report must be finite.
    pub fn validate(&self) -> Result<()> {
        fn chk(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::NonFiniteReport(name))
            }
        }
        fn all(name: &'static str, vs: &[f64]) -> Result<()> {
            vs.iter().try_for_each(|v| chk(name, *v))
        }
        fn stats(name: &'static str, s: &Option<Stats>) -> Result<()> {
            s.as_ref()
                .map_or(Ok(()), |s| all(name, &[s.min, s.max, s.mean]))
        }
        let i = &self.input;
        i.h.map_or(Ok(()), |v| chk("input.h", v))?;
        i.k.map_or(Ok(()), |v| chk("input.k", v))?;
        all("input.h_list", i.h_list.as_deref().unwrap_or(&[]))?;
        all("input.radii", i.radii.as_deref().unwrap_or(&[]))?;
        if let Some(d) = i.domain {
            all("input.domain", &[d.u_min, d.u_max, d.v_min, d.v_max])?;
        }
        all(
            "input.tolerances",
            &i.tolerances.values().copied().collect::<Vec<_>>(),
        )?;

        if let Some(c) = &self.curvature {
            stats("curvature.h_fd", &c.h_fd)?;
            stats("curvature.k_fd", &c.k_fd)?;
            stats("curvature.k_analytic", &c.k_analytic)?;
            c.h_analytic
                .map_or(Ok(()), |v| chk("curvature.h_analytic", v))?;
            c.max_h_deviation
                .map_or(Ok(()), |v| chk("curvature.max_h_deviation", v))?;
            c.max_k_deviation
                .map_or(Ok(()), |v| chk("curvature.max_k_deviation", v))?;
            for u in &c.umbilics {
                all("curvature.umbilics", &[u.re, u.im])?;
            }
            if let Some(p) = &c.pde {
                stats("curvature.pde.laplacian", &Some(p.laplacian))?;
                stats("curvature.pde.hessian_det", &Some(p.hessian_det))?;
                all(
                    "curvature.pde",
                    &[p.const_tol, p.hessian_image[0], p.hessian_image[1]],
                )?;
                if let Some(q) = &p.quadratic {
                    all("curvature.pde.quadratic", &q.coefficients)?;
                    all("curvature.pde.quadratic", &[q.max_residual, q.threshold])?;
                }
            }
            if let Some(s) = &c.sweep {
                all("curvature.sweep.h_values", &s.h_values)?;
                all(
                    "curvature.sweep",
                    &[
                        s.isometry_residual,
                        s.metric_residual,
                        s.height_identity_residual,
                    ],
                )?;
            }
        }
        if let Some(c) = &self.classification {
            all(
                "classification",
                &[c.alpha, c.beta, c.h, c.k, c.rotation_angle],
            )?;
        }
        if let Some(v) = &self.vdist {
            all("vdist.k_min", &v.k_min)?;
            all("vdist.k_max", &v.k_max)?;
            all("vdist.radii", &v.radii)?;
            all("vdist", &[v.h, v.sup_bound, v.const_tol, v.margin])?;
            for u in &v.umbilic_points {
                all("vdist.umbilic_points", &[u.re, u.im])?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        self.validate()?;
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

pub fn write_report(r: &ReportDoc, path: impl AsRef<Path>) -> Result<()> {
    let text = r.to_json()?;
    std::fs::write(path, text)?;
    Ok(())
}

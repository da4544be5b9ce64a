use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use isocmc_core::analysis::{CurvatureReport, CurvatureSummary, PdeSummary};
use isocmc_core::classify::{
    canonical_form, classify_sample, label_from_constants, DEFAULT_CLASSIFY_TOL,
};
use isocmc_core::graphgeo::{
    default_const_tol, pde_analyze, quadratic_test, ScalarField, Stats, DEFAULT_QUADRATIC_TOL,
};
use isocmc_core::holo::DEFAULT_TOL;
use isocmc_core::io_mesh::{
    export_obj, load_grid, save_grid, write_report, GridFile, InputEcho, ReportDoc,
};
use isocmc_core::vdist::{sample_k_image, Location, VdistOptions};
use isocmc_core::weierstrass::{
    sweep, synthesize, LiftParams, SurfaceSample, WeierstrassData, DEFAULT_UMBILIC_TOL,
};
use isocmc_core::Grid;

use crate::args::{
    AnalyzeArgs, ClassifyArgs, Cli, Command, Data, LiftArgs, OptData, PdeArgs, Sampling, SweepArgs,
    VdistArgs,
};

struct Ctx {
    out_dir: PathBuf,
    seed: u64,
    tol: BTreeMap<String, f64>,
}

impl Ctx {
    fn tol(&self, name: &str, default: f64) -> f64 {
        self.tol.get(name).copied().unwrap_or(default)
    }

    fn echo(&self, subcommand: &str) -> InputEcho {
        InputEcho {
            tool: format!("isocmc {}", env!("CARGO_PKG_VERSION")),
            subcommand: subcommand.into(),
            seed: self.seed,
            ..Default::default()
        }
    }

    fn path(&self, name: &str, ext: &str) -> PathBuf {
        self.out_dir.join(format!("{name}.{ext}"))
    }

    fn finish(&self, doc: &mut ReportDoc, used: &[(&str, f64)], name: &str) -> Result<()> {
        doc.input.tolerances = used.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let path = self.path(name, "json");
        write_report(doc, &path).with_context(|| format!("writing {}", path.display()))?;
        println!("report: {}", path.display());
        Ok(())
    }
}

pub fn run(cli: Cli) -> Result<()> {
    std::fs::create_dir_all(&cli.out_dir)
        .with_context(|| format!("creating {}", cli.out_dir.display()))?;
    let ctx = Ctx {
        out_dir: cli.out_dir,
        seed: cli.seed,
        tol: cli.tol.into_iter().collect(),
    };
    match cli.command {
        Command::Lift(a) => lift(&ctx, a),
        Command::Analyze(a) => analyze(&ctx, a),
        Command::Classify(a) => classify(&ctx, a),
        Command::Sweep(a) => sweep_cmd(&ctx, a),
        Command::Vdist(a) => vdist(&ctx, a),
        Command::Pde(a) => pde(&ctx, a),
    }
}

fn load_data(ctx: &Ctx, h2: &str, omega: &str) -> Result<WeierstrassData> {
    let data = WeierstrassData::parse(h2, omega)
        .with_context(|| format!("Weierstrass data ({h2}, {omega})"))?;
    Ok(data.with_quad_tol(ctx.tol("quad", DEFAULT_TOL)))
}

fn grid_of(s: &Sampling) -> Result<Grid> {
    Ok(Grid::new(s.domain, s.grid.0, s.grid.1)?)
}

fn echo_data(e: &mut InputEcho, d: &Data, s: &Sampling) {
    e.h2 = Some(d.h2.clone());
    e.omega = Some(d.omega.clone());
    e.domain = Some(s.domain);
    e.grid = Some([s.grid.0, s.grid.1]);
}

fn opt_data(d: &OptData) -> Option<Data> {
    match (&d.h2, &d.omega) {
        (Some(h2), Some(omega)) => Some(Data {
            h2: h2.clone(),
            omega: omega.clone(),
        }),
        _ => None,
    }
}

/// Analytic curvature of a sample, with the finite-difference comparison when
/// the sample is a graph over a uniform grid.
fn sample_summary(s: &SurfaceSample, umbilic_tol: f64) -> Result<CurvatureSummary> {
    match CurvatureReport::from_sample(s, umbilic_tol) {
        Ok(r) => Ok(r.summary()),
        Err(isocmc_core::Error::NotGraphMode | isocmc_core::Error::GridTooSmall { .. }) => {
            let umbilics = (0..s.grid.len())
                .filter(|&k| s.phi[k].norm() < umbilic_tol)
                .map(|k| Location {
                    re: s.x[k],
                    im: s.y[k],
                })
                .collect();
            Ok(CurvatureSummary {
                h_analytic: Some(s.h),
                k_analytic: Some(Stats::of(&s.analytic_k())),
                umbilics,
                ..Default::default()
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn print_curvature(c: &CurvatureSummary) {
    if let Some(k) = &c.k_analytic {
        println!("K analytic: min {:.6e} max {:.6e}", k.min, k.max);
    }
    if let Some(k) = &c.k_fd {
        println!("K fd:       min {:.6e} max {:.6e}", k.min, k.max);
    }
    if let Some(d) = c.max_k_deviation {
        println!("max |K_fd - K|: {d:.3e}");
    }
    if let Some(d) = c.max_h_deviation {
        println!("max |H_fd - H|: {d:.3e}");
    }
    println!("umbilics: {}", c.umbilics.len());
}

fn lift(ctx: &Ctx, a: LiftArgs) -> Result<()> {
    let data = load_data(ctx, &a.data.h2, &a.data.omega)?;
    let grid = grid_of(&a.sampling)?;
    let s = synthesize(&data, &LiftParams { h: a.h, grid })?;
    let umbilic_tol = ctx.tol("umbilic", DEFAULT_UMBILIC_TOL);

    let obj = ctx.path(&a.output, "obj");
    export_obj(&s, &obj).with_context(|| format!("writing {}", obj.display()))?;
    let gpath = ctx.path(&a.output, "grid");
    let provenance = format!("h2={} omega={} H={}", a.data.h2, a.data.omega, a.h);
    save_grid(&GridFile::from_sample(&s, &provenance), &gpath)
        .with_context(|| format!("writing {}", gpath.display()))?;
    println!("mesh: {}", obj.display());
    println!("grid: {}", gpath.display());

    let mut doc = ReportDoc::new(ctx.echo("lift"));
    echo_data(&mut doc.input, &a.data, &a.sampling);
    doc.input.h = Some(a.h);
    let c = sample_summary(&s, umbilic_tol)?;
    print_curvature(&c);
    doc.curvature = Some(c);
    ctx.finish(
        &mut doc,
        &[("quad", data.quad_tol()), ("umbilic", umbilic_tol)],
        &a.output,
    )
}

fn analyze(ctx: &Ctx, a: AnalyzeArgs) -> Result<()> {
    let umbilic_tol = ctx.tol("umbilic", DEFAULT_UMBILIC_TOL);
    let mut doc = ReportDoc::new(ctx.echo("analyze"));
    let mut used = vec![("umbilic", umbilic_tol)];
    let summary = if let Some(path) = &a.grid_file {
        let g = load_grid(path).with_context(|| format!("reading grid file {}", path.display()))?;
        doc.input.grid_file = Some(path.display().to_string());
        doc.input.h = Some(g.h);
        let mut r = CurvatureReport::from_field(&g.to_scalar_field()?)?;
        r.h_analytic = Some(g.h);
        r.summary()
    } else {
        let d = opt_data(&a.data).context("either --grid-file or --h2/--omega is required")?;
        let data = load_data(ctx, &d.h2, &d.omega)?;
        used.push(("quad", data.quad_tol()));
        echo_data(&mut doc.input, &d, &a.sampling);
        doc.input.h = Some(a.h);
        let s = synthesize(
            &data,
            &LiftParams {
                h: a.h,
                grid: grid_of(&a.sampling)?,
            },
        )?;
        CurvatureReport::from_sample(&s, umbilic_tol)?.summary()
    };
    print_curvature(&summary);
    doc.curvature = Some(summary);
    ctx.finish(&mut doc, &used, &a.output)
}

fn field_from(
    ctx: &Ctx,
    doc: &mut ReportDoc,
    d: &OptData,
    grid_file: &Option<PathBuf>,
    h: f64,
    s: &Sampling,
) -> Result<ScalarField> {
    if let Some(path) = grid_file {
        let g = load_grid(path).with_context(|| format!("reading grid file {}", path.display()))?;
        doc.input.grid_file = Some(path.display().to_string());
        doc.input.h = Some(g.h);
        return Ok(g.to_scalar_field()?);
    }
    let d = opt_data(d).context("one of --grid-file, --h2/--omega or --H/--K is required")?;
    let data = load_data(ctx, &d.h2, &d.omega)?;
    echo_data(&mut doc.input, &d, s);
    doc.input.h = Some(h);
    let sample = synthesize(
        &data,
        &LiftParams {
            h,
            grid: grid_of(s)?,
        },
    )?;
    Ok(ScalarField::from_sample(&sample)?)
}

fn classify(ctx: &Ctx, a: ClassifyArgs) -> Result<()> {
    let tol = ctx.tol("classify", DEFAULT_CLASSIFY_TOL);
    let mut doc = ReportDoc::new(ctx.echo("classify"));
    let mut used = vec![("classify", tol)];
    let r = if let (Some(h), Some(k)) = (a.h, a.k) {
        doc.input.h = Some(h);
        doc.input.k = Some(k);
        label_from_constants(h, k, tol)?
    } else {
        let f = field_from(
            ctx,
            &mut doc,
            &a.data,
            &a.grid_file,
            a.h.unwrap_or(0.0),
            &a.sampling,
        )?;
        used.push(("quad", ctx.tol("quad", DEFAULT_TOL)));
        classify_sample(&f, tol)?
    };
    match r.label.case() {
        Some(c) => println!("label: {:?} ({c})", r.label),
        None => println!("label: {:?}", r.label),
    }
    println!(
        "H = {:.12} K = {:.12} alpha = {:.12} beta = {:.12}",
        r.h, r.k, r.alpha, r.beta
    );
    println!("rotation angle: {:.12}", r.rotation_angle);
    doc.classification = Some(r);
    ctx.finish(&mut doc, &used, &a.output)
}

fn sweep_cmd(ctx: &Ctx, a: SweepArgs) -> Result<()> {
    let data = load_data(ctx, &a.data.h2, &a.data.omega)?;
    let r = sweep(&data, grid_of(&a.sampling)?, &a.h_list)?;
    println!("x,y identical: {}", r.xy_identical);
    println!("isometry residual: {:.3e}", r.isometry_residual);
    println!("metric residual: {:.3e}", r.metric_residual);
    println!(
        "height identity residual: {:.3e}",
        r.height_identity_residual
    );
    let mut doc = ReportDoc::new(ctx.echo("sweep"));
    echo_data(&mut doc.input, &a.data, &a.sampling);
    doc.input.h_list = Some(a.h_list);
    doc.curvature = Some(CurvatureSummary {
        sweep: Some(r),
        ..Default::default()
    });
    ctx.finish(&mut doc, &[("quad", data.quad_tol())], &a.output)
}

fn vdist(ctx: &Ctx, a: VdistArgs) -> Result<()> {
    let data = load_data(ctx, &a.data.h2, &a.data.omega)?;
    let opts = VdistOptions {
        samples_per_radius: a.samples,
        umbilic_tol: ctx.tol("umbilic", DEFAULT_UMBILIC_TOL),
        const_tol: ctx.tol.get("vdist-const").copied(),
        margin: ctx.tol.get("vdist-margin").copied(),
        ..Default::default()
    };
    let r = sample_k_image(&data, a.h, &a.radii, &opts)?;
    println!("verdict: {:?}", r.verdict);
    for ((rad, lo), hi) in r.radii.iter().zip(&r.k_min).zip(&r.k_max) {
        println!("R = {rad}: K in [{lo:.6e}, {hi:.6e}]");
    }
    for u in &r.umbilic_points {
        println!("umbilic at {} + {}i", u.re, u.im);
    }
    let mut doc = ReportDoc::new(ctx.echo("vdist"));
    doc.input.h2 = Some(a.data.h2);
    doc.input.omega = Some(a.data.omega);
    doc.input.h = Some(a.h);
    doc.input.radii = Some(a.radii);
    let used = [
        ("quad", data.quad_tol()),
        ("umbilic", opts.umbilic_tol),
        ("vdist-const", r.const_tol),
        ("vdist-margin", r.margin),
    ];
    doc.vdist = Some(r);
    ctx.finish(&mut doc, &used, &a.output)
}

fn pde(ctx: &Ctx, a: PdeArgs) -> Result<()> {
    let mut doc = ReportDoc::new(ctx.echo("pde"));
    let f = if let (Some(h), Some(k)) = (a.h, a.k) {
        doc.input.h = Some(h);
        doc.input.k = Some(k);
        doc.input.domain = Some(a.sampling.domain);
        doc.input.grid = Some([a.sampling.grid.0, a.sampling.grid.1]);
        canonical_form(h, k)?.sample(grid_of(&a.sampling)?)?
    } else {
        if a.grid_file.is_none() && a.data.h2.is_none() {
            bail!("one of --grid-file, --h2/--omega or --H/--K is required");
        }
        field_from(
            ctx,
            &mut doc,
            &a.data,
            &a.grid_file,
            a.h.unwrap_or(0.0),
            &a.sampling,
        )?
    };
    let h_ref = doc.input.h.unwrap_or(0.0);
    let const_tol = ctx.tol("const", default_const_tol(h_ref));
    let quad_fit_tol = ctx.tol("quadratic", DEFAULT_QUADRATIC_TOL);
    let p = pde_analyze(&f, const_tol)?;
    let q = quadratic_test(&f, quad_fit_tol)?;
    println!(
        "laplacian: min {:.6e} max {:.6e} constant {}",
        p.laplacian_stats.min, p.laplacian_stats.max, p.is_constant_laplacian
    );
    println!(
        "hessian det: min {:.6e} max {:.6e}",
        p.hessian_image[0], p.hessian_image[1]
    );
    println!(
        "quadratic: {} (max residual {:.3e})",
        q.is_quadratic, q.max_residual
    );
    doc.curvature = Some(CurvatureSummary {
        pde: Some(PdeSummary {
            laplacian: p.laplacian_stats,
            hessian_det: p.hessian_stats,
            is_constant_laplacian: p.is_constant_laplacian,
            const_tol,
            hessian_image: p.hessian_image,
            quadratic: Some(q),
        }),
        ..Default::default()
    });
    ctx.finish(
        &mut doc,
        &[("const", const_tol), ("quadratic", quad_fit_tol)],
        &a.output,
    )
}

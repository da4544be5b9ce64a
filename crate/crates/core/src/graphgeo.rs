//! Finite-difference geometry of graphs `ℓ = f(x, y)`.
//!
//! For a graph in isotropic 3-space the mean and Gaussian curvatures are the
//! half-Laplacian and the Hessian determinant of `f`:
//!
//! ```text
//! H = (f_xx + f_yy) / 2,    K = f_xx f_yy - f_xy²
//! ```
//!
//! Everything here works from sampled heights only, so it serves as an
//! independent check on the analytic curvature of [`crate::weierstrass`].
//! Outputs cover interior nodes only; the stencil margin is recorded.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, Rect};
use crate::weierstrass::SurfaceSample;

/// Default relative tolerance of [`quadratic_test`].
pub const DEFAULT_QUADRATIC_TOL: f64 = 1e-8;

/// Default `const_tol` for [`pde_analyze`]: `1e-6 (1 + |H|)`.
pub fn default_const_tol(h: f64) -> f64 {
    1e-6 * (1.0 + h.abs())
}

/// Heights sampled on a uniform `(x, y)` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::CountMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(ScalarField { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(|(_, _, x, y)| f(x, y)).collect();
        ScalarField::new(grid, values)
    }

    /// Reads a synthesized sample as a graph. The planar coordinates must form
    /// a uniform axis-aligned lattice, which holds for `omega = c dz` with real
    /// positive `c`.
    pub fn from_sample(s: &SurfaceSample) -> Result<Self> {
        let g = s.grid;
        let (nx, ny) = (g.nu, g.nv);
        let x0 = s.x[0];
        let x1 = s.x[nx - 1];
        let y0 = s.y[0];
        let y1 = s.y[g.index(0, ny - 1)];
        let domain = Rect::new(x0, x1, y0, y1).map_err(|_| Error::NotGraphMode)?;
        let grid = Grid::new(domain, nx, ny)?;
        let tol_x = 1e-9 * (x1 - x0).abs().max(x0.abs()).max(x1.abs());
        let tol_y = 1e-9 * (y1 - y0).abs().max(y0.abs()).max(y1.abs());
        for (i, j, x, y) in grid.nodes() {
            let k = g.index(i, j);
            if (s.x[k] - x).abs() > tol_x || (s.y[k] - y).abs() > tol_y {
                return Err(Error::NotGraphMode);
            }
        }
        ScalarField::new(grid, s.ell.clone())
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    fn require(&self, need: usize) -> Result<()> {
        if self.grid.nu < need || self.grid.nv < need {
            return Err(Error::GridTooSmall {
                need,
                nx: self.grid.nu,
                ny: self.grid.nv,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        let (mut min, mut max, mut sum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
        for &v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
        }
        Stats {
            min,
            max,
            mean: sum / values.len() as f64,
        }
    }

    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// Values on the interior nodes `margin..n-margin` of a grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorField {
    pub grid: Grid,
    pub margin: usize,
    pub values: Vec<f64>,
}

impl InteriorField {
    fn build(grid: Grid, margin: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity((grid.nu - 2 * margin) * (grid.nv - 2 * margin));
        for j in margin..grid.nv - margin {
            for i in margin..grid.nu - margin {
                values.push(f(i, j));
            }
        }
        InteriorField {
            grid,
            margin,
            values,
        }
    }

    pub fn width(&self) -> usize {
        self.grid.nu - 2 * self.margin
    }

    /// Value at full-grid node `(i, j)`, which must be interior.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let m = self.margin;
        self.values[(j - m) * self.width() + (i - m)]
    }

    /// `(i, j, x, y, value)` over interior nodes, in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64, f64, f64)> + '_ {
        let w = self.width();
        self.values.iter().enumerate().map(move |(k, &val)| {
            let (i, j) = (k % w + self.margin, k / w + self.margin);
            (i, j, self.grid.u(i), self.grid.v(j), val)
        })
    }

    pub fn stats(&self) -> Stats {
        Stats::of(&self.values)
    }

    /// Largest `|self - other|` at matching nodes.
    pub fn max_abs_diff(&self, other: impl Fn(usize, usize, f64, f64) -> f64) -> f64 {
        self.iter()
            .map(|(i, j, x, y, v)| (v - other(i, j, x, y)).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
struct Second {
    fxx: f64,
    fyy: f64,
    fxy: f64,
}

// 3-point central second differences and the 4-point cross stencil.
fn second_at(f: &ScalarField, i: usize, j: usize) -> Second {
    let (hx, hy) = f.grid.spacing();
    let c = f.at(i, j);
    Second {
        fxx: (f.at(i + 1, j) - 2.0 * c + f.at(i - 1, j)) / (hx * hx),
        fyy: (f.at(i, j + 1) - 2.0 * c + f.at(i, j - 1)) / (hy * hy),
        fxy: (f.at(i + 1, j + 1) - f.at(i + 1, j - 1) - f.at(i - 1, j + 1) + f.at(i - 1, j - 1))
            / (4.0 * hx * hy),
    }
}

fn second_field(f: &ScalarField, op: impl Fn(Second) -> f64) -> Result<InteriorField> {
    f.require(5)?;
    Ok(InteriorField::build(f.grid, 1, |i, j| {
        op(second_at(f, i, j))
    }))
}

/// `H = (f_xx + f_yy)/2` at interior nodes.
pub fn fd_mean_curvature(f: &ScalarField) -> Result<InteriorField> {
    second_field(f, |d| 0.5 * (d.fxx + d.fyy))
}

/// `K = f_xx f_yy - f_xy²` at interior nodes.
pub fn fd_gauss_curvature(f: &ScalarField) -> Result<InteriorField> {
    second_field(f, |d| d.fxx * d.fyy - d.fxy * d.fxy)
}

/// Third partial derivatives `(f_xxx, f_xxy, f_xyy, f_yyy)` from 5-point
/// central stencils, at nodes at least two away from the boundary.
pub fn fd_third_derivatives(f: &ScalarField) -> Result<[InteriorField; 4]> {
    f.require(7)?;
    let (hx, hy) = f.grid.spacing();
    let d3x = |i: usize, j: usize| {
        (f.at(i + 2, j) - 2.0 * f.at(i + 1, j) + 2.0 * f.at(i - 1, j) - f.at(i - 2, j))
            / (2.0 * hx * hx * hx)
    };
    let d3y = |i: usize, j: usize| {
        (f.at(i, j + 2) - 2.0 * f.at(i, j + 1) + 2.0 * f.at(i, j - 1) - f.at(i, j - 2))
            / (2.0 * hy * hy * hy)
    };
    let dxx = |i: usize, j: usize| (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) / (hx * hx);
    let dyy = |i: usize, j: usize| (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) / (hy * hy);
    let g = f.grid;
    Ok([
        InteriorField::build(g, 2, d3x),
        InteriorField::build(g, 2, |i, j| (dxx(i, j + 1) - dxx(i, j - 1)) / (2.0 * hy)),
        InteriorField::build(g, 2, |i, j| (dyy(i + 1, j) - dyy(i - 1, j)) / (2.0 * hx)),
        InteriorField::build(g, 2, d3y),
    ])
}

/// Laplacian and Hessian-determinant view of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PdeReport {
    pub laplacian: InteriorField,
    pub hessian_det: InteriorField,
    pub laplacian_stats: Stats,
    pub hessian_stats: Stats,
    pub is_constant_laplacian: bool,
    pub const_tol: f64,
    /// `[min, max]` of the Hessian determinant over interior nodes.
    pub hessian_image: [f64; 2],
}

/// Computes `Δf = f_xx + f_yy` and `det Hess f`; the Laplacian counts as
/// constant when its range is below `const_tol`.
pub fn pde_analyze(f: &ScalarField, const_tol: f64) -> Result<PdeReport> {
    let laplacian = second_field(f, |d| d.fxx + d.fyy)?;
    let hessian_det = second_field(f, |d| d.fxx * d.fyy - d.fxy * d.fxy)?;
    let laplacian_stats = laplacian.stats();
    let hessian_stats = hessian_det.stats();
    Ok(PdeReport {
        is_constant_laplacian: laplacian_stats.range() < const_tol,
        const_tol,
        hessian_image: [hessian_stats.min, hessian_stats.max],
        laplacian,
        hessian_det,
        laplacian_stats,
        hessian_stats,
    })
}

/// Least-squares fit by `a + b x + c y + d x² + e xy + g y²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticFit {
    pub is_quadratic: bool,
    /// `[a, b, c, d, e, g]`
    pub coefficients: [f64; 6],
    pub max_residual: f64,
    /// `tol (1 + max |f|)`
    pub threshold: f64,
}

impl QuadraticFit {
    /// Coefficients of `x²`, `xy`, `y²`.
    pub fn quadratic_part(&self) -> (f64, f64, f64) {
        (
            self.coefficients[3],
            self.coefficients[4],
            self.coefficients[5],
        )
    }
}

/// Fits a quadratic polynomial to the whole field; the field is quadratic when
/// the largest residual is below `tol (1 + max |f|)`.
pub fn quadratic_test(f: &ScalarField, tol: f64) -> Result<QuadraticFit> {
    f.require(7)?;
    let d = f.grid.domain;
    // fit in coordinates scaled to [-1, 1] for conditioning
    let (cx, sx) = (0.5 * (d.u_min + d.u_max), 0.5 * (d.u_max - d.u_min));
    let (cy, sy) = (0.5 * (d.v_min + d.v_max), 0.5 * (d.v_max - d.v_min));
    let n = f.grid.len();
    let mut a = DMatrix::<f64>::zeros(n, 6);
    let mut rhs = DVector::<f64>::zeros(n);
    for (k, (_, _, x, y)) in f.grid.nodes().enumerate() {
        let (s, t) = ((x - cx) / sx, (y - cy) / sy);
        for (col, m) in [1.0, s, t, s * s, s * t, t * t].into_iter().enumerate() {
            a[(k, col)] = m;
        }
        rhs[k] = f.values[k];
    }
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-12 * sv.max() {
        return Err(Error::DegenerateFit);
    }
    let sol = svd.solve(&rhs, 0.0).map_err(|_| Error::DegenerateFit)?;
    let residual = &a * &sol - &rhs;
    let max_residual = residual.amax();
    let max_f = f.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = tol * (1.0 + max_f);

    // back to monomials in x, y: s = p x + q, t = r y + w
    let (p, q, r, w) = (1.0 / sx, -cx / sx, 1.0 / sy, -cy / sy);
    let (ca, cb, cc, cd, ce, cg) = (sol[0], sol[1], sol[2], sol[3], sol[4], sol[5]);
    let coefficients = [
        ca + cb * q + cc * w + cd * q * q + ce * q * w + cg * w * w,
        cb * p + 2.0 * cd * p * q + ce * p * w,
        cc * r + ce * r * q + 2.0 * cg * r * w,
        cd * p * p,
        ce * p * r,
        cg * r * r,
    ];
    Ok(QuadraticFit {
        is_quadratic: max_residual < threshold,
        coefficients,
        max_residual,
        threshold,
    })
}

/// Conformal factor `|∂_u (x + i y)|²` of a sampled chart, by central first
/// differences.
///
/// Fails when the chart is not isothermal: `|X_u|² - |X_v|²` or `X_u · X_v`
/// beyond `10 h² (1 + |X_u|²)` at some interior node.
pub fn fd_metric(grid: &Grid, x: &[f64], y: &[f64]) -> Result<InteriorField> {
    if x.len() != grid.len() || y.len() != grid.len() {
        return Err(Error::CountMismatch {
            expected: grid.len(),
            found: x.len().min(y.len()),
        });
    }
    if grid.nu < 3 || grid.nv < 3 {
        return Err(Error::GridTooSmall {
            need: 3,
            nx: grid.nu,
            ny: grid.nv,
        });
    }
    let (hu, hv) = grid.spacing();
    let h = hu.max(hv);
    let at = |arr: &[f64], i: usize, j: usize| arr[grid.index(i, j)];
    let mut violation: Option<(f64, f64)> = None;
    let field = InteriorField::build(*grid, 1, |i, j| {
        let xu = (at(x, i + 1, j) - at(x, i - 1, j)) / (2.0 * hu);
        let yu = (at(y, i + 1, j) - at(y, i - 1, j)) / (2.0 * hu);
        let xv = (at(x, i, j + 1) - at(x, i, j - 1)) / (2.0 * hv);
        let yv = (at(y, i, j + 1) - at(y, i, j - 1)) / (2.0 * hv);
        let e = xu * xu + yu * yu;
        let g = xv * xv + yv * yv;
        let cross = xu * xv + yu * yv;
        let residual = (e - g).abs().max(cross.abs());
        let tolerance = 10.0 * h * h * (1.0 + e);
        if residual > tolerance && violation.is_none() {
            violation = Some((residual, tolerance));
        }
        e
    });
    match violation {
        Some((residual, tolerance)) => Err(Error::NonConformal {
            residual,
            tolerance,
        }),
        None => Ok(field),
    }
}

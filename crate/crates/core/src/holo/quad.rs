//! Adaptive Gauss–Legendre integration along polylines in the complex plane.

use num_complex::Complex64;

use super::expr::HoloExpr;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_PANELS: usize = 10_000;
// Starting panels per segment, so symmetric cancellation over a whole segment
// cannot pass the first error check.
const INITIAL_PANELS: usize = 4;
const MIN_PANEL_FRACTION: f64 = 1e-15;
const ROUNDOFF_FLOOR: f64 = 64.0 * f64::EPSILON;

// 10-point Gauss–Legendre rule on [-1, 1], symmetric half.
const GL10_NODES: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_WEIGHTS: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_4,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Polyline in the complex plane. The first waypoint is the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    waypoints: Vec<Complex64>,
}

impl Path {
    pub fn new(waypoints: Vec<Complex64>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two waypoints"));
        }
        if waypoints.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath("consecutive waypoints coincide"));
        }
        if waypoints
            .iter()
            .any(|w| !w.re.is_finite() || !w.im.is_finite())
        {
            return Err(Error::InvalidPath("waypoints must be finite"));
        }
        Ok(Path { waypoints })
    }

    pub fn segment(from: Complex64, to: Complex64) -> Result<Self> {
        Path::new(vec![from, to])
    }

    pub fn waypoints(&self) -> &[Complex64] {
        &self.waypoints
    }

    pub fn length(&self) -> f64 {
        self.waypoints
            .windows(2)
            .map(|w| (w[1] - w[0]).norm())
            .sum()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Absolute error target for the whole path.
    pub tol: f64,
    /// Total panel budget for the whole path.
    pub max_panels: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            tol: DEFAULT_TOL,
            max_panels: DEFAULT_MAX_PANELS,
        }
    }
}

fn gauss10(
    f: &impl Fn(Complex64) -> Result<Complex64>,
    a: Complex64,
    b: Complex64,
) -> Result<Complex64> {
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in GL10_NODES.iter().zip(GL10_WEIGHTS.iter()) {
        acc += (f(mid + half * *x)? + f(mid - half * *x)?) * *w;
    }
    Ok(acc * half)
}

/// Integrates `f(z) dz` along `path`.
///
/// Each segment starts as four panels, which are bisected until a panel's 10-point
/// estimate agrees with the sum over its two halves to within the panel's
/// share of `tol` (proportional to its length), or until the disagreement is at
/// the level of floating-point roundoff in the panel value.
pub fn integrate_path(
    f: impl Fn(Complex64) -> Result<Complex64>,
    path: &Path,
    opts: QuadratureOptions,
) -> Result<Complex64> {
    let total_len = path.length();
    let mut panels = 0usize;
    let mut total = Complex64::new(0.0, 0.0);
    for seg in path.waypoints.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let mut stack = Vec::new();
        for k in (0..INITIAL_PANELS).rev() {
            let lo = a + (b - a) * (k as f64 / INITIAL_PANELS as f64);
            let hi = if k + 1 == INITIAL_PANELS {
                b
            } else {
                a + (b - a) * ((k + 1) as f64 / INITIAL_PANELS as f64)
            };
            stack.push((lo, hi, gauss10(&f, lo, hi)?));
            panels += 1;
        }
        while let Some((lo, hi, whole)) = stack.pop() {
            let mid = (lo + hi) * 0.5;
            let left = gauss10(&f, lo, mid)?;
            let right = gauss10(&f, mid, hi)?;
            panels += 1;
            let refined = left + right;
            let estimate = (refined - whole).norm();
            // below the roundoff floor no further bisection can help
            let share =
                (opts.tol * (hi - lo).norm() / total_len).max(ROUNDOFF_FLOOR * refined.norm());
            if estimate <= share {
                total += refined;
                continue;
            }
            if (hi - lo).norm() < MIN_PANEL_FRACTION * (b - a).norm() {
                // bisection has closed in on a non-integrable point
                return Err(Error::Singularity { at: mid });
            }
            if panels >= opts.max_panels {
                return Err(Error::QuadratureBudget {
                    tol: opts.tol,
                    panels,
                    estimate,
                });
            }
            stack.push((mid, hi, right));
            stack.push((lo, mid, left));
        }
    }
    if total.re.is_finite() && total.im.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFinite)
    }
}

/// Integrates the expression (in z) along `path` with absolute tolerance `tol`.
pub fn contour_integral(e: &HoloExpr, path: &Path, tol: f64) -> Result<Complex64> {
    if !e.is_complex_mode() {
        return Err(Error::NotComplexMode);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    integrate_path(
        |z| e.eval_z(z),
        path,
        QuadratureOptions {
            tol,
            ..Default::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holo::parse;
    use std::f64::consts::PI;

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rule_weights_and_exactness() {
        let wsum: f64 = GL10_WEIGHTS.iter().sum::<f64>() * 2.0;
        assert!((wsum - 2.0).abs() < 1e-15);
        // exact for degree 19: integral of x^18 over [-1,1] is 2/19
        let v = gauss10(&|z: Complex64| Ok(z.powu(18)), cx(-1.0, 0.0), cx(1.0, 0.0)).unwrap();
        assert!((v.re - 2.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn exp_along_imaginary_axis() {
        let e = parse("exp(z)").unwrap();
        let path = Path::segment(cx(0.0, 0.0), cx(0.0, PI)).unwrap();
        let v = contour_integral(&e, &path, 1e-10).unwrap();
        assert!((v - cx(-2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn identity_to_one_plus_i() {
        let e = parse("z").unwrap();
        let path = Path::segment(cx(0.0, 0.0), cx(1.0, 1.0)).unwrap();
        let v = contour_integral(&e, &path, 1e-10).unwrap();
        assert!((v - cx(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn gaussian_against_simpson() {
        // composite Simpson oracle on 10^6 subintervals, evaluated directly
        let n = 1_000_000usize;
        let h = 1.0 / n as f64;
        let g = |x: f64| (x * x).exp();
        let mut s = g(0.0) + g(1.0);
        for k in 1..n {
            s += g(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let oracle = s * h / 3.0;

        let e = parse("exp(z^2)").unwrap();
        let path = Path::segment(cx(0.0, 0.0), cx(1.0, 0.0)).unwrap();
        let v = contour_integral(&e, &path, 1e-10).unwrap();
        assert!((v.re - oracle).abs() < 1e-9, "{} vs {oracle}", v.re);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn singularity_on_path() {
        let e = parse("1/z").unwrap();
        let path = Path::segment(cx(-1.0, 0.0), cx(1.0, 0.0)).unwrap();
        let err = contour_integral(&e, &path, 1e-10).unwrap_err();
        assert!(
            matches!(err, Error::Singularity { at } if at.norm() < 1e-12),
            "{err}"
        );
    }

    #[test]
    fn budget_exhaustion() {
        let e = parse("exp(50*z)*sin(200*z)").unwrap();
        let path = Path::segment(cx(0.0, 0.0), cx(1.0, 0.0)).unwrap();
        let r = integrate_path(
            |z| e.eval_z(z),
            &path,
            QuadratureOptions {
                tol: 1e-30,
                max_panels: 16,
            },
        );
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }

    #[test]
    fn invalid_paths() {
        assert!(Path::new(vec![cx(0.0, 0.0)]).is_err());
        assert!(Path::new(vec![cx(0.0, 0.0), cx(0.0, 0.0)]).is_err());
    }
}

//! Constant-curvature CMC surfaces and their quadric types.
//!
//! A CMC-H surface with constant `K` is, up to isometry, the graph
//!
//! ```text
//! ℓ = H (x² + y²)/2 + sqrt(H² - K) (x² - y²)/2 = α x² + β y²
//! ```
//!
//! with `α = (H + sqrt(H² - K))/2`, `β = (H - sqrt(H² - K))/2`, so `α + β = H`
//! and `αβ = K/4`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphgeo::{quadratic_test, ScalarField, DEFAULT_QUADRATIC_TOL};
use crate::grid::Grid;

/// Default tolerance for the `H = 0`, `K = 0` and `H² = K` decisions.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuadricLabel {
    Plane,
    Cylinder,
    HyperbolicParaboloid,
    RectangularHyperbolicParaboloid,
    EllipticParaboloid,
    CircularParaboloid,
    NonQuadric,
}

impl QuadricLabel {
    /// Case letter in the classification list, `None` for non-quadrics.
    pub fn case(self) -> Option<char> {
        Some(match self {
            QuadricLabel::Plane => 'a',
            QuadricLabel::Cylinder => 'b',
            QuadricLabel::HyperbolicParaboloid => 'c',
            QuadricLabel::RectangularHyperbolicParaboloid => 'd',
            QuadricLabel::EllipticParaboloid => 'e',
            QuadricLabel::CircularParaboloid => 'f',
            QuadricLabel::NonQuadric => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub label: QuadricLabel,
    pub alpha: f64,
    pub beta: f64,
    pub h: f64,
    pub k: f64,
    /// Angle of the planar rotation taking the canonical coordinates to the
    /// sample's, in `(-π/2, π/2]`; zero when classifying from constants.
    pub rotation_angle: f64,
}

/// The canonical constant-curvature surface for a given `(H, K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CanonicalSurface {
    pub h: f64,
    pub k: f64,
}

impl CanonicalSurface {
    fn root(&self) -> f64 {
        (self.h * self.h - self.k).max(0.0).sqrt()
    }

    pub fn alpha(&self) -> f64 {
        0.5 * (self.h + self.root())
    }

    pub fn beta(&self) -> f64 {
        0.5 * (self.h - self.root())
    }

    pub fn height(&self, x: f64, y: f64) -> f64 {
        self.h * (x * x + y * y) / 2.0 + self.root() * (x * x - y * y) / 2.0
    }

    pub fn sample(&self, grid: Grid) -> Result<ScalarField> {
        ScalarField::from_fn(grid, |x, y| self.height(x, y))
    }
}

/// Canonical surface for `(H, K)`; fails when `K > H²`.
pub fn canonical_form(h: f64, k: f64) -> Result<CanonicalSurface> {
    if !h.is_finite() || !k.is_finite() {
        return Err(Error::InvalidParams("H and K must be finite".into()));
    }
    if k > h * h {
        return Err(Error::CurvatureBound { k, h_sq: h * h });
    }
    Ok(CanonicalSurface { h, k })
}

/// Labels a constant-curvature surface from its curvatures. On a tolerance
/// boundary the more special case wins.
pub fn label_from_constants(h: f64, k: f64, tol: f64) -> Result<ClassificationResult> {
    if !h.is_finite() || !k.is_finite() {
        return Err(Error::InvalidParams("H and K must be finite".into()));
    }
    if k > h * h + tol {
        return Err(Error::CurvatureBound { k, h_sq: h * h });
    }
    let zero = |v: f64| v.abs() < tol;
    let label = if zero(k) {
        if zero(h) {
            QuadricLabel::Plane
        } else {
            QuadricLabel::Cylinder
        }
    } else if k < 0.0 {
        if zero(h) {
            QuadricLabel::RectangularHyperbolicParaboloid
        } else {
            QuadricLabel::HyperbolicParaboloid
        }
    } else if zero(h * h - k) {
        QuadricLabel::CircularParaboloid
    } else {
        QuadricLabel::EllipticParaboloid
    };
    let c = CanonicalSurface { h, k };
    Ok(ClassificationResult {
        label,
        alpha: c.alpha(),
        beta: c.beta(),
        h,
        k,
        rotation_angle: 0.0,
    })
}

/// Eigen-decomposition of the symmetric form `d x² + e xy + g y²`:
/// `(α, β, θ)` with `α ≥ β` and `(cos θ, sin θ)` the `α` eigenvector,
/// `θ ∈ (-π/2, π/2]`.
pub fn diagonalize_quadratic(d: f64, e: f64, g: f64) -> (f64, f64, f64) {
    let mean = 0.5 * (d + g);
    let half_diff = 0.5 * (d - g);
    let off = 0.5 * e;
    let radius = half_diff.hypot(off);
    let mut theta = if radius == 0.0 {
        0.0
    } else {
        0.5 * off.atan2(half_diff)
    };
    if theta <= -FRAC_PI_2 {
        theta += std::f64::consts::PI;
    }
    (mean + radius, mean - radius, theta)
}

/// Decides whether a sampled graph is one of the canonical quadrics.
///
/// Linear and constant terms of the fit are treated as part of an isometry and
/// dropped. For a non-quadric the reported `(α, β, H, K)` describe the
/// best-fit quadratic part.
pub fn classify_sample(f: &ScalarField, tol: f64) -> Result<ClassificationResult> {
    let fit = quadratic_test(f, DEFAULT_QUADRATIC_TOL)?;
    let (d, e, g) = fit.quadratic_part();
    let (alpha, beta, theta) = diagonalize_quadratic(d, e, g);
    let h = alpha + beta;
    let k = 4.0 * alpha * beta;
    if !fit.is_quadratic {
        return Ok(ClassificationResult {
            label: QuadricLabel::NonQuadric,
            alpha,
            beta,
            h,
            k,
            rotation_angle: theta,
        });
    }
    let base = label_from_constants(h, k, tol)?;
    Ok(ClassificationResult {
        alpha,
        beta,
        rotation_angle: theta,
        ..base
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Rect;
    use std::f64::consts::FRAC_PI_4;

    fn grid() -> Grid {
        Grid::new(Rect::square(1.0).unwrap(), 41, 41).unwrap()
    }

    #[test]
    fn canonical_heights() {
        let c = canonical_form(0.0, -1.0).unwrap();
        assert_eq!(c.height(0.3, 0.5), (0.09 - 0.25) / 2.0);
        let c = canonical_form(1.0, 1.0).unwrap();
        assert_eq!(c.height(0.3, 0.5), (0.09 + 0.25) / 2.0);
        let c = canonical_form(1.0, 0.0).unwrap();
        assert!((c.height(0.3, 0.5) - 0.09).abs() < 1e-16);
        assert!(matches!(
            canonical_form(1.0, 1.5),
            Err(Error::CurvatureBound { .. })
        ));
    }

    #[test]
    fn label_table() {
        let cases = [
            ((0.0, 0.0), QuadricLabel::Plane),
            ((1.0, 0.0), QuadricLabel::Cylinder),
            ((1.0, -1.0), QuadricLabel::HyperbolicParaboloid),
            ((1.0, -4.0), QuadricLabel::HyperbolicParaboloid),
            ((0.0, -1.0), QuadricLabel::RectangularHyperbolicParaboloid),
            ((1.0, 0.5), QuadricLabel::EllipticParaboloid),
            ((2.0, 4.0), QuadricLabel::CircularParaboloid),
        ];
        for ((h, k), want) in cases {
            let r = label_from_constants(h, k, DEFAULT_CLASSIFY_TOL).unwrap();
            assert_eq!(r.label, want, "({h}, {k})");
            assert!((r.alpha + r.beta - h).abs() < 1e-12);
            assert!((r.alpha * r.beta - k / 4.0).abs() < 1e-12);
        }
        assert!(label_from_constants(1.0, 2.0, 1e-8).is_err());
    }

    #[test]
    fn boundary_prefers_special_case() {
        let r = label_from_constants(1e-10, -1.0, 1e-8).unwrap();
        assert_eq!(r.label, QuadricLabel::RectangularHyperbolicParaboloid);
        let r = label_from_constants(2.0, 4.0 - 1e-10, 1e-8).unwrap();
        assert_eq!(r.label, QuadricLabel::CircularParaboloid);
    }

    #[test]
    fn diagonalization() {
        let (a, b, t) = diagonalize_quadratic(0.0, -1.0, 0.0);
        assert!((a - 0.5).abs() < 1e-15 && (b + 0.5).abs() < 1e-15);
        assert!((t + FRAC_PI_4).abs() < 1e-15);
        let (a, b, t) = diagonalize_quadratic(1.0, 0.0, 3.0);
        assert_eq!((a, b), (3.0, 1.0));
        assert!((t - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn saddle_xy() {
        let f = ScalarField::from_fn(grid(), |x, y| -x * y).unwrap();
        let r = classify_sample(&f, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(r.label, QuadricLabel::RectangularHyperbolicParaboloid);
        assert!((r.k + 1.0).abs() < 1e-10);
        assert!(r.h.abs() < 1e-10);
        assert!((r.rotation_angle + FRAC_PI_4).abs() < 1e-10);
        // rotating the canonical coordinates by the angle reproduces the sample
        let c = canonical_form(r.h, r.k).unwrap();
        let (s, co) = r.rotation_angle.sin_cos();
        for (xt, yt) in [(0.3, 0.4), (-0.7, 0.1)] {
            let (x, y) = (co * xt - s * yt, s * xt + co * yt);
            assert!((c.height(xt, yt) - (-x * y)).abs() < 1e-10);
        }
    }

    #[test]
    fn circular_paraboloid_sample() {
        let f = ScalarField::from_fn(grid(), |x, y| x * x + y * y + 0.3 * x - 2.0).unwrap();
        let r = classify_sample(&f, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(r.label, QuadricLabel::CircularParaboloid);
        assert!((r.h - 2.0).abs() < 1e-10 && (r.k - 4.0).abs() < 1e-10);
    }

    #[test]
    fn cubic_is_non_quadric() {
        let f = ScalarField::from_fn(grid(), |x, y| (x * x * x - 3.0 * x * y * y) / 3.0).unwrap();
        assert_eq!(
            classify_sample(&f, DEFAULT_CLASSIFY_TOL).unwrap().label,
            QuadricLabel::NonQuadric
        );
    }
}

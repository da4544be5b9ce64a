//! CMC-H lifts from Weierstrass data `(h2, omega)`.
//!
//! With `W(z) = ∫ omega` from the base point, the surface is
//! `X = (ℓ, Re W, Im W)` where
//!
//! ```text
//! ℓ(z) = (H/2) |W(z)|² + Re ∫ h2 omega
//! ```
//!
//! The first term is the closed form of `Re ∫ conj(h1) omega` with
//! `h1 = H W`, since `Re(conj(W) dW) = d(|W|²/2)`. Only `ℓ` depends on `H`,
//! so the planar coordinates and the metric `|omega|²` are shared by the
//! whole family.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::holo::{self, contour_integral, HoloExpr, Path, SINGULARITY_TOL};

/// Default threshold on `|phi|` below which a point counts as umbilic.
pub const DEFAULT_UMBILIC_TOL: f64 = 1e-9;

/// Weierstrass data `(h2, omega = omega_hat dz)` together with the integration
/// base point and the expressions derived from them.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    h2: HoloExpr,
    omega_hat: HoloExpr,
    base_point: Complex64,
    quad_tol: f64,
    phi: HoloExpr,
    phi_prime: HoloExpr,
    omega_prim: Option<HoloExpr>,
    h2_omega: HoloExpr,
    h2_omega_prim: Option<HoloExpr>,
}

impl WeierstrassData {
    pub fn new(h2: HoloExpr, omega_hat: HoloExpr) -> Result<Self> {
        if !h2.is_complex_mode() || !omega_hat.is_complex_mode() {
            return Err(Error::NotComplexMode);
        }
        let phi = holo_div(h2.derivative(), omega_hat.clone());
        let phi_prime = phi.derivative();
        let omega_prim = omega_hat.antiderivative();
        let h2_omega = holo_mul(h2.clone(), omega_hat.clone());
        let h2_omega_prim = h2_omega.antiderivative();
        Ok(WeierstrassData {
            h2,
            omega_hat,
            base_point: Complex64::new(0.0, 0.0),
            quad_tol: holo::DEFAULT_TOL,
            phi,
            phi_prime,
            omega_prim,
            h2_omega,
            h2_omega_prim,
        })
    }

    pub fn parse(h2: &str, omega_hat: &str) -> Result<Self> {
        WeierstrassData::new(holo::parse_complex(h2)?, holo::parse_complex(omega_hat)?)
    }

    /// Enneper surface of order `n`: `(z^(n-1), dz)`.
    pub fn enneper(n: u32) -> Self {
        assert!(n >= 2, "Enneper order must be at least 2");
        let h2 = if n == 2 {
            HoloExpr::z()
        } else {
            HoloExpr::Pow(Box::new(HoloExpr::z()), n as i32 - 1)
        };
        WeierstrassData::new(h2, HoloExpr::real(1.0)).expect("complex-mode data")
    }

    pub fn with_base_point(mut self, base: Complex64) -> Self {
        self.base_point = base;
        self
    }

    pub fn with_quad_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }

    pub fn h2(&self) -> &HoloExpr {
        &self.h2
    }

    pub fn omega_hat(&self) -> &HoloExpr {
        &self.omega_hat
    }

    pub fn base_point(&self) -> Complex64 {
        self.base_point
    }

    pub fn quad_tol(&self) -> f64 {
        self.quad_tol
    }

    /// `phi = h2' / omega_hat`, the curvature potential: `K = H² - |phi|²`.
    pub fn phi(&self) -> &HoloExpr {
        &self.phi
    }

    pub fn phi_prime(&self) -> &HoloExpr {
        &self.phi_prime
    }

    /// True when `omega = dz` up to the base point, so the parameter grid is the
    /// `(x, y)` plane itself.
    pub fn is_graph_mode(&self) -> bool {
        self.omega_hat.as_const() == Some(Complex64::new(1.0, 0.0))
    }

    /// Both path integrals have closed forms.
    pub fn is_closed_form(&self) -> bool {
        self.omega_prim.is_some() && self.h2_omega_prim.is_some()
    }

    pub fn omega_at(&self, z: Complex64) -> Result<Complex64> {
        let w = self.omega_hat.eval_z(z)?;
        if w.norm() < SINGULARITY_TOL {
            return Err(Error::VanishingOmegaAt { at: z });
        }
        Ok(w)
    }

    pub fn phi_at(&self, z: Complex64) -> Result<Complex64> {
        self.omega_at(z)?;
        self.phi.eval_z(z)
    }

    fn integral(
        &self,
        integrand: &HoloExpr,
        prim: Option<&HoloExpr>,
        z: Complex64,
    ) -> Result<Complex64> {
        if z == self.base_point {
            return Ok(Complex64::new(0.0, 0.0));
        }
        match prim {
            Some(f) => Ok(f.eval_z(z)? - f.eval_z(self.base_point)?),
            None => contour_integral(
                integrand,
                &Path::segment(self.base_point, z)?,
                self.quad_tol,
            ),
        }
    }

    /// `Re ∫ h2 omega` from the base point.
    fn holomorphic_height(&self, z: Complex64) -> Result<f64> {
        Ok(self
            .integral(&self.h2_omega, self.h2_omega_prim.as_ref(), z)?
            .re)
    }
}

fn holo_div(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    crate::holo::expr_div(a, b)
}

fn holo_mul(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    crate::holo::expr_mul(a, b)
}

/// Target mean curvature and the sampling lattice in the z-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftParams {
    pub h: f64,
    pub grid: Grid,
}

/// Sampled surface `(ℓ, x, y)` over a parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSample {
    pub grid: Grid,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub ell: Vec<f64>,
    pub h: f64,
    /// `phi = h2'/omega_hat` at each node.
    pub phi: Vec<Complex64>,
}

impl SurfaceSample {
    /// `K = H² - |phi|²` at each node.
    pub fn analytic_k(&self) -> Vec<f64> {
        self.phi
            .iter()
            .map(|p| self.h * self.h - p.norm_sqr())
            .collect()
    }
}

/// `W(z) = ∫ omega` from the base point; `x = Re W`, `y = Im W`.
pub fn planar_map(data: &WeierstrassData, z: Complex64) -> Result<Complex64> {
    data.integral(&data.omega_hat, data.omega_prim.as_ref(), z)
}

/// Height `ℓ(z) = (H/2)|W(z)|² + Re ∫ h2 omega`.
pub fn height(data: &WeierstrassData, h: f64, z: Complex64) -> Result<f64> {
    let w = planar_map(data, z)?;
    Ok(0.5 * h * w.norm_sqr() + data.holomorphic_height(z)?)
}

struct NodeValues {
    w: Complex64,
    holo_height: f64,
    phi: Complex64,
}

fn node_values(data: &WeierstrassData, i: usize, j: usize, z: Complex64) -> Result<NodeValues> {
    let omega = data.omega_hat.eval_z(z)?;
    if omega.norm() < SINGULARITY_TOL {
        return Err(Error::VanishingOmega { i, j, at: z });
    }
    Ok(NodeValues {
        w: planar_map(data, z)?,
        holo_height: data.holomorphic_height(z)?,
        phi: data.phi.eval_z(z)?,
    })
}

/// Samples the CMC-H lift on the parameter grid.
///
/// Nodes are evaluated in parallel; the output order and any reported error
/// (the first failing node in storage order) are deterministic.
pub fn synthesize(data: &WeierstrassData, params: &LiftParams) -> Result<SurfaceSample> {
    let grid = params.grid;
    if !params.h.is_finite() {
        return Err(Error::InvalidParams(format!(
            "H must be finite, got {}",
            params.h
        )));
    }
    let nodes: Vec<(usize, usize, f64, f64)> = grid.nodes().collect();
    let values: Vec<Result<NodeValues>> = nodes
        .par_iter()
        .map(|&(i, j, u, v)| node_values(data, i, j, Complex64::new(u, v)))
        .collect();

    let n = grid.len();
    let mut sample = SurfaceSample {
        grid,
        x: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        ell: Vec::with_capacity(n),
        h: params.h,
        phi: Vec::with_capacity(n),
    };
    for r in values {
        let nv = r?;
        let ell = 0.5 * params.h * nv.w.norm_sqr() + nv.holo_height;
        if !ell.is_finite() {
            return Err(Error::NonFinite);
        }
        sample.x.push(nv.w.re);
        sample.y.push(nv.w.im);
        sample.ell.push(ell);
        sample.phi.push(nv.phi);
    }
    Ok(sample)
}

/// Gaussian curvature at a point and whether the point is umbilic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCurvature {
    pub k: f64,
    pub umbilic: bool,
}

/// `K = H² - |h2'/omega_hat|²`.
pub fn analytic_curvature(data: &WeierstrassData, h: f64, z: Complex64) -> Result<PointCurvature> {
    analytic_curvature_with_tol(data, h, z, DEFAULT_UMBILIC_TOL)
}

pub fn analytic_curvature_with_tol(
    data: &WeierstrassData,
    h: f64,
    z: Complex64,
    umbilic_tol: f64,
) -> Result<PointCurvature> {
    let phi = data.phi_at(z)?;
    Ok(PointCurvature {
        k: h * h - phi.norm_sqr(),
        umbilic: phi.norm() < umbilic_tol,
    })
}

/// Conformal factor `|omega_hat(z)|²` of the first fundamental form.
pub fn induced_metric(data: &WeierstrassData, z: Complex64) -> Result<f64> {
    Ok(data.omega_hat.eval_z(z)?.norm_sqr())
}

/// Outcome of sampling one set of Weierstrass data over a list of `H` values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub h_values: Vec<f64>,
    /// Planar coordinates are bit-identical across the family.
    pub xy_identical: bool,
    /// Largest `|x_H - x_0| + |y_H - y_0|` over nodes and `H`.
    pub isometry_residual: f64,
    /// Largest change in `|omega_hat|²` across the family.
    pub metric_residual: f64,
    /// Largest `|ℓ_H - ℓ_ref - ((H - H_ref)/2)(x² + y²)|`.
    pub height_identity_residual: f64,
}

/// Samples every member of the CMC-H family and checks that only the height
/// changes, by exactly `(H/2)|W|²`. The first entry of `h_values` is the
/// reference member.
pub fn sweep(data: &WeierstrassData, grid: Grid, h_values: &[f64]) -> Result<SweepReport> {
    let Some(&h_ref) = h_values.first() else {
        return Err(Error::InvalidParams("H list is empty".into()));
    };
    let reference = synthesize(data, &LiftParams { h: h_ref, grid })?;
    let metric_ref: Vec<f64> = grid
        .nodes()
        .map(|(_, _, u, v)| induced_metric(data, Complex64::new(u, v)))
        .collect::<Result<_>>()?;

    let mut report = SweepReport {
        h_values: h_values.to_vec(),
        xy_identical: true,
        isometry_residual: 0.0,
        metric_residual: 0.0,
        height_identity_residual: 0.0,
    };
    for &h in &h_values[1..] {
        let s = synthesize(data, &LiftParams { h, grid })?;
        report.xy_identical &= s.x == reference.x && s.y == reference.y;
        for k in 0..grid.len() {
            let dxy = (s.x[k] - reference.x[k]).abs() + (s.y[k] - reference.y[k]).abs();
            report.isometry_residual = report.isometry_residual.max(dxy);
            let r2 = s.x[k] * s.x[k] + s.y[k] * s.y[k];
            let resid = (s.ell[k] - reference.ell[k] - 0.5 * (h - h_ref) * r2).abs();
            report.height_identity_residual = report.height_identity_residual.max(resid);
        }
        for (k, (_, _, u, v)) in grid.nodes().enumerate() {
            let m = induced_metric(data, Complex64::new(u, v))?;
            report.metric_residual = report.metric_residual.max((m - metric_ref[k]).abs());
        }
    }
    Ok(report)
}

//! Analytic-versus-finite-difference curvature comparison for sampled lifts.

use serde::Serialize;

use crate::error::Result;
use crate::graphgeo::{
    fd_gauss_curvature, fd_mean_curvature, InteriorField, QuadraticFit, ScalarField, Stats,
};
use crate::vdist::Location;
use crate::weierstrass::{SurfaceSample, SweepReport};
use num_complex::Complex64;

/// Per-node curvature of a sampled graph, with the analytic values when the
/// sample came from Weierstrass data.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub h_fd: InteriorField,
    pub k_fd: InteriorField,
    /// Target mean curvature of the lift.
    pub h_analytic: Option<f64>,
    /// `H² - |phi|²` at the interior nodes of `k_fd`.
    pub k_analytic: Option<Vec<f64>>,
    /// `|phi| < umbilic_tol` at the interior nodes.
    pub umbilic: Option<Vec<bool>>,
    pub umbilic_points: Vec<Complex64>,
}

impl CurvatureReport {
    /// Finite-difference curvature only.
    pub fn from_field(f: &ScalarField) -> Result<Self> {
        Ok(CurvatureReport {
            h_fd: fd_mean_curvature(f)?,
            k_fd: fd_gauss_curvature(f)?,
            h_analytic: None,
            k_analytic: None,
            umbilic: None,
            umbilic_points: Vec::new(),
        })
    }

    /// Compares the sample's analytic curvature with finite differences of its
    /// heights. The sample must be a graph over a uniform grid.
    pub fn from_sample(s: &SurfaceSample, umbilic_tol: f64) -> Result<Self> {
        let field = ScalarField::from_sample(s)?;
        let mut r = CurvatureReport::from_field(&field)?;
        let g = s.grid;
        let mut k_an = Vec::with_capacity(r.k_fd.values.len());
        let mut umb = Vec::with_capacity(r.k_fd.values.len());
        for (i, j, ..) in r.k_fd.iter() {
            let phi = s.phi[g.index(i, j)];
            k_an.push(s.h * s.h - phi.norm_sqr());
            umb.push(phi.norm() < umbilic_tol);
        }
        r.umbilic_points = (0..g.len())
            .filter(|&k| s.phi[k].norm() < umbilic_tol)
            .map(|k| Complex64::new(s.x[k], s.y[k]))
            .collect();
        r.h_analytic = Some(s.h);
        r.k_analytic = Some(k_an);
        r.umbilic = Some(umb);
        Ok(r)
    }

    pub fn max_h_deviation(&self) -> Option<f64> {
        self.h_analytic.map(|h| {
            self.h_fd
                .values
                .iter()
                .map(|v| (v - h).abs())
                .fold(0.0, f64::max)
        })
    }

    pub fn max_k_deviation(&self) -> Option<f64> {
        self.k_analytic.as_ref().map(|an| {
            self.k_fd
                .values
                .iter()
                .zip(an)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
        })
    }

    pub fn summary(&self) -> CurvatureSummary {
        CurvatureSummary {
            h_fd: Some(self.h_fd.stats()),
            k_fd: Some(self.k_fd.stats()),
            h_analytic: self.h_analytic,
            k_analytic: self.k_analytic.as_deref().map(Stats::of),
            max_h_deviation: self.max_h_deviation(),
            max_k_deviation: self.max_k_deviation(),
            umbilics: self
                .umbilic_points
                .iter()
                .copied()
                .map(Location::from)
                .collect(),
            pde: None,
            sweep: None,
        }
    }
}

/// Laplacian / Hessian-determinant summary for the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdeSummary {
    pub laplacian: Stats,
    pub hessian_det: Stats,
    pub is_constant_laplacian: bool,
    pub const_tol: f64,
    pub hessian_image: [f64; 2],
    pub quadratic: Option<QuadraticFit>,
}

/// The `curvature` block of the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct CurvatureSummary {
    pub h_fd: Option<Stats>,
    pub k_fd: Option<Stats>,
    pub h_analytic: Option<f64>,
    pub k_analytic: Option<Stats>,
    pub max_h_deviation: Option<f64>,
    pub max_k_deviation: Option<f64>,
    pub umbilics: Vec<Location>,
    pub pde: Option<PdeSummary>,
    pub sweep: Option<SweepReport>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{Grid, Rect};
    use crate::weierstrass::{synthesize, LiftParams, WeierstrassData};

    #[test]
    fn cylinder_report() {
        let grid = Grid::new(Rect::square(1.0).unwrap(), 21, 21).unwrap();
        let s = synthesize(&WeierstrassData::enneper(2), &LiftParams { h: 1.0, grid }).unwrap();
        let r = CurvatureReport::from_sample(&s, 1e-9).unwrap();
        assert!(r.max_k_deviation().unwrap() < 1e-10);
        assert!(r.max_h_deviation().unwrap() < 1e-10);
        assert!(r.umbilic_points.is_empty());
        let sum = r.summary();
        assert_eq!(sum.k_analytic.unwrap().min, 0.0);
    }

    #[test]
    fn umbilic_flags_at_origin() {
        let grid = Grid::new(Rect::square(1.0).unwrap(), 21, 21).unwrap();
        let s = synthesize(&WeierstrassData::enneper(3), &LiftParams { h: 0.5, grid }).unwrap();
        let r = CurvatureReport::from_sample(&s, 1e-9).unwrap();
        assert_eq!(r.umbilic_points, vec![Complex64::new(0.0, 0.0)]);
        assert_eq!(r.umbilic.unwrap().iter().filter(|u| **u).count(), 1);
    }

    #[test]
    fn non_graph_sample_is_rejected() {
        let grid = Grid::new(Rect::square(1.0).unwrap(), 9, 9).unwrap();
        let d = WeierstrassData::parse("z", "exp(z)").unwrap();
        let s = synthesize(&d, &LiftParams { h: 0.0, grid }).unwrap();
        assert!(CurvatureReport::from_sample(&s, 1e-9).is_err());
    }
}

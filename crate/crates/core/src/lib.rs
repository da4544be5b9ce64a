//! Constant mean curvature surfaces in isotropic 3-space.
//!
//! Surfaces are built from holomorphic Weierstrass data `(h2, omega)`, and
//! their curvature is checked independently by finite differences on the
//! sampled graph `ℓ = f(x, y)`.

pub mod analysis;
pub mod classify;
pub mod error;
pub mod graphgeo;
pub mod grid;
pub mod holo;
pub mod io_mesh;
pub mod vdist;
pub mod weierstrass;

pub use analysis::{CurvatureReport, CurvatureSummary, PdeSummary};
pub use classify::{
    canonical_form, classify_sample, diagonalize_quadratic, label_from_constants, CanonicalSurface,
    ClassificationResult, QuadricLabel,
};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use graphgeo::{
    fd_gauss_curvature, fd_mean_curvature, fd_metric, fd_third_derivatives, pde_analyze,
    quadratic_test, InteriorField, PdeReport, QuadraticFit, ScalarField, Stats,
};
pub use grid::{Grid, Rect};
pub use holo::{contour_integral, parse, HoloExpr, Path};
pub use io_mesh::{
    export_obj, load_grid, read_grid, save_grid, write_grid, write_obj, GridFile, InputEcho,
    ReportDoc,
};
pub use num_complex::Complex64;
pub use vdist::{polar_disk, sample_k_image, umbilic_scan, VdistOptions, VdistReport, Verdict};
pub use weierstrass::{
    analytic_curvature, height, induced_metric, planar_map, sweep, synthesize, LiftParams,
    SurfaceSample, SweepReport, WeierstrassData,
};

//! Holomorphic expressions: parsing, evaluation, calculus and contour integration.

mod calculus;
mod expr;
mod parse;
mod quad;

pub(crate) use expr::{div as expr_div, mul as expr_mul};
pub use expr::{Func, HoloExpr, Mode, Var, Vars, SINGULARITY_TOL};
pub use parse::{parse, parse_complex};
pub use quad::{
    contour_integral, integrate_path, Path, QuadratureOptions, DEFAULT_MAX_PANELS, DEFAULT_TOL,
};

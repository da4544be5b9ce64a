use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// What went wrong while reading an expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("non-integer exponent")]
    NonIntegerExponent,
    #[error("expression mixes the complex variable z with the real variables x, y")]
    MixedModes,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("division by near-zero value at z = {at}")]
    Singularity { at: Complex64 },

    #[error("evaluation produced a non-finite value")]
    NonFinite,

    #[error("variable `{0}` has no assigned value")]
    UnboundVariable(char),

    #[error("expression is not in complex mode (only z may appear)")]
    NotComplexMode,

    #[error(
        "quadrature did not reach tolerance {tol:e} within {panels} panels (estimate {estimate:e})"
    )]
    QuadratureBudget {
        tol: f64,
        panels: usize,
        estimate: f64,
    },

    #[error("invalid path: {0}")]
    InvalidPath(&'static str),

    #[error("omega vanishes at grid node ({i}, {j}), z = {at}")]
    VanishingOmega { i: usize, j: usize, at: Complex64 },

    #[error("omega vanishes at z = {at}")]
    VanishingOmegaAt { at: Complex64 },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("grid too small: need at least {need}x{need} nodes, got {nx}x{ny}")]
    GridTooSmall { need: usize, nx: usize, ny: usize },

    #[error("sample is not a graph over a uniform axis-aligned (x, y) grid")]
    NotGraphMode,

    #[error("least-squares fit matrix is degenerate")]
    DegenerateFit,

    #[error("K = {k} exceeds H^2 = {h_sq}; no spacelike surface has these curvatures")]
    CurvatureBound { k: f64, h_sq: f64 },

    #[error("sampled chart is not conformal: residual {residual:e} exceeds {tolerance:e}")]
    NonConformal { residual: f64, tolerance: f64 },

    #[error("grid file line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("grid file holds {found} records, header declares {expected}")]
    CountMismatch { expected: usize, found: usize },

    #[error("report field `{0}` is not finite")]
    NonFiniteReport(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use isocmc_core::Rect;

#[derive(Debug, Parser)]
#[command(
    name = "isocmc",
    version,
    about = "Constant mean curvature graphs in isotropic 3-space"
)]
pub struct Cli {
    /// Directory for all output files.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Seed for randomized sampling; echoed in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override `name=value`; repeatable. Names: quad, umbilic,
    /// classify, quadratic, const, vdist-const, vdist-margin.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    pub tol: Vec<(String, f64)>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a lift and write OBJ, grid and report files.
    Lift(LiftArgs),
    /// Compare analytic and finite-difference curvature.
    Analyze(AnalyzeArgs),
    /// Identify a constant-curvature surface as a quadric.
    Classify(ClassifyArgs),
    /// Check that a family of lifts differs only in height.
    Sweep(SweepArgs),
    /// Sample the image of the Gaussian curvature over growing disks.
    Vdist(VdistArgs),
    /// Laplacian, Hessian determinant and quadratic-polynomial checks.
    Pde(PdeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Sampling {
    /// Parameter rectangle `umin:umax:vmin:vmax`.
    #[arg(long, value_parser = parse_domain, allow_hyphen_values = true, default_value = "-1:1:-1:1")]
    pub domain: Rect,
    /// Grid size `NxM`.
    #[arg(long, value_parser = parse_grid, default_value = "201x201")]
    pub grid: (usize, usize),
}

#[derive(Debug, Clone, Args)]
pub struct Data {
    /// Expression for h2.
    #[arg(long)]
    pub h2: String,
    /// Expression for omega.
    #[arg(long)]
    pub omega: String,
}

#[derive(Debug, Clone, Args)]
pub struct OptData {
    /// Expression for h2.
    #[arg(long, requires = "omega")]
    pub h2: Option<String>,
    /// Expression for omega.
    #[arg(long, requires = "h2")]
    pub omega: Option<String>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[command(flatten)]
    pub data: Data,
    /// Mean curvature.
    #[arg(long = "H", default_value_t = 0.0, allow_negative_numbers = true)]
    pub h: f64,
    #[command(flatten)]
    pub sampling: Sampling,
    /// Base name of the output files.
    #[arg(short = 'o', long = "output", default_value = "lift")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: OptData,
    /// Grid file to analyze instead of expressions.
    #[arg(long, conflicts_with_all = ["h2", "omega"], required_unless_present = "h2")]
    pub grid_file: Option<PathBuf>,
    #[arg(long = "H", default_value_t = 0.0, allow_negative_numbers = true)]
    pub h: f64,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(short = 'o', long = "output", default_value = "analyze")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub data: OptData,
    #[arg(long, conflicts_with_all = ["h2", "omega", "k"])]
    pub grid_file: Option<PathBuf>,
    /// Mean curvature.
    #[arg(long = "H", allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Gaussian curvature; classifies from `(H, K)` alone.
    #[arg(long = "K", allow_negative_numbers = true, requires = "h", conflicts_with_all = ["h2", "omega"])]
    pub k: Option<f64>,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(short = 'o', long = "output", default_value = "classify")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: Data,
    /// Comma-separated mean curvatures; the first is the reference member.
    #[arg(
        long = "H-list",
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub h_list: Vec<f64>,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(short = 'o', long = "output", default_value = "sweep")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct VdistArgs {
    #[command(flatten)]
    pub data: Data,
    #[arg(long = "H", default_value_t = 0.0, allow_negative_numbers = true)]
    pub h: f64,
    /// Comma-separated, strictly increasing disk radii.
    #[arg(long, value_delimiter = ',', required = true)]
    pub radii: Vec<f64>,
    /// Sample points per disk.
    #[arg(long, default_value_t = isocmc_core::vdist::DEFAULT_SAMPLES_PER_RADIUS)]
    pub samples: usize,
    #[arg(short = 'o', long = "output", default_value = "vdist")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct PdeArgs {
    #[command(flatten)]
    pub data: OptData,
    #[arg(long, conflicts_with_all = ["h2", "omega"])]
    pub grid_file: Option<PathBuf>,
    /// Mean curvature of the lift, or of the canonical surface with `--K`.
    #[arg(long = "H", allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Gaussian curvature; analyzes the canonical surface for `(H, K)`.
    #[arg(long = "K", allow_negative_numbers = true, requires = "h", conflicts_with_all = ["h2", "omega"])]
    pub k: Option<f64>,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(short = 'o', long = "output", default_value = "pde")]
    pub output: String,
}

pub const TOL_NAMES: [&str; 7] = [
    "quad",
    "umbilic",
    "classify",
    "quadratic",
    "const",
    "vdist-const",
    "vdist-margin",
];

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected name=value")?;
    let name = name.trim();
    if !TOL_NAMES.contains(&name) {
        return Err(format!(
            "unknown tolerance `{name}` (known: {})",
            TOL_NAMES.join(", ")
        ));
    }
    let value: f64 = value.trim().parse().map_err(|e| format!("{e}"))?;
    if !(value.is_finite() && value > 0.0) {
        return Err("tolerance must be positive and finite".into());
    }
    Ok((name.to_string(), value))
}

fn parse_domain(s: &str) -> Result<Rect, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("{e}"))?;
    let [a, b, c, d] = parts[..] else {
        return Err("expected umin:umax:vmin:vmax".into());
    };
    Rect::new(a, b, c, d).map_err(|e| e.to_string())
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (n, m) = s.split_once(['x', 'X']).ok_or("expected NxM")?;
    let n: usize = n.trim().parse().map_err(|e| format!("{e}"))?;
    let m: usize = m.trim().parse().map_err(|e| format!("{e}"))?;
    if n < 2 || m < 2 {
        return Err("grid needs at least 2x2 nodes".into());
    }
    Ok((n, m))
}

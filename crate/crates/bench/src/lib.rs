//! Shared fixtures for the benchmarks.

use isocmc_core::weierstrass::{synthesize, LiftParams, SurfaceSample, WeierstrassData};
use isocmc_core::{Grid, Rect};

pub fn square(n: usize) -> Grid {
    Grid::new(Rect::square(1.0).expect("valid square"), n, n).expect("valid grid")
}

/// Weierstrass data used across the benches: Enneper n = 3 and the exp family.
pub fn fixtures() -> Vec<(&'static str, WeierstrassData)> {
    vec![
        ("enneper3", WeierstrassData::enneper(3)),
        (
            "exp",
            WeierstrassData::parse("exp(z)", "1").expect("valid data"),
        ),
    ]
}

pub fn sample(data: &WeierstrassData, h: f64, n: usize) -> SurfaceSample {
    synthesize(data, &LiftParams { h, grid: square(n) }).expect("lift samples")
}

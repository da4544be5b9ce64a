//! Sampling evidence for the value distribution of the Gaussian curvature.
//!
//! On a complete CMC-H surface the image of `K = H² - |phi|²` is a single
//! point, `(-∞, H²)` or `(-∞, H²]`. A finite sample cannot decide which; this
//! module gathers the evidence that distinguishes the three on concrete data:
//! the spread of `K` over growing disks and the zeros of `phi` (umbilics).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Grid, Rect};
use crate::weierstrass::{WeierstrassData, DEFAULT_UMBILIC_TOL};

pub const DEFAULT_SAMPLES_PER_RADIUS: usize = 10_000;
/// Grid used by [`sample_k_image`] to look for umbilics in the largest disk.
pub const DEFAULT_SCAN_GRID: usize = 101;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ConstantK,
    OpenBelowSup,
    ClosedAtSup,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdistOptions {
    pub samples_per_radius: usize,
    pub umbilic_tol: f64,
    /// `None` selects `1e-9 (1 + H²)`.
    pub const_tol: Option<f64>,
    /// `None` selects `1e-3 (1 + H²)`.
    pub margin: Option<f64>,
    pub scan_grid: usize,
}

impl Default for VdistOptions {
    fn default() -> Self {
        VdistOptions {
            samples_per_radius: DEFAULT_SAMPLES_PER_RADIUS,
            umbilic_tol: DEFAULT_UMBILIC_TOL,
            const_tol: None,
            margin: None,
            scan_grid: DEFAULT_SCAN_GRID,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Location {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Location {
    fn from(z: Complex64) -> Self {
        Location { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VdistReport {
    pub h: f64,
    pub radii: Vec<f64>,
    pub k_min: Vec<f64>,
    pub k_max: Vec<f64>,
    pub samples_per_radius: usize,
    pub umbilic_points: Vec<Location>,
    pub verdict: Verdict,
    pub sup_bound: f64,
    pub const_tol: f64,
    pub margin: f64,
}

/// Equal-area polar points on the closed disk of radius `r`: the center plus
/// rings at radii `r sqrt(m/rings)`, the outermost on the boundary circle.
/// Every ring includes angle 0.
pub fn polar_disk(r: f64, samples: usize) -> Vec<Complex64> {
    let rings = ((samples as f64 / 4.0).sqrt().ceil() as usize).max(1);
    let total_weight = (rings * rings) as f64;
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for m in 1..=rings {
        let rho = if m == rings {
            r
        } else {
            r * (m as f64 / rings as f64).sqrt()
        };
        let count = ((samples as f64 * (2 * m - 1) as f64 / total_weight).round() as usize).max(8);
        pts.extend(
            (0..count).map(|k| {
                Complex64::from_polar(rho, std::f64::consts::TAU * k as f64 / count as f64)
            }),
        );
    }
    pts
}

/// Samples `K = H² - |phi|²` over disks of increasing radius.
///
/// Extremes accumulate over all disks so far, making `k_min` non-increasing
/// and `k_max` non-decreasing in the radius. Umbilics are searched in the
/// square around the largest disk and kept when they lie inside it.
pub fn sample_k_image(
    data: &WeierstrassData,
    h: f64,
    radii: &[f64],
    opts: &VdistOptions,
) -> Result<VdistReport> {
    if radii.is_empty() {
        return Err(Error::InvalidParams(
            "at least one radius is required".into(),
        ));
    }
    if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || radii.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::InvalidParams(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    if opts.samples_per_radius == 0 {
        return Err(Error::InvalidParams(
            "samples per radius must be positive".into(),
        ));
    }
    let h_sq = h * h;
    let const_tol = opts.const_tol.unwrap_or(1e-9 * (1.0 + h_sq));
    let margin = opts.margin.unwrap_or(1e-3 * (1.0 + h_sq));

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut k_min = Vec::with_capacity(radii.len());
    let mut k_max = Vec::with_capacity(radii.len());
    for &r in radii {
        let pts = polar_disk(r, opts.samples_per_radius);
        let ks: Vec<f64> = pts
            .par_iter()
            .map(|&z| data.phi_at(z).map(|p| h_sq - p.norm_sqr()))
            .collect::<Result<_>>()?;
        for k in ks {
            if !k.is_finite() {
                return Err(Error::NonFinite);
            }
            lo = lo.min(k);
            hi = hi.max(k);
        }
        k_min.push(lo);
        k_max.push(hi);
    }

    let r_max = *radii.last().unwrap();
    let n = opts.scan_grid.max(3);
    let umbilics: Vec<Location> = umbilic_scan(data, Rect::square(r_max)?, n, n, opts.umbilic_tol)?
        .into_iter()
        .filter(|z| z.norm() <= r_max)
        .map(Location::from)
        .collect();

    let range = hi - lo;
    let verdict = if range < const_tol {
        Verdict::ConstantK
    } else if !umbilics.is_empty() {
        Verdict::ClosedAtSup
    } else if h_sq - hi < margin {
        Verdict::OpenBelowSup
    } else {
        Verdict::Inconclusive
    };

    Ok(VdistReport {
        h,
        radii: radii.to_vec(),
        k_min,
        k_max,
        samples_per_radius: opts.samples_per_radius,
        umbilic_points: umbilics,
        verdict,
        sup_bound: h_sq,
        const_tol,
        margin,
    })
}

const NEWTON_MAX_ITER: usize = 200;
const NEWTON_STEP_TOL: f64 = 1e-12;
const DEDUP_DIST: f64 = 1e-6;

/// Zeros of `phi` in a rectangle.
///
/// Grid nodes where `|phi|` is a local minimum seed a damped Newton iteration
/// on `phi`; a seed whose refinement leaves the rectangle (padded by one cell)
/// or fails to reach `|phi| < umbilic_tol` is discarded, except that a seed
/// already below the tolerance is kept as is. Results are deduplicated and
/// sorted.
pub fn umbilic_scan(
    data: &WeierstrassData,
    domain: Rect,
    nu: usize,
    nv: usize,
    umbilic_tol: f64,
) -> Result<Vec<Complex64>> {
    let grid = Grid::new(domain, nu, nv)?;
    let mags: Vec<Option<f64>> = grid
        .nodes()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(_, _, u, v)| data.phi_at(Complex64::new(u, v)).ok().map(|p| p.norm()))
        .collect();

    let mut seeds = Vec::new();
    for (i, j, u, v) in grid.nodes() {
        let Some(m) = mags[grid.index(i, j)] else {
            continue;
        };
        let mut is_min = true;
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                let (ni, nj) = (i as i64 + di, j as i64 + dj);
                if (di, dj) == (0, 0) || ni < 0 || nj < 0 || ni >= nu as i64 || nj >= nv as i64 {
                    continue;
                }
                if let Some(nm) = mags[grid.index(ni as usize, nj as usize)] {
                    if nm < m {
                        is_min = false;
                    }
                }
            }
        }
        if is_min {
            seeds.push((Complex64::new(u, v), m));
        }
    }

    let (hu, hv) = grid.spacing();
    let padded = Rect::new(
        domain.u_min - hu,
        domain.u_max + hu,
        domain.v_min - hv,
        domain.v_max + hv,
    )?;
    let refined: Vec<Option<Complex64>> = seeds
        .par_iter()
        .map(|&(z0, m0)| refine_zero(data, z0, m0, &padded, umbilic_tol))
        .collect();

    let mut found: Vec<Complex64> = Vec::new();
    for z in refined.into_iter().flatten() {
        if !found.iter().any(|w| (w - z).norm() < DEDUP_DIST) {
            found.push(z);
        }
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(found)
}

fn refine_zero(
    data: &WeierstrassData,
    z0: Complex64,
    m0: f64,
    bounds: &Rect,
    tol: f64,
) -> Option<Complex64> {
    let phi = |z: Complex64| data.phi_at(z).ok();
    let mut z = z0;
    let mut fz = phi(z)?;
    for _ in 0..NEWTON_MAX_ITER {
        if fz.norm() == 0.0 {
            break;
        }
        let Ok(d) = data.phi_prime().eval_z(z) else {
            break;
        };
        if d.norm() == 0.0 {
            break;
        }
        let step = fz / d;
        // damping: halve until |phi| decreases
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = z - step * t;
            if let Some(fc) = phi(cand) {
                if fc.norm() < fz.norm() {
                    accepted = Some((cand, fc));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((cand, fc)) = accepted else { break };
        let moved = (cand - z).norm();
        z = cand;
        fz = fc;
        if !bounds.contains(z.re, z.im) {
            return None;
        }
        if moved < NEWTON_STEP_TOL * (1.0 + z.norm()) {
            break;
        }
    }
    if fz.norm() < tol {
        Some(z)
    } else if m0 < tol {
        Some(z0)
    } else {
        None
    }
}

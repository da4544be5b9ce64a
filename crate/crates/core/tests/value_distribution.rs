use isocmc_core::vdist::{polar_disk, sample_k_image, umbilic_scan, VdistOptions, Verdict};
use isocmc_core::weierstrass::WeierstrassData;
use isocmc_core::{Complex64, Rect};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RADII: [f64; 3] = [1.0, 10.0, 100.0];

/// Largest `|phi|²` over the closed disk by brute force: random interior
/// points plus a dense boundary circle.
fn brute_max_phi_sq(phi: impl Fn(Complex64) -> Complex64, r: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..50_000 {
        let rho = r * rng.random::<f64>().sqrt();
        let t = rng.random_range(0.0..std::f64::consts::TAU);
        best = best.max(phi(Complex64::from_polar(rho, t)).norm_sqr());
    }
    for k in 0..20_000 {
        let t = std::f64::consts::TAU * k as f64 / 20_000.0;
        best = best.max(phi(Complex64::from_polar(r, t)).norm_sqr());
    }
    best
}

#[test]
fn enneper2_has_constant_curvature() {
    let r = sample_k_image(
        &WeierstrassData::enneper(2),
        1.0,
        &RADII,
        &VdistOptions::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::ConstantK);
    assert!(r.k_min.iter().chain(&r.k_max).all(|&k| k == 0.0));
    assert!(r.umbilic_points.is_empty());
}

#[test]
fn enneper3_minimum_follows_brute_force() {
    for h in [0.0, 1.0, 2.5] {
        let r = sample_k_image(
            &WeierstrassData::enneper(3),
            h,
            &RADII,
            &VdistOptions::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::ClosedAtSup);
        assert_eq!(r.umbilic_points.len(), 1);
        assert!(r.umbilic_points[0].re.abs() < 1e-12 && r.umbilic_points[0].im.abs() < 1e-12);
        for (i, &rad) in RADII.iter().enumerate() {
            let oracle = h * h - brute_max_phi_sq(|z| 2.0 * z, rad, i as u64);
            assert!(
                (r.k_min[i] - oracle).abs() <= 0.01 * oracle.abs(),
                "R = {rad}: {} vs {oracle}",
                r.k_min[i]
            );
            assert_eq!(r.k_max[i], h * h);
        }
    }
}

#[test]
fn exp_family_approaches_but_misses_the_supremum() {
    // with H = 0 the gap to the supremum stays representable for large R
    let h = 0.0;
    let radii = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
    let r = sample_k_image(
        &WeierstrassData::parse("exp(z)", "1").unwrap(),
        h,
        &radii,
        &VdistOptions::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::OpenBelowSup);
    assert!(r.umbilic_points.is_empty());
    for w in r.k_min.windows(2) {
        assert!(w[1] < w[0]);
    }
    let gaps: Vec<f64> = r.k_max.iter().map(|k| h * h - k).collect();
    for (i, (&gap, &rad)) in gaps.iter().zip(&radii).enumerate() {
        assert!(gap > 0.0);
        // |phi|² = e^{2x} is smallest at x = -R
        assert!(
            (gap - (-2.0 * rad).exp()).abs() <= 1e-12 + 1e-9 * gap,
            "R = {rad}"
        );
        let oracle = h * h - brute_max_phi_sq(|z| z.exp(), rad, 100 + i as u64);
        assert!((r.k_min[i] - oracle).abs() <= 0.01 * oracle.abs());
    }
}

#[test]
fn small_disk_is_inconclusive() {
    let r = sample_k_image(
        &WeierstrassData::parse("exp(z)", "1").unwrap(),
        1.0,
        &[0.5],
        &VdistOptions::default(),
    )
    .unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn umbilics_of_polynomial_data() {
    // phi = 3z² - 1 vanishes at ±1/sqrt(3)
    let d = WeierstrassData::parse("z^3 - z", "1").unwrap();
    let found = umbilic_scan(&d, Rect::square(2.0).unwrap(), 101, 101, 1e-9).unwrap();
    let s = 1.0 / 3f64.sqrt();
    assert_eq!(found.len(), 2);
    assert!((found[0] - Complex64::new(-s, 0.0)).norm() < 1e-10);
    assert!((found[1] - Complex64::new(s, 0.0)).norm() < 1e-10);

    // phi = e^z has no zeros
    let e = WeierstrassData::parse("exp(z)", "1").unwrap();
    assert!(umbilic_scan(&e, Rect::square(2.0).unwrap(), 101, 101, 1e-9)
        .unwrap()
        .is_empty());
}

#[test]
fn polar_disk_is_deterministic_and_bounded() {
    let a = polar_disk(3.0, 5000);
    assert_eq!(a, polar_disk(3.0, 5000));
    assert!(a.iter().all(|z| z.norm() <= 3.0 + 1e-12));
    assert!((a.len() as f64 - 5000.0).abs() < 500.0);
}

use isocmc_core::holo::{contour_integral, parse, Func, HoloExpr, Path, Var, Vars};
use isocmc_core::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn bx(e: HoloExpr) -> Box<HoloExpr> {
    Box::new(e)
}

fn constant() -> impl Strategy<Value = HoloExpr> {
    prop_oneof![
        (-8i32..=8).prop_map(|n| HoloExpr::real(n as f64)),
        (-40i32..=40).prop_map(|n| HoloExpr::real(n as f64 / 8.0)),
        ((-8i32..=8), (-8i32..=8))
            .prop_map(|(a, b)| HoloExpr::constant(Complex64::new(a as f64 / 4.0, b as f64 / 2.0))),
        (0.001f64..1000.0).prop_map(HoloExpr::real),
    ]
}

fn func() -> impl Strategy<Value = Func> {
    prop_oneof![
        Just(Func::Exp),
        Just(Func::Sin),
        Just(Func::Cos),
        Just(Func::Sinh),
        Just(Func::Cosh)
    ]
}

fn expr() -> impl Strategy<Value = HoloExpr> {
    let leaf = prop_oneof![3 => Just(HoloExpr::z()), 2 => constant()];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::Add(bx(a), bx(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::Sub(bx(a), bx(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::Mul(bx(a), bx(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HoloExpr::Div(bx(a), bx(b))),
            inner.clone().prop_map(|a| HoloExpr::Neg(bx(a))),
            (inner.clone(), -3i32..=4).prop_map(|(a, n)| HoloExpr::Pow(bx(a), n)),
            (func(), inner).prop_map(|(f, a)| HoloExpr::Func(f, bx(a))),
        ]
    })
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn print_then_parse_is_identity_on_folded_trees(e in expr()) {
        let folded = e.fold_constants();
        let text = folded.to_string();
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(&back, &folded, "{}", text);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn folding_preserves_values(e in expr(), re in -1.5f64..1.5, im in -1.5f64..1.5) {
        let z = Complex64::new(re, im);
        if let (Ok(a), Ok(b)) = (e.eval_z(z), e.fold_constants().eval_z(z)) {
            if a.norm() < 1e6 {
                prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
            }
        }
    }
}

fn integrable() -> impl Strategy<Value = HoloExpr> {
    let poly = proptest::collection::vec((-4i32..=4, -4i32..=4), 1..6).prop_map(|cs| {
        cs.into_iter()
            .enumerate()
            .fold(HoloExpr::real(0.0), |acc, (k, (a, b))| {
                let c = HoloExpr::constant(Complex64::new(a as f64, b as f64 / 2.0));
                HoloExpr::Add(
                    bx(acc),
                    bx(HoloExpr::Mul(
                        bx(c),
                        bx(HoloExpr::Pow(bx(HoloExpr::z()), k as i32)),
                    )),
                )
            })
    });
    let trans = (func(), -3i32..=3, -2i32..=2).prop_map(|(f, a, b)| {
        let arg = HoloExpr::Add(
            bx(HoloExpr::Mul(
                bx(HoloExpr::real(a as f64 / 2.0)),
                bx(HoloExpr::z()),
            )),
            bx(HoloExpr::real(b as f64)),
        );
        HoloExpr::Func(f, bx(arg))
    });
    (poly, proptest::collection::vec(trans, 0..3), -3i32..=3).prop_map(|(p, ts, s)| {
        let mut e = p;
        for t in ts {
            e = HoloExpr::Add(
                bx(e),
                bx(HoloExpr::Mul(bx(HoloExpr::real(s as f64)), bx(t))),
            );
        }
        e.fold_constants()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn derivative_of_antiderivative(e in integrable(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let z = Complex64::new(re, im);
        let big = e.antiderivative();
        prop_assert!(big.is_some(), "no closed form for {}", e);
        let big = big.unwrap();
        prop_assert!(close(big.eval_z(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0), 1e-12));
        let d = big.derivative().eval_z(z).unwrap();
        prop_assert!(close(d, e.eval_z(z).unwrap(), 1e-10), "{} at {}", e, z);
    }

    #[test]
    fn cauchy_riemann(e in integrable(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let xy = parse(&e.to_string().replace('z', "(x + i*y)")).unwrap();
        let vars = Vars::xy(re, im);
        let fx = xy.derivative_wrt(Var::X).eval(&vars).unwrap();
        let fy = xy.derivative_wrt(Var::Y).eval(&vars).unwrap();
        let fz = e.derivative().eval_z(Complex64::new(re, im)).unwrap();
        prop_assert!(close(fy, Complex64::i() * fx, 1e-12));
        prop_assert!(close(fx, fz, 1e-12));
    }
}

fn random_path(rng: &mut ChaCha8Rng, from: Complex64, to: Complex64) -> Path {
    let mut pts = vec![from];
    for _ in 0..rng.random_range(0..4) {
        pts.push(Complex64::new(
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
        ));
    }
    pts.push(to);
    Path::new(pts).unwrap()
}

#[test]
fn contour_integrals_are_path_independent() {
    let tol = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for src in [
        "exp(z^2)",
        "z^5 - 3*z + i",
        "sin(2*z)*cosh(z)",
        "exp(z)/(1 + z^2/10)",
    ] {
        let e = parse(src).unwrap();
        for _ in 0..20 {
            let a = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            let b = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            if (a - b).norm() < 1e-3 {
                continue;
            }
            let p = contour_integral(&e, &random_path(&mut rng, a, b), tol).unwrap();
            let q = contour_integral(&e, &random_path(&mut rng, a, b), tol).unwrap();
            assert!((p - q).norm() <= 2.0 * tol, "{src}: {p} vs {q}");
        }
    }
}

#[test]
fn contour_integral_matches_antiderivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for src in ["z^3 - 2*z", "exp(3*z - 1)", "cos(z) + sinh(z/2)"] {
        let e = parse(src).unwrap();
        let big = e.antiderivative().unwrap();
        for _ in 0..10 {
            let b = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let path = random_path(&mut rng, Complex64::new(0.0, 0.0), b);
            let q = contour_integral(&e, &path, 1e-12).unwrap();
            assert!(close(q, big.eval_z(b).unwrap(), 1e-10), "{src} to {b}");
        }
    }
}

#[test]
fn closed_loop_around_pole_gives_residue() {
    let e = parse("1/z").unwrap();
    let n = 64;
    let pts: Vec<Complex64> = (0..=n)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    let loop_ = contour_integral(&e, &Path::new(pts).unwrap(), 1e-12).unwrap();
    // chords of a 64-gon around the pole still enclose it once
    assert!((loop_ - Complex64::new(0.0, std::f64::consts::TAU)).norm() < 1e-9);
}

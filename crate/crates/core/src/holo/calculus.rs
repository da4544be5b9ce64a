use num_complex::Complex64;

use super::expr::{add, c, div, func, mul, neg, pow, sub, Func, HoloExpr, Var};

impl HoloExpr {
    /// Symbolic d/dz.
    pub fn derivative(&self) -> HoloExpr {
        self.derivative_wrt(Var::Z)
    }

    pub fn derivative_wrt(&self, v: Var) -> HoloExpr {
        match self {
            HoloExpr::Const(_) => c(0.0),
            HoloExpr::Var(w) => c(if *w == v { 1.0 } else { 0.0 }),
            HoloExpr::Add(a, b) => add(a.derivative_wrt(v), b.derivative_wrt(v)),
            HoloExpr::Sub(a, b) => sub(a.derivative_wrt(v), b.derivative_wrt(v)),
            HoloExpr::Mul(a, b) => add(
                mul(a.derivative_wrt(v), (**b).clone()),
                mul((**a).clone(), b.derivative_wrt(v)),
            ),
            HoloExpr::Div(a, b) => {
                let da = a.derivative_wrt(v);
                let db = b.derivative_wrt(v);
                if db.as_const().is_some_and(|k| k == Complex64::new(0.0, 0.0)) {
                    div(da, (**b).clone())
                } else {
                    div(
                        sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                        pow((**b).clone(), 2),
                    )
                }
            }
            HoloExpr::Neg(a) => neg(a.derivative_wrt(v)),
            HoloExpr::Pow(a, n) => {
                if *n == 0 {
                    return c(0.0);
                }
                mul(
                    mul(c(*n as f64), pow((**a).clone(), n - 1)),
                    a.derivative_wrt(v),
                )
            }
            HoloExpr::Func(f, a) => {
                let inner = (**a).clone();
                let outer = match f {
                    Func::Exp => func(Func::Exp, inner),
                    Func::Sin => func(Func::Cos, inner),
                    Func::Cos => neg(func(Func::Sin, inner)),
                    Func::Sinh => func(Func::Cosh, inner),
                    Func::Cosh => func(Func::Sinh, inner),
                };
                mul(outer, a.derivative_wrt(v))
            }
        }
    }

    /// Closed-form antiderivative in z, normalized so that F(0) = 0.
    ///
    /// Handles polynomials in z, `c*f(a*z + b)` for f in exp/sin/cos/sinh/cosh,
    /// and finite sums and constant multiples of those. Returns `None` for
    /// anything else; callers integrate numerically instead.
    pub fn antiderivative(&self) -> Option<HoloExpr> {
        if !self.is_complex_mode() {
            return None;
        }
        let f = integrate(self)?;
        match f.eval_z(Complex64::new(0.0, 0.0)) {
            Ok(f0) if f0 == Complex64::new(0.0, 0.0) => Some(f),
            Ok(f0) => Some(sub(f, HoloExpr::Const(f0))),
            Err(_) => None,
        }
    }
}

fn integrate(e: &HoloExpr) -> Option<HoloExpr> {
    if e.is_constant() {
        return Some(mul(e.clone(), HoloExpr::z()));
    }
    if let Some(p) = Poly::from_expr(e) {
        return Some(p.integral().to_expr());
    }
    match e {
        HoloExpr::Add(a, b) => Some(add(integrate(a)?, integrate(b)?)),
        HoloExpr::Sub(a, b) => Some(sub(integrate(a)?, integrate(b)?)),
        HoloExpr::Neg(a) => Some(neg(integrate(a)?)),
        HoloExpr::Mul(a, b) if a.is_constant() => Some(mul((**a).clone(), integrate(b)?)),
        HoloExpr::Mul(a, b) if b.is_constant() => Some(mul((**b).clone(), integrate(a)?)),
        HoloExpr::Div(a, b) if b.is_constant() => Some(div(integrate(a)?, (**b).clone())),
        HoloExpr::Func(f, arg) => {
            let p = Poly::from_expr(arg)?;
            match p.degree() {
                0 => return Some(mul(HoloExpr::Const(f.apply(p.coeffs[0])), HoloExpr::z())),
                1 => {}
                _ => return None,
            }
            let slope = p.coeffs[1];
            let prim = match f {
                Func::Exp => func(Func::Exp, (**arg).clone()),
                Func::Sin => neg(func(Func::Cos, (**arg).clone())),
                Func::Cos => func(Func::Sin, (**arg).clone()),
                Func::Sinh => func(Func::Cosh, (**arg).clone()),
                Func::Cosh => func(Func::Sinh, (**arg).clone()),
            };
            Some(div(prim, HoloExpr::Const(slope)))
        }
        _ => None,
    }
}

/// Dense polynomial in z with complex coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
struct Poly {
    coeffs: Vec<Complex64>,
}

// Guards against expanding something like (z + 1)^1000000.
const MAX_POLY_DEGREE: usize = 4096;

impl Poly {
    fn constant(k: Complex64) -> Self {
        Poly { coeffs: vec![k] }
    }

    fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|k| *k != Complex64::new(0.0, 0.0))
            .unwrap_or(0)
    }

    fn from_expr(e: &HoloExpr) -> Option<Poly> {
        Some(match e {
            HoloExpr::Const(k) => Poly::constant(*k),
            HoloExpr::Var(Var::Z) => Poly {
                coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            },
            HoloExpr::Var(_) => return None,
            HoloExpr::Add(a, b) => Poly::from_expr(a)?.zip(&Poly::from_expr(b)?, |x, y| x + y),
            HoloExpr::Sub(a, b) => Poly::from_expr(a)?.zip(&Poly::from_expr(b)?, |x, y| x - y),
            HoloExpr::Neg(a) => Poly::from_expr(a)?.scale(Complex64::new(-1.0, 0.0)),
            HoloExpr::Mul(a, b) => Poly::from_expr(a)?.mul(&Poly::from_expr(b)?)?,
            HoloExpr::Div(a, b) => {
                let k = b
                    .eval_z(Complex64::new(0.0, 0.0))
                    .ok()
                    .filter(|_| b.is_constant())?;
                Poly::from_expr(a)?.scale(k.inv())
            }
            HoloExpr::Pow(a, n) if *n >= 0 => {
                let base = Poly::from_expr(a)?;
                if base.degree() * (*n as usize) > MAX_POLY_DEGREE {
                    return None;
                }
                let mut acc = Poly::constant(Complex64::new(1.0, 0.0));
                for _ in 0..*n {
                    acc = acc.mul(&base)?;
                }
                acc
            }
            HoloExpr::Func(..) if e.is_constant() => {
                Poly::constant(e.eval_z(Complex64::new(0.0, 0.0)).ok()?)
            }
            _ => return None,
        })
    }

    fn zip(&self, other: &Poly, op: impl Fn(Complex64, Complex64) -> Complex64) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|k| {
                op(
                    *self.coeffs.get(k).unwrap_or(&zero),
                    *other.coeffs.get(k).unwrap_or(&zero),
                )
            })
            .collect();
        Poly { coeffs }
    }

    fn scale(&self, k: Complex64) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    fn mul(&self, other: &Poly) -> Option<Poly> {
        let (da, db) = (self.degree(), other.degree());
        if da + db > MAX_POLY_DEGREE {
            return None;
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); da + db + 1];
        for (i, a) in self.coeffs.iter().take(da + 1).enumerate() {
            for (j, b) in other.coeffs.iter().take(db + 1).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Some(Poly { coeffs })
    }

    fn integral(&self) -> Poly {
        let mut coeffs = vec![Complex64::new(0.0, 0.0)];
        coeffs.extend(
            self.coeffs
                .iter()
                .take(self.degree() + 1)
                .enumerate()
                .map(|(k, a)| a / (k as f64 + 1.0)),
        );
        Poly { coeffs }
    }

    fn to_expr(&self) -> HoloExpr {
        let mut out = c(0.0);
        for (k, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            out = add(out, mul(HoloExpr::Const(*a), pow(HoloExpr::z(), k as i32)));
        }
        out
    }
}

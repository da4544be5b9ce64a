use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Denominators with modulus below this are reported as singularities.
pub const SINGULARITY_TOL: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Z,
    X,
    Y,
}

impl Var {
    pub fn symbol(self) -> char {
        match self {
            Var::Z => 'z',
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }

    pub fn apply(self, w: Complex64) -> Complex64 {
        match self {
            Func::Exp => w.exp(),
            Func::Sin => w.sin(),
            Func::Cos => w.cos(),
            Func::Sinh => w.sinh(),
            Func::Cosh => w.cosh(),
        }
    }
}

/// Which variables an expression is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Holomorphic function of `z`.
    Complex,
    /// Function of the real coordinates `x`, `y`.
    Real,
}

/// Expression tree for a function of one complex variable (or of two real ones).
#[derive(Debug, Clone, PartialEq)]
pub enum HoloExpr {
    Const(Complex64),
    Var(Var),
    Add(Box<HoloExpr>, Box<HoloExpr>),
    Sub(Box<HoloExpr>, Box<HoloExpr>),
    Mul(Box<HoloExpr>, Box<HoloExpr>),
    Div(Box<HoloExpr>, Box<HoloExpr>),
    Neg(Box<HoloExpr>),
    Pow(Box<HoloExpr>, i32),
    Func(Func, Box<HoloExpr>),
}

/// Values assigned to the variables of an expression.
#[derive(Debug, Clone, Copy, Default)]
pub struct Vars {
    pub z: Option<Complex64>,
    pub x: Option<Complex64>,
    pub y: Option<Complex64>,
}

impl Vars {
    pub fn z(z: Complex64) -> Self {
        Vars {
            z: Some(z),
            ..Default::default()
        }
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Vars {
            z: None,
            x: Some(Complex64::new(x, 0.0)),
            y: Some(Complex64::new(y, 0.0)),
        }
    }

    fn get(&self, v: Var) -> Result<Complex64> {
        match v {
            Var::Z => self.z,
            Var::X => self.x,
            Var::Y => self.y,
        }
        .ok_or(Error::UnboundVariable(v.symbol()))
    }
}

fn finite(w: Complex64) -> Result<Complex64> {
    if w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(Error::NonFinite)
    }
}

fn checked_div(num: Complex64, den: Complex64, at: Complex64) -> Result<Complex64> {
    if den.norm() < SINGULARITY_TOL {
        return Err(Error::Singularity { at });
    }
    finite(num / den)
}

fn checked_powi(base: Complex64, n: i32, at: Complex64) -> Result<Complex64> {
    let pos = finite(base.powu(n.unsigned_abs()))?;
    if n < 0 {
        checked_div(Complex64::new(1.0, 0.0), pos, at)
    } else {
        Ok(pos)
    }
}

impl HoloExpr {
    pub fn constant(c: Complex64) -> Self {
        HoloExpr::Const(c)
    }

    pub fn real(r: f64) -> Self {
        HoloExpr::Const(Complex64::new(r, 0.0))
    }

    pub fn z() -> Self {
        HoloExpr::Var(Var::Z)
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            HoloExpr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// True when no variable appears in the tree.
    pub fn is_constant(&self) -> bool {
        self.find_var(&mut |_| true).is_none()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.find_var(&mut |w| w == v).is_some()
    }

    fn find_var(&self, pred: &mut impl FnMut(Var) -> bool) -> Option<Var> {
        match self {
            HoloExpr::Const(_) => None,
            HoloExpr::Var(v) => pred(*v).then_some(*v),
            HoloExpr::Add(a, b)
            | HoloExpr::Sub(a, b)
            | HoloExpr::Mul(a, b)
            | HoloExpr::Div(a, b) => a.find_var(pred).or_else(|| b.find_var(pred)),
            HoloExpr::Neg(a) | HoloExpr::Pow(a, _) | HoloExpr::Func(_, a) => a.find_var(pred),
        }
    }

    /// `None` for variable-free expressions, which fit either mode.
    pub fn mode(&self) -> Option<Mode> {
        if self.contains_var(Var::Z) {
            Some(Mode::Complex)
        } else if self.contains_var(Var::X) || self.contains_var(Var::Y) {
            Some(Mode::Real)
        } else {
            None
        }
    }

    pub fn is_complex_mode(&self) -> bool {
        !self.contains_var(Var::X) && !self.contains_var(Var::Y)
    }

    pub fn eval(&self, vars: &Vars) -> Result<Complex64> {
        // Singularity errors report the z value (or x + iy in real mode).
        let at = vars.z.unwrap_or_else(|| {
            Complex64::new(vars.x.map_or(0.0, |x| x.re), vars.y.map_or(0.0, |y| y.re))
        });
        self.eval_at(vars, at)
    }

    pub fn eval_z(&self, z: Complex64) -> Result<Complex64> {
        self.eval_at(&Vars::z(z), z)
    }

    fn eval_at(&self, vars: &Vars, at: Complex64) -> Result<Complex64> {
        Ok(match self {
            HoloExpr::Const(c) => *c,
            HoloExpr::Var(v) => vars.get(*v)?,
            HoloExpr::Add(a, b) => finite(a.eval_at(vars, at)? + b.eval_at(vars, at)?)?,
            HoloExpr::Sub(a, b) => finite(a.eval_at(vars, at)? - b.eval_at(vars, at)?)?,
            HoloExpr::Mul(a, b) => finite(a.eval_at(vars, at)? * b.eval_at(vars, at)?)?,
            HoloExpr::Div(a, b) => checked_div(a.eval_at(vars, at)?, b.eval_at(vars, at)?, at)?,
            HoloExpr::Neg(a) => -a.eval_at(vars, at)?,
            HoloExpr::Pow(a, n) => checked_powi(a.eval_at(vars, at)?, *n, at)?,
            HoloExpr::Func(f, a) => finite(f.apply(a.eval_at(vars, at)?))?,
        })
    }

    /// Replaces every variable-free subtree by its value.
    ///
    /// Subtrees whose value would be singular or non-finite are left alone.
    pub fn fold_constants(&self) -> HoloExpr {
        match self {
            HoloExpr::Const(_) | HoloExpr::Var(_) => self.clone(),
            HoloExpr::Add(a, b) => fold_binary(HoloExpr::Add, a, b),
            HoloExpr::Sub(a, b) => fold_binary(HoloExpr::Sub, a, b),
            HoloExpr::Mul(a, b) => fold_binary(HoloExpr::Mul, a, b),
            HoloExpr::Div(a, b) => fold_binary(HoloExpr::Div, a, b),
            HoloExpr::Neg(a) => try_fold(HoloExpr::Neg(Box::new(a.fold_constants()))),
            HoloExpr::Pow(a, n) => try_fold(HoloExpr::Pow(Box::new(a.fold_constants()), *n)),
            HoloExpr::Func(f, a) => try_fold(HoloExpr::Func(*f, Box::new(a.fold_constants()))),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            HoloExpr::Const(_) | HoloExpr::Var(_) => 1,
            HoloExpr::Add(a, b)
            | HoloExpr::Sub(a, b)
            | HoloExpr::Mul(a, b)
            | HoloExpr::Div(a, b) => 1 + a.size() + b.size(),
            HoloExpr::Neg(a) | HoloExpr::Pow(a, _) | HoloExpr::Func(_, a) => 1 + a.size(),
        }
    }
}

fn fold_binary(
    make: fn(Box<HoloExpr>, Box<HoloExpr>) -> HoloExpr,
    a: &HoloExpr,
    b: &HoloExpr,
) -> HoloExpr {
    try_fold(make(
        Box::new(a.fold_constants()),
        Box::new(b.fold_constants()),
    ))
}

/// Evaluates a node whose children are already folded, if they are all constants.
fn try_fold(node: HoloExpr) -> HoloExpr {
    let children_const = match &node {
        HoloExpr::Add(a, b) | HoloExpr::Sub(a, b) | HoloExpr::Mul(a, b) | HoloExpr::Div(a, b) => {
            a.as_const().is_some() && b.as_const().is_some()
        }
        HoloExpr::Neg(a) | HoloExpr::Pow(a, _) | HoloExpr::Func(_, a) => a.as_const().is_some(),
        _ => false,
    };
    if !children_const {
        return node;
    }
    match node.eval(&Vars::default()) {
        Ok(c) => HoloExpr::Const(c),
        Err(_) => node,
    }
}

// Smart constructors: constant folding plus zero/one elimination. Used by the
// calculus routines; the parser only folds.

pub(crate) fn c(re: f64) -> HoloExpr {
    HoloExpr::real(re)
}

fn is_zero(e: &HoloExpr) -> bool {
    e.as_const() == Some(Complex64::new(0.0, 0.0))
}

fn is_one(e: &HoloExpr) -> bool {
    e.as_const() == Some(Complex64::new(1.0, 0.0))
}

pub(crate) fn add(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    if is_zero(&a) {
        return b;
    }
    if is_zero(&b) {
        return a;
    }
    try_fold(HoloExpr::Add(Box::new(a), Box::new(b)))
}

pub(crate) fn sub(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    if is_zero(&b) {
        return a;
    }
    if is_zero(&a) {
        return neg(b);
    }
    try_fold(HoloExpr::Sub(Box::new(a), Box::new(b)))
}

pub(crate) fn mul(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    if is_zero(&a) || is_zero(&b) {
        return c(0.0);
    }
    if is_one(&a) {
        return b;
    }
    if is_one(&b) {
        return a;
    }
    // constant factor first
    if b.as_const().is_some() && a.as_const().is_none() {
        return try_fold(HoloExpr::Mul(Box::new(b), Box::new(a)));
    }
    // merge nested constant factors: c1 * (c2 * e) -> (c1 c2) * e
    if let (Some(k1), HoloExpr::Mul(inner_a, inner_b)) = (a.as_const(), &b) {
        if let Some(k2) = inner_a.as_const() {
            return mul(HoloExpr::Const(k1 * k2), (**inner_b).clone());
        }
    }
    try_fold(HoloExpr::Mul(Box::new(a), Box::new(b)))
}

pub(crate) fn div(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    if is_zero(&a) {
        return c(0.0);
    }
    if is_one(&b) {
        return a;
    }
    if let Some(k) = b.as_const() {
        if k.norm() >= SINGULARITY_TOL {
            return mul(HoloExpr::Const(k.inv()), a);
        }
    }
    try_fold(HoloExpr::Div(Box::new(a), Box::new(b)))
}

pub(crate) fn neg(a: HoloExpr) -> HoloExpr {
    match a {
        HoloExpr::Neg(inner) => *inner,
        other => try_fold(HoloExpr::Neg(Box::new(other))),
    }
}

pub(crate) fn pow(a: HoloExpr, n: i32) -> HoloExpr {
    match n {
        0 => c(1.0),
        1 => a,
        _ => try_fold(HoloExpr::Pow(Box::new(a), n)),
    }
}

pub(crate) fn func(f: Func, a: HoloExpr) -> HoloExpr {
    try_fold(HoloExpr::Func(f, Box::new(a)))
}

fn write_real(f: &mut fmt::Formatter<'_>, r: f64) -> fmt::Result {
    let a = r.abs();
    // shortest round-trip representation; exponent form for extreme magnitudes
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        write!(f, "{a:e}")
    } else {
        write!(f, "{a}")
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, w: Complex64) -> fmt::Result {
    // -0 does not survive a parse, so print it as 0
    let w = Complex64::new(w.re + 0.0, w.im + 0.0);
    if w.im == 0.0 {
        if w.re.is_sign_negative() {
            f.write_str("(-")?;
            write_real(f, w.re)?;
            f.write_str(")")
        } else {
            write_real(f, w.re)
        }
    } else {
        f.write_str("(")?;
        if w.re != 0.0 {
            if w.re.is_sign_negative() {
                f.write_str("-")?;
            }
            write_real(f, w.re)?;
            f.write_str(if w.im < 0.0 { " - " } else { " + " })?;
        } else if w.im < 0.0 {
            f.write_str("-")?;
        }
        write_real(f, w.im)?;
        f.write_str("*i)")
    }
}

/// Canonical, fully parenthesized serialization. Parsing the output yields the
/// same tree for constant-folded expressions.
impl fmt::Display for HoloExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoloExpr::Const(w) => write_const(f, *w),
            HoloExpr::Var(v) => write!(f, "{}", v.symbol()),
            HoloExpr::Add(a, b) => write!(f, "({a} + {b})"),
            HoloExpr::Sub(a, b) => write!(f, "({a} - {b})"),
            HoloExpr::Mul(a, b) => write!(f, "({a} * {b})"),
            HoloExpr::Div(a, b) => write!(f, "({a} / {b})"),
            HoloExpr::Neg(a) => write!(f, "(-{a})"),
            HoloExpr::Pow(a, n) if *n < 0 => write!(f, "({a}^({n}))"),
            HoloExpr::Pow(a, n) => write!(f, "({a}^{n})"),
            HoloExpr::Func(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn z() -> HoloExpr {
        HoloExpr::z()
    }

    #[test]
    fn eval_identity_and_euler() {
        let w = Complex64::new(3.0, 4.0);
        assert_eq!(z().eval_z(w).unwrap(), w);

        let e = func(Func::Exp, z());
        let v = e.eval_z(Complex64::new(0.0, PI)).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-15);

        let sq = HoloExpr::Pow(Box::new(z()), 2);
        assert_eq!(
            sq.eval_z(Complex64::new(1.0, 1.0)).unwrap(),
            Complex64::new(0.0, 2.0)
        );
    }

    #[test]
    fn division_by_zero_is_singular() {
        let e = HoloExpr::Div(Box::new(c(1.0)), Box::new(z()));
        assert!(matches!(
            e.eval_z(Complex64::new(0.0, 0.0)),
            Err(Error::Singularity { .. })
        ));
        let e = HoloExpr::Pow(Box::new(z()), -2);
        assert!(matches!(
            e.eval_z(Complex64::new(0.0, 0.0)),
            Err(Error::Singularity { .. })
        ));
    }

    #[test]
    fn overflow_is_an_error() {
        let e = func(Func::Exp, z());
        assert!(matches!(
            e.eval_z(Complex64::new(1000.0, 0.0)),
            Err(Error::NonFinite)
        ));
    }

    #[test]
    fn unbound_variable() {
        let e = HoloExpr::Var(Var::X);
        assert!(matches!(
            e.eval_z(Complex64::new(1.0, 0.0)),
            Err(Error::UnboundVariable('x'))
        ));
        assert_eq!(
            e.eval(&Vars::xy(2.0, 3.0)).unwrap(),
            Complex64::new(2.0, 0.0)
        );
    }

    #[test]
    fn smart_constructors_eliminate_units() {
        assert_eq!(mul(c(1.0), z()), z());
        assert_eq!(mul(z(), c(0.0)), c(0.0));
        assert_eq!(add(c(0.0), z()), z());
        assert_eq!(
            mul(z(), c(2.0)),
            HoloExpr::Mul(Box::new(c(2.0)), Box::new(z()))
        );
        assert_eq!(mul(c(2.0), mul(c(3.0), z())), mul(c(6.0), z()));
        assert_eq!(pow(z(), 1), z());
        assert_eq!(neg(neg(z())), z());
    }

    #[test]
    fn constants_print_canonically() {
        assert_eq!(c(2.0).to_string(), "2");
        assert_eq!(c(-2.5).to_string(), "(-2.5)");
        assert_eq!(
            HoloExpr::Const(Complex64::new(2.0, 3.0)).to_string(),
            "(2 + 3*i)"
        );
        assert_eq!(
            HoloExpr::Const(Complex64::new(-1.0, -0.5)).to_string(),
            "(-1 - 0.5*i)"
        );
        assert_eq!(
            HoloExpr::Const(Complex64::new(0.0, -1.0)).to_string(),
            "(-1*i)"
        );
        assert_eq!(c(1e-300).to_string(), "1e-300");
    }
}

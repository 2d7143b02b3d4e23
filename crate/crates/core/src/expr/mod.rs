//! Real-valued expressions in the two plane coordinates `x` and `y`.
//!
//! Expressions are parsed from a small ASCII grammar ([`parse_scalar`]) or from
//! the LaTeX dialect produced by the exporter ([`parse_latex`]), evaluated with
//! plain floats or forward-mode [`Dual`] numbers, and printed back as LaTeX
//! ([`emit_latex`]) or ASCII (`Display`).
//!
//! Domain failures never panic or return errors: `ln` of a non-positive
//! number, division by zero, `0` raised to a negative power and a negative base
//! raised to a non-integer power all evaluate to NaN.

mod dual;
mod latex;
mod parse;

use std::fmt;

pub use dual::Dual;
pub use latex::{emit_latex, format_number};
pub use parse::{parse_latex, parse_latex_inequality, parse_scalar, SyntaxError};

/// Exponents within this distance of an integer count as integers when the
/// base is negative.
pub const INTEGER_EXPONENT_TOL: f64 = 1e-9;

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Abs,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Abs => "abs",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "abs" => Func::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Expression tree of a function `f(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarExpr {
    Const(f64),
    Var(Var),
    Neg(Box<ScalarExpr>),
    Binary(BinOp, Box<ScalarExpr>, Box<ScalarExpr>),
    Call(Func, Box<ScalarExpr>),
}

impl ScalarExpr {
    pub fn constant(v: f64) -> Self {
        ScalarExpr::Const(v)
    }

    pub fn x() -> Self {
        ScalarExpr::Var(Var::X)
    }

    pub fn y() -> Self {
        ScalarExpr::Var(Var::Y)
    }

    pub fn binary(op: BinOp, lhs: ScalarExpr, rhs: ScalarExpr) -> Self {
        ScalarExpr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn call(func: Func, arg: ScalarExpr) -> Self {
        ScalarExpr::Call(func, Box::new(arg))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        ScalarExpr::Neg(Box::new(self))
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.eval_with::<f64>(p)
    }

    /// Value and exact partial derivatives at `p`.
    pub fn eval_dual(&self, p: Point) -> Dual {
        self.eval_with::<Dual>(p)
    }

    pub fn eval_with<T: Number>(&self, p: Point) -> T {
        match self {
            ScalarExpr::Const(c) => T::constant(*c),
            ScalarExpr::Var(Var::X) => T::var_x(p.x),
            ScalarExpr::Var(Var::Y) => T::var_y(p.y),
            ScalarExpr::Neg(e) => e.eval_with::<T>(p).neg(),
            ScalarExpr::Binary(op, l, r) => {
                let l = l.eval_with::<T>(p);
                let r = r.eval_with::<T>(p);
                match op {
                    BinOp::Add => l.add(r),
                    BinOp::Sub => l.sub(r),
                    BinOp::Mul => l.mul(r),
                    BinOp::Div => l.div(r),
                    BinOp::Pow => l.pow(r),
                }
            }
            ScalarExpr::Call(f, e) => {
                let v = e.eval_with::<T>(p);
                match f {
                    Func::Exp => v.exp(),
                    Func::Ln => v.ln(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Abs => v.abs(),
                }
            }
        }
    }

    /// Smallest distance, measured in the value of the offending
    /// sub-expression, between `p` and a point where the expression stops
    /// being differentiable: the argument of `abs` or `ln`, a denominator, or
    /// the base of a power whose exponent is not a non-negative integer.
    /// Returns `+inf` for expressions without such sub-expressions and NaN if
    /// any of them is NaN at `p`.
    pub fn singularity_margin(&self, p: Point) -> f64 {
        match self {
            ScalarExpr::Const(_) | ScalarExpr::Var(_) => f64::INFINITY,
            ScalarExpr::Neg(e) => e.singularity_margin(p),
            ScalarExpr::Binary(op, l, r) => {
                let inner = nan_min(l.singularity_margin(p), r.singularity_margin(p));
                let own = match op {
                    BinOp::Div => r.eval(p).abs(),
                    BinOp::Pow => match r.as_constant() {
                        Some(e) if e >= 0.0 && is_integer(e) => f64::INFINITY,
                        _ => l.eval(p).abs(),
                    },
                    _ => f64::INFINITY,
                };
                nan_min(inner, own)
            }
            ScalarExpr::Call(f, e) => {
                let inner = e.singularity_margin(p);
                let own = match f {
                    Func::Abs | Func::Ln => e.eval(p).abs(),
                    _ => f64::INFINITY,
                };
                nan_min(inner, own)
            }
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            ScalarExpr::Const(c) => Some(*c),
            ScalarExpr::Neg(e) => e.as_constant().map(|c| -c),
            _ => None,
        }
    }

    /// True when the expression does not mention `y`.
    pub fn is_univariate_x(&self) -> bool {
        match self {
            ScalarExpr::Const(_) | ScalarExpr::Var(Var::X) => true,
            ScalarExpr::Var(Var::Y) => false,
            ScalarExpr::Neg(e) | ScalarExpr::Call(_, e) => e.is_univariate_x(),
            ScalarExpr::Binary(_, l, r) => l.is_univariate_x() && r.is_univariate_x(),
        }
    }
}

fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

pub(crate) fn is_integer(e: f64) -> bool {
    (e - e.round()).abs() <= INTEGER_EXPONENT_TOL
}

/// Real power with the NaN conventions of this crate.
pub fn real_pow(base: f64, exponent: f64) -> f64 {
    if base.is_nan() || exponent.is_nan() {
        return f64::NAN;
    }
    if base == 0.0 && exponent < 0.0 {
        return f64::NAN;
    }
    if base < 0.0 {
        if !is_integer(exponent) {
            return f64::NAN;
        }
        let n = exponent.round();
        if n.abs() <= i32::MAX as f64 {
            return base.powi(n as i32);
        }
        return base.powf(n);
    }
    base.powf(exponent)
}

/// Arithmetic needed to evaluate expression and region trees, implemented for
/// `f64` and [`Dual`].
pub trait Number: Copy + fmt::Debug {
    fn constant(c: f64) -> Self;
    fn var_x(x: f64) -> Self;
    fn var_y(y: f64) -> Self;
    fn value(self) -> f64;

    fn add(self, rhs: Self) -> Self;
    fn sub(self, rhs: Self) -> Self;
    fn mul(self, rhs: Self) -> Self;
    fn div(self, rhs: Self) -> Self;
    fn pow(self, rhs: Self) -> Self;
    fn neg(self) -> Self;
    fn scale(self, k: f64) -> Self;

    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn ln_1p(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn abs(self) -> Self;
}

impl Number for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn var_x(x: f64) -> Self {
        x
    }
    fn var_y(y: f64) -> Self {
        y
    }
    fn value(self) -> f64 {
        self
    }
    fn add(self, rhs: Self) -> Self {
        self + rhs
    }
    fn sub(self, rhs: Self) -> Self {
        self - rhs
    }
    fn mul(self, rhs: Self) -> Self {
        self * rhs
    }
    fn div(self, rhs: Self) -> Self {
        if rhs == 0.0 {
            f64::NAN
        } else {
            self / rhs
        }
    }
    fn pow(self, rhs: Self) -> Self {
        real_pow(self, rhs)
    }
    fn neg(self) -> Self {
        -self
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        if self <= 0.0 {
            f64::NAN
        } else {
            f64::ln(self)
        }
    }
    fn ln_1p(self) -> Self {
        f64::ln_1p(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

impl fmt::Display for ScalarExpr {
    /// ASCII form accepted by [`parse_scalar`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ascii(self, f)
    }
}

fn precedence(e: &ScalarExpr) -> u8 {
    match e {
        ScalarExpr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
        ScalarExpr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
        ScalarExpr::Neg(_) => 3,
        ScalarExpr::Const(c) if *c < 0.0 || c.is_sign_negative() => 3,
        ScalarExpr::Binary(BinOp::Pow, ..) => 4,
        _ => 5,
    }
}

pub(crate) fn needs_parens(parent: &ScalarExpr, child: &ScalarExpr, right: bool) -> bool {
    let c = precedence(child);
    match parent {
        ScalarExpr::Binary(BinOp::Add | BinOp::Sub, ..) => right && (c == 1 || c == 3),
        ScalarExpr::Binary(BinOp::Mul | BinOp::Div, ..) => {
            if right {
                c <= 3
            } else {
                c < 2
            }
        }
        ScalarExpr::Binary(BinOp::Pow, ..) => !right && c <= 4,
        ScalarExpr::Neg(_) => c < 3,
        _ => false,
    }
}

fn write_ascii(e: &ScalarExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let child = |f: &mut fmt::Formatter<'_>, c: &ScalarExpr, right: bool| {
        if needs_parens(e, c, right) {
            write!(f, "(")?;
            write_ascii(c, f)?;
            write!(f, ")")
        } else {
            write_ascii(c, f)
        }
    };
    match e {
        ScalarExpr::Const(c) => write!(f, "{}", format_number(*c)),
        ScalarExpr::Var(Var::X) => write!(f, "x"),
        ScalarExpr::Var(Var::Y) => write!(f, "y"),
        ScalarExpr::Neg(c) => {
            write!(f, "-")?;
            child(f, c, false)
        }
        ScalarExpr::Binary(op, l, r) => {
            child(f, l, false)?;
            let sym = match op {
                BinOp::Add => "+",
                BinOp::Sub => "-",
                BinOp::Mul => "*",
                BinOp::Div => "/",
                BinOp::Pow => "^",
            };
            write!(f, "{sym}")?;
            if *op == BinOp::Pow {
                // the exponent grammar accepts unary minus but not sums or products
                let wrap = precedence(r) < 3;
                if wrap {
                    write!(f, "(")?;
                }
                write_ascii(r, f)?;
                if wrap {
                    write!(f, ")")?;
                }
                Ok(())
            } else {
                child(f, r, true)
            }
        }
        ScalarExpr::Call(func, arg) => {
            write!(f, "{}(", func.name())?;
            write_ascii(arg, f)?;
            write!(f, ")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn circle_substitution() {
        let e = parse_scalar("x^2+y^2-4").unwrap();
        assert_eq!(e.eval(p(0.0, 0.0)), -4.0);
        assert_eq!(e.eval(p(2.0, 0.0)), 0.0);
    }

    #[test]
    fn domain_failures_are_nan() {
        for (src, x, y) in [
            ("ln(x)", -1.0, 0.0),
            ("ln(x)", 0.0, 0.0),
            ("1/x", 0.0, 0.0),
            ("x^(-1)", 0.0, 0.0),
            ("x^1.4", -0.5, 0.0),
            ("(3*(x-0.45))^1.4-y", 0.0, 0.0),
        ] {
            let e = parse_scalar(src).unwrap();
            assert!(e.eval(p(x, y)).is_nan(), "{src} at ({x},{y})");
        }
    }

    #[test]
    fn negative_base_integer_exponent() {
        let e = parse_scalar("x^3").unwrap();
        assert_eq!(e.eval(p(-2.0, 0.0)), -8.0);
        // within tolerance of an integer
        let e = ScalarExpr::binary(
            BinOp::Pow,
            ScalarExpr::x(),
            ScalarExpr::constant(2.0 + 1e-10),
        );
        assert_eq!(e.eval(p(-3.0, 0.0)), 9.0);
        let e = ScalarExpr::binary(
            BinOp::Pow,
            ScalarExpr::x(),
            ScalarExpr::constant(2.0 + 1e-6),
        );
        assert!(e.eval(p(-3.0, 0.0)).is_nan());
    }

    #[test]
    fn ascii_display_reparses() {
        for src in [
            "x^2+y^2-4",
            "-(x+2)",
            "3*(y-0.1)-258.18*((1.9*x+0.1)*(1.9*x-0.1))^1.6",
            "-((0.5*(x+1.16))^2.8)^2+(y+0.6)/50",
            "2^-x",
            "x-(y-1)",
            "x/(y*2)",
            "-x^2",
            "exp(sin(x)*cos(y))-abs(ln(x))",
        ] {
            let e = parse_scalar(src).unwrap();
            let again = parse_scalar(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let e = parse_scalar("-x^2").unwrap();
        assert_eq!(e.eval(p(3.0, 0.0)), -9.0);
        let e = parse_scalar("-(x/3)^2+10").unwrap();
        assert_eq!(e.eval(p(3.0, 0.0)), 9.0);
    }

    #[test]
    fn singularity_margin_tracks_kinks() {
        let e = parse_scalar("abs(x-1)+y^2").unwrap();
        assert!((e.singularity_margin(p(1.0005, 3.0)) - 0.0005).abs() < 1e-12);
        let e = parse_scalar("x^2+y^2").unwrap();
        assert_eq!(e.singularity_margin(p(0.0, 0.0)), f64::INFINITY);
        let e = parse_scalar("(x-1)^1.4").unwrap();
        assert!((e.singularity_margin(p(1.25, 0.0)) - 0.25).abs() < 1e-12);
    }
}

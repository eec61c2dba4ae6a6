//! Closed-form expression trees evaluated in forward-mode (value, derivative)
//! pairs, so every derivative is exact up to rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Fn1D;
use crate::error::{Error, Result};

/// A value together with its derivative with respect to the free variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub fn new(v: f64, d: f64) -> Self {
        Self { v, d }
    }

    pub fn constant(v: f64) -> Self {
        Self { v, d: 0.0 }
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

/// Expression over the free variable `x`.
///
/// `Apply` evaluates another [`Fn1D`] at a sub-expression (chain rule through
/// its exact derivative). `Inverse` evaluates the monotone inverse of a
/// function. `DerivOf` evaluates a function's derivative; its own derivative
/// would need second derivatives, which are not tracked, so it reports NaN.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    X,
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Sinh(Box<Expr>),
    Cosh(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
    /// `sum coeffs[i] * arg^i`
    Poly(Vec<f64>, Box<Expr>),
    Apply(Arc<Fn1D>, Box<Expr>),
    Inverse(Arc<Fn1D>, Box<Expr>),
    DerivOf(Arc<Fn1D>, Box<Expr>),
}

impl Expr {
    pub fn x() -> Expr {
        Expr::X
    }

    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }
    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }
    pub fn sinh(self) -> Expr {
        Expr::Sinh(Box::new(self))
    }
    pub fn cosh(self) -> Expr {
        Expr::Cosh(Box::new(self))
    }
    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }
    pub fn ln(self) -> Expr {
        Expr::Ln(Box::new(self))
    }

    pub fn poly(coeffs: Vec<f64>, arg: Expr) -> Expr {
        Expr::Poly(coeffs, Box::new(arg))
    }

    pub fn apply(f: &Arc<Fn1D>, arg: Expr) -> Expr {
        Expr::Apply(Arc::clone(f), Box::new(arg))
    }

    pub fn inverse(f: &Arc<Fn1D>, arg: Expr) -> Expr {
        Expr::Inverse(Arc::clone(f), Box::new(arg))
    }

    pub fn deriv_of(f: &Arc<Fn1D>, arg: Expr) -> Expr {
        Expr::DerivOf(Arc::clone(f), Box::new(arg))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_dual(x).v
    }

    pub fn eval_dual(&self, x: f64) -> Dual {
        match self {
            Expr::X => Dual::new(x, 1.0),
            Expr::Const(c) => Dual::constant(*c),
            Expr::Add(a, b) => a.eval_dual(x) + b.eval_dual(x),
            Expr::Sub(a, b) => a.eval_dual(x) - b.eval_dual(x),
            Expr::Mul(a, b) => a.eval_dual(x) * b.eval_dual(x),
            Expr::Div(a, b) => a.eval_dual(x) / b.eval_dual(x),
            Expr::Neg(a) => -a.eval_dual(x),
            Expr::Sin(a) => {
                let u = a.eval_dual(x);
                Dual::new(u.v.sin(), u.d * u.v.cos())
            }
            Expr::Cos(a) => {
                let u = a.eval_dual(x);
                Dual::new(u.v.cos(), -u.d * u.v.sin())
            }
            Expr::Sinh(a) => {
                let u = a.eval_dual(x);
                Dual::new(u.v.sinh(), u.d * u.v.cosh())
            }
            Expr::Cosh(a) => {
                let u = a.eval_dual(x);
                Dual::new(u.v.cosh(), u.d * u.v.sinh())
            }
            Expr::Exp(a) => {
                let u = a.eval_dual(x);
                let e = u.v.exp();
                Dual::new(e, u.d * e)
            }
            Expr::Ln(a) => {
                let u = a.eval_dual(x);
                Dual::new(u.v.ln(), u.d / u.v)
            }
            Expr::Poly(coeffs, a) => {
                let u = a.eval_dual(x);
                // Horner for the value and the derivative together.
                let mut p = 0.0;
                let mut dp = 0.0;
                for &c in coeffs.iter().rev() {
                    dp = dp * u.v + p;
                    p = p * u.v + c;
                }
                Dual::new(p, dp * u.d)
            }
            Expr::Apply(f, a) => {
                let u = a.eval_dual(x);
                let (v, d) = f.eval_with_deriv_raw(u.v);
                Dual::new(v, d * u.d)
            }
            Expr::Inverse(f, a) => {
                let u = a.eval_dual(x);
                match super::inverse::invert_raw(f, u.v, 0.0) {
                    Some(t) => Dual::new(t, u.d / f.deriv_raw(t)),
                    None => Dual::new(f64::NAN, f64::NAN),
                }
            }
            Expr::DerivOf(f, a) => {
                let u = a.eval_dual(x);
                Dual::new(f.deriv_raw(u.v), f64::NAN)
            }
        }
    }

    /// Checks every quotient denominator and logarithm argument for a zero or
    /// sign change on `[lo, hi]` using `samples` evenly spaced points.
    pub fn check_denominators(&self, lo: f64, hi: f64, samples: usize) -> Result<()> {
        let mut failure = None;
        self.visit(&mut |e| {
            if failure.is_some() {
                return;
            }
            let (arg, what) = match e {
                Expr::Div(_, d) => (d.as_ref(), "denominator"),
                Expr::Ln(a) => (a.as_ref(), "logarithm argument"),
                _ => return,
            };
            let n = samples.max(2);
            let mut sign = 0.0;
            for i in 0..n {
                let t = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
                let v = arg.eval(t);
                let bad = !v.is_finite()
                    || v == 0.0
                    || (what == "logarithm argument" && v < 0.0)
                    || (sign != 0.0 && v.signum() != sign);
                if bad {
                    failure = Some(Error::Degenerate(format!(
                        "{what} vanishes or changes sign near x = {t} on [{lo}, {hi}]"
                    )));
                    return;
                }
                sign = v.signum();
            }
        });
        failure.map_or(Ok(()), Err)
    }

    fn visit(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::X | Expr::Const(_) => {}
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Expr::Neg(a)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Sinh(a)
            | Expr::Cosh(a)
            | Expr::Exp(a)
            | Expr::Ln(a)
            | Expr::Poly(_, a)
            | Expr::Apply(_, a)
            | Expr::Inverse(_, a)
            | Expr::DerivOf(_, a) => a.visit(f),
        }
    }
}

macro_rules! expr_binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::$variant(Box::new(self), Box::new(Expr::Const(rhs)))
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(Expr::Const(self)), Box::new(rhs))
            }
        }
    };
}

expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

//! Seeded random instances: monotone `g` pairs, affine-family parameters and
//! subintervals, for the randomized checks.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::families::AffineParams;
use crate::func::{Expr, Fn1D};
use crate::geometry::OpenInterval;

/// Deterministic generator used by every randomized routine.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape library for strictly monotone functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `c0 + c1 x + c3 x³` with `c1, c3` of one sign.
    Polynomial,
    /// `c0 + s·e^{rx}`.
    Exponential,
    /// `c0 + s·ln(x - x0)` with `x0` left of the domain.
    LogShifted,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Polynomial, Shape::Exponential, Shape::LogShifted];
}

/// Random open interval inside `[-1, 2]` of length at least `0.25`.
pub fn random_interval<R: Rng>(r: &mut R) -> OpenInterval {
    let len = r.gen_range(0.25..=3.0_f64);
    let lo = r.gen_range(-1.0..=2.0 - len);
    OpenInterval::new(lo, lo + len).expect("positive length")
}

/// Random subinterval of `i` with length between 10% and 90% of `i`.
pub fn random_subinterval<R: Rng>(r: &mut R, i: OpenInterval) -> OpenInterval {
    let len = i.len() * r.gen_range(0.1..0.9);
    let lo = i.lo() + r.gen_range(0.0..=(i.len() - len));
    OpenInterval::new(lo, (lo + len).min(i.hi())).expect("positive length")
}

/// Random strictly monotone function of the given shape and sense
/// (`increasing == true` for increasing).
pub fn random_monotone<R: Rng>(r: &mut R, i: OpenInterval, shape: Shape, increasing: bool) -> Fn1D {
    let s = if increasing { 1.0 } else { -1.0 };
    let c0 = r.gen_range(-1.0..1.0);
    let e = match shape {
        Shape::Polynomial => {
            let (c1, c3) = (r.gen_range(0.3..2.0), r.gen_range(0.0..1.0));
            Expr::poly(vec![c0, s * c1, 0.0, s * c3], Expr::x())
        }
        Shape::Exponential => {
            let rate = r.gen_range(0.2..1.5);
            let amp = r.gen_range(0.3..2.0);
            c0 + s * amp * (rate * Expr::x()).exp()
        }
        Shape::LogShifted => {
            let x0 = i.lo() - r.gen_range(0.2..1.0);
            let amp = r.gen_range(0.3..2.0);
            c0 + s * amp * (Expr::x() - x0).ln()
        }
    };
    Fn1D::closed_form(i, e).expect("library shapes have no singular points on the domain")
}

/// Two functions monotone in the same random sense, with random shapes.
pub fn random_same_sense_pair<R: Rng>(r: &mut R, i: OpenInterval) -> (Arc<Fn1D>, Arc<Fn1D>) {
    let increasing = r.gen_bool(0.5);
    let pick = |r: &mut R| {
        let shape = Shape::ALL[r.gen_range(0..Shape::ALL.len())];
        Arc::new(random_monotone(r, i, shape, increasing))
    };
    let g1 = pick(r);
    let g2 = pick(r);
    (g1, g2)
}

/// Random parameters of the globally affine family.
pub fn random_affine_params<R: Rng>(r: &mut R) -> AffineParams {
    let interval = random_interval(r);
    let (g1, g2) = random_same_sense_pair(r, interval);
    AffineParams {
        interval,
        a: r.gen_range(-3.0..3.0),
        alpha: r.gen_range(-2.0..2.0),
        b: r.gen_range(-2.0..2.0),
        beta1: r.gen_range(-2.0..2.0),
        beta2: r.gen_range(-2.0..2.0),
        g1,
        g2,
    }
}

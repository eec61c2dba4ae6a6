use std::sync::Arc;

use super::{Regime, SolutionTuple};
use crate::func::{Body, Fn1D};
use crate::geometry::OpenInterval;

fn two_piece(domain: OpenInterval, at: f64, left: Body, right: Body) -> Arc<Fn1D> {
    Arc::new(Fn1D::piecewise(domain, vec![at], vec![left, right]).expect("static pieces are valid"))
}

/// The once continuously differentiable, partially affine solution on
/// `I = ]0, 4[`:
///
/// ```text
/// F(x)   = 2x² + 2          (x ≤ 1),   4x               (x > 1)
/// f_k(x) = x                (x ≤ 2),   ¾x² - 2x + 3     (x > 2)
/// g_k(x) = x                (x ≤ 2),   x²/4 + 1         (x > 2)
/// G(u)   = ½u² + u + 2      (u ≤ 2),   3u               (u > 2)
/// ```
///
/// with `G` on `]0, 10[`.
pub fn paper_example() -> SolutionTuple {
    let i = OpenInterval::new(0.0, 4.0).unwrap();
    let s = OpenInterval::new(0.0, 10.0).unwrap();
    let big_f = two_piece(
        i,
        1.0,
        Body::Quadratic { a2: 2.0, a1: 0.0, a0: 2.0 },
        Body::Affine { slope: 4.0, intercept: 0.0 },
    );
    let f = two_piece(
        i,
        2.0,
        Body::Affine { slope: 1.0, intercept: 0.0 },
        Body::Quadratic { a2: 0.75, a1: -2.0, a0: 3.0 },
    );
    let g = two_piece(
        i,
        2.0,
        Body::Affine { slope: 1.0, intercept: 0.0 },
        Body::Quadratic { a2: 0.25, a1: 0.0, a0: 1.0 },
    );
    let big_g = two_piece(
        s,
        2.0,
        Body::Quadratic { a2: 0.5, a1: 1.0, a0: 2.0 },
        Body::Affine { slope: 3.0, intercept: 0.0 },
    );
    SolutionTuple::new(i, big_f, Arc::clone(&f), f, Arc::clone(&g), g, big_g, Regime::PartiallyAffine)
        .expect("the example tuple is consistent")
}

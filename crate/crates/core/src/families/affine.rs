use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Regime, SolutionTuple};
use crate::error::Result;
use crate::func::{diagonal_image, Expr, Fn1D};
use crate::geometry::OpenInterval;

/// `F(x) = A x + α`, `f_k = -F/2 + B g_k + β_k`, `G(u) = B u + β1 + β2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineParams {
    pub interval: OpenInterval,
    pub a: f64,
    pub alpha: f64,
    pub b: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub g1: Arc<Fn1D>,
    pub g2: Arc<Fn1D>,
}

/// `-(A x + α)/2 + B g(x) + β`
fn f_from_g(p: &AffineParams, g: &Arc<Fn1D>, beta: f64) -> Result<Fn1D> {
    let (s, c) = (-0.5 * p.a, -0.5 * p.alpha + beta);
    let e = s * Expr::x() + c + p.b * Expr::apply(g, Expr::x());
    Fn1D::closed_form(p.interval, e)
}

pub fn build_affine(p: &AffineParams) -> Result<SolutionTuple> {
    let i = p.interval;
    let big_f = Fn1D::affine(i, p.a, p.alpha);
    let sumset = diagonal_image(&p.g1, &p.g2)?;
    let f1 = f_from_g(p, &p.g1, p.beta1)?;
    let f2 = f_from_g(p, &p.g2, p.beta2)?;
    let big_g = Fn1D::affine(sumset, p.b, p.beta1 + p.beta2);
    SolutionTuple::new(
        i,
        Arc::new(big_f),
        Arc::new(f1),
        Arc::new(f2),
        Arc::clone(&p.g1),
        Arc::clone(&p.g2),
        Arc::new(big_g),
        Regime::Affine,
    )
}

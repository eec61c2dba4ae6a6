use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::profiles::NONVANISHING_SAMPLES;
use super::{AuxProfiles, Regime, SolutionTuple};
use crate::error::{Error, Result};
use crate::func::inverse::diagonal_root;
use crate::func::{antiderivative, diagonal_image, Expr, Fn1D};

/// Default number of nodes of the tabulated `G`.
pub const G_GRID_POINTS: usize = 513;

/// Integration constants: every function takes its anchor value at `x0`
/// (the midpoint of `I` when absent).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Anchors {
    pub x0: Option<f64>,
    #[serde(rename = "F")]
    pub big_f: f64,
    pub f1: f64,
    pub f2: f64,
    pub g1: f64,
    pub g2: f64,
}

/// `(F, f1, f2, g1, g2)` integrated from a profile quintuple.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub big_f: Arc<Fn1D>,
    pub f1: Arc<Fn1D>,
    pub f2: Arc<Fn1D>,
    pub g1: Arc<Fn1D>,
    pub g2: Arc<Fn1D>,
}

/// Integrates `F' = 2φ`, `g_k' = 2/(ψ2 - (-1)^k ψ1)` and
/// `f_k' = -(Ψ2 - (-1)^k Ψ1)/(ψ2 - (-1)^k ψ1)`.
pub fn reconstruct_from_profiles(p: &AuxProfiles, anchors: &Anchors, tol: f64) -> Result<Reconstruction> {
    let i = p.interval();
    let x0 = anchors.x0.unwrap_or_else(|| i.mid());
    for n in 0..NONVANISHING_SAMPLES {
        let t = i.lo() + i.len() * (n as f64 + 0.5) / NONVANISHING_SAMPLES as f64;
        let (p1, p2) = (p.psi1.eval_raw(t), p.psi2.eval_raw(t));
        if !((p2 + p1) * (p2 - p1) > 0.0) {
            return Err(Error::Regime(format!(
                "g1' g2' = 4/((ψ2 + ψ1)(ψ2 - ψ1)) is not positive near x = {t}"
            )));
        }
    }
    let ap = |f: &Arc<Fn1D>| Expr::apply(f, Expr::x());
    let integrand = |e: Expr| -> Result<Arc<Fn1D>> { Ok(Arc::new(Fn1D::closed_form(i, e)?)) };
    let integrate = |e: Expr, y0: f64| -> Result<Arc<Fn1D>> {
        Ok(Arc::new(antiderivative(&integrand(e)?, x0, y0, tol)?))
    };
    let den1 = ap(&p.psi2) + ap(&p.psi1);
    let den2 = ap(&p.psi2) - ap(&p.psi1);
    Ok(Reconstruction {
        big_f: integrate(2.0 * ap(&p.phi), anchors.big_f)?,
        g1: integrate(2.0 / den1.clone(), anchors.g1)?,
        g2: integrate(2.0 / den2.clone(), anchors.g2)?,
        f1: integrate(-(ap(&p.cap_psi2) + ap(&p.cap_psi1)) / den1, anchors.f1)?,
        f2: integrate(-(ap(&p.cap_psi2) - ap(&p.cap_psi1)) / den2, anchors.f2)?,
    })
}

/// `G` on the sumset from `G(g1(t) + g2(t)) = F(t) + f1(t) + f2(t)`, with
/// slopes `G' = (F'/2 + f1')/g1'` at the nodes.
pub fn solve_for_g(big_f: &Fn1D, f1: &Fn1D, f2: &Fn1D, g1: &Fn1D, g2: &Fn1D, tol: f64) -> Result<Fn1D> {
    solve_for_g_on_grid(big_f, f1, f2, g1, g2, tol, G_GRID_POINTS)
}

/// [`solve_for_g`] with `n` interpolation nodes.
pub fn solve_for_g_on_grid(
    big_f: &Fn1D,
    f1: &Fn1D,
    f2: &Fn1D,
    g1: &Fn1D,
    g2: &Fn1D,
    tol: f64,
    n: usize,
) -> Result<Fn1D> {
    if n < 2 {
        return Err(Error::Spec(format!("G needs at least two nodes, got {n}")));
    }
    let sumset = diagonal_image(g1, g2)?;
    let mut us = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    let mut ds = Vec::with_capacity(n);
    for j in 0..n {
        let u = if j == n - 1 { sumset.hi() } else { sumset.lo() + sumset.len() * j as f64 / (n - 1) as f64 };
        let t = diagonal_root(g1, g2, u, tol)?;
        let v = big_f.value_or_limit(t) + f1.value_or_limit(t) + f2.value_or_limit(t);
        let d = (0.5 * big_f.deriv_raw(t) + f1.deriv_raw(t)) / g1.deriv_raw(t);
        if !(v.is_finite() && d.is_finite()) {
            return Err(Error::Numerical(format!("G is not finite at u = {u} (t = {t})")));
        }
        us.push(u);
        vs.push(v);
        ds.push(d);
    }
    // The table spans the closed sumset, so no interior margin is needed.
    Ok(Fn1D::hermite(sumset, us, vs, ds)?.with_margin(0.0))
}

/// Full nowhere affine tuple: integration followed by recovery of `G`.
pub fn reconstruct_tuple(p: &AuxProfiles, anchors: &Anchors, tol: f64) -> Result<SolutionTuple> {
    let r = reconstruct_from_profiles(p, anchors, tol)?;
    let big_g = solve_for_g(&r.big_f, &r.f1, &r.f2, &r.g1, &r.g2, 0.0)?;
    SolutionTuple::new(p.interval(), r.big_f, r.f1, r.f2, r.g1, r.g2, Arc::new(big_g), Regime::NowhereAffine)
}

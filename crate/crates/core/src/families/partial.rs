use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Regime, SolutionTuple};
use crate::error::{Error, Result};
use crate::func::{diagonal_image, Body, Expr, Fn1D};
use crate::geometry::{sumset_image, OpenInterval, SLACK};
use crate::verify::check_const;

/// Relative tolerance for junction matching and overlap consistency.
const JUNCTION_TOL: f64 = 1e-9;

/// Samples per overlap when comparing the formulas for `G`.
const OVERLAP_SAMPLES: usize = 65;

/// Constants of a partially affine solution.
///
/// `K = [k[0], k[1]] ∩ I` is the closed part of `I` on which the `g_k` may
/// be nonaffine; `F` is affine on `K̄ = ½(K + I)`. Minus-side constants
/// govern `K⁻` (below `K`), plus-side constants govern `K⁺` (above `K`); a
/// side whose set is empty keeps its constants only as placeholders.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartiallyAffineParams {
    pub interval: OpenInterval,
    pub k: [f64; 2],
    pub a: f64,
    pub alpha: f64,
    pub b: f64,
    pub beta: [f64; 2],
    pub c_minus: f64,
    pub c_plus: f64,
    pub d_minus: f64,
    pub d_plus: f64,
    pub gamma_minus: [f64; 2],
    pub gamma_plus: [f64; 2],
    pub delta_minus: [f64; 2],
    pub delta_plus: [f64; 2],
    #[serde(default, skip_serializing_if = "PartialStubs::is_empty")]
    pub stubs: PartialStubs,
}

/// Caller-supplied nonaffine pieces. Omitted ones fall back to quadratic
/// shapes (cubic for `g_k` when both sides of `K` are present) that join
/// the affine parts with matching value and slope.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialStubs {
    /// `F` on `]inf I, inf K̄]`.
    #[serde(default)]
    pub f_left: Option<Arc<Fn1D>>,
    /// `F` on `]sup K̄, sup I[`.
    #[serde(default)]
    pub f_right: Option<Arc<Fn1D>>,
    /// `g1` on `K`.
    #[serde(default)]
    pub g1_on_k: Option<Arc<Fn1D>>,
    /// `g2` on `K`.
    #[serde(default)]
    pub g2_on_k: Option<Arc<Fn1D>>,
}

impl PartialStubs {
    pub fn is_empty(&self) -> bool {
        self.f_left.is_none() && self.f_right.is_none() && self.g1_on_k.is_none() && self.g2_on_k.is_none()
    }
}

/// The interval pieces derived from `K` and `I`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideSets {
    /// Interior of `K`.
    pub k: OpenInterval,
    pub k_minus: Option<OpenInterval>,
    pub k_plus: Option<OpenInterval>,
    pub k_bar: OpenInterval,
}

impl PartiallyAffineParams {
    pub fn minus_active(&self) -> bool {
        self.k[0] > self.interval.lo() + SLACK
    }

    pub fn plus_active(&self) -> bool {
        self.k[1] < self.interval.hi() - SLACK
    }

    pub fn sides(&self) -> Result<SideSets> {
        let i = self.interval;
        if !(self.k[0] < self.k[1]) {
            return Err(Error::Spec(format!("K = [{}, {}] must have positive length", self.k[0], self.k[1])));
        }
        let lo = self.k[0].max(i.lo());
        let hi = self.k[1].min(i.hi());
        let k = OpenInterval::new(lo, hi)
            .ok()
            .filter(|k| k.len() > SLACK)
            .ok_or_else(|| Error::Spec(format!("K ∩ I is empty or a point for K = [{}, {}]", self.k[0], self.k[1])))?;
        let k_minus = self.minus_active().then(|| OpenInterval::new_unchecked(i.lo(), k.lo()));
        let k_plus = self.plus_active().then(|| OpenInterval::new_unchecked(k.hi(), i.hi()));
        if k_minus.is_none() && k_plus.is_none() {
            return Err(Error::Spec("K must be a proper subset of I".into()));
        }
        let k_bar = k.mean_with(&i);
        Ok(SideSets { k, k_minus, k_plus, k_bar })
    }
}

fn junction(what: &str, f: &Fn1D, x: f64, value: f64, slope: f64) -> Result<()> {
    let (v, d) = f.eval_with_deriv_raw(x);
    let close = |a: f64, b: f64| (a - b).abs() <= JUNCTION_TOL * (1.0 + a.abs().max(b.abs()));
    if close(v, value) && close(d, slope) {
        Ok(())
    } else {
        Err(Error::Continuity(format!(
            "{what} does not meet the affine part at x = {x}: value {v} vs {value}, slope {d} vs {slope}"
        )))
    }
}

/// Quadratic `A x + α + κ (x - p)²` with `κ > 0` scaled to the stub width.
fn default_f_stub(a: f64, alpha: f64, p: f64, width: f64) -> Body {
    let kappa = if a != 0.0 { a.abs() } else { 1.0 } / (2.0 * width);
    Body::Quadratic { a2: kappa, a1: a - 2.0 * kappa * p, a0: alpha + kappa * p * p }
}

/// Default `g_k` on `K` as coefficients of a cubic in `t = x - inf K`.
fn default_g_stub(p: &PartiallyAffineParams, s: &SideSets, k: usize) -> [f64; 4] {
    let (lo, hi, len) = (s.k.lo(), s.k.hi(), s.k.len());
    match (s.k_minus.is_some(), s.k_plus.is_some()) {
        (true, false) => {
            let d = p.d_minus;
            [d * lo + p.delta_minus[k], d, d / (2.0 * len), 0.0]
        }
        (false, true) => {
            let d = p.d_plus;
            [d * lo + p.delta_plus[k] - 0.5 * d * len, 2.0 * d, -d / (2.0 * len), 0.0]
        }
        _ => {
            // Hermite cubic between the two affine pieces.
            let (y0, y1) = (p.d_minus * lo + p.delta_minus[k], p.d_plus * hi + p.delta_plus[k]);
            let (m0, m1) = (p.d_minus, p.d_plus);
            let secant = (y1 - y0) / len;
            [y0, m0, (3.0 * secant - 2.0 * m0 - m1) / len, (m0 + m1 - 2.0 * secant) / (len * len)]
        }
    }
}

/// Body for the polynomial `sum e[i] (x - p)^i`, as a global quadratic when
/// the cubic term vanishes.
fn local_poly_body(e: [f64; 4], p: f64) -> Body {
    if e[3] == 0.0 {
        Body::Quadratic { a2: e[2], a1: e[1] - 2.0 * e[2] * p, a0: e[0] - e[1] * p + e[2] * p * p }
    } else {
        Body::ClosedForm(Expr::poly(e.to_vec(), Expr::x() - p))
    }
}

fn stub_body(f: &Arc<Fn1D>) -> Body {
    Body::ClosedForm(Expr::apply(f, Expr::x()))
}

fn build_f(p: &PartiallyAffineParams, s: &SideSets) -> Result<Fn1D> {
    let i = p.interval;
    let mut breaks = Vec::new();
    let mut bodies = Vec::new();
    if s.k_minus.is_some() {
        let at = s.k_bar.lo();
        bodies.push(match &p.stubs.f_left {
            Some(stub) => {
                junction("F stub", stub, at, p.a * at + p.alpha, p.a)?;
                stub_body(stub)
            }
            None => default_f_stub(p.a, p.alpha, at, at - i.lo()),
        });
        breaks.push(at);
    }
    bodies.push(Body::Affine { slope: p.a, intercept: p.alpha });
    if s.k_plus.is_some() {
        let at = s.k_bar.hi();
        breaks.push(at);
        bodies.push(match &p.stubs.f_right {
            Some(stub) => {
                junction("F stub", stub, at, p.a * at + p.alpha, p.a)?;
                stub_body(stub)
            }
            None => default_f_stub(p.a, p.alpha, at, i.hi() - at),
        });
    }
    Fn1D::piecewise(i, breaks, bodies)
}

/// `(g_k, f_k)` for `k = 0, 1`.
fn build_gf(p: &PartiallyAffineParams, s: &SideSets, k: usize) -> Result<(Fn1D, Fn1D)> {
    let stub = if k == 0 { &p.stubs.g1_on_k } else { &p.stubs.g2_on_k };
    let beta = p.beta[k];
    let (g_mid, f_mid) = match stub {
        Some(g) => {
            if s.k_minus.is_some() {
                let x = s.k.lo();
                junction("g stub", g, x, p.d_minus * x + p.delta_minus[k], p.d_minus)?;
            }
            if s.k_plus.is_some() {
                let x = s.k.hi();
                junction("g stub", g, x, p.d_plus * x + p.delta_plus[k], p.d_plus)?;
            }
            let f = -0.5 * (p.a * Expr::x() + p.alpha) + p.b * Expr::apply(g, Expr::x()) + beta;
            (stub_body(g), Body::ClosedForm(f))
        }
        None => {
            let e = default_g_stub(p, s, k);
            let lo = s.k.lo();
            // -(A x + α)/2 + B g + β in the same local variable
            let f = [
                -0.5 * (p.a * lo + p.alpha) + p.b * e[0] + beta,
                -0.5 * p.a + p.b * e[1],
                p.b * e[2],
                p.b * e[3],
            ];
            (local_poly_body(e, lo), local_poly_body(f, lo))
        }
    };
    let mut breaks = Vec::new();
    let (mut gb, mut fb) = (Vec::new(), Vec::new());
    if s.k_minus.is_some() {
        gb.push(Body::Affine { slope: p.d_minus, intercept: p.delta_minus[k] });
        fb.push(Body::Affine { slope: p.c_minus, intercept: p.gamma_minus[k] });
        breaks.push(s.k.lo());
    }
    gb.push(g_mid);
    fb.push(f_mid);
    if s.k_plus.is_some() {
        breaks.push(s.k.hi());
        gb.push(Body::Affine { slope: p.d_plus, intercept: p.delta_plus[k] });
        fb.push(Body::Affine { slope: p.c_plus, intercept: p.gamma_plus[k] });
    }
    Ok((Fn1D::piecewise(p.interval, breaks.clone(), gb)?, Fn1D::piecewise(p.interval, breaks, fb)?))
}

/// `G(u) = F((u - δ)/(2D)) + (C/D)(u - δ) + γ` on the sumset of one side.
fn side_formula(big_f: &Arc<Fn1D>, c: f64, d: f64, gamma: f64, delta: f64) -> Expr {
    let arg = (Expr::x() - delta) / (2.0 * d);
    Expr::apply(big_f, arg) + (c / d) * (Expr::x() - delta) + gamma
}

/// Union of intervals, or a coverage error when it is not connected.
fn connected_union(mut parts: Vec<OpenInterval>, tol: f64) -> Result<OpenInterval> {
    parts.sort_by(|a, b| a.lo().total_cmp(&b.lo()));
    let mut acc = parts[0];
    for p in &parts[1..] {
        if p.lo() > acc.hi() + tol {
            return Err(Error::Coverage(format!("gap between {} and {} in the affine zone of G", acc, p)));
        }
        acc = OpenInterval::new_unchecked(acc.lo(), acc.hi().max(p.hi()));
    }
    Ok(acc)
}

struct SideRegion {
    region: OpenInterval,
    formula: Expr,
}

fn build_big_g(p: &PartiallyAffineParams, s: &SideSets, big_f: &Arc<Fn1D>, g1: &Fn1D, g2: &Fn1D) -> Result<Fn1D> {
    let sumset = diagonal_image(g1, g2)?;
    let tol = JUNCTION_TOL * (1.0 + sumset.lo().abs().max(sumset.hi().abs()));
    let beta = p.beta[0] + p.beta[1];

    let pieces: Vec<OpenInterval> = [s.k_minus, Some(s.k), s.k_plus].into_iter().flatten().collect();
    let mut zone = vec![sumset_image(g1, g2, s.k_bar, s.k_bar)?];
    for (a, h) in pieces.iter().enumerate() {
        for (b, j) in pieces.iter().enumerate() {
            if a != b {
                zone.push(sumset_image(g1, g2, *h, *j)?);
            }
        }
    }
    let zone = connected_union(zone, tol)?;

    let mut sides = Vec::new();
    if let Some(km) = s.k_minus {
        let d = p.delta_minus[0] + p.delta_minus[1];
        let g = p.gamma_minus[0] + p.gamma_minus[1];
        sides.push(SideRegion {
            region: sumset_image(g1, g2, km, km)?,
            formula: side_formula(big_f, p.c_minus, p.d_minus, g, d),
        });
    }
    if let Some(kp) = s.k_plus {
        let d = p.delta_plus[0] + p.delta_plus[1];
        let g = p.gamma_plus[0] + p.gamma_plus[1];
        sides.push(SideRegion {
            region: sumset_image(g1, g2, kp, kp)?,
            formula: side_formula(big_f, p.c_plus, p.d_plus, g, d),
        });
    }

    // Every side formula must agree with B u + β wherever both apply.
    for side in &sides {
        let Some(overlap) = side.region.intersect(&zone) else { continue };
        for u in overlap.grid(OVERLAP_SAMPLES, 0.0).into_iter().skip(1).take(OVERLAP_SAMPLES - 2) {
            let (v, w) = (side.formula.eval(u), p.b * u + beta);
            if !((v - w).abs() <= JUNCTION_TOL * (1.0 + v.abs().max(w.abs()))) {
                return Err(Error::Continuity(format!(
                    "the formulas for G disagree at u = {u}: side formula {v}, affine {w}"
                )));
            }
        }
    }

    let (lower, upper): (Vec<_>, Vec<_>) = sides.into_iter().partition(|r| r.region.mid() < zone.mid());
    if lower.len() > 1 || upper.len() > 1 {
        return Err(Error::Coverage("both side sumsets fall on the same side of the affine zone".into()));
    }
    let mut breaks = Vec::new();
    let mut bodies = Vec::new();
    match lower.into_iter().next() {
        Some(r) if zone.lo() > sumset.lo() + tol => {
            if r.region.lo() > sumset.lo() + tol || r.region.hi() < zone.lo() - tol {
                return Err(Error::Coverage(format!(
                    "]{}, {}[ is not covered by {} or the affine zone {}",
                    sumset.lo(),
                    zone.lo(),
                    r.region,
                    zone
                )));
            }
            breaks.push(zone.lo());
            bodies.push(Body::ClosedForm(r.formula));
        }
        _ if zone.lo() > sumset.lo() + tol => {
            return Err(Error::Coverage(format!("]{}, {}[ is not covered", sumset.lo(), zone.lo())));
        }
        _ => {}
    }
    bodies.push(Body::Affine { slope: p.b, intercept: beta });
    match upper.into_iter().next() {
        Some(r) if zone.hi() < sumset.hi() - tol => {
            if r.region.hi() < sumset.hi() - tol || r.region.lo() > zone.hi() + tol {
                return Err(Error::Coverage(format!(
                    "]{}, {}[ is not covered by {} or the affine zone {}",
                    zone.hi(),
                    sumset.hi(),
                    r.region,
                    zone
                )));
            }
            breaks.push(zone.hi());
            bodies.push(Body::ClosedForm(r.formula));
        }
        _ if zone.hi() < sumset.hi() - tol => {
            return Err(Error::Coverage(format!("]{}, {}[ is not covered", zone.hi(), sumset.hi())));
        }
        _ => {}
    }
    Fn1D::piecewise(sumset, breaks, bodies)
}

/// Assembles a partially affine solution from constants satisfying the
/// constraint set. Fails with [`Error::Constraint`] naming the first broken
/// identity.
pub fn build_partially_affine(p: &PartiallyAffineParams) -> Result<SolutionTuple> {
    let s = p.sides()?;
    if let Some(bad) = check_const(p).into_iter().find(|c| !c.pass) {
        return Err(Error::Constraint {
            identity: bad.identity.clone(),
            detail: match bad.k {
                Some(k) => format!("k = {k}: lhs {} vs rhs {}", bad.lhs, bad.rhs),
                None => format!("lhs {} vs rhs {}", bad.lhs, bad.rhs),
            },
        });
    }
    let big_f = Arc::new(build_f(p, &s)?);
    let (g1, f1) = build_gf(p, &s, 0)?;
    let (g2, f2) = build_gf(p, &s, 1)?;
    for (name, f) in [("F", &*big_f), ("f1", &f1), ("f2", &f2), ("g1", &g1), ("g2", &g2)] {
        f.check_continuity(JUNCTION_TOL).map_err(|e| Error::Continuity(format!("{name}: {e}")))?;
    }
    for (name, f) in [("F", &*big_f), ("g1", &g1), ("g2", &g2)] {
        f.check_derivative_continuity(JUNCTION_TOL)
            .map_err(|e| Error::Continuity(format!("{name}: {e}")))?;
    }
    let big_g = build_big_g(p, &s, &big_f, &g1, &g2)?;
    big_g.check_continuity(JUNCTION_TOL).map_err(|e| Error::Continuity(format!("G: {e}")))?;
    SolutionTuple::new(
        p.interval,
        big_f,
        Arc::new(f1),
        Arc::new(f2),
        Arc::new(g1),
        Arc::new(g2),
        Arc::new(big_g),
        Regime::PartiallyAffine,
    )
}

impl PartiallyAffineParams {
    /// Constants of the example tuple: `I = ]0, 4[`, `K = [2, 4[`, `A = 4`,
    /// `B = 3`, `C⁻ = D⁻ = 1`, every other constant zero.
    pub fn example() -> Self {
        Self {
            interval: OpenInterval::new(0.0, 4.0).unwrap(),
            k: [2.0, 4.0],
            a: 4.0,
            alpha: 0.0,
            b: 3.0,
            beta: [0.0; 2],
            c_minus: 1.0,
            c_plus: 0.0,
            d_minus: 1.0,
            d_plus: 0.0,
            gamma_minus: [0.0; 2],
            gamma_plus: [0.0; 2],
            delta_minus: [0.0; 2],
            delta_plus: [0.0; 2],
            stubs: PartialStubs::default(),
        }
    }

    /// The example reflected through `x ↦ 4 - x`: `K = ]0, 2]`, decreasing
    /// `g_k`, only the plus side present.
    pub fn mirrored_example() -> Self {
        Self {
            interval: OpenInterval::new(0.0, 4.0).unwrap(),
            k: [0.0, 2.0],
            a: -4.0,
            alpha: 16.0,
            b: 3.0,
            beta: [0.0; 2],
            c_minus: 0.0,
            c_plus: -1.0,
            d_minus: 0.0,
            d_plus: -1.0,
            gamma_minus: [0.0; 2],
            gamma_plus: [4.0; 2],
            delta_minus: [0.0; 2],
            delta_plus: [4.0; 2],
            stubs: PartialStubs::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::paper_example;
    use crate::verify::residual_main;

    #[test]
    fn reproduces_the_example() {
        let built = build_partially_affine(&PartiallyAffineParams::example()).unwrap();
        let reference = paper_example();
        for c in crate::families::Component::ALL {
            let (f, g) = (built.component(c), reference.component(c));
            assert_eq!(f.domain(), g.domain(), "{}", c.name());
            for x in f.domain().grid(97, 1e-3) {
                assert!((f.eval_raw(x) - g.eval_raw(x)).abs() < 1e-12, "{} at {x}", c.name());
            }
        }
    }

    #[test]
    fn mirrored_and_two_sided_solutions() {
        let t = build_partially_affine(&PartiallyAffineParams::mirrored_example()).unwrap();
        assert!(residual_main(&t, 120, 1e-3).unwrap().max_abs < 1e-11);

        // K in the middle of I: both sides present, cubic g on K
        let mut p = PartiallyAffineParams::example();
        p.k = [1.5, 2.5];
        p.c_plus = 2.0;
        p.d_plus = 4.0 / 3.0;
        p.gamma_plus = [1.0, -0.5];
        p.delta_plus = [1.0 / 3.0, -1.0 / 6.0];
        let t = build_partially_affine(&p).unwrap();
        let r = residual_main(&t, 120, 1e-3).unwrap();
        assert!(r.max_abs < 1e-10, "{r:?}");
    }

    #[test]
    fn broken_constraint_is_named() {
        let mut p = PartiallyAffineParams::example();
        p.b = 2.0;
        match build_partially_affine(&p) {
            Err(Error::Constraint { identity, .. }) => assert_eq!(identity, "C⁻ + A/2 = B·D⁻"),
            other => panic!("expected a constraint error, got {other:?}"),
        }
    }

    #[test]
    fn k_must_be_proper() {
        let mut p = PartiallyAffineParams::example();
        p.k = [-1.0, 5.0];
        assert!(matches!(build_partially_affine(&p), Err(Error::Spec(_))));
        p.k = [3.0, 3.0];
        assert!(matches!(build_partially_affine(&p), Err(Error::Spec(_))));
    }
}

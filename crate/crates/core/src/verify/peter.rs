use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::residual::{residual_aux, ResidualReport};
use crate::error::{Error, Result};
use crate::func::{Body, Fn1D};
use crate::geometry::OpenInterval;

/// Input of [`peter_triple`], one variant per alternative of the trichotomy
/// for `φ((x+y)/2)(ψ1(x) - ψ2(y)) = 0` on `I1 × I2`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case", deny_unknown_fields)]
pub enum PeterSpec {
    /// `φ ≡ 0` on `S = ½(I1 + I2)`, arbitrary `ψ1, ψ2`.
    Case1Zero { i1: OpenInterval, i2: OpenInterval, psi1: Arc<Fn1D>, psi2: Arc<Fn1D> },
    /// `ψ1 ≡ ψ2 ≡ D`, arbitrary `φ` on a superset of `S`.
    Case1Constant { i1: OpenInterval, i2: OpenInterval, d: f64, phi: Arc<Fn1D> },
    /// `ψ_i = D` on `U_i = ]inf I_i, a_i[`, `E` on `V_i = ]b_i, sup I_i[`,
    /// `φ = 0` on `½(K1 + I2) ∪ ½(I1 + K2)` with `K_i = I_i ∖ (U_i ∪ V_i)`.
    Case2 {
        i1: OpenInterval,
        i2: OpenInterval,
        a: [f64; 2],
        b: [f64; 2],
        d: f64,
        e: f64,
        /// Values of `ψ1, ψ2` on `K1, K2`; any values work.
        #[serde(default)]
        k_values: Option<[f64; 2]>,
        #[serde(default = "one")]
        phi_value: f64,
    },
    /// `ψ_j ≡ D` on `I_j`, `ψ_i = D` on the disjoint open intervals `U_n`,
    /// `φ = 0` on `½((I_i ∖ ⋃U_n) + I_j)`.
    Case3 {
        i1: OpenInterval,
        i2: OpenInterval,
        j: u8,
        d: f64,
        u: Vec<[f64; 2]>,
        /// Value of `ψ_i` off the `U_n` (default `D + 1`).
        #[serde(default)]
        other: Option<f64>,
        #[serde(default = "one")]
        phi_value: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// A solution `(φ, ψ1, ψ2)` of the auxiliary equation with its intervals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeterTriple {
    pub phi: Arc<Fn1D>,
    pub psi1: Arc<Fn1D>,
    pub psi2: Arc<Fn1D>,
    pub i1: OpenInterval,
    pub i2: OpenInterval,
}

impl PeterTriple {
    pub fn residual(&self, n: usize, margin: f64) -> Result<ResidualReport> {
        residual_aux(&self.phi, &self.psi1, &self.psi2, self.i1, self.i2, n, margin)
    }
}

/// Piecewise constant function: `values[m]` on `]cuts[m-1], cuts[m]]`.
/// Cuts at or beyond the domain ends drop the matching pieces.
fn steps(domain: OpenInterval, cuts: &[f64], values: &[f64]) -> Result<Arc<Fn1D>> {
    let mut breaks = Vec::new();
    let mut bodies = Vec::new();
    for (m, &v) in values.iter().enumerate() {
        let lo = if m == 0 { domain.lo() } else { cuts[m - 1].max(domain.lo()) };
        let hi = if m == cuts.len() { domain.hi() } else { cuts[m].min(domain.hi()) };
        if hi <= lo && !(bodies.is_empty() && m == values.len() - 1) {
            continue;
        }
        if !bodies.is_empty() {
            breaks.push(lo);
        }
        bodies.push(Body::Affine { slope: 0.0, intercept: v });
    }
    Ok(Arc::new(Fn1D::piecewise(domain, breaks, bodies)?.with_margin(0.0)))
}

/// Indicator-style `φ`: zero on the (sorted, disjoint) `zeros`, `value`
/// elsewhere on `domain`.
fn zero_set_phi(domain: OpenInterval, zeros: &[OpenInterval], value: f64) -> Result<Arc<Fn1D>> {
    let mut cuts = Vec::new();
    let mut values = vec![value];
    for z in zeros {
        cuts.push(z.lo());
        values.push(0.0);
        cuts.push(z.hi());
        values.push(value);
    }
    steps(domain, &cuts, &values)
}

fn merge(mut v: Vec<OpenInterval>) -> Vec<OpenInterval> {
    v.sort_by(|a, b| a.lo().total_cmp(&b.lo()));
    let mut out: Vec<OpenInterval> = Vec::new();
    for z in v {
        match out.last_mut() {
            Some(last) if z.lo() < last.hi() => {
                *last = OpenInterval::new(last.lo(), last.hi().max(z.hi())).expect("merged hull is valid");
            }
            _ => out.push(z),
        }
    }
    out
}

fn check_domain(name: &str, f: &Fn1D, i: OpenInterval) -> Result<()> {
    if f.domain().contains_interval(&i) {
        Ok(())
    } else {
        let d = f.domain();
        Err(Error::Spec(format!("{name} is defined on {d}, which does not cover {i}")))
    }
}

/// Builds a triple satisfying every condition of the requested case, so
/// that the auxiliary residual vanishes identically.
pub fn peter_triple(spec: &PeterSpec) -> Result<PeterTriple> {
    match spec {
        PeterSpec::Case1Zero { i1, i2, psi1, psi2 } => {
            check_domain("ψ1", psi1, *i1)?;
            check_domain("ψ2", psi2, *i2)?;
            Ok(PeterTriple {
                phi: Arc::new(Fn1D::constant(i1.mean_with(i2), 0.0)),
                psi1: Arc::clone(psi1),
                psi2: Arc::clone(psi2),
                i1: *i1,
                i2: *i2,
            })
        }
        PeterSpec::Case1Constant { i1, i2, d, phi } => {
            check_domain("φ", phi, i1.mean_with(i2))?;
            Ok(PeterTriple {
                phi: Arc::clone(phi),
                psi1: Arc::new(Fn1D::constant(*i1, *d)),
                psi2: Arc::new(Fn1D::constant(*i2, *d)),
                i1: *i1,
                i2: *i2,
            })
        }
        PeterSpec::Case2 { i1, i2, a, b, d, e, k_values, phi_value } => {
            case2(*i1, *i2, *a, *b, *d, *e, *k_values, *phi_value)
        }
        PeterSpec::Case3 { i1, i2, j, d, u, other, phi_value } => {
            case3(*i1, *i2, *j, *d, u, other.unwrap_or(d + 1.0), *phi_value)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn case2(
    i1: OpenInterval,
    i2: OpenInterval,
    a: [f64; 2],
    b: [f64; 2],
    d: f64,
    e: f64,
    k_values: Option<[f64; 2]>,
    phi_value: f64,
) -> Result<PeterTriple> {
    let ivs = [i1, i2];
    for k in 0..2 {
        let i = ivs[k];
        if !(i.lo() <= a[k] && a[k] <= b[k] && b[k] <= i.hi()) {
            return Err(Error::Spec(format!("need inf I ≤ a ≤ b ≤ sup I for index {}", k + 1)));
        }
        if a[k] >= i.hi() || b[k] <= i.lo() {
            return Err(Error::Spec(format!("U_{0} and V_{0} must differ from I_{0}", k + 1)));
        }
    }
    let u_nonempty = a[0] > i1.lo() && a[1] > i2.lo();
    let v_nonempty = b[0] < i1.hi() && b[1] < i2.hi();
    if !(u_nonempty || v_nonempty) {
        return Err(Error::Spec("U1, U2 or V1, V2 must both be nonempty".into()));
    }
    let kv = k_values.unwrap_or_else(|| {
        let w = d.abs().max(e.abs()) + 1.0;
        [w, w]
    });
    let psi = |k: usize| -> Result<Arc<Fn1D>> {
        if a[k] == b[k] {
            steps(ivs[k], &[a[k]], &[d, e])
        } else {
            steps(ivs[k], &[a[k], b[k]], &[d, kv[k], e])
        }
    };
    let s = i1.mean_with(&i2);
    // ½(K1 + I2) ∪ ½(I1 + K2) is one open interval: both pieces contain ½(k1 + k2)
    let z = OpenInterval::new(
        0.5 * (a[0] + i2.lo()).min(i1.lo() + a[1]),
        0.5 * (b[0] + i2.hi()).max(i1.hi() + b[1]),
    )?;
    Ok(PeterTriple { phi: zero_set_phi(s, &[z], phi_value)?, psi1: psi(0)?, psi2: psi(1)?, i1, i2 })
}

fn case3(
    i1: OpenInterval,
    i2: OpenInterval,
    j: u8,
    d: f64,
    u: &[[f64; 2]],
    other: f64,
    phi_value: f64,
) -> Result<PeterTriple> {
    let (ii, ij) = match j {
        1 => (i2, i1),
        2 => (i1, i2),
        _ => return Err(Error::Spec(format!("j must be 1 or 2, got {j}"))),
    };
    let mut us = u.to_vec();
    us.sort_by(|p, q| p[0].total_cmp(&q[0]));
    for (n, w) in us.iter().enumerate() {
        if !(w[0] < w[1] && w[0] >= ii.lo() && w[1] <= ii.hi()) {
            return Err(Error::Spec(format!("U = ]{}, {}[ is empty or leaves I_i = {ii}", w[0], w[1])));
        }
        if n > 0 && us[n - 1][1] > w[0] {
            return Err(Error::Spec("the intervals U_n must be disjoint".into()));
        }
    }

    // Components of I_i ∖ ⋃U_n as closed ranges (possibly single points).
    let mut rest: Vec<(f64, f64)> = Vec::new();
    let (mut cur, mut cur_inside) = (ii.lo(), false);
    for w in &us {
        if w[0] > cur || (w[0] == cur && cur_inside) {
            rest.push((cur, w[0]));
        }
        cur = w[1];
        cur_inside = true;
    }
    if cur < ii.hi() {
        rest.push((cur, ii.hi()));
    }
    if rest.is_empty() {
        return Err(Error::Spec("the union of the U_n must differ from I_i".into()));
    }

    let zeros = rest
        .iter()
        .map(|&(lo, hi)| OpenInterval::new(0.5 * (lo + ij.lo()), 0.5 * (hi + ij.hi())))
        .collect::<Result<Vec<_>>>()?;

    let mut cuts = Vec::new();
    let mut values = vec![other];
    for w in &us {
        cuts.extend([w[0], w[1]]);
        values.extend([d, other]);
    }
    let psi_i = steps(ii, &cuts, &values)?;
    let psi_j = Arc::new(Fn1D::constant(ij, d));
    let (psi1, psi2) = if j == 1 { (psi_j, psi_i) } else { (psi_i, psi_j) };
    let phi = zero_set_phi(i1.mean_with(&i2), &merge(zeros), phi_value)?;
    Ok(PeterTriple { phi, psi1, psi2, i1, i2 })
}

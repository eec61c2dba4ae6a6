use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::residual::{pairwise_sum, residual_aux, value_in, ResidualReport};
use crate::error::{Error, Result};
use crate::families::SolutionTuple;
use crate::func::{Expr, Fn1D};
use crate::geometry::{u_star, OpenInterval};

/// Constants read off a solution on an affinity window `U` of `F`, and the
/// deviations of the extended formulas on `U* = U_ext ∩ U_ref`:
///
/// ```text
/// f_k(x) = -½(Ax + b) + B g_k(x) + β_k,                     x ∈ U*
/// F((x+y)/2) - ½A(x+y) - b = G(g1(x)+g2(y)) - B(g1(x)+g2(y)) - β
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub u: OpenInterval,
    pub u_star: OpenInterval,
    pub a: f64,
    pub b: f64,
    pub big_b: f64,
    pub beta: [f64; 2],
    /// `max |f_k + ½(Ax + b) - B g_k - β_k|` over the grid on `U*`.
    pub fk_deviation: [f64; 2],
    pub g_plus: ResidualReport,
}

/// Checks both extension identities of a solution on `U*` with an `n`-point
/// grid per axis.
pub fn extension_invariants(s: &SolutionTuple, u: OpenInterval, n: usize, margin: f64) -> Result<ExtensionReport> {
    let i = s.interval();
    if !i.contains_interval(&u) {
        return Err(Error::NotContained { inner_lo: u.lo(), inner_hi: u.hi(), outer_lo: i.lo(), outer_hi: i.hi() });
    }
    let star = u_star(u, s.g1(), s.g2(), i)?;
    let m = u.mid();
    let a = s.big_f().deriv_raw(m);
    let b = s.big_f().eval_raw(m) - a * m;
    let (g1m, g2m) = (s.g1().eval_raw(m), s.g2().eval_raw(m));
    let big_b = s.big_g().deriv_raw(g1m + g2m);
    let beta = [
        s.f1().eval_raw(m) + 0.5 * (a * m + b) - big_b * g1m,
        s.f2().eval_raw(m) + 0.5 * (a * m + b) - big_b * g2m,
    ];
    if !(a.is_finite() && b.is_finite() && big_b.is_finite() && beta.iter().all(|v| v.is_finite())) {
        return Err(Error::Numerical(format!("window constants are not finite at x = {m}")));
    }

    let xs = star.grid(n, margin);
    let mut fk_deviation = [0.0_f64; 2];
    for &x in &xs {
        for (k, (f, g)) in [(s.f1(), s.g1()), (s.f2(), s.g2())].into_iter().enumerate() {
            let h = value_in(f, x)? + 0.5 * (a * x + b) - big_b * value_in(g, x)? - beta[k];
            fk_deviation[k] = fk_deviation[k].max(h.abs());
        }
    }

    let beta_sum = beta[0] + beta[1];
    let mut values = Vec::with_capacity(n * n);
    let mut worst = (f64::NEG_INFINITY, [xs[0], xs[0]]);
    for &x in &xs {
        for &y in &xs {
            let r = (|| -> Result<f64> {
                let w = value_in(s.g1(), x)? + value_in(s.g2(), y)?;
                let lhs = value_in(s.big_f(), 0.5 * (x + y))? - 0.5 * a * (x + y) - b;
                Ok((lhs - value_in(s.big_g(), w)? + big_b * w + beta_sum).abs())
            })()
            .map_err(|e| e.at(x, y))?;
            if r > worst.0 {
                worst = (r, [x, y]);
            }
            values.push(r);
        }
    }
    let g_plus = ResidualReport {
        max_abs: worst.0,
        mean_abs: pairwise_sum(&values) / values.len() as f64,
        worst_point: worst.1,
        samples: values.len(),
        margin,
        n,
    };
    Ok(ExtensionReport { u, u_star: star, a, b, big_b, beta, fk_deviation, g_plus })
}

/// `φ(t) = G'(2t) - B` and `ψ_k(s) = g_k'(g_k⁻¹(s))` built from a solution
/// on the window `U`, together with `g1(U*)` and `g2(U*)`.
#[derive(Debug, Clone)]
pub struct AuxLinkage {
    pub phi: Arc<Fn1D>,
    pub psi1: Arc<Fn1D>,
    pub psi2: Arc<Fn1D>,
    pub j1: OpenInterval,
    pub j2: OpenInterval,
}

impl AuxLinkage {
    pub fn residual(&self, n: usize, margin: f64) -> Result<ResidualReport> {
        residual_aux(&self.phi, &self.psi1, &self.psi2, self.j1, self.j2, n, margin)
    }
}

pub fn aux_linkage(s: &SolutionTuple, u: OpenInterval) -> Result<AuxLinkage> {
    let star = u_star(u, s.g1(), s.g2(), s.interval())?;
    let m = u.mid();
    let big_b = s.big_g().deriv_raw(s.g1().eval_raw(m) + s.g2().eval_raw(m));
    let (j1, j2) = (s.g1().image_of(star)?, s.g2().image_of(star)?);
    let phi = Fn1D::closed_form(j1.mean_with(&j2), Expr::deriv_of(s.big_g(), 2.0 * Expr::x()) - big_b)?;
    let psi = |g: &Arc<Fn1D>, j: OpenInterval| -> Result<Arc<Fn1D>> {
        Ok(Arc::new(Fn1D::closed_form(j, Expr::deriv_of(g, Expr::inverse(g, Expr::x())))?.with_margin(0.0)))
    };
    Ok(AuxLinkage {
        phi: Arc::new(phi.with_margin(0.0)),
        psi1: psi(s.g1(), j1)?,
        psi2: psi(s.g2(), j2)?,
        j1,
        j2,
    })
}

/// `φ = ½F'`, `ψ_k = 1/g1' + (-1)^k/g2'`, `Ψ_k = -f1'/g1' - (-1)^k f2'/g2'`
/// evaluated through the derivatives of a solution.
#[derive(Debug, Clone)]
pub struct DerivedProfiles {
    pub phi: Arc<Fn1D>,
    pub psi1: Arc<Fn1D>,
    pub psi2: Arc<Fn1D>,
    pub cap_psi1: Arc<Fn1D>,
    pub cap_psi2: Arc<Fn1D>,
}

pub fn derived_profiles(s: &SolutionTuple) -> Result<DerivedProfiles> {
    let i = s.interval();
    let d = |f: &Arc<Fn1D>| Expr::deriv_of(f, Expr::x());
    let (r1, r2) = (1.0 / d(s.g1()), 1.0 / d(s.g2()));
    let (q1, q2) = (d(s.f1()) / d(s.g1()), d(s.f2()) / d(s.g2()));
    let mk = |e: Expr| -> Result<Arc<Fn1D>> { Ok(Arc::new(Fn1D::closed_form(i, e)?)) };
    Ok(DerivedProfiles {
        phi: mk(0.5 * d(s.big_f()))?,
        psi1: mk(r1.clone() - r2.clone())?,
        psi2: mk(r1 + r2)?,
        cap_psi1: mk(-q1.clone() + q2.clone())?,
        cap_psi2: mk(-q1 - q2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::paper_example;

    #[test]
    fn example_extension_identities() {
        let t = paper_example();
        let u = OpenInterval::new(1.0, 4.0).unwrap();
        let r = extension_invariants(&t, u, 100, 1e-3).unwrap();
        assert_eq!(r.u_star, t.interval());
        assert_eq!((r.a, r.b, r.big_b), (4.0, 0.0, 3.0));
        assert!(r.fk_deviation.iter().all(|&v| v < 1e-12), "{r:?}");
        assert!(r.g_plus.max_abs < 1e-12);
    }

    #[test]
    fn example_aux_linkage() {
        let t = paper_example();
        let l = aux_linkage(&t, OpenInterval::new(1.0, 4.0).unwrap()).unwrap();
        assert_eq!(l.j1, OpenInterval::new(0.0, 5.0).unwrap());
        assert!((l.psi1.eval_raw(3.25) - 1.5).abs() < 1e-12);
        assert!(l.residual(100, 1e-3).unwrap().max_abs < 1e-9);
    }

    #[test]
    fn example_derived_profiles() {
        let p = derived_profiles(&paper_example()).unwrap();
        // g1 = g2 gives ψ1 = 0; f_k' / g_k' is 1 below 2 and 3 - 4/x above
        for x in [0.5, 1.5, 3.0] {
            assert_eq!(p.psi1.eval_raw(x), 0.0);
        }
        assert_eq!(p.cap_psi2.eval_raw(1.5), -2.0);
        assert!((p.cap_psi2.eval_raw(3.0) + 10.0 / 3.0).abs() < 1e-14);
        assert_eq!(p.phi.eval_raw(3.0), 2.0);
    }
}

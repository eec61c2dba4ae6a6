use serde::{Deserialize, Serialize};

use crate::families::PartiallyAffineParams;

/// Relative slack of the identity comparisons.
pub const CONST_SLACK: f64 = 1e-12;

/// One evaluated identity of the constraint set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstCheck {
    pub identity: String,
    /// `k` for the per-index intercept identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u8>,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

fn equal(lhs: f64, rhs: f64) -> bool {
    (lhs - rhs).abs() <= CONST_SLACK * (1.0 + lhs.abs().max(rhs.abs()))
}

/// Evaluates
///
/// ```text
/// D⁻·D⁺ ≠ 0,   C^± + A/2 = B·D^±,   γ_k^± + α/2 = B·δ_k^± + β_k
/// ```
///
/// over the sides of `K` that are present; constants of an absent side are
/// placeholders and are not checked.
pub fn check_const(p: &PartiallyAffineParams) -> Vec<ConstCheck> {
    struct Side {
        sign: char,
        c: f64,
        d: f64,
        gamma: [f64; 2],
        delta: [f64; 2],
    }
    let mut sides = Vec::new();
    if p.minus_active() {
        sides.push(Side { sign: '⁻', c: p.c_minus, d: p.d_minus, gamma: p.gamma_minus, delta: p.delta_minus });
    }
    if p.plus_active() {
        sides.push(Side { sign: '⁺', c: p.c_plus, d: p.d_plus, gamma: p.gamma_plus, delta: p.delta_plus });
    }

    let product: f64 = sides.iter().map(|s| s.d).product();
    let mut out = vec![ConstCheck {
        identity: "D⁻·D⁺ ≠ 0".into(),
        k: None,
        lhs: product,
        rhs: 0.0,
        pass: product != 0.0 && product.is_finite(),
    }];
    for s in &sides {
        let (lhs, rhs) = (s.c + 0.5 * p.a, p.b * s.d);
        out.push(ConstCheck {
            identity: format!("C{0} + A/2 = B·D{0}", s.sign),
            k: None,
            lhs,
            rhs,
            pass: equal(lhs, rhs),
        });
    }
    for s in &sides {
        for k in 0..2 {
            let (lhs, rhs) = (s.gamma[k] + 0.5 * p.alpha, p.b * s.delta[k] + p.beta[k]);
            out.push(ConstCheck {
                identity: format!("γ_k{0} + α/2 = B·δ_k{0} + β_k", s.sign),
                k: Some(k as u8 + 1),
                lhs,
                rhs,
                pass: equal(lhs, rhs),
            });
        }
    }
    out
}

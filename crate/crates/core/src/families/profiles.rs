use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{Expr, Fn1D};
use crate::geometry::OpenInterval;

/// Samples used to check that `ψ2 ± ψ1` does not vanish.
pub(crate) const NONVANISHING_SAMPLES: usize = 4096;

/// The seven solution shapes of the derivative system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxCase {
    /// (1.1) `γ < 0`, trigonometric fraction.
    Trig,
    /// (1.2) `γ = 0`, linear fraction.
    Linear,
    /// (1.3) `γ > 0`, hyperbolic fraction.
    Hyperbolic,
    /// (2) `ψ1 = Ψ1 = 0`, constant `ψ2`, `Ψ2`, arbitrary `φ`.
    Constant,
    /// (3.1)
    TrigZero,
    /// (3.2)
    LinearZero,
    /// (3.3)
    HyperbolicZero,
}

impl AuxCase {
    pub const ALL: [AuxCase; 7] = [
        AuxCase::Trig,
        AuxCase::Linear,
        AuxCase::Hyperbolic,
        AuxCase::Constant,
        AuxCase::TrigZero,
        AuxCase::LinearZero,
        AuxCase::HyperbolicZero,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AuxCase::Trig => "1.1",
            AuxCase::Linear => "1.2",
            AuxCase::Hyperbolic => "1.3",
            AuxCase::Constant => "2",
            AuxCase::TrigZero => "3.1",
            AuxCase::LinearZero => "3.2",
            AuxCase::HyperbolicZero => "3.3",
        }
    }

    /// Whether `ψ1` and `Ψ1` vanish identically.
    pub fn psi1_zero(self) -> bool {
        matches!(self, AuxCase::Constant | AuxCase::TrigZero | AuxCase::LinearZero | AuxCase::HyperbolicZero)
    }

    fn kind(self) -> Kind {
        match self {
            AuxCase::Trig | AuxCase::TrigZero => Kind::Trig,
            AuxCase::Linear | AuxCase::LinearZero => Kind::Linear,
            AuxCase::Hyperbolic | AuxCase::HyperbolicZero => Kind::Hyperbolic,
            AuxCase::Constant => Kind::Constant,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Trig,
    Linear,
    Hyperbolic,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxConstants {
    pub a: f64,
    pub b: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub d: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default)]
    pub nu: f64,
}

/// Everything needed to rebuild a profile quintuple.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxSpec {
    pub case: AuxCase,
    pub constants: AuxConstants,
    pub interval: OpenInterval,
    /// `φ` for the constant case; ignored otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Arc<Fn1D>>,
}

/// `(φ, ψ1, ψ2, Ψ1, Ψ2)` on `I` for one of the seven cases.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "AuxSpec", into = "AuxSpec")]
pub struct AuxProfiles {
    spec: AuxSpec,
    kappa: f64,
    pub phi: Arc<Fn1D>,
    pub psi1: Arc<Fn1D>,
    pub psi2: Arc<Fn1D>,
    pub cap_psi1: Arc<Fn1D>,
    pub cap_psi2: Arc<Fn1D>,
}

impl TryFrom<AuxSpec> for AuxProfiles {
    type Error = Error;
    fn try_from(s: AuxSpec) -> Result<Self> {
        aux_profiles(s.case, s.constants, s.interval, s.phi)
    }
}

impl From<AuxProfiles> for AuxSpec {
    fn from(p: AuxProfiles) -> Self {
        p.spec
    }
}

impl AuxProfiles {
    pub fn case(&self) -> AuxCase {
        self.spec.case
    }

    pub fn constants(&self) -> AuxConstants {
        self.spec.constants
    }

    pub fn interval(&self) -> OpenInterval {
        self.spec.interval
    }

    /// `κ = √|γ|`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn spec(&self) -> &AuxSpec {
        &self.spec
    }
}

fn closed(i: OpenInterval, e: Expr) -> Result<Arc<Fn1D>> {
    Ok(Arc::new(Fn1D::closed_form(i, e)?))
}

/// Builds the profile quintuple; `Ψ1 = φ ψ1` in every case.
pub fn aux_profiles(
    case: AuxCase,
    k: AuxConstants,
    interval: OpenInterval,
    phi_override: Option<Arc<Fn1D>>,
) -> Result<AuxProfiles> {
    let kind = case.kind();
    match kind {
        Kind::Trig if !(k.gamma < 0.0) => {
            return Err(Error::Spec(format!("case {} needs γ < 0, got {}", case.label(), k.gamma)))
        }
        Kind::Linear if k.gamma != 0.0 => {
            return Err(Error::Spec(format!("case {} needs γ = 0, got {}", case.label(), k.gamma)))
        }
        Kind::Hyperbolic if !(k.gamma > 0.0) => {
            return Err(Error::Spec(format!("case {} needs γ > 0, got {}", case.label(), k.gamma)))
        }
        _ => {}
    }
    let kappa = k.gamma.abs().sqrt();
    let x = Expr::x;
    let i = interval;

    let zero = || closed(i, Expr::c(0.0));
    let (phi, psi1, psi2, cap_psi1, cap_psi2) = if kind == Kind::Constant {
        if k.a == 0.0 {
            return Err(Error::Degenerate("case 2 needs ψ2 = a ≠ 0".into()));
        }
        let phi = phi_override.clone().ok_or_else(|| Error::Spec("case 2 needs a caller-supplied φ".into()))?;
        if !phi.domain().contains_interval(&i) {
            return Err(Error::NotContained {
                inner_lo: i.lo(),
                inner_hi: i.hi(),
                outer_lo: phi.domain().lo(),
                outer_hi: phi.domain().hi(),
            });
        }
        (phi, zero()?, closed(i, Expr::c(k.a))?, zero()?, closed(i, Expr::c(k.b))?)
    } else {
        if k.a * k.d - k.b * k.c == 0.0 {
            return Err(Error::Degenerate(format!("ad - bc = 0 for a={}, b={}, c={}, d={}", k.a, k.b, k.c, k.d)));
        }
        let t = || kappa * x();
        // (numerator, denominator, ψ2 without λ, Ψ2 without ν)
        let (num, den, p2, q2) = match kind {
            Kind::Trig => (
                k.c * t().sin() + k.d * t().cos(),
                k.a * t().sin() + k.b * t().cos(),
                -k.a * t().cos() + k.b * t().sin(),
                -k.c * t().cos() + k.d * t().sin(),
            ),
            Kind::Linear => (
                k.c * x() + k.d,
                k.a * x() + k.b,
                Expr::poly(vec![0.0, k.b, 0.5 * k.a], x()),
                Expr::poly(vec![0.0, k.d, 0.5 * k.c], x()),
            ),
            Kind::Hyperbolic => (
                k.c * t().sinh() + k.d * t().cosh(),
                k.a * t().sinh() + k.b * t().cosh(),
                k.a * t().cosh() + k.b * t().sinh(),
                k.c * t().cosh() + k.d * t().sinh(),
            ),
            Kind::Constant => unreachable!(),
        };
        let phi = closed(i, num.clone() / den.clone())?;
        // Ψ1 = φ ψ1 is the numerator itself.
        let (psi1, cap_psi1) = if case.psi1_zero() { (zero()?, zero()?) } else { (closed(i, den)?, closed(i, num)?) };
        (phi, psi1, closed(i, p2 + k.lambda)?, cap_psi1, closed(i, q2 + k.nu)?)
    };

    // ψ2 ± ψ1 must keep a strict sign so that both g_k' exist.
    let mut signs = (0.0, 0.0);
    for n in 0..NONVANISHING_SAMPLES {
        let t = i.lo() + i.len() * (n as f64 + 0.5) / NONVANISHING_SAMPLES as f64;
        let (p1, p2) = (psi1.eval_raw(t), psi2.eval_raw(t));
        let (plus, minus) = ((p2 + p1).signum(), (p2 - p1).signum());
        let bad = p2 + p1 == 0.0
            || p2 - p1 == 0.0
            || !(p2 + p1).is_finite()
            || !(p2 - p1).is_finite()
            || (n > 0 && (plus, minus) != signs);
        if bad {
            return Err(Error::Degenerate(format!("ψ2 ± ψ1 vanishes or changes sign near x = {t}")));
        }
        signs = (plus, minus);
    }

    Ok(AuxProfiles {
        spec: AuxSpec { case, constants: k, interval, phi: if kind == Kind::Constant { phi_override } else { None } },
        kappa,
        phi,
        psi1,
        psi2,
        cap_psi1,
        cap_psi2,
    })
}

impl AuxSpec {
    /// The fixed parameter set used for `case` throughout the test corpus.
    pub fn corpus(case: AuxCase) -> AuxSpec {
        let unit = OpenInterval::new(0.0, 1.0).unwrap();
        let (constants, interval) = match case.kind() {
            Kind::Linear => (AuxConstants { a: 0.0, b: 1.0, c: 1.0, d: 0.0, gamma: 0.0, lambda: 2.0, nu: 0.0 }, OpenInterval::new(1.0, 2.0).unwrap()),
            Kind::Trig => (AuxConstants { a: 1.0, b: 2.0, c: 0.0, d: 1.0, gamma: -1.0, lambda: 5.0, nu: 0.0 }, unit),
            Kind::Hyperbolic => (AuxConstants { a: 1.0, b: 2.0, c: 0.0, d: 1.0, gamma: 1.0, lambda: 6.0, nu: 0.0 }, unit),
            Kind::Constant => (AuxConstants { a: 2.0, b: 0.5, ..Default::default() }, unit),
        };
        let phi = (case == AuxCase::Constant)
            .then(|| Arc::new(Fn1D::closed_form(interval, Expr::x().exp()).expect("exp is valid")));
        AuxSpec { case, constants, interval, phi }
    }

    pub fn build(&self) -> Result<AuxProfiles> {
        aux_profiles(self.case, self.constants, self.interval, self.phi.clone())
    }
}

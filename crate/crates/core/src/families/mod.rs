//! Builders for the solution families: globally affine `F`, partially affine
//! `F`, and the nowhere affine regime reconstructed from auxiliary profiles.

mod affine;
mod example;
mod partial;
mod profiles;
mod reconstruct;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{diagonal_image, Fn1D};
use crate::geometry::OpenInterval;

pub use affine::{build_affine, AffineParams};
pub use example::paper_example;
pub use partial::{build_partially_affine, PartialStubs, PartiallyAffineParams, SideSets};
pub use profiles::{aux_profiles, AuxCase, AuxConstants, AuxProfiles, AuxSpec};
pub use reconstruct::{
    reconstruct_from_profiles, reconstruct_tuple, solve_for_g, solve_for_g_on_grid, Anchors, Reconstruction,
    G_GRID_POINTS,
};

/// Affinity regime of `F` on `I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Affine,
    PartiallyAffine,
    NowhereAffine,
}

/// Names of the six unknowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Component {
    #[serde(rename = "F")]
    BigF,
    #[serde(rename = "f1")]
    F1,
    #[serde(rename = "f2")]
    F2,
    #[serde(rename = "g1")]
    G1,
    #[serde(rename = "g2")]
    G2,
    #[serde(rename = "G")]
    BigG,
}

impl Component {
    pub const ALL: [Component; 6] =
        [Component::BigF, Component::F1, Component::F2, Component::G1, Component::G2, Component::BigG];

    pub fn name(self) -> &'static str {
        match self {
            Component::BigF => "F",
            Component::F1 => "f1",
            Component::F2 => "f2",
            Component::G1 => "g1",
            Component::G2 => "g2",
            Component::BigG => "G",
        }
    }
}

/// Relative slack when comparing `G`'s domain with the computed sumset.
const SUMSET_MATCH: f64 = 1e-9;

/// The six functions `(F, f1, f2, g1, g2, G)` on `I`, with `G` living on the
/// sumset `g1(I) + g2(I)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr", into = "TupleRepr")]
pub struct SolutionTuple {
    interval: OpenInterval,
    big_f: Arc<Fn1D>,
    f1: Arc<Fn1D>,
    f2: Arc<Fn1D>,
    g1: Arc<Fn1D>,
    g2: Arc<Fn1D>,
    big_g: Arc<Fn1D>,
    regime: Regime,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TupleRepr {
    interval: OpenInterval,
    regime: Regime,
    #[serde(rename = "F")]
    big_f: Arc<Fn1D>,
    f1: Arc<Fn1D>,
    f2: Arc<Fn1D>,
    g1: Arc<Fn1D>,
    g2: Arc<Fn1D>,
    #[serde(rename = "G")]
    big_g: Arc<Fn1D>,
}

impl TryFrom<TupleRepr> for SolutionTuple {
    type Error = Error;
    fn try_from(r: TupleRepr) -> Result<Self> {
        SolutionTuple::new(r.interval, r.big_f, r.f1, r.f2, r.g1, r.g2, r.big_g, r.regime)
    }
}

impl From<SolutionTuple> for TupleRepr {
    fn from(s: SolutionTuple) -> Self {
        TupleRepr {
            interval: s.interval,
            regime: s.regime,
            big_f: s.big_f,
            f1: s.f1,
            f2: s.f2,
            g1: s.g1,
            g2: s.g2,
            big_g: s.big_g,
        }
    }
}

impl SolutionTuple {
    /// Validates shared domains, same-sense monotonicity of `g1, g2` and the
    /// domain of `G`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        interval: OpenInterval,
        big_f: Arc<Fn1D>,
        f1: Arc<Fn1D>,
        f2: Arc<Fn1D>,
        g1: Arc<Fn1D>,
        g2: Arc<Fn1D>,
        big_g: Arc<Fn1D>,
        regime: Regime,
    ) -> Result<Self> {
        for (name, f) in [("F", &big_f), ("f1", &f1), ("f2", &f2), ("g1", &g1), ("g2", &g2)] {
            if f.domain() != interval {
                return Err(Error::Spec(format!(
                    "{name} is defined on {} but the tuple lives on {interval}",
                    f.domain()
                )));
            }
        }
        let sumset = diagonal_image(&g1, &g2)?;
        let dom = big_g.domain();
        let scale = 1.0 + sumset.lo().abs().max(sumset.hi().abs());
        if !dom.approx_eq(&sumset, SUMSET_MATCH * scale) {
            return Err(Error::Spec(format!("G is defined on {dom} but the sumset is {sumset}")));
        }
        Ok(Self { interval, big_f, f1, f2, g1, g2, big_g, regime })
    }

    pub fn interval(&self) -> OpenInterval {
        self.interval
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn sumset(&self) -> OpenInterval {
        self.big_g.domain()
    }

    pub fn big_f(&self) -> &Arc<Fn1D> {
        &self.big_f
    }
    pub fn f1(&self) -> &Arc<Fn1D> {
        &self.f1
    }
    pub fn f2(&self) -> &Arc<Fn1D> {
        &self.f2
    }
    pub fn g1(&self) -> &Arc<Fn1D> {
        &self.g1
    }
    pub fn g2(&self) -> &Arc<Fn1D> {
        &self.g2
    }
    pub fn big_g(&self) -> &Arc<Fn1D> {
        &self.big_g
    }

    pub fn component(&self, c: Component) -> &Arc<Fn1D> {
        match c {
            Component::BigF => &self.big_f,
            Component::F1 => &self.f1,
            Component::F2 => &self.f2,
            Component::G1 => &self.g1,
            Component::G2 => &self.g2,
            Component::BigG => &self.big_g,
        }
    }

    /// Same tuple with `G` replaced (the domain check is repeated).
    pub fn with_big_g(&self, big_g: Arc<Fn1D>) -> Result<Self> {
        Self::new(
            self.interval,
            Arc::clone(&self.big_f),
            Arc::clone(&self.f1),
            Arc::clone(&self.f2),
            Arc::clone(&self.g1),
            Arc::clone(&self.g2),
            big_g,
            self.regime,
        )
    }
}

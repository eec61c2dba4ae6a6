//! Residual harnesses, constraint checks, the affinity classifier and
//! solution triples of the auxiliary equation.

mod classify;
mod constraints;
mod invariants;
mod peter;
mod residual;

pub use classify::{classify_affine_intervals, AffineWindow, AffinityReport, Verdict, MIN_RUN};
pub use constraints::{check_const, ConstCheck, CONST_SLACK};
pub use invariants::{aux_linkage, derived_profiles, extension_invariants, AuxLinkage, DerivedProfiles, ExtensionReport};
pub use peter::{peter_triple, PeterSpec, PeterTriple};
pub use residual::{residual_aux, residual_main, residual_system, ResidualReport};

//! Construction, verification and classification of solutions of the
//! Pexider composite functional equation
//!
//! ```text
//! F((x+y)/2) + f1(x) + f2(y) = G(g1(x) + g2(y)),   x, y ∈ I.
//! ```
//!
//! * [`geometry`]: open intervals, sumsets and the extension sets used to
//!   propagate formulas off an affine window.
//! * [`func`]: piecewise scalar functions with exact derivatives.
//! * [`families`]: builders for the globally affine, partially affine and
//!   nowhere affine solution families.
//! * [`verify`]: residual harnesses, constraint checks, the affinity
//!   classifier and solution triples of the auxiliary equation.
//! * [`cli`]: the config-driven `pexider-kit` front end.

// `!(a < b)` is used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod func;
pub mod families;
pub mod geometry;
pub mod sampling;
pub mod verify;

pub use error::{Error, Result};
pub use func::{Expr, Fn1D};
pub use geometry::OpenInterval;

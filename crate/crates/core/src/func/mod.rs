//! Scalar functions: piecewise closed forms, quadrature-backed
//! antiderivatives, tabulations, and monotone inversion.

mod expr;
mod fn1d;
pub mod inverse;
pub mod quadrature;

pub use expr::{Dual, Expr};
pub use fn1d::{
    antiderivative, Antiderivative, Body, Direction, Fn1D, HermiteTable, CHECKPOINTS,
    DEFAULT_MARGIN_FRACTION, DENOMINATOR_SAMPLES,
};
pub use inverse::{diagonal_image, diagonal_solve, monotone_inverse, preimage};

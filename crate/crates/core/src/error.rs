use thiserror::Error;

/// Errors raised by the builders, evaluators and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval ]{lo}, {hi}[")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("x = {x} is outside the evaluation window [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("value {y} is outside the image ]{lo}, {hi}[")]
    Range { y: f64, lo: f64, hi: f64 },

    #[error("not strictly monotone: {0}")]
    Monotonicity(String),

    #[error("interval ]{inner_lo}, {inner_hi}[ is not contained in ]{outer_lo}, {outer_hi}[")]
    NotContained { inner_lo: f64, inner_hi: f64, outer_lo: f64, outer_hi: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("constraint violated: {identity} ({detail})")]
    Constraint { identity: String, detail: String },

    #[error("continuity violated: {0}")]
    Continuity(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("regime violation: {0}")]
    Regime(String),

    #[error("sumset coverage: {0}")]
    Coverage(String),

    #[error("at (x, y) = ({x}, {y}): {source}")]
    AtPoint { x: f64, y: f64, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn at(self, x: f64, y: f64) -> Self {
        Error::AtPoint { x, y, source: Box::new(self) }
    }

    /// Strips any `AtPoint` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }
}

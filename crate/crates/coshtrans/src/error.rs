use thiserror::Error;

/// Errors surfaced by the numerical routines in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A moment integral failed to stabilize under tail truncation, or the
    /// value left the representable double range.
    #[error("moment of order {order} does not converge: {detail}")]
    DivergentMoment { order: usize, detail: String },

    #[error("overflow evaluating {what} at x = {x}")]
    Overflow { what: String, x: f64 },

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("bad parameters for catalog entry `{name}`: {detail}")]
    BadParams { name: String, detail: String },

    /// Taylor coefficients with negative entries cannot belong to any of the
    /// nonnegative-series classes; the offending indices are listed.
    #[error("negative series coefficients at indices {indices:?}")]
    NegativeCoefficient { indices: Vec<usize> },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("ill-conditioned moment problem: {0}")]
    IllConditioned(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

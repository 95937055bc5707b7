use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root system `{code}`: {reason}")]
    InvalidRootSystem { code: String, reason: String },

    #[error("Weyl group has order {order}, which exceeds the configured budget of {budget}")]
    BudgetExceeded { order: u64, budget: u64 },

    #[error("exact division by {divisor} left a nonzero remainder with {terms} term(s): {remainder}")]
    NonzeroRemainder {
        divisor: String,
        remainder: String,
        terms: usize,
    },

    #[error("cannot invert {0}: only single-term scalars are invertible")]
    NotInvertible(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("theorem check failed: {0}")]
    TheoremViolation(String),

    #[error("{what} = {value} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u64,
        bound: u64,
    },
}

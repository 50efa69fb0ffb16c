use thiserror::Error;

/// Errors surfaced by the library. Exact identity checks either pass or
/// return [`Error::IdentityViolation`] naming the identity that broke; there
/// are no tolerances anywhere.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group parameter n must be in 1..={max}, got {n}")]
    InvalidParam { n: u32, max: u32 },

    #[error("elements belong to different groups (n = {0} vs n = {1})")]
    GroupMismatch(u32, u32),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("infeasible signature: {0}")]
    InfeasibleSignature(String),

    #[error("generating-vector search exhausted its budget ({budget} nodes) for n = {n}, t = {t}")]
    SearchExhausted { n: u32, t: u32, budget: u64 },

    #[error("exact identity violated: {0}")]
    IdentityViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

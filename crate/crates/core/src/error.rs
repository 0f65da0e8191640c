use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("embedding domain is empty: {0}")]
    EmptyDomain(String),

    #[error("u = {u} lies outside the embedding domain [{lo}, {hi}]")]
    OutOfDomain { u: f64, lo: f64, hi: f64 },

    #[error("Pochhammer pole: denominator parameter {c} vanishes at term {k}")]
    PochhammerPole { c: String, k: usize },

    #[error("recurrence breakdown at degree {degree}: zero denominator")]
    RecurrenceBreakdown { degree: usize },

    #[error("argument outside the function domain: {0}")]
    DomainError(String),

    #[error("no convergence after {iterations} iterations: {what}")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("singular coefficient at the throat (R(u) = {radius:e} at u = {u})")]
    ThroatSingularity { u: f64, radius: f64 },

    #[error("complex power base {base} lies on the branch cut with exponent {exponent}")]
    BranchCutHit { base: String, exponent: String },

    #[error("E + M vanishes (|E + M| = {0:e}); lower component is undefined")]
    MassShellSingularity(f64),

    #[error("no root of the quantization condition in the search region: {0}")]
    RootNotBracketed(String),

    #[error("sample u = {0} hits a zero of R(u)")]
    SingularSample(f64),

    #[error("series does not terminate at degree {degree}: {reason}")]
    NoTermination { degree: usize, reason: String },

    #[error("tau = {0} is not within 1e-12 of -1/2 or +1/2; no closed form")]
    TauOutOfSector(String),

    #[error("unsupported family for this operation: {0}")]
    UnsupportedFamily(String),
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero leading term: series vanishes below its truncation bound")]
    ZeroLeadingTerm,
    #[error("not expandable: inverted factor {0} has a non-positive exponent")]
    NotExpandable(String),
    #[error("factor with zero coefficient and negative exponent cannot be normalized")]
    ZeroFactorCoefficient,
    #[error("pole at point: {0}")]
    PoleAtPoint(String),
    #[error("non-convergent parameters: {0}")]
    NonConvergentParameters(String),
    #[error("family {0} has no limit term")]
    NoLimitTerm(String),
    #[error("transformed term {n} of {family} is not power-series expandable")]
    NonExpandableTail { family: String, n: u64 },
    #[error("tail valuations of {family} stalled for {window} consecutive terms (last n = {n})")]
    StallDetected { family: String, window: usize, n: u64 },
    #[error("class invariant violated: {0}")]
    ClassInvariantViolation(String),
    #[error("character sum at {0} is not real")]
    NonRealValue(i64),
    #[error("requested {requested} digits exceed validated range of {max}")]
    PrecisionUnreachable { requested: usize, max: usize },
    #[error("certified tail {tail:e} exceeds accuracy target {target:e}")]
    TailTooLarge { tail: f64, target: f64 },
    #[error("quadrature not converged: last refinements differ by {diff:e} (tolerance {tol:e})")]
    QuadratureNotConverged { diff: f64, tol: f64 },
    #[error("DomainHole: x = {x} in S_1/2")]
    DomainHole { x: String },
    #[error("sum did not terminate: {0}")]
    NonTerminating(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

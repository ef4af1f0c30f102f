use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("level set has infinite mass")]
    InfiniteMass,
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e}, error {error:e})")]
    QuadratureFailure { tol: f64, estimate: f64, error: f64 },
    #[error("weight is degenerate: {0}")]
    DegenerateWeight(String),
    #[error("measure is degenerate: {0}")]
    DegenerateMeasure(String),
    #[error("indices (p0={p0}, q0={q0}, p1={p1}, q1={q1}) are outside both regimes")]
    IndexRegimeError { p0: f64, q0: f64, p1: f64, q1: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("did not converge: {0}")]
    NonConvergent(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors surfaced by the geometry and optimization routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration (or requested parameter region) admits no feasible geometry.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A root or threshold search failed to bracket; indicates a numerical setup
    /// bug rather than a bad input.
    #[error("solver failure: {0}")]
    SolverFailure(String),

    /// Input outside the domain of an empirical fit or formula.
    #[error("out of domain: {0}")]
    OutOfDomain(String),

    /// A parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed geometry file.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors produced by the solvers and the network tooling.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// `rho` is below the optimal half-excess ratio for the given ray count, so the
    /// characteristic polynomial has no positive root.
    #[error("rho = {rho} is below rho*_{m} = {rho_star}: no positive real roots")]
    NoRealRoots { m: usize, rho: f64, rho_star: f64 },

    #[error("budget {0} admits no feasible search strategy")]
    InfeasibleBudget(f64),

    /// The tight-constraint system for `k` steps produced a non-positive direction.
    #[error("degenerate tight-constraint system for k = {k}: {reason}")]
    DegenerateSystem { k: usize, reason: String },

    #[error("graph is disconnected: {0}")]
    Disconnected(String),

    #[error("unknown vertex: {0}")]
    UnknownVertex(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

use thiserror::Error;

use crate::model::ConfigError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A schedule would be too large to materialize.
    #[error("size error: {what} = {value} exceeds the cap of {cap}")]
    Size {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    /// A design violates the decodability bound on `(Ω, β)`.
    #[error("infeasible design: {0}")]
    Infeasible(String),

    #[error("scheduling error: {0}")]
    Scheduling(String),

    /// Not enough null-space dimensions for the streams sharing one nulling target.
    #[error(
        "feasibility error: user {user}, subfile {subfile:?} needs {required} null-space \
         dimensions but only {nullity} exist"
    )]
    Feasibility {
        user: usize,
        subfile: Vec<usize>,
        nullity: i64,
        required: usize,
    },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

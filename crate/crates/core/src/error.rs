use thiserror::Error;

use crate::network::Violation;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the domain of the operation.
    #[error("input error: {0}")]
    Input(String),

    #[error("network failed validation: {}", summarize(.0))]
    InvalidNetwork(Vec<Violation>),

    /// No flow over time respects the lower bounds for every parameter value.
    #[error("no feasible flow exists")]
    Infeasible,

    /// A supplied base flow violates conservation or the tight bounds.
    #[error("base flow is not feasible: {0}")]
    InvalidBaseFlow(String),

    /// Broken internal invariant; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

fn summarize(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

//! Parametric minimum flows over time.
//!
//! Given a discrete-time dynamic network whose arc lower bounds are affine
//! in a parameter `λ ∈ [0, Λ]`, [`solve`] computes the minimum flow value
//! `v(λ)` as an exact piecewise-linear function together with its
//! breakpoints and one parametric flow per linear piece. [`verify`] checks
//! such a solution against independent fixed-`λ` static minimum flow solves.
//!
//! ```
//! use paraflow::{example::four_node_network, solve, verify, Rational};
//!
//! let net = four_node_network();
//! let sol = solve(&net)?;
//! assert_eq!(sol.evaluate(&Rational::new(1, 4))?, Rational::new(23, 4));
//! assert!(verify(&sol, &net, 3, 0).all_match);
//! # Ok::<(), paraflow::Error>(())
//! ```

pub mod error;
pub mod example;
pub mod expand;
pub mod labels;
pub mod network;
pub mod qdp;
pub mod random;
pub mod rational;
pub mod residual;
pub mod solver;
pub mod static_flow;
pub mod verify;

pub use error::{Error, Result};
pub use network::{ArcSpec, ArcTime, ArcTimeMap, DynamicNetwork, NodeId, Violation};
pub use rational::Rational;
pub use solver::{
    evaluate_value, solve, solve_with_base_flow, tight_lower_bounds, ParametricSolution, ValuePiece,
};
pub use verify::{verify, verify_pieces, Sample, VerificationReport};

//! Simulation and verification toolkit for the H-free random graph process.
//!
//! The process starts from the empty graph on `n` vertices and repeatedly adds
//! a uniformly random *open* pair, one whose addition keeps the graph free of a
//! fixed strictly 2-balanced graph `H`. This crate runs the process with
//! incremental open/closed bookkeeping, counts extension variables, evaluates
//! the closed-form trajectories they are expected to follow, and provides the
//! statistics used to compare the two.

pub mod analysis;
pub mod embed;
pub mod error;
pub mod exponent;
pub mod extension;
pub mod graph;
pub mod pairs;
pub mod process;
pub mod sampler;
pub mod scaling;
pub mod trajectory;

pub use error::{Error, Result};
pub use exponent::ScalingExponent;
pub use graph::GraphSpec;
pub use pairs::PairStatus;
pub use process::{ProcessState, StepOutcome, StepRecord};
pub use scaling::{ForbiddenGraph, RootedPattern};

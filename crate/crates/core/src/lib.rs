//! Solvers for universal stochastic covering problems.
//!
//! A universal mapping assigns every possible request (element, client or
//! terminal pair) to its covering object(s) before the random request set is
//! revealed; the objects actually bought are the union over the requests that
//! show up. The crate computes such mappings with approximation guarantees
//! relative to the best universal mapping, evaluates their expected cost
//! exactly, and certifies ratios against brute-force optima on small instances.

pub mod cli;
pub mod edgecover;
pub mod error;
pub mod model;
pub mod multicut;
pub mod facility;
pub mod lpcore;
pub mod rng;
pub mod setcover;
pub mod submodular;
pub mod verify;

pub use error::{Error, LpError, Result};

//! Two-qubit quantum state preparation under discrete control pulses.
//!
//! - [`qsim`]: state vectors, spin operators, Hamiltonians and exact propagators.
//! - [`grape`]: gradient ascent on continuous piecewise-constant controls.
//! - [`env`]: the fixed-horizon pulse environment with nine actions.
//! - [`reward`]: the weighted difference dynamic reward and a sparse baseline.
//! - [`policy`]: adaptive and fixed-decay epsilon-greedy, Boltzmann selection.
//! - [`dqn`]: Q-network, prioritized replay and the training loop.
//! - [`harness`]: brute-force oracle, experiment sweeps and file output.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod dqn;
pub mod env;
pub mod error;
pub mod grape;
pub mod harness;
pub mod policy;
pub mod qsim;
pub mod reward;

pub use error::{Error, Result};

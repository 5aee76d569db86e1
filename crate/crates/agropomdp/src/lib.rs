//! Deep Q-learning toolkit for nitrogen fertilization management on a
//! surrogate daily-timestep maize environment.
//!
//! The crate is organized as five layers:
//! - [`neural`]: MLP and GRU networks, Adam, gradient checking, model files.
//! - [`rl`]: replay memory, observation windows, tabular and deep Q-learning.
//! - [`weather`]: daily weather series, CSV I/O, perturbations, synthesis.
//! - [`env`]: the surrogate crop environment, observations, rewards.
//! - [`experiment`]: configs, manifests, training/evaluation drivers.

pub mod env;
pub mod error;
pub mod experiment;
pub mod fsutil;
pub mod neural;
pub mod rl;
pub mod weather;

pub use error::{Error, Result};

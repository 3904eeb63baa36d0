//! Stochastic domination toolkit.
//!
//! Exact domination and coupling oracles on finite `{0,1}^n` lattices,
//! contact-process estimators of the upper invariant measure, Ising
//! domination thresholds on the 3-regular tree and on `Z^2`, domination
//! criteria for exchangeable FKG sequences, and site-percolation analysis of
//! sampled configurations.
//!
//! Monte Carlo work is organized as independent replicas, each with its own
//! RNG stream derived from `(seed, replica)`. With the default `parallel`
//! feature the replicas run on the rayon pool; without it they run in order
//! on the calling thread. Results are identical either way.

pub mod contact;
pub mod error;
pub mod estimate;
pub mod exchangeable;
pub mod exec;
pub mod ising_lattice;
pub mod ising_tree;
pub mod lattice;
pub mod percolation;

pub use error::{Error, Result};
pub use estimate::EstimateCI;

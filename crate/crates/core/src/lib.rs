//! Photon statistics of a cascaded cavity-QED system.
//!
//! A classically driven two-level emitter (the source) feeds its output
//! field one-way into a target cavity containing up to two two-level
//! atoms (a Tavis-Cummings system in the weak-coupling regime). The
//! library builds the cascaded master equation for that chain, solves it
//! in time or directly for the steady state, and extracts the photon
//! statistics of the target cavity: mean photon number, equal-time
//! correlations g2 and g3, photon-number probabilities, truncation
//! fidelities, and the two-to-one photon probability ratio.
//!
//! Module map:
//! - [`hilbert`]: tensor-product spaces and operator embedding.
//! - [`model`]: model parameters, Hamiltonians, Liouvillian description.
//! - [`liouvillian`]: vectorization and sparse superoperator assembly.
//! - [`solvers`]: adaptive time evolution and direct steady states.
//! - [`observables`]: photon statistics of cavity states.
//! - [`analytic`]: closed-form oracles (dressed states, driven TLS).
//! - [`sweep`]: parameter scans, threshold bisection, comparisons.
//!
//! All rates are dimensionless, in units of the source linewidth gamma_s;
//! times are in units of 2 pi / gamma_s.

pub mod analytic;
pub mod error;
pub mod hilbert;
pub mod liouvillian;
pub mod model;
pub mod observables;
pub mod solvers;
pub mod sweep;

pub use error::{Error, Result};

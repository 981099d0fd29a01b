//! Optimal universal N→M qubit cloning and optimal covariant state estimation.
//!
//! The crate builds the symmetrizing cloning channel on the symmetric
//! subspace, the continuous covariant estimation measurement, and an exact
//! rational ledger of the closed-form shrinking factors, so that simulated
//! values can be certified against the exact ones.
//!
//! Modules, bottom-up:
//!
//! - [`linalg`]: dense complex matrices, density operators, partial traces,
//!   Bloch vectors, Haar sampling.
//! - [`symspace`]: Dicke basis, symmetrizer, Dicke-coordinate states and
//!   signed pseudo-mixture decompositions.
//! - [`cloner`]: the N→M cloning channel (full-space and Dicke paths),
//!   shrinking-factor measurement, universality certification, concatenation.
//! - [`estimator`]: covariant POVM, quadrature and Monte Carlo estimation,
//!   the measure-and-prepare channel.
//! - [`bounds`]: exact rational closed forms and identities.
//!
//! Heavy loops (sample sweeps, quadrature nodes, grid checks) go through
//! [`Exec`], which uses rayon when the `parallel` feature is enabled and
//! runs sequentially otherwise.

pub mod bounds;
pub mod cloner;
mod error;
pub mod estimator;
mod exec;
pub mod linalg;
pub mod symspace;

pub use error::{Error, Result};
pub use exec::{Exec, NeumaierSum};

/// Structural checks (Hermiticity, trace, isometry identities).
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Lowest eigenvalue accepted for a positive semidefinite operator.
pub const POSITIVITY_TOL: f64 = -1e-10;
/// Physics assertions (shrinking factors, fidelities, parallelism).
pub const PHYSICS_TOL: f64 = 1e-9;

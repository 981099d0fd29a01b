//! Dense complex linear algebra and single-qubit geometry.
//!
//! Qubit ordering is big-endian throughout: qubit 0 is the leftmost tensor
//! factor, i.e. the most significant bit of a computational-basis index.

mod density;
mod matrix;
mod qubit;
mod random;

pub use density::{partial_trace, DensityOperator};
pub use matrix::{
    hermitian_deviation, hermitize, identity, is_hermitian, is_unitary, max_abs, max_abs_diff,
    min_eigenvalue, outer, pauli_x, pauli_y, pauli_z, tensor_power_vector, tensor_product, trace,
    ComplexMatrix, ComplexVector,
};
pub use qubit::{bloch_of, pure_fidelity, state_from_bloch, BlochVector, PureQubitState};
pub use random::{haar_random_pure, SeedStream};

pub use num_complex::Complex64;

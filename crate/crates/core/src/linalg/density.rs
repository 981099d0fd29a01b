use num_complex::Complex64;

use super::matrix::{
    hermitian_deviation, hermitize, min_eigenvalue, outer, tensor_power_vector, trace,
    ComplexMatrix,
};
use super::qubit::PureQubitState;
use crate::error::{invalid, Error, Result};
use crate::{POSITIVITY_TOL, STRUCTURAL_TOL};

/// A positive semidefinite, unit-trace, Hermitian operator on `n` qubits.
///
/// The validating constructor checks all three properties; the stored
/// matrix is always exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(invalid(format!(
            "dimension {dim} is not a power of two ≥ 2"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

impl DensityOperator {
    /// Validates Hermiticity (1e-12), unit trace (1e-12) and positivity
    /// (minimum eigenvalue ≥ −1e-10).
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState("matrix is not square".into()));
        }
        let n_qubits = qubits_for_dim(matrix.nrows())?;
        let dev = hermitian_deviation(&matrix);
        if dev > STRUCTURAL_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = trace(&matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > STRUCTURAL_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = min_eigenvalue(&matrix);
        if min < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self {
            n_qubits,
            matrix: hermitize(&matrix),
        })
    }

    /// Wraps a matrix whose validity the caller has established by other
    /// means (e.g. on the Dicke coordinates it was embedded from).
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square() && matrix.nrows().is_power_of_two());
        Self {
            n_qubits: matrix.nrows().trailing_zeros() as usize,
            matrix,
        }
    }

    pub fn from_pure(psi: &PureQubitState) -> Self {
        Self::from_trusted(psi.projector())
    }

    /// `|ψ⟩⟨ψ|^{⊗n}`.
    pub fn tensor_power(psi: &PureQubitState, n: usize) -> Self {
        let v = tensor_power_vector(&psi.vector(), n);
        Self::from_trusted(outer(&v, &v))
    }

    /// `1l / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::from_trusted(ComplexMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.matrix)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Reduced operator on the qubits in `keep`, traced over the rest.
///
/// Kept qubits appear in ascending index order in the result.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let n = rho.n_qubits();
    if keep.is_empty() {
        return Err(invalid("partial trace must keep at least one qubit"));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&q) = kept.iter().find(|&&q| q >= n) {
        return Err(invalid(format!("qubit {q} out of range for {n} qubits")));
    }
    let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();

    // Big-endian: qubit q is bit (n − 1 − q) of the full index.
    let scatter = |qubits: &[usize], idx: usize| -> usize {
        qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
            let bit = (idx >> (qubits.len() - 1 - pos)) & 1;
            acc | (bit << (n - 1 - q))
        })
    };
    let k_dim = 1usize << kept.len();
    let t_dim = 1usize << traced.len();
    let kept_offsets: Vec<usize> = (0..k_dim).map(|i| scatter(&kept, i)).collect();
    let traced_offsets: Vec<usize> = (0..t_dim).map(|t| scatter(&traced, t)).collect();

    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(k_dim, k_dim);
    for (i, &ri) in kept_offsets.iter().enumerate() {
        for (j, &cj) in kept_offsets.iter().enumerate() {
            out[(i, j)] = traced_offsets.iter().map(|&t| m[(ri | t, cj | t)]).sum();
        }
    }
    Ok(DensityOperator::from_trusted(hermitize(&out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, tensor_product, ComplexVector};
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn bell_state_reduces_to_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = ComplexVector::from_vec(vec![c(0.0), c(h), c(h), c(0.0)]);
        let rho = DensityOperator::new(outer(&v, &v)).unwrap();
        for q in 0..2 {
            let r = partial_trace(&rho, &[q]).unwrap();
            assert!(max_abs_diff(r.matrix(), DensityOperator::maximally_mixed(1).matrix()) < 1e-15);
        }
    }

    #[test]
    fn product_state_reduces_to_factor() {
        let zero = DensityOperator::from_pure(&PureQubitState::zero());
        let one = DensityOperator::from_pure(&PureQubitState::one());
        let rho = DensityOperator::new(tensor_product(zero.matrix(), one.matrix())).unwrap();
        assert_eq!(partial_trace(&rho, &[0]).unwrap(), zero);
        assert_eq!(partial_trace(&rho, &[1]).unwrap(), one);
    }

    #[test]
    fn dicke_one_excitation_reduces_to_half_identity() {
        // (|01⟩ + |10⟩)/√2, traced explicitly
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = ComplexVector::from_vec(vec![c(0.0), c(h), c(h), c(0.0)]);
        let rho = DensityOperator::new(outer(&v, &v)).unwrap();
        let r = partial_trace(&rho, &[1]).unwrap();
        assert_abs_diff_eq!(r.matrix()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.matrix()[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_eq!(r.matrix()[(0, 1)], c(0.0));
    }

    #[test]
    fn keeps_qubits_in_ascending_order() {
        // |0⟩|+⟩|1⟩ reduced onto {2, 0} must equal |0⟩⟨0| ⊗ |1⟩⟨1|
        let zero = PureQubitState::zero().projector();
        let plus = PureQubitState::plus().projector();
        let one = PureQubitState::one().projector();
        let full = tensor_product(&tensor_product(&zero, &plus), &one);
        let rho = DensityOperator::new(full).unwrap();
        let r = partial_trace(&rho, &[2, 0]).unwrap();
        assert!(max_abs_diff(r.matrix(), &tensor_product(&zero, &one)) < 1e-15);
    }

    #[test]
    fn rejects_bad_keep_sets() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(partial_trace(&rho, &[2]).is_err());
        assert_eq!(partial_trace(&rho, &[0, 1]).unwrap(), rho);
    }

    #[test]
    fn validation_rejects_invalid_matrices() {
        let not_unit = ComplexMatrix::identity(2, 2);
        assert!(matches!(
            DensityOperator::new(not_unit),
            Err(Error::InvalidState(_))
        ));
        let negative = ComplexMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(matches!(
            DensityOperator::new(negative),
            Err(Error::InvalidState(_))
        ));
        let non_herm = ComplexMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(matches!(
            DensityOperator::new(non_herm),
            Err(Error::InvalidState(_))
        ));
        let bad_dim = ComplexMatrix::identity(3, 3).scale(1.0 / 3.0);
        assert!(DensityOperator::new(bad_dim).is_err());
    }
}

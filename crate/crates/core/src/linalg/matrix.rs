use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Dense complex matrix. Hermiticity, unitarity and positivity are checked
/// by the predicates below, never assumed.
pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Kronecker product `a ⊗ b`; `a` supplies the most significant index.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// `|v⟩^{⊗n}` as a column vector of length `dim(v)^n`.
pub fn tensor_power_vector(v: &ComplexVector, n: usize) -> ComplexVector {
    let mut out = ComplexVector::from_element(1, ONE);
    for _ in 0..n {
        out = out.kronecker(v);
    }
    out
}

/// `|a⟩⟨b|`.
pub fn outer(a: &ComplexVector, b: &ComplexVector) -> ComplexMatrix {
    a * b.adjoint()
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Largest entry modulus.
pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a − b`. Panics on a shape mismatch.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `max |m − m†|` entrywise; `∞` for non-square input.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn is_hermitian(m: &ComplexMatrix, tol: f64) -> bool {
    hermitian_deviation(m) <= tol
}

pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(&(m.adjoint() * m), &identity(m.nrows())) <= tol
}

/// `(m + m†)/2`.
pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    hermitize(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(bits: &[u8]) -> ComplexVector {
        let mut v = ComplexVector::from_element(1, ONE);
        for &b in bits {
            let q = if b == 0 {
                ComplexVector::from_vec(vec![ONE, ZERO])
            } else {
                ComplexVector::from_vec(vec![ZERO, ONE])
            };
            v = v.kronecker(&q);
        }
        v
    }

    #[test]
    fn identity_tensor_identity() {
        assert_eq!(tensor_product(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn projector_tensor_projector() {
        let p0 = outer(&ket(&[0]), &ket(&[0]));
        let p = tensor_product(&p0, &p0);
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0, 0)] = ONE;
        assert_eq!(p, expected);
    }

    #[test]
    fn zz_eigenvalue_on_01() {
        let zz = tensor_product(&pauli_z(), &pauli_z());
        let v = ket(&[0, 1]);
        assert_eq!(&zz * &v, -v.clone());
        // big-endian: |01⟩ is index 1
        assert_eq!(v[1], ONE);
    }

    #[test]
    fn paulis_are_hermitian_and_unitary() {
        for p in [pauli_x(), pauli_y(), pauli_z()] {
            assert!(is_hermitian(&p, 0.0));
            assert!(is_unitary(&p, 1e-15));
        }
        // σ_x σ_y = i σ_z
        assert_eq!(pauli_x() * pauli_y(), pauli_z().scale(1.0).map(|z| z * I));
    }

    #[test]
    fn tensor_power_vector_matches_repeated_kron() {
        let v = ComplexVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let p = tensor_power_vector(&v, 3);
        let direct = v.kronecker(&v).kronecker(&v);
        assert_eq!(p, direct);
        assert!((p.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn min_eigenvalue_of_projector_difference() {
        let m = pauli_z();
        assert!((min_eigenvalue(&m) + 1.0).abs() < 1e-14);
    }
}

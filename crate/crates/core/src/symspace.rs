//! Symmetric-subspace machinery: Dicke basis, symmetrizer, Dicke-coordinate
//! states and signed pseudo-mixture decompositions.
//!
//! The Dicke state `|D_k⟩` on `n` qubits is the normalized equal superposition
//! of all computational states with `k` ones, with coefficient `1/√C(n,k)`.
//! A state supported on the symmetric subspace is stored compactly as its
//! `(n+1)×(n+1)` matrix in the Dicke basis ("Dicke coordinates").

use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::linalg::{
    hermitian_deviation, hermitize, max_abs, max_abs_diff, min_eigenvalue, trace, ComplexMatrix,
    ComplexVector, DensityOperator, PureQubitState,
};
use crate::{POSITIVITY_TOL, STRUCTURAL_TOL};

/// Largest qubit count for operators materialized on the full `2^n` space.
pub const MAX_FULL_QUBITS: usize = 14;
/// Largest qubit count handled in Dicke coordinates.
pub const MAX_DICKE_QUBITS: usize = 60;
/// Largest qubit count for the `n!`-term permutation average.
pub const MAX_PERMUTATION_QUBITS: usize = 8;

/// Binomial coefficient as `f64`; exact for every `n ≤ 60`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c as f64
}

fn check_full_range(n: usize) -> Result<()> {
    if n == 0 || n > MAX_FULL_QUBITS {
        return Err(invalid(format!(
            "qubit count {n} outside 1..={MAX_FULL_QUBITS}"
        )));
    }
    Ok(())
}

fn check_dicke_range(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DICKE_QUBITS {
        return Err(invalid(format!(
            "qubit count {n} outside 1..={MAX_DICKE_QUBITS}"
        )));
    }
    Ok(())
}

/// The `n+1` Dicke vectors as the columns of a `2^n × (n+1)` isometry `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeBasis {
    n_qubits: usize,
    isometry: ComplexMatrix,
}

impl DickeBasis {
    fn build(n: usize) -> Self {
        let dim = 1usize << n;
        let mut v = ComplexMatrix::zeros(dim, n + 1);
        let norms: Vec<f64> = (0..=n).map(|k| 1.0 / binomial(n, k).sqrt()).collect();
        for x in 0..dim {
            let k = x.count_ones() as usize;
            v[(x, k)] = Complex64::new(norms[k], 0.0);
        }
        Self {
            n_qubits: n,
            isometry: v,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `V`, with `V†V = 1l_{n+1}` and `VV† = S_n`.
    pub fn isometry(&self) -> &ComplexMatrix {
        &self.isometry
    }

    /// `|D_k⟩` on the full space.
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.isometry.column(k).into_owned()
    }

    pub fn gram(&self) -> ComplexMatrix {
        self.isometry.adjoint() * &self.isometry
    }

    /// `V X V†`: Dicke coordinates to the full space.
    pub fn embed(&self, coords: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.n_qubits + 1;
        if coords.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: coords.nrows(),
            });
        }
        Ok(&self.isometry * coords * self.isometry.adjoint())
    }

    /// `V† A V`: the compression of a full-space operator to Dicke coordinates.
    pub fn project(&self, full: &ComplexMatrix) -> Result<ComplexMatrix> {
        let dim = self.isometry.nrows();
        if full.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: full.nrows(),
            });
        }
        Ok(self.isometry.adjoint() * full * &self.isometry)
    }
}

static BASIS_CACHE: [OnceLock<Arc<DickeBasis>>; MAX_FULL_QUBITS + 1] =
    [const { OnceLock::new() }; MAX_FULL_QUBITS + 1];

/// Dicke basis on `n` qubits, `1 ≤ n ≤ 14`. Memoized per `n`.
pub fn dicke_basis(n: usize) -> Result<Arc<DickeBasis>> {
    check_full_range(n)?;
    Ok(BASIS_CACHE[n]
        .get_or_init(|| Arc::new(DickeBasis::build(n)))
        .clone())
}

/// Orthogonal projector `S_n` onto the symmetric subspace.
///
/// Held through the Dicke isometry; [`Symmetrizer::to_matrix`] materializes
/// the `2^n × 2^n` matrix on demand.
#[derive(Debug, Clone)]
pub struct Symmetrizer {
    basis: Arc<DickeBasis>,
}

impl Symmetrizer {
    pub fn n_qubits(&self) -> usize {
        self.basis.n_qubits
    }

    pub fn rank(&self) -> usize {
        self.basis.n_qubits + 1
    }

    pub fn basis(&self) -> &DickeBasis {
        &self.basis
    }

    /// `Σ_k |D_k⟩⟨D_k|`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let v = self.basis.isometry();
        v * v.adjoint()
    }

    /// `S A`, computed as `V (V† A)`.
    pub fn apply_left(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = self.basis.isometry();
        v * (v.adjoint() * a)
    }

    /// `A S`, computed as `(A V) V†`.
    pub fn apply_right(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let v = self.basis.isometry();
        (a * v) * v.adjoint()
    }

    /// `max(‖(1−S)A‖_max, ‖A(1−S)‖_max)`.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        let left = max_abs_diff(a, &self.apply_left(a));
        let right = max_abs_diff(a, &self.apply_right(a));
        left.max(right)
    }
}

/// `S_n` for `1 ≤ n ≤ 14`.
pub fn symmetrizer(n: usize) -> Result<Symmetrizer> {
    Ok(Symmetrizer {
        basis: dicke_basis(n)?,
    })
}

/// Operator permuting qubits: qubit `q` of the input lands on position
/// `perm[q]` of the output.
pub fn qubit_permutation(perm: &[usize]) -> Result<ComplexMatrix> {
    let n = perm.len();
    check_full_range(n)?;
    if !perm.iter().copied().sorted().eq(0..n) {
        return Err(invalid(format!("{perm:?} is not a permutation of 0..{n}")));
    }
    let dim = 1usize << n;
    let mut p = ComplexMatrix::zeros(dim, dim);
    for x in 0..dim {
        let y = (0..n).fold(0usize, |acc, q| {
            let bit = (x >> (n - 1 - q)) & 1;
            acc | (bit << (n - 1 - perm[q]))
        });
        p[(y, x)] = Complex64::new(1.0, 0.0);
    }
    Ok(p)
}

/// `S_n = (1/n!) Σ_π P_π` by explicit averaging over all `n!` permutations.
pub fn symmetrizer_by_permutations(n: usize) -> Result<ComplexMatrix> {
    if n == 0 || n > MAX_PERMUTATION_QUBITS {
        return Err(invalid(format!(
            "permutation average supports 1..={MAX_PERMUTATION_QUBITS} qubits, got {n}"
        )));
    }
    let dim = 1usize << n;
    let mut counts = vec![0u32; dim * dim];
    let mut n_perms = 0u32;
    for perm in (0..n).permutations(n) {
        n_perms += 1;
        for x in 0..dim {
            let y = (0..n).fold(0usize, |acc, q| {
                let bit = (x >> (n - 1 - q)) & 1;
                acc | (bit << (n - 1 - perm[q]))
            });
            counts[y * dim + x] += 1;
        }
    }
    let scale = 1.0 / n_perms as f64;
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| {
        Complex64::new(counts[r * dim + c] as f64 * scale, 0.0)
    }))
}

/// `max(‖(1−S)ρ‖_max, ‖ρ(1−S)‖_max)` for an operator on the full space.
pub fn symmetric_residual(rho: &DensityOperator) -> Result<f64> {
    Ok(symmetrizer(rho.n_qubits())?.residual(rho.matrix()))
}

/// True iff `ρ` is supported on the symmetric subspace to within `tol`.
pub fn is_symmetric_support(rho: &DensityOperator, tol: f64) -> bool {
    symmetric_residual(rho).is_ok_and(|r| r < tol)
}

/// Dicke amplitudes of `|ψ⟩^{⊗n}`: `√C(n,k) a^{n−k} b^k` for `ψ = a|0⟩ + b|1⟩`.
pub fn tensor_power_amplitudes(psi: &PureQubitState, n: usize) -> ComplexVector {
    let (a, b) = psi.amplitudes();
    ComplexVector::from_fn(n + 1, |k, _| {
        a.powu((n - k) as u32) * b.powu(k as u32) * binomial(n, k).sqrt()
    })
}

/// A state on the symmetric subspace of `n` qubits in Dicke coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeState {
    n_qubits: usize,
    coords: ComplexMatrix,
}

impl DickeState {
    /// Validates an `(n+1)×(n+1)` coordinate matrix: Hermitian and unit
    /// trace within 1e-12, minimum eigenvalue ≥ −1e-10.
    pub fn new(coords: ComplexMatrix) -> Result<Self> {
        if !coords.is_square() || coords.nrows() < 2 {
            return Err(invalid(
                "Dicke coordinates must be square with dimension ≥ 2",
            ));
        }
        let n = coords.nrows() - 1;
        check_dicke_range(n)?;
        let dev = hermitian_deviation(&coords);
        if dev > STRUCTURAL_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:e})"
            )));
        }
        let tr = trace(&coords);
        if (tr - Complex64::new(1.0, 0.0)).norm() > STRUCTURAL_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = min_eigenvalue(&coords);
        if min < POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self {
            n_qubits: n,
            coords: hermitize(&coords),
        })
    }

    pub(crate) fn from_trusted(coords: ComplexMatrix) -> Self {
        Self {
            n_qubits: coords.nrows() - 1,
            coords,
        }
    }

    /// `|ψ⟩⟨ψ|^{⊗n}`.
    pub fn tensor_power(psi: &PureQubitState, n: usize) -> Result<Self> {
        check_dicke_range(n)?;
        let a = tensor_power_amplitudes(psi, n);
        Ok(Self::from_trusted(&a * a.adjoint()))
    }

    /// `|D_k⟩⟨D_k|`.
    pub fn dicke_projector(n: usize, k: usize) -> Result<Self> {
        check_dicke_range(n)?;
        if k > n {
            return Err(invalid(format!("excitation number {k} exceeds {n}")));
        }
        let mut c = ComplexMatrix::zeros(n + 1, n + 1);
        c[(k, k)] = Complex64::new(1.0, 0.0);
        Ok(Self::from_trusted(c))
    }

    /// `S_n / (n+1)`, the maximally mixed state on the symmetric subspace.
    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_dicke_range(n)?;
        Ok(Self::from_trusted(
            ComplexMatrix::identity(n + 1, n + 1).scale(1.0 / (n + 1) as f64),
        ))
    }

    /// Compresses a full-space operator, requiring symmetric support within `tol`.
    pub fn from_full(rho: &DensityOperator, tol: f64) -> Result<Self> {
        let sym = symmetrizer(rho.n_qubits())?;
        let residual = sym.residual(rho.matrix());
        if residual >= tol {
            return Err(Error::NotSymmetric { residual });
        }
        Ok(Self::from_trusted(hermitize(
            &sym.basis().project(rho.matrix())?,
        )))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coords(&self) -> &ComplexMatrix {
        &self.coords
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.coords)
    }

    pub fn trace(&self) -> Complex64 {
        trace(&self.coords)
    }

    /// The state on the full `2^n` space.
    pub fn embed(&self) -> Result<DensityOperator> {
        let basis = dicke_basis(self.n_qubits)?;
        Ok(DensityOperator::from_trusted(hermitize(
            &basis.embed(&self.coords)?,
        )))
    }

    /// Single-qubit reduction (identical for every qubit).
    pub fn reduced_qubit(&self) -> DensityOperator {
        let n = self.n_qubits;
        let nf = n as f64;
        let y = &self.coords;
        let mut p0 = 0.0;
        let mut p1 = 0.0;
        for k in 0..=n {
            let d = y[(k, k)].re;
            p0 += d * (n - k) as f64 / nf;
            p1 += d * k as f64 / nf;
        }
        let mut coh = Complex64::new(0.0, 0.0);
        for k in 0..n {
            coh += y[(k + 1, k)] * (((k + 1) * (n - k)) as f64).sqrt() / nf;
        }
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(p0, 0.0),
                coh.conj(),
                coh,
                Complex64::new(p1, 0.0),
            ],
        );
        DensityOperator::from_trusted(m)
    }
}

/// `V·coords·V†` as a validated density operator on `n = dim(coords) − 1` qubits.
pub fn embed_dicke(coords: &ComplexMatrix) -> Result<DensityOperator> {
    let state = DickeState::new(coords.clone())?;
    check_full_range(state.n_qubits())?;
    state.embed()
}

/// `V†ρV` for a full-space operator with symmetric support (tolerance 1e-10).
pub fn project_dicke(rho: &DensityOperator) -> Result<ComplexMatrix> {
    Ok(DickeState::from_full(rho, 1e-10)?.coords)
}

/// Random symmetric state with Ginibre-distributed Dicke coordinates.
pub fn random_symmetric_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DickeState> {
    check_dicke_range(n)?;
    let d = n + 1;
    let g = ComplexMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let w = &g * g.adjoint();
    let tr = trace(&w).re;
    Ok(DickeState::from_trusted(hermitize(&w.scale(1.0 / tr))))
}

/// Signed decomposition `Σ_i α_i |ψ_i⟩⟨ψ_i|^{⊗n}` with `Σ_i α_i = 1`.
///
/// Weights may be negative.
#[derive(Debug, Clone)]
pub struct PseudoMixture {
    n_qubits: usize,
    terms: Vec<(f64, PureQubitState)>,
}

impl PseudoMixture {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PureQubitState)] {
        &self.terms
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|(w, _)| w).sum()
    }

    pub fn min_weight(&self) -> f64 {
        self.terms
            .iter()
            .map(|(w, _)| *w)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn negative_count(&self) -> usize {
        self.terms.iter().filter(|(w, _)| *w < 0.0).count()
    }

    /// `Σ_i α_i |ψ_i⟩⟨ψ_i|^{⊗n}` in Dicke coordinates.
    pub fn reconstruct_coords(&self) -> ComplexMatrix {
        let d = self.n_qubits + 1;
        let mut out = ComplexMatrix::zeros(d, d);
        for (w, psi) in &self.terms {
            let a = tensor_power_amplitudes(psi, self.n_qubits);
            out += (&a * a.adjoint()).scale(*w);
        }
        out
    }

    /// `Σ_i α_i |ψ_i⟩⟨ψ_i|^{⊗n}` on the full space.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        dicke_basis(self.n_qubits)?.embed(&self.reconstruct_coords())
    }

    /// Max-entry distance between the reconstruction and `rho`.
    pub fn reconstruction_error(&self, rho: &DensityOperator) -> Result<f64> {
        let r = self.reconstruct()?;
        if r.shape() != rho.matrix().shape() {
            return Err(Error::DimensionMismatch {
                expected: r.nrows(),
                found: rho.dim(),
            });
        }
        Ok(max_abs_diff(&r, rho.matrix()))
    }
}

/// The deterministic `(n+1)²`-state frame used by [`pseudo_mixture_decompose`]:
/// `n+1` polar rings equally spaced in `cos θ` and kept off the poles, each
/// carrying `n+1` equally spaced azimuths with a per-ring twist.
///
/// The twist keeps the linear system invertible; its smallest-to-largest
/// singular value ratio stays above 1e-4 for `n ≤ 10`.
pub fn pseudo_mixture_frame(n: usize) -> Vec<PureQubitState> {
    let rings = n + 1;
    let tau = std::f64::consts::TAU;
    let mut frame = Vec::with_capacity(rings * rings);
    for i in 0..rings {
        let theta = (1.0 - 2.0 * (i as f64 + 0.6) / (rings as f64 + 0.2)).acos();
        for j in 0..rings {
            let phi = tau * (j as f64 + 0.25 + 0.37 * i as f64) / rings as f64;
            frame.push(PureQubitState::from_angles(theta, phi));
        }
    }
    frame
}

/// Real coordinates of a Hermitian matrix in an orthonormal basis of the
/// real vector space of Hermitian matrices (Frobenius inner product).
fn hermitian_to_real(h: &ComplexMatrix) -> DVector<f64> {
    let d = h.nrows();
    let s2 = std::f64::consts::SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        out.push(h[(i, i)].re);
        for j in (i + 1)..d {
            out.push(s2 * h[(i, j)].re);
            out.push(s2 * h[(i, j)].im);
        }
    }
    DVector::from_vec(out)
}

/// Decomposes over a caller-supplied frame by least squares; the residual
/// must stay below 1e-9 (max-entry) for the decomposition to be returned.
pub fn decompose_over_frame(
    rho_n: &DensityOperator,
    frame: &[PureQubitState],
) -> Result<PseudoMixture> {
    let n = rho_n.n_qubits();
    let state = DickeState::from_full(rho_n, 1e-10)?;
    if frame.is_empty() {
        return Err(invalid("empty frame"));
    }
    let d = n + 1;
    let columns: Vec<DVector<f64>> = frame
        .iter()
        .map(|psi| {
            let a = tensor_power_amplitudes(psi, n);
            hermitian_to_real(&(&a * a.adjoint()))
        })
        .collect();
    let a = DMatrix::from_columns(&columns);
    let b = hermitian_to_real(state.coords());
    let svd = a.svd(true, true);
    let alpha = svd
        .solve(&b, 1e-12)
        .map_err(|e| Error::Internal(format!("frame least-squares solve failed: {e}")))?;

    let mixture = PseudoMixture {
        n_qubits: n,
        terms: alpha.iter().copied().zip(frame.iter().copied()).collect(),
    };
    let coord_residual = max_abs(&(mixture.reconstruct_coords() - state.coords()));
    // Full-space entries are bounded by d times the coordinate residual.
    if coord_residual * d as f64 >= 1e-9 {
        let full = mixture.reconstruction_error(rho_n)?;
        if full >= 1e-9 {
            return Err(Error::Internal(format!(
                "frame does not reproduce the operator (residual {full:e})"
            )));
        }
    }
    Ok(mixture)
}

/// Signed decomposition of a symmetric-support `ρ_N` into tensor-power pure
/// projectors over [`pseudo_mixture_frame`].
pub fn pseudo_mixture_decompose(rho_n: &DensityOperator) -> Result<PseudoMixture> {
    decompose_over_frame(rho_n, &pseudo_mixture_frame(rho_n.n_qubits()))
}

//! The universal N→M cloning channel.
//!
//! The channel maps an `N`-qubit state `ρ_N` supported on the symmetric
//! subspace to
//!
//! ```text
//! ρ_M = (d_N / d_M) · S_M (ρ_N ⊗ 1l^{⊗(M−N)}) S_M,    d_k = k + 1,
//! ```
//!
//! which is trace preserving on symmetric inputs and whose output is again
//! symmetric. Two evaluation paths exist: a full-space reference path on
//! `2^M`-dimensional matrices (`M ≤ 12`) and a Dicke-coordinate path on
//! `(M+1)`-dimensional matrices (`M ≤ 60`).

use crate::error::{invalid, Error, Result};
use crate::exec::{Exec, NeumaierSum};
use crate::linalg::{
    bloch_of, hermitian_deviation, hermitize, max_abs_diff, min_eigenvalue, partial_trace, trace,
    BlochVector, ComplexMatrix, DensityOperator, SeedStream,
};
use crate::symspace::{binomial, dicke_basis, symmetrizer, DickeState, MAX_DICKE_QUBITS};
use crate::{bounds, PHYSICS_TOL};
use num_complex::Complex64;

/// Largest output size for the full-space reference path.
pub const FULL_SPACE_MAX: usize = 12;
/// [`Representation::Auto`] uses the full space up to this many output qubits.
pub const AUTO_FULL_SPACE_MAX: usize = 8;
/// Shortest reduced input Bloch vector for which a shrinking factor is defined.
pub const MIN_BLOCH_LENGTH: f64 = 1e-6;
/// Largest allowed rotation between input and output Bloch vectors.
pub const ORIENTATION_TOL: f64 = PHYSICS_TOL;

/// Which representation a channel evaluation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representation {
    Full,
    Dicke,
    /// Full space when the output has at most [`AUTO_FULL_SPACE_MAX`] qubits.
    #[default]
    Auto,
}

impl Representation {
    fn use_full(self, m_out: usize) -> bool {
        match self {
            Representation::Full => true,
            Representation::Dicke => false,
            Representation::Auto => m_out <= AUTO_FULL_SPACE_MAX,
        }
    }
}

/// Descriptor of the N→M channel, `1 ≤ N ≤ M ≤ 60`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CloneChannel {
    n_in: usize,
    m_out: usize,
}

impl CloneChannel {
    pub fn new(n_in: usize, m_out: usize) -> Result<Self> {
        if n_in == 0 {
            return Err(invalid("a cloner needs at least one original"));
        }
        if m_out < n_in {
            return Err(invalid(format!(
                "cannot clone {n_in} originals into {m_out} < {n_in} copies"
            )));
        }
        if m_out > MAX_DICKE_QUBITS {
            return Err(invalid(format!(
                "output size {m_out} exceeds {MAX_DICKE_QUBITS}"
            )));
        }
        Ok(Self { n_in, m_out })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn m_out(&self) -> usize {
        self.m_out
    }

    /// Closed-form optimal shrinking factor for this `(N, M)`, from the exact ledger.
    pub fn predicted_eta(&self) -> f64 {
        bounds::to_f64(&bounds::eta_opt(self.n_in, self.m_out).expect("validated N ≤ M"))
    }

    fn scale(&self) -> f64 {
        (self.n_in + 1) as f64 / (self.m_out + 1) as f64
    }

    /// Full-space application. Requires `ρ_N` on `N` qubits with symmetric
    /// support (tolerance 1e-10) and `M ≤ 12`.
    pub fn apply(&self, rho_n: &DensityOperator) -> Result<DensityOperator> {
        let (n, m) = (self.n_in, self.m_out);
        if rho_n.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho_n.n_qubits(),
            });
        }
        if m > FULL_SPACE_MAX {
            return Err(invalid(format!(
                "full-space path supports up to {FULL_SPACE_MAX} output qubits, got {m}"
            )));
        }
        let residual = symmetrizer(n)?.residual(rho_n.matrix());
        if residual >= 1e-10 {
            return Err(Error::NotSymmetric { residual });
        }

        // Y = V_M† (ρ_N ⊗ 1l) V_M, using that (ρ_N ⊗ 1l) acts on the leading
        // N qubits of each Dicke column reshaped as a 2^N × 2^(M−N) block.
        let basis = dicke_basis(m)?;
        let v = basis.isometry();
        let hi_dim = 1usize << n;
        let lo_dim = 1usize << (m - n);
        let d = m + 1;
        let blocks = ComplexMatrix::from_fn(hi_dim, lo_dim * d, |hi, col| {
            let (k, lo) = (col / lo_dim, col % lo_dim);
            v[(hi * lo_dim + lo, k)]
        });
        let acted = rho_n.matrix() * &blocks;
        let mut y = ComplexMatrix::zeros(d, d);
        for j in 0..d {
            for k in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for hi in 0..hi_dim {
                    for lo in 0..lo_dim {
                        acc += v[(hi * lo_dim + lo, j)].conj() * acted[(hi, k * lo_dim + lo)];
                    }
                }
                y[(j, k)] = acc * self.scale();
            }
        }
        let y = checked_output_coords(y)?;
        Ok(DensityOperator::from_trusted(hermitize(&basis.embed(&y)?)))
    }

    /// Dicke-coordinate application, `M ≤ 60`.
    ///
    /// `Y_jk = (d_N/d_M) Σ_r R_{j−r,k−r} c(j, j−r) c(k, k−r)` with
    /// `c(k, b) = √(C(N,b) C(M−N,k−b) / C(M,k))`, the overlap of `|D^M_k⟩`
    /// with `|D^N_b⟩|D^{M−N}_{k−b}⟩`.
    pub fn apply_dicke(&self, state: &DickeState) -> Result<DickeState> {
        let (n, m) = (self.n_in, self.m_out);
        if state.n_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: state.n_qubits(),
            });
        }
        let c = |k: usize, b: usize| -> f64 {
            (binomial(n, b) * binomial(m - n, k - b) / binomial(m, k)).sqrt()
        };
        let r_coords = state.coords();
        let d = m + 1;
        let mut y = ComplexMatrix::zeros(d, d);
        for j in 0..d {
            for k in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..=(m - n) {
                    if r > j || r > k || j - r > n || k - r > n {
                        continue;
                    }
                    let (a, b) = (j - r, k - r);
                    acc += r_coords[(a, b)] * (c(j, a) * c(k, b));
                }
                y[(j, k)] = acc * self.scale();
            }
        }
        Ok(DickeState::from_trusted(checked_output_coords(y)?))
    }
}

/// Trace, Hermiticity (before symmetrization) and positivity checks on
/// output Dicke coordinates.
fn checked_output_coords(y: ComplexMatrix) -> Result<ComplexMatrix> {
    let dev = hermitian_deviation(&y);
    if dev >= 1e-10 {
        return Err(Error::Internal(format!(
            "channel output drifted from Hermitian by {dev:e}"
        )));
    }
    let y = hermitize(&y);
    let tr = trace(&y);
    if (tr - Complex64::new(1.0, 0.0)).norm() >= 1e-10 {
        return Err(Error::Internal(format!("channel output has trace {tr}")));
    }
    let min = min_eigenvalue(&y);
    if min < crate::POSITIVITY_TOL {
        return Err(Error::Internal(format!(
            "channel output has eigenvalue {min:e}"
        )));
    }
    Ok(y)
}

/// All single-qubit reductions of an `n`-qubit operator, qubit 0 first.
pub fn single_qubit_reductions(rho: &DensityOperator) -> Result<Vec<DensityOperator>> {
    (0..rho.n_qubits())
        .map(|q| partial_trace(rho, &[q]))
        .collect()
}

/// Result of running a channel on one or more inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneReport {
    pub n_in: usize,
    pub m_out: usize,
    /// Mean over inputs of `|s⃗_out| / |s⃗_in|`.
    pub eta_measured: f64,
    pub eta_predicted: f64,
    /// Mean over inputs of `½(1 + s⃗_out·ŝ_in)`; equals `⟨ψ|ρ_out|ψ⟩` on
    /// pure tensor-power inputs.
    pub fidelity_measured: f64,
    /// `max − min` of the per-input shrinking factors.
    pub universality_spread: f64,
    /// Largest angle between input and output Bloch vectors (radians).
    pub orientation_deviation: f64,
    /// Largest `‖(1−S_M)ρ_out‖_max` seen (0 on the Dicke path).
    pub output_symmetric_residual: f64,
    /// Largest `|Tr ρ_out − 1|`.
    pub trace_error: f64,
    /// Smallest eigenvalue seen on any output.
    pub min_eigenvalue: f64,
    /// Largest disagreement between the single-qubit reductions of one output
    /// (0 on the Dicke path, where all reductions coincide by construction).
    pub reduction_spread: f64,
    pub samples: usize,
}

struct Shrink {
    eta: f64,
    angle: f64,
    fidelity: f64,
}

fn shrink(s_in: &BlochVector, s_out: &BlochVector) -> Result<Shrink> {
    let len_in = s_in.norm();
    if len_in < MIN_BLOCH_LENGTH {
        return Err(Error::DegenerateInput {
            length: len_in,
            threshold: MIN_BLOCH_LENGTH,
        });
    }
    let angle = s_out.angle_to(s_in);
    if angle > ORIENTATION_TOL {
        return Err(Error::Orientation { angle });
    }
    Ok(Shrink {
        eta: s_out.norm() / len_in,
        angle,
        fidelity: 0.5 * (1.0 + s_out.dot(s_in) / len_in),
    })
}

struct Sample {
    shrink: Shrink,
    residual: f64,
    trace_error: f64,
    min_eigenvalue: f64,
    reduction_spread: f64,
}

fn sample_full(ch: &CloneChannel, rho_n: &DensityOperator) -> Result<Sample> {
    let s_in = bloch_of(&partial_trace(rho_n, &[0])?)?;
    if s_in.norm() < MIN_BLOCH_LENGTH {
        return Err(Error::DegenerateInput {
            length: s_in.norm(),
            threshold: MIN_BLOCH_LENGTH,
        });
    }
    let out = ch.apply(rho_n)?;
    let reductions = single_qubit_reductions(&out)?;
    let s_out = bloch_of(&reductions[0])?;
    let reduction_spread = reductions
        .iter()
        .map(|r| max_abs_diff(r.matrix(), reductions[0].matrix()))
        .fold(0.0, f64::max);
    Ok(Sample {
        shrink: shrink(&s_in, &s_out)?,
        residual: symmetrizer(ch.m_out)?.residual(out.matrix()),
        trace_error: (out.trace() - Complex64::new(1.0, 0.0)).norm(),
        min_eigenvalue: out.min_eigenvalue(),
        reduction_spread,
    })
}

fn sample_dicke(ch: &CloneChannel, state: &DickeState) -> Result<Sample> {
    let s_in = bloch_of(&state.reduced_qubit())?;
    if s_in.norm() < MIN_BLOCH_LENGTH {
        return Err(Error::DegenerateInput {
            length: s_in.norm(),
            threshold: MIN_BLOCH_LENGTH,
        });
    }
    let out = ch.apply_dicke(state)?;
    let s_out = bloch_of(&out.reduced_qubit())?;
    Ok(Sample {
        shrink: shrink(&s_in, &s_out)?,
        residual: 0.0,
        trace_error: (out.trace() - Complex64::new(1.0, 0.0)).norm(),
        min_eigenvalue: out.min_eigenvalue(),
        reduction_spread: 0.0,
    })
}

fn aggregate(ch: &CloneChannel, samples: &[Sample]) -> CloneReport {
    let etas = samples.iter().map(|s| s.shrink.eta);
    let eta_max = etas.clone().fold(f64::NEG_INFINITY, f64::max);
    let eta_min = etas.clone().fold(f64::INFINITY, f64::min);
    let n = samples.len() as f64;
    let max_of = |f: &dyn Fn(&Sample) -> f64| samples.iter().map(f).fold(0.0, f64::max);
    CloneReport {
        n_in: ch.n_in,
        m_out: ch.m_out,
        eta_measured: etas.collect::<NeumaierSum>().value() / n,
        eta_predicted: ch.predicted_eta(),
        fidelity_measured: samples
            .iter()
            .map(|s| s.shrink.fidelity)
            .collect::<NeumaierSum>()
            .value()
            / n,
        universality_spread: eta_max - eta_min,
        orientation_deviation: max_of(&|s| s.shrink.angle),
        output_symmetric_residual: max_of(&|s| s.residual),
        trace_error: max_of(&|s| s.trace_error),
        min_eigenvalue: samples
            .iter()
            .map(|s| s.min_eigenvalue)
            .fold(f64::INFINITY, f64::min),
        reduction_spread: max_of(&|s| s.reduction_spread),
        samples: samples.len(),
    }
}

/// Shrinking factor of one input, measured through the single-qubit
/// reductions: `η = |s⃗_out| / |s⃗_in|`, with `s⃗_out ∥ s⃗_in` enforced.
///
/// Fails with [`Error::DegenerateInput`] when the reduced input Bloch vector
/// is shorter than 1e-6.
pub fn measure_shrinking(ch: &CloneChannel, rho_n: &DensityOperator) -> Result<CloneReport> {
    measure_shrinking_with(ch, rho_n, Representation::Auto)
}

pub fn measure_shrinking_with(
    ch: &CloneChannel,
    rho_n: &DensityOperator,
    repr: Representation,
) -> Result<CloneReport> {
    let sample = if repr.use_full(ch.m_out) {
        sample_full(ch, rho_n)?
    } else {
        sample_dicke(ch, &DickeState::from_full(rho_n, 1e-10)?)?
    };
    Ok(aggregate(ch, &[sample]))
}

/// [`measure_shrinking`] for an input given in Dicke coordinates.
pub fn measure_shrinking_dicke(ch: &CloneChannel, state: &DickeState) -> Result<CloneReport> {
    Ok(aggregate(ch, &[sample_dicke(ch, state)?]))
}

/// Runs the channel on `n_samples` Haar-random tensor-power inputs drawn
/// from `seed` and reports the spread of the shrinking factor across them.
pub fn certify_universality(ch: &CloneChannel, n_samples: usize, seed: u64) -> Result<CloneReport> {
    certify_universality_with(ch, n_samples, seed, Representation::Auto, Exec::default())
}

pub fn certify_universality_with(
    ch: &CloneChannel,
    n_samples: usize,
    seed: u64,
    repr: Representation,
    exec: Exec,
) -> Result<CloneReport> {
    if n_samples < 2 {
        return Err(invalid(
            "universality certification needs at least 2 samples",
        ));
    }
    let seeds = SeedStream::new(seed);
    let full = repr.use_full(ch.m_out);
    let samples: Vec<Sample> = exec
        .map(n_samples, |i| {
            let psi = crate::linalg::haar_random_pure(&mut seeds.rng(i as u64));
            if full {
                sample_full(ch, &DensityOperator::tensor_power(&psi, ch.n_in))
            } else {
                sample_dicke(ch, &DickeState::tensor_power(&psi, ch.n_in)?)
            }
        })
        .into_iter()
        .collect::<Result<_>>()?;
    Ok(aggregate(ch, &samples))
}

/// `second ∘ first` applied to `ρ_N` on the full space.
pub fn concat_channels(
    first: &CloneChannel,
    second: &CloneChannel,
    rho_n: &DensityOperator,
) -> Result<DensityOperator> {
    if first.m_out != second.n_in {
        return Err(Error::DimensionMismatch {
            expected: first.m_out,
            found: second.n_in,
        });
    }
    second.apply(&first.apply(rho_n)?)
}

/// Stagewise and end-to-end shrinking factors of a two-stage chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcatReport {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    /// `η(N,M)` measured on the input.
    pub eta_first: f64,
    /// `η(M,L)` measured on the (mixed, symmetric) intermediate state.
    pub eta_second: f64,
    /// `η(N,L)` measured from the input to the final output.
    pub eta_end_to_end: f64,
    /// `η(N,L)` of the direct N→L channel on the same input.
    pub eta_direct: f64,
}

impl ConcatReport {
    /// `|η_end_to_end − η_first·η_second|`.
    pub fn product_deviation(&self) -> f64 {
        (self.eta_end_to_end - self.eta_first * self.eta_second).abs()
    }

    /// `|η_end_to_end − η_direct|`.
    pub fn direct_deviation(&self) -> f64 {
        (self.eta_end_to_end - self.eta_direct).abs()
    }
}

/// Measures every factor of the chain N→M→L on one symmetric input.
pub fn measure_concatenation(
    first: &CloneChannel,
    second: &CloneChannel,
    input: &DickeState,
    repr: Representation,
) -> Result<ConcatReport> {
    if first.m_out != second.n_in {
        return Err(Error::DimensionMismatch {
            expected: first.m_out,
            found: second.n_in,
        });
    }
    let direct = CloneChannel::new(first.n_in, second.m_out)?;
    let s_in = bloch_of(&input.reduced_qubit())?;
    let (s_mid, s_out, s_direct) = if repr.use_full(second.m_out) {
        let rho = input.embed()?;
        let mid = first.apply(&rho)?;
        let out = second.apply(&mid)?;
        let dir = direct.apply(&rho)?;
        (
            bloch_of(&partial_trace(&mid, &[0])?)?,
            bloch_of(&partial_trace(&out, &[0])?)?,
            bloch_of(&partial_trace(&dir, &[0])?)?,
        )
    } else {
        let mid = first.apply_dicke(input)?;
        let out = second.apply_dicke(&mid)?;
        let dir = direct.apply_dicke(input)?;
        (
            bloch_of(&mid.reduced_qubit())?,
            bloch_of(&out.reduced_qubit())?,
            bloch_of(&dir.reduced_qubit())?,
        )
    };
    Ok(ConcatReport {
        n: first.n_in,
        m: first.m_out,
        l: second.m_out,
        eta_first: shrink(&s_in, &s_mid)?.eta,
        eta_second: shrink(&s_mid, &s_out)?.eta,
        eta_end_to_end: shrink(&s_in, &s_out)?.eta,
        eta_direct: shrink(&s_in, &s_direct)?.eta,
    })
}

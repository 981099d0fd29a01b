//! Optimal universal state estimation on `M` copies.
//!
//! The measurement is the continuous covariant family
//! `P_φ = (M+1) |φ⟩⟨φ|^{⊗M} dμ(φ)` on the symmetric subspace, with `μ` the
//! Haar measure on pure qubit states. Outcome densities are evaluated
//! either by an exact product quadrature ([`SphereRule`]) or by Monte Carlo
//! rejection sampling of candidate states.
//!
//! Measuring and then preparing the candidate realizes a channel from `M`
//! qubits to one qubit, [`measure_and_prepare_channel`]. Preparing many
//! copies of the candidate does not change the single-copy reduction, so
//! this operator also stands for the output of the `M → ∞` cloner.

mod quadrature;

pub use quadrature::{gauss_legendre, SphereNode, SphereRule};

use num_complex::Complex64;
use rand::Rng;

use crate::bounds;
use crate::cloner::CloneChannel;
use crate::error::{invalid, Error, Result};
use crate::exec::{Exec, NeumaierSum};
use crate::linalg::{
    bloch_of, haar_random_pure, pure_fidelity, ComplexMatrix, DensityOperator, PureQubitState,
    SeedStream,
};
use crate::symspace::{tensor_power_amplitudes, DickeState, MAX_DICKE_QUBITS};

/// Largest copy number for [`estimation_fidelity_exact`].
pub const EXACT_MAX_COPIES: usize = 20;
/// Largest copy number for full-space inputs and Monte Carlo estimation.
pub const FULL_SPACE_MAX_COPIES: usize = 12;
/// Proposal budget per Monte Carlo shot before giving up.
pub const MAX_PROPOSALS_PER_SHOT: u64 = 1 << 24;

/// How an estimation report was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimationMode {
    ExactQuadrature {
        polar_nodes: usize,
        azimuth_nodes: usize,
    },
    MonteCarlo {
        shots: usize,
        seed: u64,
        /// Haar proposals drawn in total (accepted and rejected).
        proposals: u64,
    },
}

/// The covariant POVM on `M` copies, evaluated with an exact sphere rule.
#[derive(Debug, Clone)]
pub struct CovariantPovm {
    m_copies: usize,
    rule: SphereRule,
}

impl CovariantPovm {
    pub fn new(m_copies: usize) -> Result<Self> {
        if m_copies == 0 || m_copies > MAX_DICKE_QUBITS {
            return Err(invalid(format!(
                "copy number {m_copies} outside 1..={MAX_DICKE_QUBITS}"
            )));
        }
        Ok(Self {
            m_copies,
            rule: SphereRule::for_copies(m_copies),
        })
    }

    /// The same POVM integrated with a caller-chosen rule.
    pub fn with_rule(m_copies: usize, rule: SphereRule) -> Result<Self> {
        let mut p = Self::new(m_copies)?;
        p.rule = rule;
        Ok(p)
    }

    pub fn m_copies(&self) -> usize {
        self.m_copies
    }

    pub fn rule(&self) -> &SphereRule {
        &self.rule
    }

    pub fn mode(&self) -> EstimationMode {
        EstimationMode::ExactQuadrature {
            polar_nodes: self.rule.polar_nodes(),
            azimuth_nodes: self.rule.azimuth_nodes(),
        }
    }

    /// Outcome density `Tr(P_φ ρ_M) = (M+1) ⟨φ^{⊗M}|ρ_M|φ^{⊗M}⟩` with respect to `μ`.
    pub fn outcome_density(&self, phi: &PureQubitState, state: &DickeState) -> f64 {
        let a = tensor_power_amplitudes(phi, self.m_copies);
        let v = a.adjoint() * state.coords() * &a;
        (self.m_copies + 1) as f64 * v[(0, 0)].re
    }

    /// `∫ P_φ dμ(φ)` in Dicke coordinates; the identity for a complete POVM.
    pub fn completeness(&self, exec: Exec) -> ComplexMatrix {
        let m = self.m_copies;
        let d = m + 1;
        let mut out = ComplexMatrix::zeros(d, d);
        // One pass per row keeps the integrand a fixed-size array.
        for j in 0..d {
            let row: Vec<[f64; 2]> = (0..d)
                .map(|k| {
                    self.rule.integrate(exec, |phi| {
                        let a = tensor_power_amplitudes(phi, m);
                        let e = a[j] * a[k].conj() * (m + 1) as f64;
                        [e.re, e.im]
                    })
                })
                .collect();
            for (k, [re, im]) in row.into_iter().enumerate() {
                out[(j, k)] = Complex64::new(re, im);
            }
        }
        out
    }

    /// `ρ̄ = ∫ dμ(φ) Tr(P_φ ρ_M) |φ⟩⟨φ|`.
    pub fn reconstruct(&self, state: &DickeState, exec: Exec) -> Result<DensityOperator> {
        if state.n_qubits() != self.m_copies {
            return Err(Error::DimensionMismatch {
                expected: self.m_copies,
                found: state.n_qubits(),
            });
        }
        let [p00, p11, re01, im01] = self.rule.integrate(exec, |phi| {
            let p = self.outcome_density(phi, state);
            let (a, b) = phi.amplitudes();
            let off = a * b.conj();
            [p * a.norm_sqr(), p * b.norm_sqr(), p * off.re, p * off.im]
        });
        let off = Complex64::new(re01, im01);
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(p00, 0.0),
                off,
                off.conj(),
                Complex64::new(p11, 0.0),
            ],
        );
        let tr = p00 + p11;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::Internal(format!("reconstruction has trace {tr}")));
        }
        DensityOperator::new(m.scale(1.0 / tr))
    }
}

/// Outcome of an `M`-copy estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub m_copies: usize,
    pub fidelity_measured: f64,
    /// `(M+1)/(M+2)`.
    pub fidelity_predicted: f64,
    /// `2F − 1`.
    pub eta_measured: f64,
    /// `M/(M+2)`.
    pub eta_predicted: f64,
    /// Average candidate projector.
    pub rho_bar: DensityOperator,
    pub mode: EstimationMode,
    /// Standard error of the fidelity mean; 0 for quadrature.
    pub statistical_error: f64,
}

fn predicted(m: usize) -> (f64, f64) {
    (
        bounds::to_f64(&bounds::fidelity_meas_opt(m).expect("m ≥ 1")),
        bounds::to_f64(&bounds::eta_meas_opt(m).expect("m ≥ 1")),
    )
}

/// Exact average fidelity of the covariant measurement on `|ψ⟩^{⊗M}`,
/// `1 ≤ M ≤ 20`:
/// `F̄ = ∫ dμ(φ) (M+1) |⟨ψ|φ⟩|^{2M} |⟨φ|ψ⟩|² = ⟨ψ|ρ̄|ψ⟩`.
pub fn estimation_fidelity_exact(m: usize, psi: &PureQubitState) -> Result<EstimationReport> {
    estimation_fidelity_exact_with(m, psi, Exec::default())
}

pub fn estimation_fidelity_exact_with(
    m: usize,
    psi: &PureQubitState,
    exec: Exec,
) -> Result<EstimationReport> {
    if m == 0 || m > EXACT_MAX_COPIES {
        return Err(invalid(format!(
            "copy number {m} outside 1..={EXACT_MAX_COPIES}"
        )));
    }
    let povm = CovariantPovm::new(m)?;
    let rho_bar = povm.reconstruct(&DickeState::tensor_power(psi, m)?, exec)?;
    let fidelity = pure_fidelity(psi, &rho_bar)?;
    let (fidelity_predicted, eta_predicted) = predicted(m);
    Ok(EstimationReport {
        m_copies: m,
        fidelity_measured: fidelity,
        fidelity_predicted,
        eta_measured: 2.0 * fidelity - 1.0,
        eta_predicted,
        rho_bar,
        mode: povm.mode(),
        statistical_error: 0.0,
    })
}

/// Draws one candidate from `p(φ|ψ) ∝ (M+1)|⟨φ|ψ⟩|^{2M}` by rejection
/// against Haar proposals with envelope `M+1`. Returns the candidate and
/// the number of proposals used.
pub fn sample_candidate<R: Rng + ?Sized>(
    m: usize,
    psi: &PureQubitState,
    rng: &mut R,
) -> Option<(PureQubitState, u64)> {
    for proposals in 1..=MAX_PROPOSALS_PER_SHOT {
        let phi = haar_random_pure(rng);
        let accept = psi.overlap(&phi).powi(m as i32);
        if rng.gen::<f64>() < accept {
            return Some((phi, proposals));
        }
    }
    None
}

/// Monte Carlo estimation: `n_shots` candidates, shot `i` drawn from
/// stream `i` of `seed`.
pub fn estimate_monte_carlo(
    m: usize,
    psi: &PureQubitState,
    n_shots: usize,
    seed: u64,
) -> Result<EstimationReport> {
    estimate_monte_carlo_with(m, psi, n_shots, seed, Exec::default())
}

pub fn estimate_monte_carlo_with(
    m: usize,
    psi: &PureQubitState,
    n_shots: usize,
    seed: u64,
    exec: Exec,
) -> Result<EstimationReport> {
    if m == 0 || m > FULL_SPACE_MAX_COPIES {
        return Err(invalid(format!(
            "copy number {m} outside 1..={FULL_SPACE_MAX_COPIES}"
        )));
    }
    if n_shots == 0 {
        return Err(invalid("Monte Carlo estimation needs at least one shot"));
    }
    let seeds = SeedStream::new(seed);
    let draws = exec.map(n_shots, |i| {
        sample_candidate(m, psi, &mut seeds.rng(i as u64))
    });
    let draws: Vec<(PureQubitState, u64)> = draws
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Internal("a shot accepted no candidate".into()))?;

    let n = n_shots as f64;
    let fids: Vec<f64> = draws.iter().map(|(phi, _)| psi.overlap(phi)).collect();
    let mean = fids.iter().copied().collect::<NeumaierSum>().value() / n;
    let var = if n_shots > 1 {
        fids.iter()
            .map(|f| (f - mean).powi(2))
            .collect::<NeumaierSum>()
            .value()
            / (n - 1.0)
    } else {
        0.0
    };

    let mut acc = [NeumaierSum::new(); 4];
    for (phi, _) in &draws {
        let (a, b) = phi.amplitudes();
        let off = a * b.conj();
        for (s, x) in acc
            .iter_mut()
            .zip([a.norm_sqr(), b.norm_sqr(), off.re, off.im])
        {
            s.add(x);
        }
    }
    let [p00, p11, re01, im01] = acc.map(|s| s.value() / n);
    let off = Complex64::new(re01, im01);
    let tr = p00 + p11;
    let rho_bar = DensityOperator::new(
        ComplexMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(p00, 0.0),
                off,
                off.conj(),
                Complex64::new(p11, 0.0),
            ],
        )
        .scale(1.0 / tr),
    )?;
    let (fidelity_predicted, eta_predicted) = predicted(m);
    Ok(EstimationReport {
        m_copies: m,
        fidelity_measured: mean,
        fidelity_predicted,
        eta_measured: 2.0 * mean - 1.0,
        eta_predicted,
        rho_bar,
        mode: EstimationMode::MonteCarlo {
            shots: n_shots,
            seed,
            proposals: draws.iter().map(|(_, p)| p).sum(),
        },
        statistical_error: (var / n).sqrt(),
    })
}

/// Measure `M` symmetric qubits with the covariant POVM and prepare the
/// candidate: returns `ρ̄ = ∫ dμ(φ) Tr(P_φ ρ_M) |φ⟩⟨φ|`. `M ≤ 12`.
pub fn measure_and_prepare_channel(m: usize, rho_m: &DensityOperator) -> Result<DensityOperator> {
    measure_and_prepare_channel_with(m, rho_m, Exec::default())
}

pub fn measure_and_prepare_channel_with(
    m: usize,
    rho_m: &DensityOperator,
    exec: Exec,
) -> Result<DensityOperator> {
    if m == 0 || m > FULL_SPACE_MAX_COPIES {
        return Err(invalid(format!(
            "copy number {m} outside 1..={FULL_SPACE_MAX_COPIES}"
        )));
    }
    if rho_m.n_qubits() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: rho_m.n_qubits(),
        });
    }
    let state = DickeState::from_full(rho_m, 1e-10)?;
    CovariantPovm::new(m)?.reconstruct(&state, exec)
}

/// [`measure_and_prepare_channel`] on Dicke coordinates, `M ≤ 60`.
pub fn measure_and_prepare_dicke(state: &DickeState, exec: Exec) -> Result<DensityOperator> {
    CovariantPovm::new(state.n_qubits())?.reconstruct(state, exec)
}

/// One row of [`verify_composition`]: the chain `M → L' → estimate`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionRow {
    pub l: usize,
    /// `⟨ψ|ρ̄|ψ⟩` after cloning to `L'` copies and estimating on them.
    pub composed_fidelity: f64,
    /// `½(1 + η(M,L')·η̄(L'))` from the exact ledger.
    pub predicted_fidelity: f64,
}

/// Numerical check that an `M → L` cloner followed by optimal estimation on
/// `L` qubits is exactly as good as optimal estimation on `M` qubits, and
/// that the cloner's shrinking factor tends to the estimation factor as
/// `L → ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionReport {
    pub m: usize,
    pub l: usize,
    /// Every `L'` in `M..=L`.
    pub rows: Vec<CompositionRow>,
    /// `F̄(M)` by exact quadrature on `|ψ⟩^{⊗M}`.
    pub estimation_fidelity: f64,
    /// `η̄(M) = 2F̄(M) − 1`.
    pub estimation_eta: f64,
    /// `η(M, ∞)` by Richardson extrapolation of the simulated `η(M, L')`
    /// from `L' ∈` [`EXTRAPOLATION_POINTS`] under the model `a + b/L'`.
    pub extrapolated_eta: f64,
    /// `½(1 + extrapolated_eta)`.
    pub limit_fidelity: f64,
}

/// Output sizes at which the cloner's shrinking factor is sampled for the
/// `L → ∞` extrapolation (Dicke path).
pub const EXTRAPOLATION_POINTS: [usize; 2] = [30, 60];

impl CompositionReport {
    /// `max |composed − predicted|` over rows.
    pub fn max_prediction_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.composed_fidelity - r.predicted_fidelity).abs())
            .fold(0.0, f64::max)
    }

    /// `max |composed − F̄(M)|` over rows: zero when the chain telescopes.
    pub fn max_telescoping_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| (r.composed_fidelity - self.estimation_fidelity).abs())
            .fold(0.0, f64::max)
    }

    /// `|η(M,∞) − η̄(M)|`.
    pub fn limit_error(&self) -> f64 {
        (self.extrapolated_eta - self.estimation_eta).abs()
    }
}

/// A fixed generic input (Bloch direction off every axis).
pub fn reference_state() -> PureQubitState {
    PureQubitState::from_angles(1.1, 0.7)
}

/// [`verify_composition_with`] on [`reference_state`].
pub fn verify_composition(m: usize, l: usize) -> Result<CompositionReport> {
    verify_composition_with(m, l, &reference_state(), Exec::default())
}

/// Composes the full-space cloner `M → L'` with [`measure_and_prepare_channel`]
/// on `L'` qubits for every `M ≤ L' ≤ L` (`L ≤ 10`).
pub fn verify_composition_with(
    m: usize,
    l: usize,
    psi: &PureQubitState,
    exec: Exec,
) -> Result<CompositionReport> {
    if m == 0 || m > l || l > 10 {
        return Err(invalid(format!(
            "need 1 ≤ M ≤ L ≤ 10, got M = {m}, L = {l}"
        )));
    }
    let input = DensityOperator::tensor_power(psi, m);
    let rows: Vec<CompositionRow> = (m..=l)
        .map(|lp| {
            let cloned = CloneChannel::new(m, lp)?.apply(&input)?;
            let rho_bar = measure_and_prepare_channel_with(lp, &cloned, exec)?;
            let predicted = (bounds::eta_opt(m, lp)? * bounds::eta_meas_opt(lp)?
                + bounds::Rational::from_integer(1.into()))
                / bounds::Rational::from_integer(2.into());
            Ok(CompositionRow {
                l: lp,
                composed_fidelity: pure_fidelity(psi, &rho_bar)?,
                predicted_fidelity: bounds::to_f64(&predicted),
            })
        })
        .collect::<Result<_>>()?;

    let estimation = estimation_fidelity_exact_with(m, psi, exec)?;

    let dicke_input = DickeState::tensor_power(psi, m)?;
    let s_in = psi.bloch();
    let etas: Vec<f64> = EXTRAPOLATION_POINTS
        .iter()
        .map(|&lp| {
            let out = CloneChannel::new(m, lp)?.apply_dicke(&dicke_input)?;
            Ok(bloch_of(&out.reduced_qubit())?.norm() / s_in.norm())
        })
        .collect::<Result<_>>()?;
    let (l1, l2) = (
        EXTRAPOLATION_POINTS[0] as f64,
        EXTRAPOLATION_POINTS[1] as f64,
    );
    let extrapolated_eta = (l2 * etas[1] - l1 * etas[0]) / (l2 - l1);

    Ok(CompositionReport {
        m,
        l,
        rows,
        estimation_fidelity: estimation.fidelity_measured,
        estimation_eta: estimation.eta_measured,
        extrapolated_eta,
        limit_fidelity: 0.5 * (1.0 + extrapolated_eta),
    })
}

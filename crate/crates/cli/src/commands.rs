use qclone::bounds::{self, Rational};
use qclone::cloner::{
    certify_universality_with, measure_concatenation, measure_shrinking_with,
    single_qubit_reductions, CloneChannel, CloneReport, Representation, AUTO_FULL_SPACE_MAX,
};
use qclone::estimator::{
    estimate_monte_carlo, estimation_fidelity_exact, measure_and_prepare_dicke, reference_state,
    verify_composition, CovariantPovm, EXACT_MAX_COPIES, FULL_SPACE_MAX_COPIES,
};
use qclone::linalg::{
    bloch_of, haar_random_pure, max_abs_diff, BlochVector, ComplexMatrix, DensityOperator,
    SeedStream,
};
use qclone::symspace::{pseudo_mixture_decompose, random_symmetric_state, symmetrizer, DickeState};
use qclone::{Exec, Result};
use serde::Serialize;

use crate::report::{Check, Relation, Row, Section};

/// Reduced Bloch length below which a random mixed input is redrawn.
pub const MIN_MIXED_BLOCH: f64 = 0.1;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Shrinking factors, cloning fidelities, Bloch-vector components.
    pub physics: f64,
    /// Estimation and composition fidelities.
    pub estimation: f64,
    /// Trace preservation.
    pub trace: f64,
    /// Lowest accepted output eigenvalue is `−positivity`.
    pub positivity: f64,
    /// Symmetric-support residual and spread of single-qubit reductions.
    pub support: f64,
    /// Monte Carlo agreement, in standard errors.
    pub mc_sigmas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            physics: 1e-9,
            estimation: 1e-8,
            trace: 1e-12,
            positivity: 1e-10,
            support: 1e-11,
            mc_sigmas: 4.0,
        }
    }
}

fn some3(n: usize, m: usize, l: usize) -> (Option<usize>, Option<usize>, Option<usize>) {
    (Some(n), Some(m), Some(l))
}

fn at(c: Check, n: Option<usize>, m: Option<usize>, l: Option<usize>) -> Check {
    c.at(n, m, l)
}

fn bloch_max_diff(a: &BlochVector, b: &BlochVector) -> f64 {
    a.max_abs_diff(b)
}

/// Random symmetric mixed state whose reduced Bloch vector is long enough
/// for a meaningful ratio.
fn mixed_input(n: usize, seeds: &SeedStream, index: u64) -> Result<DickeState> {
    let family = seeds.fork(index);
    for j in 0.. {
        let s = random_symmetric_state(n, &mut family.rng(j))?;
        if bloch_of(&s.reduced_qubit())?.norm() >= MIN_MIXED_BLOCH {
            return Ok(s);
        }
    }
    unreachable!()
}

fn cell_seed(seeds: &SeedStream, n: usize, m: usize, l: usize) -> SeedStream {
    seeds.fork(((n as u64) << 32) | ((m as u64) << 16) | l as u64)
}

// ---------------------------------------------------------------- bounds

fn identity_relation(name: &str) -> Relation {
    match name {
        "concatenation-bound" | "measurement-below-cloning" | "limit-decay" => Relation::Ge,
        _ => Relation::Eq,
    }
}

pub fn bounds_cell(n: usize, m: usize, l: usize) -> Result<Section> {
    let rep = bounds::check_identities(n, m, l)?;
    let (sn, sm, sl) = some3(n, m, l);
    let mut sec = Section::default();
    sec.row(
        Row::new("bounds")
            .set("n", n)
            .set("m", m)
            .set("l", l)
            .exact("eta", &rep.eta_opt)
            .exact("fidelity", &rep.fidelity_opt)
            .exact("eta_estimation", &rep.eta_meas_opt)
            .exact("fidelity_estimation", &rep.fidelity_meas_opt),
    );
    for c in &rep.checks {
        sec.check(at(
            Check::exact_identity(c.name, c.name, &c.slack, c.holds, identity_relation(c.name)),
            sn,
            sm,
            sl,
        ));
    }
    let unit = Rational::from_integer(0.into());
    sec.check(at(
        Check::exact_identity(
            "values-in-unit-interval",
            "optimal-shrinking-factor",
            &unit,
            rep.values_in_unit_interval(),
            Relation::Eq,
        ),
        sn,
        sm,
        sl,
    ));
    Ok(sec)
}

/// Exhaustive exact checks over `N ≤ M ≤ L ≤ max`.
pub fn exact_grids(max: usize) -> Section {
    let mut sec = Section::default();
    let grids = [
        (
            "multiplicativity-grid",
            "concatenation-multiplicativity",
            bounds::multiplicativity_grid(max, Exec::default()),
        ),
        (
            "monotonicity-grid",
            "shrinking-monotonicity",
            bounds::monotonicity_grid(max),
        ),
        (
            "measurement-below-cloning-grid",
            "measurement-below-cloning",
            bounds::measurement_below_cloning_grid(max),
        ),
    ];
    for (name, anchor, g) in grids {
        sec.row(
            Row::new("exact-grid")
                .set("name", name)
                .set("max", max)
                .set("checked", g.checked)
                .set("failures", g.failures.len()),
        );
        let mut c = Check::new(
            name,
            anchor,
            0.0,
            g.failures.len() as f64,
            Relation::Eq,
            0.0,
        );
        c.expected_exact = Some("0".into());
        sec.check(c);
    }
    sec
}

// ----------------------------------------------------------------- clone

struct Sanity {
    trace_error: f64,
    min_eigenvalue: f64,
    residual: f64,
    reduction_spread: f64,
}

impl Sanity {
    fn of_report(r: &CloneReport) -> Self {
        Self {
            trace_error: r.trace_error,
            min_eigenvalue: r.min_eigenvalue,
            residual: r.output_symmetric_residual,
            reduction_spread: r.reduction_spread,
        }
    }

    fn merge(&mut self, other: &Sanity) {
        self.trace_error = self.trace_error.max(other.trace_error);
        self.min_eigenvalue = self.min_eigenvalue.min(other.min_eigenvalue);
        self.residual = self.residual.max(other.residual);
        self.reduction_spread = self.reduction_spread.max(other.reduction_spread);
    }

    fn checks(&self, tol: &Tolerances, sn: Option<usize>, sm: Option<usize>) -> Vec<Check> {
        vec![
            Check::new(
                "trace-error",
                "trace-preservation",
                0.0,
                self.trace_error,
                Relation::Le,
                tol.trace,
            ),
            Check::new(
                "min-eigenvalue",
                "complete-positivity",
                0.0,
                self.min_eigenvalue,
                Relation::Ge,
                tol.positivity,
            ),
            Check::new(
                "symmetric-residual",
                "symmetric-output-support",
                0.0,
                self.residual,
                Relation::Le,
                tol.support,
            ),
            Check::new(
                "reduction-spread",
                "identical-clones",
                0.0,
                self.reduction_spread,
                Relation::Le,
                tol.support,
            ),
        ]
        .into_iter()
        .map(|c| c.at(sn, sm, None))
        .collect()
    }
}

/// Applies the channel to a symmetric mixed input and returns the reduced
/// output Bloch vector along with the sanity figures of the output.
fn apply_mixed(ch: &CloneChannel, input: &DickeState) -> Result<(BlochVector, Sanity)> {
    let m = ch.m_out();
    if m <= AUTO_FULL_SPACE_MAX {
        let out = ch.apply(&input.embed()?)?;
        let reds = single_qubit_reductions(&out)?;
        let spread = reds
            .iter()
            .map(|r| max_abs_diff(r.matrix(), reds[0].matrix()))
            .fold(0.0, f64::max);
        Ok((
            bloch_of(&reds[0])?,
            Sanity {
                trace_error: (out.trace().re - 1.0).abs().max(out.trace().im.abs()),
                min_eigenvalue: out.min_eigenvalue(),
                residual: symmetrizer(m)?.residual(out.matrix()),
                reduction_spread: spread,
            },
        ))
    } else {
        let out = ch.apply_dicke(input)?;
        Ok((
            bloch_of(&out.reduced_qubit())?,
            Sanity {
                trace_error: (out.trace().re - 1.0).abs().max(out.trace().im.abs()),
                min_eigenvalue: out.min_eigenvalue(),
                residual: 0.0,
                reduction_spread: 0.0,
            },
        ))
    }
}

/// Universality certification on Haar-random tensor-power inputs plus the
/// shrinking check on random symmetric mixed inputs.
pub fn clone_cell(
    n: usize,
    m: usize,
    samples: usize,
    mixed: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Section> {
    let ch = CloneChannel::new(n, m)?;
    let eta = bounds::eta_opt(n, m)?;
    let fid = bounds::fidelity_opt(n, m)?;
    let rep = if samples >= 2 {
        certify_universality_with(&ch, samples, seed, Representation::Auto, Exec::default())?
    } else {
        let psi = haar_random_pure(&mut SeedStream::new(seed).rng(0));
        measure_shrinking_with(
            &ch,
            &DensityOperator::tensor_power(&psi, n),
            Representation::Auto,
        )?
    };
    let (sn, sm) = (Some(n), Some(m));
    let mut sanity = Sanity::of_report(&rep);

    let mixed_seeds = SeedStream::new(seed).fork(1);
    let mut mixed_dev: f64 = 0.0;
    for i in 0..mixed {
        let input = mixed_input(n, &mixed_seeds, i as u64)?;
        let s_in = bloch_of(&input.reduced_qubit())?;
        let (s_out, s) = apply_mixed(&ch, &input)?;
        mixed_dev = mixed_dev.max(bloch_max_diff(&s_out, &s_in.scale(bounds::to_f64(&eta))));
        sanity.merge(&s);
    }

    let mut sec = Section::default();
    sec.row(
        Row::new("clone")
            .set("n", n)
            .set("m", m)
            .set("samples", rep.samples)
            .set("mixed_inputs", mixed)
            .set(
                "representation",
                if m <= AUTO_FULL_SPACE_MAX {
                    "full"
                } else {
                    "dicke"
                },
            )
            .set("eta_measured", rep.eta_measured)
            .exact("eta_predicted", &eta)
            .set("fidelity_measured", rep.fidelity_measured)
            .exact("fidelity_predicted", &fid)
            .set("spread", rep.universality_spread)
            .set("orientation_deviation", rep.orientation_deviation)
            .set("mixed_max_deviation", mixed_dev)
            .set("trace_error", sanity.trace_error)
            .set("min_eigenvalue", sanity.min_eigenvalue)
            .set("symmetric_residual", sanity.residual)
            .set("reduction_spread", sanity.reduction_spread),
    );
    let checks = [
        Check::against_exact(
            "eta",
            "optimal-shrinking-factor",
            &eta,
            rep.eta_measured,
            tol.physics,
        ),
        Check::against_exact(
            "fidelity",
            "optimal-cloning-fidelity",
            &fid,
            rep.fidelity_measured,
            tol.physics,
        ),
        Check::new(
            "universality-spread",
            "universality",
            0.0,
            rep.universality_spread,
            Relation::Le,
            tol.physics,
        ),
        Check::new(
            "orientation-deviation",
            "universality",
            0.0,
            rep.orientation_deviation,
            Relation::Le,
            tol.physics,
        ),
    ];
    for c in checks {
        sec.check(c.at(sn, sm, None));
    }
    if mixed > 0 {
        sec.check(
            Check::new(
                "mixed-input-shrinking",
                "symmetric-mixed-inputs",
                0.0,
                mixed_dev,
                Relation::Le,
                tol.physics,
            )
            .at(sn, sm, None),
        );
    }
    for c in sanity.checks(tol, sn, sm) {
        sec.check(c);
    }
    Ok(sec)
}

// ---------------------------------------------------------------- concat

/// Stagewise, end-to-end and direct shrinking factors of the chain N→M→L on
/// `pure` Haar tensor-power inputs and `mixed` symmetric mixed inputs, plus
/// the exact multiplicativity identity.
pub fn concat_cell(
    n: usize,
    m: usize,
    l: usize,
    pure: usize,
    mixed: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Section> {
    let first = CloneChannel::new(n, m)?;
    let second = CloneChannel::new(m, l)?;
    let (sn, sm, sl) = some3(n, m, l);
    let seeds = SeedStream::new(seed);
    let mut inputs = Vec::with_capacity(pure + mixed);
    for i in 0..pure {
        let psi = haar_random_pure(&mut seeds.rng(i as u64));
        inputs.push(DickeState::tensor_power(&psi, n)?);
    }
    let mixed_seeds = seeds.fork(1);
    for i in 0..mixed {
        inputs.push(mixed_input(n, &mixed_seeds, i as u64)?);
    }

    let eta_nl = bounds::eta_opt(n, l)?;
    let exact = bounds::eta_opt(n, m)? * bounds::eta_opt(m, l)? - &eta_nl;
    let (mut prod_dev, mut direct_dev, mut worst_eta): (f64, f64, f64) = (0.0, 0.0, f64::NAN);
    let mut first_report = None;
    for input in &inputs {
        let r = measure_concatenation(&first, &second, input, Representation::Auto)?;
        prod_dev = prod_dev.max(r.product_deviation());
        direct_dev = direct_dev.max(r.direct_deviation());
        let target = bounds::to_f64(&eta_nl);
        if worst_eta.is_nan() || (r.eta_end_to_end - target).abs() > (worst_eta - target).abs() {
            worst_eta = r.eta_end_to_end;
        }
        first_report.get_or_insert(r);
    }

    let mut sec = Section::default();
    let mut row = Row::new("concat")
        .set("n", n)
        .set("m", m)
        .set("l", l)
        .set("inputs", inputs.len())
        .exact("eta_direct_predicted", &eta_nl);
    if let Some(r) = &first_report {
        row = row
            .set("eta_first", r.eta_first)
            .set("eta_second", r.eta_second)
            .set("eta_end_to_end", r.eta_end_to_end)
            .set("eta_direct", r.eta_direct);
    }
    sec.row(
        row.set("max_product_deviation", prod_dev)
            .set("max_direct_deviation", direct_dev),
    );
    sec.check(at(
        Check::exact_identity(
            "multiplicativity-exact",
            "concatenation-multiplicativity",
            &exact,
            exact == Rational::from_integer(0.into()),
            Relation::Eq,
        ),
        sn,
        sm,
        sl,
    ));
    if !inputs.is_empty() {
        sec.check(at(
            Check::new(
                "chain-product",
                "concatenation-multiplicativity",
                0.0,
                prod_dev,
                Relation::Le,
                tol.physics,
            ),
            sn,
            sm,
            sl,
        ));
        sec.check(at(
            Check::new(
                "chain-direct",
                "concatenation-multiplicativity",
                0.0,
                direct_dev,
                Relation::Le,
                tol.physics,
            ),
            sn,
            sm,
            sl,
        ));
        sec.check(at(
            Check::against_exact(
                "chain-eta",
                "optimal-shrinking-factor",
                &eta_nl,
                worst_eta,
                tol.physics,
            ),
            sn,
            sm,
            sl,
        ));
    }
    Ok(sec)
}

// -------------------------------------------------------------- estimate

/// Exact-quadrature estimation on the reference state and `probes`
/// Haar-random states, POVM completeness, and measure-and-prepare on
/// `mixed` symmetric mixed inputs.
pub fn estimate_exact_cell(
    m: usize,
    probes: usize,
    mixed: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Section> {
    let fid = bounds::fidelity_meas_opt(m)?;
    let eta = bounds::eta_meas_opt(m)?;
    let (fid_f, eta_f) = (bounds::to_f64(&fid), bounds::to_f64(&eta));
    let seeds = SeedStream::new(seed);

    let mut states = vec![reference_state()];
    states.extend((0..probes).map(|i| haar_random_pure(&mut seeds.rng(i as u64))));
    let reports = states
        .iter()
        .map(|psi| estimation_fidelity_exact(m, psi))
        .collect::<Result<Vec<_>>>()?;
    let worst = |f: &dyn Fn(&qclone::estimator::EstimationReport) -> f64, target: f64| {
        reports.iter().map(f).fold(target, |w, v| {
            if (v - target).abs() > (w - target).abs() {
                v
            } else {
                w
            }
        })
    };
    let worst_fid = worst(&|r| r.fidelity_measured, fid_f);
    let worst_eta = worst(&|r| r.eta_measured, eta_f);

    let povm = CovariantPovm::new(m)?;
    let completeness = max_abs_diff(
        &povm.completeness(Exec::default()),
        &ComplexMatrix::identity(m + 1, m + 1),
    );

    let mixed_seeds = seeds.fork(1);
    let mut mixed_dev: f64 = 0.0;
    for i in 0..mixed {
        let input = mixed_input(m, &mixed_seeds, i as u64)?;
        let s_in = bloch_of(&input.reduced_qubit())?;
        let s_out = bloch_of(&measure_and_prepare_dicke(&input, Exec::default())?)?;
        mixed_dev = mixed_dev.max(bloch_max_diff(&s_out, &s_in.scale(eta_f)));
    }

    let sm = Some(m);
    let mut sec = Section::default();
    sec.row(
        Row::new("estimate-exact")
            .set("m", m)
            .set("states", states.len())
            .set("polar_nodes", povm.rule().polar_nodes())
            .set("azimuth_nodes", povm.rule().azimuth_nodes())
            .set("fidelity_measured", reports[0].fidelity_measured)
            .exact("fidelity_predicted", &fid)
            .set("eta_measured", reports[0].eta_measured)
            .exact("eta_predicted", &eta)
            .set("completeness_error", completeness)
            .set("mixed_inputs", mixed)
            .set("mixed_max_deviation", mixed_dev),
    );
    sec.check(
        Check::against_exact(
            "estimation-fidelity",
            "optimal-estimation-fidelity",
            &fid,
            worst_fid,
            tol.estimation,
        )
        .at(None, sm, None),
    );
    sec.check(
        Check::against_exact(
            "estimation-eta",
            "optimal-estimation-shrinking",
            &eta,
            worst_eta,
            tol.estimation,
        )
        .at(None, sm, None),
    );
    sec.check(
        Check::new(
            "povm-completeness",
            "covariant-povm",
            0.0,
            completeness,
            Relation::Le,
            tol.physics,
        )
        .at(None, sm, None),
    );
    if mixed > 0 {
        sec.check(
            Check::new(
                "measure-prepare-mixed-shrinking",
                "symmetric-mixed-inputs",
                0.0,
                mixed_dev,
                Relation::Le,
                tol.physics,
            )
            .at(None, sm, None),
        );
    }
    Ok(sec)
}

/// Monte Carlo estimation on the reference state, compared with the exact
/// quadrature value in units of the standard error.
pub fn estimate_mc_cell(m: usize, shots: usize, seed: u64, tol: &Tolerances) -> Result<Section> {
    let psi = reference_state();
    let exact = estimation_fidelity_exact(m, &psi)?.fidelity_measured;
    let mc = estimate_monte_carlo(m, &psi, shots, seed)?;
    let sigma = mc.statistical_error;
    let mut sec = Section::default();
    sec.row(
        Row::new("estimate-monte-carlo")
            .set("m", m)
            .set("shots", shots)
            .set("fidelity_measured", mc.fidelity_measured)
            .set("fidelity_exact", exact)
            .set("standard_error", sigma)
            .set("z", (mc.fidelity_measured - exact) / sigma),
    );
    sec.check(
        Check::new(
            "monte-carlo-agreement",
            "optimal-estimation-fidelity",
            exact,
            mc.fidelity_measured,
            Relation::Eq,
            tol.mc_sigmas * sigma,
        )
        .at(None, Some(m), None),
    );
    Ok(sec)
}

/// Cloner M→L' followed by measure-and-prepare for every M ≤ L' ≤ L.
pub fn composition_cell(m: usize, l: usize, tol: &Tolerances) -> Result<Section> {
    let rep = verify_composition(m, l)?;
    let fid_m = bounds::fidelity_meas_opt(m)?;
    let mut sec = Section::default();
    for row in &rep.rows {
        let predicted = (bounds::eta_opt(m, row.l)? * bounds::eta_meas_opt(row.l)?
            + Rational::from_integer(1.into()))
            / Rational::from_integer(2.into());
        sec.row(
            Row::new("composition")
                .set("m", m)
                .set("l", row.l)
                .set("composed_fidelity", row.composed_fidelity)
                .exact("predicted_fidelity", &predicted),
        );
        let (sm, sl) = (Some(m), Some(row.l));
        sec.check(
            Check::against_exact(
                "composition-fidelity",
                "composition-fidelity",
                &predicted,
                row.composed_fidelity,
                tol.estimation,
            )
            .at(None, sm, sl),
        );
        sec.check(
            Check::against_exact(
                "composition-telescoping",
                "composition-fidelity",
                &fid_m,
                row.composed_fidelity,
                tol.estimation,
            )
            .at(None, sm, sl),
        );
    }
    sec.row(
        Row::new("composition-limit")
            .set("m", m)
            .set("estimation_fidelity", rep.estimation_fidelity)
            .set("extrapolated_eta", rep.extrapolated_eta)
            .set("limit_fidelity", rep.limit_fidelity),
    );
    sec.check(
        Check::against_exact(
            "composition-limit",
            "composition-fidelity",
            &fid_m,
            rep.limit_fidelity,
            tol.estimation,
        )
        .at(None, Some(m), None),
    );
    Ok(sec)
}

// ------------------------------------------------------- pseudo-mixture

/// Signed pseudo-mixture decompositions of `cases` random symmetric
/// states, `N` cycling through `1..=max_n`.
pub fn pseudo_mixture_cells(
    cases: usize,
    max_n: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Section> {
    let seeds = SeedStream::new(seed);
    let mut sec = Section::default();
    let mut negative_cases = 0usize;
    for n in 1..=max_n {
        let (mut err, mut sum_dev, mut min_w, mut count, mut neg): (f64, f64, f64, usize, usize) =
            (0.0, 0.0, f64::INFINITY, 0, 0);
        for i in (0..cases).filter(|i| i % max_n == n - 1) {
            let rho = random_symmetric_state(n, &mut seeds.rng(i as u64))?.embed()?;
            let pm = pseudo_mixture_decompose(&rho)?;
            err = err.max(pm.reconstruction_error(&rho)?);
            sum_dev = sum_dev.max((pm.weight_sum() - 1.0).abs());
            min_w = min_w.min(pm.min_weight());
            count += 1;
            neg += usize::from(pm.negative_count() > 0);
        }
        negative_cases += neg;
        sec.row(
            Row::new("pseudo-mixture")
                .set("n", n)
                .set("cases", count)
                .set("terms", (n + 1) * (n + 1))
                .set("max_reconstruction_error", err)
                .set("max_weight_sum_deviation", sum_dev)
                .set("min_weight", min_w)
                .set("cases_with_negative_weight", neg),
        );
        sec.check(
            Check::new(
                "pseudo-mixture-reconstruction",
                "pseudo-mixture",
                0.0,
                err,
                Relation::Le,
                tol.physics,
            )
            .at(Some(n), None, None),
        );
        sec.check(
            Check::new(
                "pseudo-mixture-weight-sum",
                "pseudo-mixture",
                0.0,
                sum_dev,
                Relation::Le,
                1e-10,
            )
            .at(Some(n), None, None),
        );
    }
    sec.check(Check::new(
        "pseudo-mixture-negative-weight",
        "pseudo-mixture",
        1.0,
        negative_cases as f64,
        Relation::Ge,
        0.0,
    ));
    Ok(sec)
}

// ------------------------------------------------------------ verify-all

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Grid {
    pub max_n: usize,
    pub max_m: usize,
    pub max_l: usize,
    pub max_exact: usize,
    pub exact_estimation_m: usize,
    pub mc_estimation_m: usize,
    pub composition_m: usize,
    pub composition_l: usize,
    pub pseudo_mixture_cases: usize,
    pub pseudo_mixture_n: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            max_n: 4,
            max_m: 8,
            max_l: 8,
            max_exact: 50,
            exact_estimation_m: 5,
            mc_estimation_m: 3,
            composition_m: 2,
            composition_l: 6,
            pseudo_mixture_cases: 50,
            pseudo_mixture_n: 4,
        }
    }
}

pub fn pairs(max_n: usize, max_m: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=max_n).flat_map(move |n| (n..=max_m).map(move |m| (n, m)))
}

pub fn chains(max_n: usize, max_l: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (1..=max_n)
        .flat_map(move |n| (n..=max_l).flat_map(move |m| (m..=max_l).map(move |l| (n, m, l))))
}

/// A named unit of work producing one report section.
pub type Job<'a> = (&'static str, Box<dyn Fn() -> Result<Section> + 'a>);

/// Named sections of the full acceptance grid, in report order.
pub fn verify_all_sections(
    grid: &Grid,
    samples: usize,
    shots: usize,
    seed: u64,
    tol: &Tolerances,
) -> Vec<Job<'static>> {
    let seeds = SeedStream::new(seed);
    let g = *grid;
    let tol = *tol;
    vec![
        (
            "bounds",
            Box::new(move || {
                let mut sec = Section::default();
                for (n, m, l) in chains(g.max_n, g.max_l) {
                    sec.extend(bounds_cell(n, m, l)?);
                }
                sec.extend(exact_grids(g.max_exact));
                Ok(sec)
            }),
        ),
        (
            "clone",
            Box::new(move || {
                let mut sec = Section::default();
                for (n, m) in pairs(g.max_n, g.max_m) {
                    let s = cell_seed(&seeds.fork(1), n, m, 0).seed();
                    sec.extend(clone_cell(n, m, samples, 2, s, &tol)?);
                }
                Ok(sec)
            }),
        ),
        (
            "concat",
            Box::new(move || {
                let mut sec = Section::default();
                for (n, m, l) in chains(g.max_n, g.max_l) {
                    let s = cell_seed(&seeds.fork(2), n, m, l).seed();
                    sec.extend(concat_cell(n, m, l, 2, 1, s, &tol)?);
                }
                Ok(sec)
            }),
        ),
        (
            "estimate",
            Box::new(move || {
                let mut sec = Section::default();
                for m in 1..=g.exact_estimation_m {
                    let s = cell_seed(&seeds.fork(3), 0, m, 0).seed();
                    sec.extend(estimate_exact_cell(m, 10, 3, s, &tol)?);
                }
                for m in 1..=g.mc_estimation_m {
                    let s = cell_seed(&seeds.fork(4), 0, m, 0).seed();
                    sec.extend(estimate_mc_cell(m, shots, s, &tol)?);
                }
                for m in 1..=g.composition_m {
                    sec.extend(composition_cell(m, g.composition_l, &tol)?);
                }
                Ok(sec)
            }),
        ),
        (
            "pseudo-mixture",
            Box::new(move || {
                pseudo_mixture_cells(
                    g.pseudo_mixture_cases,
                    g.pseudo_mixture_n,
                    seeds.fork(5).seed(),
                    &tol,
                )
            }),
        ),
    ]
}

/// Copy-number limits of the estimation paths, re-exported for argument
/// validation.
pub const ESTIMATE_EXACT_MAX: usize = EXACT_MAX_COPIES;
pub const ESTIMATE_MC_MAX: usize = FULL_SPACE_MAX_COPIES;

use qclone::cloner::{
    certify_universality_with, measure_concatenation, measure_shrinking_dicke,
    single_qubit_reductions, CloneChannel, Representation,
};
use qclone::linalg::{bloch_of, max_abs_diff, partial_trace, DensityOperator, SeedStream};
use qclone::symspace::{pseudo_mixture_decompose, random_symmetric_state, symmetrizer, DickeState};
use qclone::{bounds, Exec};

fn random_input(n: usize, seeds: &SeedStream, i: u64) -> DickeState {
    // Keep the reduced Bloch vector long enough for a well-defined ratio.
    (0..)
        .map(|j| random_symmetric_state(n, &mut seeds.rng(1000 * i + j)).unwrap())
        .find(|s| bloch_of(&s.reduced_qubit()).unwrap().norm() >= 0.1)
        .unwrap()
}

#[test]
fn channel_outputs_are_valid_symmetric_states() {
    let seeds = SeedStream::new(31);
    for n in 1..=3 {
        for m in n..=7 {
            let ch = CloneChannel::new(n, m).unwrap();
            let s = symmetrizer(m).unwrap();
            for i in 0..4 {
                let input = random_input(n, &seeds, (100 * n + 10 * m + i) as u64);
                let out = ch.apply(&input.embed().unwrap()).unwrap();
                assert!((out.trace().re - 1.0).abs() < 1e-12);
                assert!(out.min_eigenvalue() >= -1e-10);
                assert!(s.residual(out.matrix()) < 1e-11);
                let reds = single_qubit_reductions(&out).unwrap();
                for r in &reds {
                    assert!(max_abs_diff(r.matrix(), reds[0].matrix()) < 1e-11);
                }
            }
        }
    }
}

#[test]
fn shrinking_factor_is_optimal_and_universal_on_grid() {
    for n in 1..=4 {
        for m in n..=8 {
            let ch = CloneChannel::new(n, m).unwrap();
            let r = certify_universality_with(&ch, 12, 5, Representation::Full, Exec::default())
                .unwrap();
            let exact = bounds::eta_opt(n, m).unwrap();
            assert!(
                bounds::cross_check(r.eta_measured, &exact, 1e-9).unwrap(),
                "({n},{m})"
            );
            assert!(r.universality_spread < 1e-9);
        }
    }
}

#[test]
fn mixed_inputs_shrink_by_the_same_factor() {
    let seeds = SeedStream::new(8);
    for n in 1..=3 {
        for m in n..=6 {
            let ch = CloneChannel::new(n, m).unwrap();
            let eta = ch.predicted_eta();
            for i in 0..5 {
                let input = random_input(n, &seeds, (50 * n + 7 * m + i) as u64);
                let s_in = bloch_of(&input.reduced_qubit()).unwrap();
                let out = ch.apply(&input.embed().unwrap()).unwrap();
                let s_out = bloch_of(&partial_trace(&out, &[m - 1]).unwrap()).unwrap();
                assert!(s_out.max_abs_diff(&s_in.scale(eta)) < 1e-9);
            }
        }
    }
}

#[test]
fn dicke_path_reaches_sixty_qubits() {
    let psi = qclone::linalg::PureQubitState::from_angles(0.4, 2.0);
    for (n, m) in [(1, 60), (5, 40), (10, 60), (30, 31)] {
        let ch = CloneChannel::new(n, m).unwrap();
        let r = measure_shrinking_dicke(&ch, &DickeState::tensor_power(&psi, n).unwrap()).unwrap();
        let exact = bounds::eta_opt(n, m).unwrap();
        assert!(
            bounds::cross_check(r.eta_measured, &exact, 1e-9).unwrap(),
            "({n},{m})"
        );
    }
}

#[test]
fn stagewise_factors_multiply_along_chains() {
    let seeds = SeedStream::new(44);
    for n in 1..=3 {
        for m in n..=6 {
            for l in m..=8 {
                let input = random_input(n, &seeds, (n * 100 + m * 10 + l) as u64);
                let r = measure_concatenation(
                    &CloneChannel::new(n, m).unwrap(),
                    &CloneChannel::new(m, l).unwrap(),
                    &input,
                    Representation::Dicke,
                )
                .unwrap();
                assert!(r.product_deviation() < 1e-9, "({n},{m},{l})");
                assert!(r.direct_deviation() < 1e-9, "({n},{m},{l})");
            }
        }
    }
}

#[test]
fn pseudo_mixtures_reconstruct_random_symmetric_states() {
    let seeds = SeedStream::new(13);
    let mut saw_negative = false;
    for i in 0..50u64 {
        let n = 1 + (i % 4) as usize;
        let rho = random_symmetric_state(n, &mut seeds.rng(i))
            .unwrap()
            .embed()
            .unwrap();
        let pm = pseudo_mixture_decompose(&rho).unwrap();
        assert!(pm.reconstruction_error(&rho).unwrap() < 1e-9);
        assert!((pm.weight_sum() - 1.0).abs() < 1e-10);
        assert_eq!(pm.terms().len(), (n + 1) * (n + 1));
        saw_negative |= pm.negative_count() > 0;
    }
    assert!(saw_negative);
}

#[test]
fn entangled_symmetric_inputs_stay_positive() {
    // Dicke projectors are entangled for 0 < k < n.
    for n in 2..=4 {
        for k in 1..n {
            let input = DickeState::dicke_projector(n, k).unwrap();
            for m in n..=7 {
                let out = CloneChannel::new(n, m)
                    .unwrap()
                    .apply(&input.embed().unwrap())
                    .unwrap();
                assert!(out.min_eigenvalue() >= -1e-10);
                assert!((out.trace().re - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn maximally_mixed_symmetric_input_maps_to_maximally_mixed() {
    let input = DickeState::maximally_mixed(2).unwrap();
    let out = CloneChannel::new(2, 5)
        .unwrap()
        .apply_dicke(&input)
        .unwrap();
    let r = out.reduced_qubit();
    assert!(max_abs_diff(r.matrix(), DensityOperator::maximally_mixed(1).matrix()) < 1e-12);
    assert!(
        max_abs_diff(
            out.coords(),
            DickeState::maximally_mixed(5).unwrap().coords()
        ) < 1e-12
    );
}

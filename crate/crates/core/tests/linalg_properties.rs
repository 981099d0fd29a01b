use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qclone::linalg::{
    bloch_of, haar_random_pure, max_abs_diff, partial_trace, state_from_bloch, tensor_product,
    trace, BlochVector, ComplexMatrix, DensityOperator, SeedStream,
};
use rand::Rng;
use rand_distr::StandardNormal;

fn random_density<R: Rng>(n_qubits: usize, rng: &mut R) -> DensityOperator {
    let d = 1 << n_qubits;
    let g = DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let w = &g * g.adjoint();
    let tr = trace(&w).re;
    DensityOperator::new(w.scale(1.0 / tr)).unwrap()
}

fn random_matrix<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

proptest! {
    #[test]
    fn bloch_round_trip_on_unit_ball(
        x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0, r in 0.0f64..=1.0,
    ) {
        let v = BlochVector::new(x, y, z);
        prop_assume!(v.norm() > 1e-9);
        let s = v.scale(r / v.norm());
        let back = bloch_of(&state_from_bloch(&s).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_is_scaled_factor(seed in any::<u64>(), na in 1usize..3, nb in 1usize..3) {
        let mut rng = SeedStream::new(seed).rng(0);
        let a = random_density(na, &mut rng);
        let b = random_density(nb, &mut rng);
        let ab = DensityOperator::new(tensor_product(a.matrix(), b.matrix())).unwrap();
        let keep: Vec<usize> = (0..na).collect();
        let reduced = partial_trace(&ab, &keep).unwrap();
        prop_assert!(max_abs_diff(reduced.matrix(), a.matrix()) < 1e-12);
        prop_assert!((reduced.trace().re - 1.0).abs() < 1e-12);
        let keep_b: Vec<usize> = (na..na + nb).collect();
        prop_assert!(max_abs_diff(partial_trace(&ab, &keep_b).unwrap().matrix(), b.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_and_hermiticity(seed in any::<u64>(), n in 2usize..5, q in 0usize..4) {
        let mut rng = SeedStream::new(seed).rng(1);
        let rho = random_density(n, &mut rng);
        let r = partial_trace(&rho, &[q % n]).unwrap();
        prop_assert!((r.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        prop_assert!(qclone::linalg::hermitian_deviation(r.matrix()) == 0.0);
    }

    #[test]
    fn tensor_product_is_associative(seed in any::<u64>()) {
        let mut rng = SeedStream::new(seed).rng(2);
        let (a, b, c) = (random_matrix(2, &mut rng), random_matrix(3, &mut rng), random_matrix(2, &mut rng));
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert!(max_abs_diff(&left, &right) < 1e-12);
    }
}

#[test]
fn haar_samples_match_uniform_sphere_moments() {
    let seeds = SeedStream::new(2024);
    let n = 100_000;
    let (mut sx, mut sy, mut sz, mut sz2) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let s = haar_random_pure(&mut seeds.rng(i)).bloch();
        sx += s.x;
        sy += s.y;
        sz += s.z;
        sz2 += s.z * s.z;
    }
    let nf = n as f64;
    // Uniform sphere: each component has variance 1/3; z² has variance 4/45.
    let three_sigma_mean = 3.0 * (1.0 / 3.0 / nf).sqrt();
    let three_sigma_z2 = 3.0 * (4.0 / 45.0 / nf).sqrt();
    for m in [sx / nf, sy / nf, sz / nf] {
        assert!(m.abs() < three_sigma_mean, "mean component {m}");
    }
    assert!(three_sigma_mean < 0.0056);
    assert!((sz2 / nf - 1.0 / 3.0).abs() < three_sigma_z2);
}

#[test]
fn haar_distribution_is_rotation_invariant() {
    // A fixed rotation maps the Bloch vector s to R s; the rotated
    // samples must still have uniform-sphere moments along every axis.
    let seeds = SeedStream::new(77);
    let n = 100_000;
    let (c, s) = (0.3f64.cos(), 0.3f64.sin());
    let rotate = |v: BlochVector| BlochVector::new(c * v.x - s * v.z, v.y, s * v.x + c * v.z);
    let (mut sx, mut sz, mut sx2, mut sxz) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        let v = rotate(haar_random_pure(&mut seeds.rng(i)).bloch());
        sx += v.x;
        sz += v.z;
        sx2 += v.x * v.x;
        sxz += v.x * v.z;
    }
    let nf = n as f64;
    assert!((sx / nf).abs() < 3.0 * (1.0 / 3.0 / nf).sqrt());
    assert!((sz / nf).abs() < 3.0 * (1.0 / 3.0 / nf).sqrt());
    assert!((sx2 / nf - 1.0 / 3.0).abs() < 3.0 * (4.0 / 45.0 / nf).sqrt());
    // E[xz] = 0 with variance E[x²z²] = 1/15
    assert!((sxz / nf).abs() < 3.0 * (1.0 / 15.0 / nf).sqrt());
}

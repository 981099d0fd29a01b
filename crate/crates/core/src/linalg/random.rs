use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::qubit::PureQubitState;

/// Counter-based source of independent random streams.
///
/// Stream `i` depends only on `(seed, i)`, so parallel work items can draw
/// their own generator without any shared state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub const fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// A derived stream family, for nesting (e.g. one family per grid cell).
    pub fn fork(&self, label: u64) -> SeedStream {
        let mut rng = self.rng(label ^ 0x9e37_79b9_7f4a_7c15);
        SeedStream::new(rng.gen())
    }
}

/// Haar-random pure qubit state from two normalized complex Gaussians.
pub fn haar_random_pure<R: Rng + ?Sized>(rng: &mut R) -> PureQubitState {
    loop {
        let a = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let b = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        if let Ok(psi) = PureQubitState::normalized(a, b) {
            return psi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_state() {
        let s = SeedStream::new(42);
        assert_eq!(
            haar_random_pure(&mut s.rng(5)),
            haar_random_pure(&mut s.rng(5))
        );
        assert_ne!(
            haar_random_pure(&mut s.rng(5)),
            haar_random_pure(&mut s.rng(6))
        );
        assert_ne!(s.fork(1), s.fork(2));
    }

    #[test]
    fn samples_are_normalized() {
        let mut rng = SeedStream::new(1).rng(0);
        for _ in 0..1000 {
            let (a, b) = haar_random_pure(&mut rng).amplitudes();
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}

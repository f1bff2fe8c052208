//! Seeded random fixtures shared by unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::quantum::{CMatrix, CVector, DensityMatrix, HermitianOperator, PureState, C64};

pub fn random_hermitian(dim: usize, seed: u64) -> HermitianOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    HermitianOperator::hermitized(a)
}

pub fn random_state(dim: usize, seed: u64) -> PureState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = CVector::from_fn(dim, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    PureState::normalized(v).unwrap()
}

pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = CMatrix::from_fn(dim, dim, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let p = &a * a.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new(p.unscale(tr)).unwrap()
}

/// `Λ|+⟩⟨+|` with `|+⟩ = (|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz_plus_projector(n: usize, lambda: f64) -> HermitianOperator {
    let dim = 1 << n;
    let mut v = CVector::zeros(dim);
    v[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[dim - 1] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    HermitianOperator::hermitized(&v * v.adjoint() * C64::new(lambda, 0.0))
}

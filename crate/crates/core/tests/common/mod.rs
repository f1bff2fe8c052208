#![allow(dead_code)]

use proptest::prelude::*;
use qbattery::quantum::{CMatrix, CVector, DensityMatrix, HermitianOperator, PureState, C64};

pub fn dim() -> impl Strategy<Value = usize> {
    2usize..=8
}

pub fn hermitian(dim: usize) -> impl Strategy<Value = HermitianOperator> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |v| {
        let m = CMatrix::from_fn(dim, dim, |r, c| C64::new(v[2 * (r * dim + c)], v[2 * (r * dim + c) + 1]));
        HermitianOperator::new((&m + m.adjoint()) * C64::new(0.5, 0.0)).unwrap()
    })
}

pub fn pure_state(dim: usize) -> impl Strategy<Value = PureState> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim)
        .prop_filter("nonzero vector", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let a = CVector::from_fn(dim, |i, _| C64::new(v[2 * i], v[2 * i + 1]));
            PureState::normalized(a).unwrap()
        })
}

/// `A A† / tr(A A†)` for a random complex `A`.
pub fn density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim)
        .prop_filter("nonzero matrix", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(move |v| {
            let a = CMatrix::from_fn(dim, dim, |r, c| C64::new(v[2 * (r * dim + c)], v[2 * (r * dim + c) + 1]));
            let p = &a * a.adjoint();
            let tr = p.trace().re;
            DensityMatrix::new(p.unscale(tr)).unwrap()
        })
}

pub fn probabilities(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len)
        .prop_filter("nonzero weights", |v| v.iter().sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let s: f64 = v.iter().sum();
            v.into_iter().map(|x| x / s).collect()
        })
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

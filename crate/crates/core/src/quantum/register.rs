//! Multi-qubit registers: tensor products, site embedding, partial traces and
//! reduced-state entropy.
//!
//! Site 0 is the leftmost (slowest-varying) tensor factor, so for `n` qubits
//! site `k` is bit `n − 1 − k` of the basis index.

use super::operator::HermitianOperator;
use super::state::{DensityMatrix, PureState};
use super::{check_qubit_count, qubit_count, CMatrix, C64};
use crate::error::{Error, Result};

/// Kronecker product `self ⊗ other`.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for HermitianOperator {
    fn tensor(&self, other: &Self) -> Self {
        HermitianOperator::hermitized(self.matrix().kronecker(other.matrix()))
    }
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        DensityMatrix::from_raw(self.matrix().kronecker(other.matrix()))
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Self {
        PureState::from_raw(self.amplitudes().kronecker(other.amplitudes()))
    }
}

/// Free-function form of [`Tensor::tensor`].
pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// `x^{⊗n}` for `n ≥ 1`.
pub fn tensor_power<T: Tensor + Clone>(x: &T, n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power needs n >= 1".into()));
    }
    let mut acc = x.clone();
    for _ in 1..n {
        acc = acc.tensor(x);
    }
    Ok(acc)
}

/// `1^{⊗k} ⊗ op ⊗ 1^{⊗(n−k−1)}` for a single-qubit `op`.
pub fn embed_local(op: &HermitianOperator, site: usize, n: usize) -> Result<HermitianOperator> {
    op.check_dim(2)?;
    check_qubit_count(n)?;
    if site >= n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    let left = CMatrix::identity(1 << site, 1 << site);
    let right_dim = 1 << (n - site - 1);
    let right = CMatrix::identity(right_dim, right_dim);
    Ok(HermitianOperator::hermitized(
        left.kronecker(op.matrix()).kronecker(&right),
    ))
}

fn validate_sites(sites: &[usize], n: usize) -> Result<Vec<usize>> {
    if sites.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateSite(w[0]));
        }
    }
    if let Some(&bad) = sorted.iter().find(|&&s| s >= n) {
        return Err(Error::SiteOutOfRange { site: bad, n });
    }
    Ok(sorted)
}

/// Basis-index offsets contributed by each assignment of the given sites,
/// enumerated with the first listed site as the most significant bit.
fn site_offsets(sites: &[usize], n: usize) -> Vec<usize> {
    let m = sites.len();
    (0..1usize << m)
        .map(|local| {
            sites.iter().enumerate().fold(0usize, |acc, (j, &s)| {
                let bit = (local >> (m - 1 - j)) & 1;
                acc | (bit << (n - 1 - s))
            })
        })
        .collect()
}

/// Reduced state on `keep`, tracing out every other site. The kept sites keep
/// their relative order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize], n: usize) -> Result<DensityMatrix> {
    let keep = validate_sites(keep, n)?;
    if rho.dim() != 1 << n {
        return Err(Error::DimensionMismatch(rho.dim(), 1 << n));
    }
    let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
    let kept_off = site_offsets(&keep, n);
    let traced_off = if traced.is_empty() {
        vec![0]
    } else {
        site_offsets(&traced, n)
    };
    let m = rho.matrix();
    let dk = kept_off.len();
    let reduced = CMatrix::from_fn(dk, dk, |a, b| {
        traced_off
            .iter()
            .map(|&c| m[(kept_off[a] | c, kept_off[b] | c)])
            .sum::<C64>()
    });
    Ok(DensityMatrix::from_raw(reduced))
}

/// Reduced state of a pure register state without forming `|ψ⟩⟨ψ|`.
pub fn reduced_state(psi: &PureState, keep: &[usize]) -> Result<DensityMatrix> {
    let n = qubit_count(psi.dim())?;
    let keep = validate_sites(keep, n)?;
    let traced: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
    let kept_off = site_offsets(&keep, n);
    let traced_off = if traced.is_empty() {
        vec![0]
    } else {
        site_offsets(&traced, n)
    };
    let amp = psi.amplitudes();
    let dk = kept_off.len();
    let reduced = CMatrix::from_fn(dk, dk, |a, b| {
        traced_off
            .iter()
            .map(|&c| amp[kept_off[a] | c] * amp[kept_off[b] | c].conj())
            .sum::<C64>()
    });
    Ok(DensityMatrix::from_raw(reduced))
}

/// Von Neumann entropy in bits, `0·log 0 := 0`.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    let s: f64 = rho
        .eigenvalues()
        .into_iter()
        .filter(|&p| p > 1e-300)
        .map(|p| -p.min(1.0) * p.min(1.0).log2())
        .sum();
    s.clamp(0.0, (rho.dim() as f64).log2())
}

/// Binary entropy `H₂(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    let h = |x: f64| if x > 0.0 { -x * x.log2() } else { 0.0 };
    h(p) + h(1.0 - p)
}

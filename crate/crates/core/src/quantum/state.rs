//! Pure states and density matrices.

use nalgebra::{DMatrix, DVector};

use super::operator::{hermitian_eig, HermitianOperator};
use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    /// Accepts vectors whose norm is `1 ± 1e-10`.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("state dimension must be at least 1".into()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub(crate) fn from_raw(amplitudes: CVector) -> Self {
        Self { amplitudes }
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    /// Computational basis state from a bit string such as `"0110"`; the first
    /// character is site 0.
    pub fn from_bitstring(bits: &str) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("empty bit string".into()));
        }
        let mut index = 0usize;
        for ch in bits.chars() {
            index = (index << 1)
                | match ch {
                    '0' => 0,
                    '1' => 1,
                    other => {
                        return Err(Error::InvalidArgument(format!(
                            "bit string contains {other:?}"
                        )))
                    }
                };
        }
        super::check_qubit_count(bits.len())?;
        Self::basis(1 << bits.len(), index)
    }

    /// `|0⟩^{⊗n}`.
    pub fn all_zeros(n: usize) -> Result<Self> {
        super::check_qubit_count(n)?;
        Self::basis(1 << n, 0)
    }

    /// `|1⟩^{⊗n}`.
    pub fn all_ones(n: usize) -> Result<Self> {
        super::check_qubit_count(n)?;
        Self::basis(1 << n, (1 << n) - 1)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// `⟨ψ|H|ψ⟩`.
    pub fn expectation(&self, h: &HermitianOperator) -> Result<f64> {
        h.check_dim(self.dim())?;
        Ok(self.amplitudes.dotc(&(h.matrix() * &self.amplitudes)).re)
    }

    /// Energy variance `⟨H²⟩ − ⟨H⟩²`, clamped at zero.
    pub fn variance(&self, h: &HermitianOperator) -> Result<f64> {
        h.check_dim(self.dim())?;
        let hpsi = h.matrix() * &self.amplitudes;
        let mean = self.amplitudes.dotc(&hpsi).re;
        let second = hpsi.norm_squared();
        Ok((second - mean * mean).max(0.0))
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// A Hermitian, positive semi-definite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, `tr ρ = 1 ± 1e-10` and eigenvalues `≥ −1e-10`.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let h = HermitianOperator::new(matrix)?;
        let tr = h.matrix().trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = hermitian_eig(&h).min();
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self {
            matrix: h.into_matrix(),
        })
    }

    pub(crate) fn from_raw(matrix: CMatrix) -> Self {
        let adj = matrix.adjoint();
        Self {
            matrix: (matrix + adj) * C64::new(0.5, 0.0),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    /// Diagonal state with the given populations.
    pub fn from_populations(p: &[f64]) -> Result<Self> {
        let d = DVector::from_iterator(p.len(), p.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&d))
    }

    /// Gibbs state `e^{−βH}/Z`.
    pub fn thermal(h: &HermitianOperator, beta: f64) -> Result<Self> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidArgument(format!("inverse temperature {beta} must be finite and non-negative")));
        }
        let s = h.eig();
        let e0 = s.min();
        let z: f64 = s.eigenvalues.iter().map(|&e| (-beta * (e - e0)).exp()).sum();
        let rho = s.map(|e| (-beta * (e - e0)).exp() / z);
        Ok(Self::from_raw(rho.into_matrix()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `tr(ρH)`.
    pub fn expectation(&self, h: &HermitianOperator) -> Result<f64> {
        h.check_dim(self.dim())?;
        Ok((&self.matrix * h.matrix()).trace().re)
    }

    /// Eigenvalues ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eig(&HermitianOperator::hermitized(self.matrix.clone())).eigenvalues
    }

    pub fn as_operator(&self) -> HermitianOperator {
        HermitianOperator::hermitized(self.matrix.clone())
    }

    /// `⟨i|ρ|i⟩`.
    pub fn population(&self, i: usize) -> f64 {
        self.matrix[(i, i)].re
    }
}

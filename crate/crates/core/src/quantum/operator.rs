//! Hermitian operators and their sorted eigendecompositions.

use std::ops::{Add, Sub};

use nalgebra::{DMatrix, DVector};

use super::{CMatrix, C64};
use crate::error::{Error, Result};

const HERMITIAN_REL_TOL: f64 = 1e-12;

/// A Hermitian matrix: Hamiltonians, drives and observables.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Validates squareness and Hermiticity to `1e-12` relative to the largest
    /// entry, then stores the exactly symmetrized matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidArgument("operator dimension must be at least 1".into()));
        }
        let scale = matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let asym = max_asymmetry(&matrix);
        if asym > HERMITIAN_REL_TOL * scale {
            return Err(Error::NotHermitian(asym));
        }
        Ok(Self::hermitized(matrix))
    }

    /// Symmetrizes `(M + M†)/2` without validation; for matrices that are
    /// Hermitian up to rounding by construction.
    pub(crate) fn hermitized(matrix: CMatrix) -> Self {
        let adj = matrix.adjoint();
        Self {
            matrix: (matrix + adj) * C64::new(0.5, 0.0),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self {
            matrix: DMatrix::from_diagonal(&d),
        }
    }

    pub fn pauli_x() -> Self {
        Self::hermitized(CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        ))
    }

    pub fn pauli_y() -> Self {
        Self::hermitized(CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        ))
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0])
    }

    /// `c·|a⟩⟨b| + conj(c)·|b⟩⟨a|` between basis states `a != b`, or `2·Re(c)|a⟩⟨a|` when equal.
    pub fn basis_coupling(dim: usize, a: usize, b: usize, c: C64) -> Result<Self> {
        if a >= dim || b >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index out of range for dimension {dim}"
            )));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(a, b)] += c;
        m[(b, a)] += c.conj();
        Ok(Self::hermitized(m))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            matrix: &self.matrix * C64::new(s, 0.0),
        }
    }

    /// Eigendecomposition with ascending eigenvalues.
    pub fn eig(&self) -> Spectrum {
        hermitian_eig(self)
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch(self.dim(), dim));
        }
        Ok(())
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;

    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        HermitianOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;

    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimensions differ");
        HermitianOperator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

fn max_asymmetry(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues in ascending order with the matching unitary of eigenvectors
/// stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Spread `λ_max − λ_min`.
    pub fn gap(&self) -> f64 {
        self.max() - self.min()
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let v = &self.eigenvectors;
        let d = DVector::from_iterator(self.dim(), self.eigenvalues.iter().map(|&l| C64::new(f(l), 0.0)));
        let scaled = v * DMatrix::from_diagonal(&d);
        HermitianOperator::hermitized(scaled * v.adjoint())
    }

    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> HermitianOperator {
        self.map(|l| l)
    }

    /// Distinct eigenvalues, merging those closer than `tol`.
    pub fn distinct(&self, tol: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for &l in &self.eigenvalues {
            match out.last() {
                Some(&last) if (l - last).abs() <= tol => {}
                _ => out.push(l),
            }
        }
        out
    }
}

/// Dense Hermitian eigendecomposition, eigenvalues sorted ascending.
pub fn hermitian_eig(h: &HermitianOperator) -> Spectrum {
    let dim = h.dim();
    let eig = h.matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(dim, dim, |r, c| eig.eigenvectors[(r, order[c])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_hermitian;

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_input_is_already_diagonal() {
        let s = hermitian_eig(&HermitianOperator::from_real_diagonal(&[0.0, 1.0]));
        assert_eq!(s.eigenvalues, vec![0.0, 1.0]);
        let id = CMatrix::identity(2, 2);
        assert!(max_abs(&(s.eigenvectors.map(|z| C64::new(z.norm(), 0.0)) - id)) < 1e-14);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let s = HermitianOperator::pauli_x().eig();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_reconstruction() {
        let h = random_hermitian(8, 7);
        let s = h.eig();
        let resid = max_abs(&(s.reconstruct().matrix() - h.matrix()));
        assert!(resid <= 1e-10 * max_abs(h.matrix()), "residual {resid:e}");
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let u = s.eigenvectors.adjoint() * &s.eigenvectors - CMatrix::identity(8, 8);
        assert!(max_abs(&u) < 1e-10);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        );
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian(_))));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(HermitianOperator::new(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn distinct_merges_degenerate_levels() {
        let s = HermitianOperator::from_real_diagonal(&[1.0, 0.0, 1.0 + 1e-13, 2.0]).eig();
        assert_eq!(s.distinct(1e-9).len(), 3);
    }
}

//! Unitary evolution under time-independent Hamiltonians.
//!
//! Everything goes through the eigendecomposition `H = V Λ V†`, so
//! `e^{−iHt} = V e^{−iΛt} V†` and a single diagonalization serves any number
//! of time points.

use nalgebra::{DMatrix, DVector};

use super::operator::{hermitian_eig, HermitianOperator, Spectrum};
use super::state::{DensityMatrix, PureState};
use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

/// Cached spectral form of `e^{−iHt}`.
#[derive(Debug, Clone)]
pub struct Propagator {
    spectrum: Spectrum,
}

impl Propagator {
    pub fn new(h: &HermitianOperator) -> Self {
        Self {
            spectrum: hermitian_eig(h),
        }
    }

    pub fn from_spectrum(spectrum: Spectrum) -> Self {
        Self { spectrum }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.spectrum.dim()
    }

    fn phases(&self, t: f64) -> DVector<C64> {
        DVector::from_iterator(
            self.dim(),
            self.spectrum
                .eigenvalues
                .iter()
                .map(|&l| C64::from_polar(1.0, -l * t)),
        )
    }

    /// `U(t) = e^{−iHt}`.
    pub fn unitary(&self, t: f64) -> CMatrix {
        let v = &self.spectrum.eigenvectors;
        (v * DMatrix::from_diagonal(&self.phases(t))) * v.adjoint()
    }

    pub fn evolve(&self, t: f64, psi: &PureState) -> Result<PureState> {
        check_time(t)?;
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), psi.dim()));
        }
        let v = &self.spectrum.eigenvectors;
        let mut coeffs: CVector = v.adjoint() * psi.amplitudes();
        coeffs.component_mul_assign(&self.phases(t));
        Ok(PureState::from_raw(v * coeffs))
    }

    pub fn evolve_density(&self, t: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_time(t)?;
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rho.dim()));
        }
        let u = self.unitary(t);
        Ok(DensityMatrix::from_raw(&u * rho.matrix() * u.adjoint()))
    }

    /// Spectral expansion of `⟨to|e^{−iHt}|from⟩`.
    pub fn transition(&self, from: &PureState, to: &PureState) -> Result<TransitionAmplitude> {
        if from.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), from.dim()));
        }
        if to.dim() != self.dim() {
            return Err(Error::DimensionMismatch(self.dim(), to.dim()));
        }
        let v = &self.spectrum.eigenvectors;
        let a: CVector = v.adjoint() * from.amplitudes();
        let b: CVector = v.adjoint() * to.amplitudes();
        let weights = a.iter().zip(b.iter()).map(|(x, y)| y.conj() * x).collect();
        Ok(TransitionAmplitude {
            frequencies: self.spectrum.eigenvalues.clone(),
            weights,
        })
    }
}

/// `A(t) = Σ_k w_k e^{−iλ_k t}`, a transition amplitude in spectral form.
#[derive(Debug, Clone)]
pub struct TransitionAmplitude {
    frequencies: Vec<f64>,
    weights: Vec<C64>,
}

impl TransitionAmplitude {
    pub fn amplitude(&self, t: f64) -> C64 {
        self.frequencies
            .iter()
            .zip(&self.weights)
            .map(|(&l, &w)| w * C64::from_polar(1.0, -l * t))
            .sum()
    }

    /// `|A(t)|²`.
    pub fn fidelity(&self, t: f64) -> f64 {
        self.amplitude(t).norm_sqr()
    }

    /// `d|A|²/dt = 2 Re(conj(A) A')`.
    pub fn fidelity_derivative(&self, t: f64) -> f64 {
        let mut a = C64::new(0.0, 0.0);
        let mut da = C64::new(0.0, 0.0);
        for (&l, &w) in self.frequencies.iter().zip(&self.weights) {
            let term = w * C64::from_polar(1.0, -l * t);
            a += term;
            da += term * C64::new(0.0, -l);
        }
        2.0 * (a.conj() * da).re
    }

    /// Time of the first local maximum of `|A|²` in `[0, t_max]` whose value
    /// reaches `threshold`. A start already above threshold returns 0.
    pub fn first_peak_above(&self, threshold: f64, t_max: f64) -> Option<f64> {
        self.peak_scan(threshold, t_max).first_hit
    }

    /// Scans `[0, t_max]` for local maxima of `|A|²` by sampling the
    /// derivative and bisecting its `+ → −` sign changes, stopping at the
    /// first peak that reaches `threshold`.
    pub fn peak_scan(&self, threshold: f64, t_max: f64) -> PeakScan {
        let f0 = self.fidelity(0.0);
        if f0 >= threshold {
            return PeakScan {
                first_hit: Some(0.0),
                best_fidelity: f0,
            };
        }
        let mut best = f0;
        let band = self.active_bandwidth(1e-14);
        if band == 0.0 || !(t_max > 0.0) {
            return PeakScan {
                first_hit: None,
                best_fidelity: best,
            };
        }
        // At least 64 samples per period of the fastest beat.
        let periods = t_max * band / (2.0 * std::f64::consts::PI);
        let steps = ((periods * 64.0).ceil() as usize).max(2048);
        let dt = t_max / steps as f64;

        // Phases advance by a fixed rotation per step.
        let step_rot: Vec<C64> = self.frequencies.iter().map(|&l| C64::from_polar(1.0, -l * dt)).collect();
        let mut terms = self.weights.clone();
        let deriv = |terms: &[C64]| {
            let mut a = C64::new(0.0, 0.0);
            let mut da = C64::new(0.0, 0.0);
            for (term, &l) in terms.iter().zip(&self.frequencies) {
                a += term;
                da += term * C64::new(0.0, -l);
            }
            2.0 * (a.conj() * da).re
        };
        let mut prev = deriv(&terms);
        for i in 1..=steps {
            for (term, rot) in terms.iter_mut().zip(&step_rot) {
                *term *= rot;
            }
            let d = deriv(&terms);
            if prev > 0.0 && d <= 0.0 {
                let t = i as f64 * dt;
                let peak = if d == 0.0 { t } else { self.bisect_derivative(t - dt, t) };
                let f = self.fidelity(peak);
                if f >= threshold {
                    return PeakScan {
                        first_hit: Some(peak),
                        best_fidelity: f,
                    };
                }
                best = best.max(f);
            }
            prev = d;
        }
        PeakScan {
            first_hit: None,
            best_fidelity: best.max(self.fidelity(t_max)),
        }
    }

    fn bisect_derivative(&self, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.fidelity_derivative(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Spread of the frequencies carrying nonzero weight.
    pub fn active_bandwidth(&self, tol: f64) -> f64 {
        let active = self
            .frequencies
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| w.norm() > tol)
            .map(|(&l, _)| l);
        let (lo, hi) = active.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), l| {
            (lo.min(l), hi.max(l))
        });
        if hi >= lo {
            hi - lo
        } else {
            0.0
        }
    }
}

/// Outcome of [`TransitionAmplitude::peak_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakScan {
    pub first_hit: Option<f64>,
    /// Highest peak seen; the hit itself when there is one.
    pub best_fidelity: f64,
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::InvalidArgument(format!("evolution time {t} must be finite and non-negative")));
    }
    Ok(())
}

/// `e^{−iHt}|ψ⟩`.
pub fn evolve(h: &HermitianOperator, t: f64, psi: &PureState) -> Result<PureState> {
    h.check_dim(psi.dim())?;
    Propagator::new(h).evolve(t, psi)
}

/// `U ρ U†` with `U = e^{−iHt}`.
pub fn evolve_density(h: &HermitianOperator, t: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    h.check_dim(rho.dim())?;
    Propagator::new(h).evolve_density(t, rho)
}

//! Passive and maximally active states, ergotropy and battery capacity.
//!
//! For a reference Hamiltonian with ascending levels `ε_i` and a state with
//! spectrum `{p_i}`, the passive state places the populations in descending
//! order on ascending energies and the maximally active state does the
//! reverse. Both are reachable from the state by a unitary, so they bound the
//! energy a cyclic process can leave in the battery.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quantum::{CMatrix, DensityMatrix, HermitianOperator, Spectrum, C64};

const PASSIVE_TOL: f64 = 1e-10;

/// A battery: reference Hamiltonian `H₀` and current state `ρ`.
#[derive(Debug, Clone)]
pub struct BatterySpec {
    h0: HermitianOperator,
    state: DensityMatrix,
}

impl BatterySpec {
    pub fn new(h0: HermitianOperator, state: DensityMatrix) -> Result<Self> {
        if h0.dim() != state.dim() {
            return Err(Error::DimensionMismatch(h0.dim(), state.dim()));
        }
        Ok(Self { h0, state })
    }

    pub fn h0(&self) -> &HermitianOperator {
        &self.h0
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    /// Same Hamiltonian, different state.
    pub fn with_state(&self, state: DensityMatrix) -> Result<Self> {
        Self::new(self.h0.clone(), state)
    }

    /// Energies and populations sorted for passive (`descending = true`) or
    /// active placement.
    fn ordered(&self, descending: bool) -> (Spectrum, Vec<f64>) {
        let levels = self.h0.eig();
        let mut pops: Vec<f64> = self.state.eigenvalues();
        if descending {
            pops.reverse();
        }
        (levels, pops)
    }

    fn placed_energy(&self, descending: bool) -> f64 {
        let (levels, pops) = self.ordered(descending);
        levels.eigenvalues.iter().zip(&pops).map(|(e, p)| e * p).sum()
    }

    /// `Σ_k p_k |ε_k⟩⟨ε_k|` with the populations in the requested order.
    fn placed_state(&self, descending: bool) -> DensityMatrix {
        let (levels, pops) = self.ordered(descending);
        let v = &levels.eigenvectors;
        let mut m = CMatrix::zeros(levels.dim(), levels.dim());
        for (k, &p) in pops.iter().enumerate() {
            let col = v.column(k);
            m += &col * col.adjoint() * C64::new(p, 0.0);
        }
        DensityMatrix::from_raw(m)
    }
}

/// Energy bookkeeping for one battery state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChargeReport {
    /// `tr(ρH₀)`.
    pub energy: f64,
    /// `tr(ρH₀) − tr(πH₀)`.
    pub ergotropy: f64,
    /// `tr(ωH₀) − tr(πH₀)`.
    pub capacity: f64,
    pub passive_energy: f64,
    pub active_energy: f64,
}

/// Lowest-energy state unitarily reachable from `ρ`.
pub fn passive_state(spec: &BatterySpec) -> DensityMatrix {
    spec.placed_state(true)
}

/// Highest-energy state unitarily reachable from `ρ`.
pub fn active_state(spec: &BatterySpec) -> DensityMatrix {
    spec.placed_state(false)
}

/// Maximum work extractable by a cyclic unitary.
pub fn ergotropy(spec: &BatterySpec) -> f64 {
    energy(spec) - spec.placed_energy(true)
}

/// Energy span between the passive and maximally active states.
pub fn capacity(spec: &BatterySpec) -> f64 {
    spec.placed_energy(false) - spec.placed_energy(true)
}

fn energy(spec: &BatterySpec) -> f64 {
    spec.state
        .expectation(&spec.h0)
        .expect("dimensions checked at construction")
}

/// True when no cyclic unitary can extract work (inversions below `1e-10`
/// are ignored).
pub fn is_passive(spec: &BatterySpec) -> bool {
    ergotropy(spec) <= PASSIVE_TOL
}

pub fn charge_report(spec: &BatterySpec) -> ChargeReport {
    let energy = energy(spec);
    let passive_energy = spec.placed_energy(true);
    let active_energy = spec.placed_energy(false);
    ChargeReport {
        energy,
        ergotropy: energy - passive_energy,
        capacity: active_energy - passive_energy,
        passive_energy,
        active_energy,
    }
}

/// Whether `p` majorizes `q`: every partial sum of the descending-sorted `p`
/// dominates that of `q`.
pub fn majorizes(p: &[f64], q: &[f64]) -> Result<bool> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(p.len(), q.len()));
    }
    for (name, v) in [("p", p), ("q", q)] {
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > 1e-10 || v.iter().any(|x| !x.is_finite()) {
            return Err(invalid(format!("{name} is not a probability vector (sum {s})")));
        }
    }
    let desc = |v: &[f64]| {
        let mut s = v.to_vec();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let (ps, qs) = (desc(p), desc(q));
    let mut acc_p = 0.0;
    let mut acc_q = 0.0;
    for (a, b) in ps.iter().zip(&qs) {
        acc_p += a;
        acc_q += b;
        if acc_p < acc_q - 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{CVector, PureState};

    fn qubit_h0() -> HermitianOperator {
        HermitianOperator::from_real_diagonal(&[0.0, 1.0])
    }

    fn spec(pops: &[f64]) -> BatterySpec {
        BatterySpec::new(qubit_h0(), DensityMatrix::from_populations(pops).unwrap()).unwrap()
    }

    fn plus() -> DensityMatrix {
        PureState::normalized(CVector::from_vec(vec![C64::new(1.0, 0.0); 2]))
            .unwrap()
            .to_density()
    }

    fn close(a: &DensityMatrix, b: &DensityMatrix) -> bool {
        (a.matrix() - b.matrix()).iter().all(|z| z.norm() < 1e-12)
    }

    #[test]
    fn passive_sorts_populations_descending() {
        let p = passive_state(&spec(&[0.3, 0.7]));
        assert!(close(&p, &DensityMatrix::from_populations(&[0.7, 0.3]).unwrap()));
        let s = BatterySpec::new(qubit_h0(), plus()).unwrap();
        assert!(close(&passive_state(&s), &DensityMatrix::from_populations(&[1.0, 0.0]).unwrap()));
    }

    #[test]
    fn thermal_states_are_passive() {
        let h0 = HermitianOperator::from_real_diagonal(&[0.0, 0.4, 1.0, 1.7]);
        for beta in [0.0, 0.3, 1.0, 5.0] {
            let s = BatterySpec::new(h0.clone(), DensityMatrix::thermal(&h0, beta).unwrap()).unwrap();
            assert!(close(&passive_state(&s), s.state()));
            assert!(ergotropy(&s).abs() < 1e-12);
            assert!(is_passive(&s));
        }
    }

    #[test]
    fn active_reverses_order() {
        let a = active_state(&spec(&[0.3, 0.7]));
        assert!(close(&a, &DensityMatrix::from_populations(&[0.3, 0.7]).unwrap()));
        let a = active_state(&spec(&[0.7, 0.3]));
        assert!(close(&a, &DensityMatrix::from_populations(&[0.3, 0.7]).unwrap()));
        let mixed = BatterySpec::new(qubit_h0(), DensityMatrix::maximally_mixed(2)).unwrap();
        assert!(close(&active_state(&mixed), &DensityMatrix::maximally_mixed(2)));
    }

    #[test]
    fn ergotropy_values() {
        assert!((ergotropy(&spec(&[0.3, 0.7])) - 0.4).abs() < 1e-12);
        let s = BatterySpec::new(qubit_h0(), plus()).unwrap();
        assert!((ergotropy(&s) - 0.5).abs() < 1e-12);
        assert!(!is_passive(&s));
    }

    #[test]
    fn capacity_values() {
        let pure = BatterySpec::new(qubit_h0(), PureState::basis(2, 0).unwrap().to_density()).unwrap();
        assert!((capacity(&pure) - 1.0).abs() < 1e-12);
        assert!((capacity(&spec(&[0.3, 0.7])) - 0.4).abs() < 1e-12);
        assert!(capacity(&spec(&[0.5, 0.5])).abs() < 1e-12);
        let flat_h = BatterySpec::new(HermitianOperator::identity(2).scaled(3.0), plus()).unwrap();
        assert!(capacity(&flat_h).abs() < 1e-12);
    }

    #[test]
    fn degenerate_levels_compare_by_energy() {
        let h0 = HermitianOperator::from_real_diagonal(&[0.0, 1.0, 1.0]);
        let s = BatterySpec::new(h0, DensityMatrix::from_populations(&[0.1, 0.3, 0.6]).unwrap()).unwrap();
        let report = charge_report(&s);
        assert!((report.passive_energy - 0.4).abs() < 1e-12);
        assert!((report.active_energy - 0.9).abs() < 1e-12);
        let pi = passive_state(&s);
        assert!((pi.expectation(s.h0()).unwrap() - 0.4).abs() < 1e-12);
        assert!((pi.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn majorization() {
        assert!(majorizes(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        assert!(!majorizes(&[0.5, 0.5], &[1.0, 0.0]).unwrap());
        assert!(majorizes(&[0.6, 0.3, 0.1], &[0.5, 0.4, 0.1]).unwrap());
        assert!(majorizes(&[0.1, 0.3, 0.6], &[0.4, 0.5, 0.1]).unwrap());
        assert!(matches!(majorizes(&[1.0], &[0.5, 0.5]), Err(Error::DimensionMismatch(1, 2))));
        assert!(majorizes(&[0.6, 0.6], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn mismatched_spec() {
        assert!(BatterySpec::new(qubit_h0(), DensityMatrix::maximally_mixed(3)).is_err());
    }
}

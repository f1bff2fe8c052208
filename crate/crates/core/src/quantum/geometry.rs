//! Fubini-Study geometry of pure states.

use super::state::PureState;
use crate::error::{Error, Result};

/// Fubini-Study angle `arccos |⟨ψ|φ⟩|` in `[0, π/2]`.
///
/// Evaluated as `atan2(‖φ − ⟨ψ|φ⟩ψ‖, |⟨ψ|φ⟩|)`: identical to the clamped
/// `arccos` for unit vectors but without its `√ε` loss near coincident states.
pub fn fs_angle(psi: &PureState, phi: &PureState) -> Result<f64> {
    let overlap = psi.inner(phi)?;
    let cos = overlap.norm().clamp(0.0, 1.0);
    let sin = (phi.amplitudes() - psi.amplitudes() * overlap).norm();
    Ok(sin.atan2(cos).clamp(0.0, std::f64::consts::FRAC_PI_2))
}

/// Discretized Fubini-Study length: sum of angles between consecutive states.
pub fn path_length(trajectory: &[PureState]) -> Result<f64> {
    if trajectory.len() < 2 {
        return Err(Error::TooFewStates(trajectory.len()));
    }
    trajectory
        .windows(2)
        .map(|w| fs_angle(&w[0], &w[1]))
        .sum()
}

//! Dense complex linear algebra and quantum-state primitives for registers of
//! up to ten qubits.

mod dynamics;
mod geometry;
mod operator;
mod register;
mod serial;
mod state;

pub use dynamics::{evolve, evolve_density, PeakScan, Propagator, TransitionAmplitude};
pub use geometry::{fs_angle, path_length};
pub use operator::{hermitian_eig, HermitianOperator, Spectrum};
pub use register::{
    binary_entropy, embed_local, partial_trace, reduced_state, tensor, tensor_power, vn_entropy,
    Tensor,
};
pub use serial::{MatrixJson, StateJson};
pub use state::{DensityMatrix, PureState};

use crate::error::{Error, Result};

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;

/// Largest register handled with dense matrices.
pub const MAX_QUBITS: usize = 10;

pub(crate) fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("qubit count must be at least 1".into()));
    }
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { n, max: MAX_QUBITS });
    }
    Ok(())
}

/// `log₂ dim` for a qubit register dimension.
pub fn qubit_count(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotQubitRegister(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

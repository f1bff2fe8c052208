//! JSON carriers for operators and states:
//! `{"dim": n, "entries": [[re, im], ...]}`, row-major for matrices.
//!
//! Reals go through serde_json's shortest round-trip formatting, so a
//! write/read cycle reproduces every `f64` bit for bit.

use serde::{Deserialize, Serialize};

use super::operator::HermitianOperator;
use super::state::PureState;
use super::{CMatrix, CVector, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub dim: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_operator(h: &HermitianOperator) -> Self {
        let m = h.matrix();
        let dim = h.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                let z = m[(r, c)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dim, entries }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.dim == 0 || self.entries.len() != self.dim * self.dim {
            return Err(Error::Serialization(format!(
                "expected {} entries for dim {}, found {}",
                self.dim * self.dim,
                self.dim,
                self.entries.len()
            )));
        }
        check_finite(&self.entries)?;
        Ok(CMatrix::from_row_iterator(
            self.dim,
            self.dim,
            self.entries.iter().map(|&[re, im]| C64::new(re, im)),
        ))
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?)
    }
}

impl StateJson {
    pub fn from_state(psi: &PureState) -> Self {
        Self {
            dim: psi.dim(),
            entries: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn to_state(&self) -> Result<PureState> {
        if self.dim == 0 || self.entries.len() != self.dim {
            return Err(Error::Serialization(format!(
                "expected {} amplitudes, found {}",
                self.dim,
                self.entries.len()
            )));
        }
        check_finite(&self.entries)?;
        PureState::new(CVector::from_iterator(
            self.dim,
            self.entries.iter().map(|&[re, im]| C64::new(re, im)),
        ))
    }
}

fn check_finite(entries: &[[f64; 2]]) -> Result<()> {
    if entries.iter().flatten().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::Serialization("non-finite entry".into()))
    }
}

impl HermitianOperator {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MatrixJson::from_operator(self)).expect("finite entries serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: MatrixJson =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        parsed.to_operator()
    }
}

impl PureState {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateJson::from_state(self)).expect("finite entries serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: StateJson =
            serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        parsed.to_state()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_hermitian;

    #[test]
    fn operator_round_trip_is_bit_exact() {
        let h = random_hermitian(4, 21);
        let back = HermitianOperator::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn layout_is_row_major() {
        let h = HermitianOperator::pauli_y();
        let j = MatrixJson::from_operator(&h);
        assert_eq!(j.entries, vec![[0.0, 0.0], [0.0, -1.0], [0.0, 1.0], [0.0, 0.0]]);
        let text = h.to_json();
        assert!(text.starts_with("{\"dim\":2,\"entries\":"));
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            HermitianOperator::from_json("{\"dim\":2,\"entries\":[[1,0]]}"),
            Err(Error::Serialization(_))
        ));
        assert!(matches!(
            HermitianOperator::from_json("{\"dim\":2,\"entries\":[[0,0],[1,0],[0,0],[0,0]]}"),
            Err(Error::NotHermitian(_))
        ));
        assert!(HermitianOperator::from_json("not json").is_err());
        assert!(matches!(
            PureState::from_json("{\"dim\":2,\"entries\":[[1,0],[1,0]]}"),
            Err(Error::NotNormalized(_))
        ));
    }
}

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::qsim::MAX_QUBITS;
use crate::{Error, Result};

/// Largest data register the model supports.
pub const MAX_DATA_QUBITS: usize = 6;

/// Register layout of the autoencoder.
///
/// The data register holds the encoded transaction; its last `n_trash`
/// qubits are the trash register. In the full SWAP-test circuit the qubits
/// are ordered `[control, reference..., data...]`, so the control is qubit 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawLayout")]
pub struct CircuitLayout {
    n_data: usize,
    n_trash: usize,
}

#[derive(Deserialize)]
struct RawLayout {
    n_data: usize,
    n_trash: usize,
}

impl TryFrom<RawLayout> for CircuitLayout {
    type Error = Error;

    fn try_from(raw: RawLayout) -> Result<Self> {
        CircuitLayout::new(raw.n_data, raw.n_trash)
    }
}

impl CircuitLayout {
    pub fn new(n_data: usize, n_trash: usize) -> Result<Self> {
        if !(2..=MAX_DATA_QUBITS).contains(&n_data) {
            return Err(Error::InvalidLayout(format!(
                "data register must have 2..={MAX_DATA_QUBITS} qubits, got {n_data}"
            )));
        }
        if n_trash == 0 || n_trash >= n_data {
            return Err(Error::InvalidLayout(format!(
                "need 1 <= n_trash < n_data, got n_trash = {n_trash}, n_data = {n_data}"
            )));
        }
        if n_data + 2 * n_trash + 1 > MAX_QUBITS {
            return Err(Error::InvalidLayout("SWAP-test circuit too large".into()));
        }
        Ok(Self { n_data, n_trash })
    }

    pub fn n_data(&self) -> usize {
        self.n_data
    }

    pub fn n_trash(&self) -> usize {
        self.n_trash
    }

    pub fn n_latent(&self) -> usize {
        self.n_data - self.n_trash
    }

    pub fn n_reference(&self) -> usize {
        self.n_trash
    }

    /// Number of encoded features, `2^n_data`.
    pub fn feature_dim(&self) -> usize {
        1 << self.n_data
    }

    /// Trainable angles: 15 per unordered pair of data qubits.
    pub fn num_params(&self) -> usize {
        super::PARAMS_PER_PAIR * self.n_data * (self.n_data - 1) / 2
    }

    /// Trash qubits as indices of the data register.
    pub fn trash_qubits(&self) -> Range<usize> {
        self.n_latent()..self.n_data
    }

    pub fn total_qubits(&self) -> usize {
        1 + self.n_reference() + self.n_data
    }

    pub fn control_qubit(&self) -> usize {
        0
    }

    /// Reference register in the full circuit.
    pub fn reference_qubits(&self) -> Range<usize> {
        1..1 + self.n_reference()
    }

    /// First data qubit in the full circuit.
    pub fn data_offset(&self) -> usize {
        1 + self.n_reference()
    }

    pub fn data_qubits(&self) -> Range<usize> {
        self.data_offset()..self.data_offset() + self.n_data
    }

    /// Trash register in the full circuit.
    pub fn trash_qubits_full(&self) -> Range<usize> {
        let off = self.data_offset();
        off + self.n_latent()..off + self.n_data
    }
}

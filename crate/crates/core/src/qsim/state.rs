use serde::{Deserialize, Serialize};

use super::{check_qubit_count, kernel, qubit_mask, Gate, MixedState, C64, STATE_TOLERANCE};
use crate::{Error, Result};

/// Unit-norm statevector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: index,
            });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Wraps an amplitude vector, checking length and normalization.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        if amplitudes
            .iter()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(Error::NonFinite("amplitudes"));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Real amplitudes, as produced by amplitude encoding.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::from_amplitudes(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies a gate in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        kernel::apply_gate_vec(&mut self.amplitudes, self.num_qubits, gate);
        Ok(())
    }

    /// Returns `U |psi>` without modifying `self`.
    pub fn apply_gate(&self, gate: &Gate) -> Result<PureState> {
        let mut out = self.clone();
        out.apply(gate)?;
        Ok(out)
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// `|self> (x) |other>`, `self` occupying the low qubit indices.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        check_qubit_count(self.num_qubits + other.num_qubits)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(PureState {
            num_qubits: self.num_qubits + other.num_qubits,
            amplitudes,
        })
    }

    /// Born probabilities of every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Exact probability that `qubit` reads 0.
    pub fn probability_zero(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let mask = qubit_mask(self.num_qubits, qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|psi><psi|`.
    pub fn to_density(&self) -> MixedState {
        MixedState::from_pure(self)
    }

    /// Reduced density matrix on `keep` (strictly increasing qubit indices).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<MixedState> {
        let (kept, traced) = split_register(self.num_qubits, keep)?;
        let kdim = 1usize << kept.len();
        let tdim = 1usize << traced.len();
        let mut out = vec![C64::new(0.0, 0.0); kdim * kdim];
        let full_index = |k: usize, t: usize| compose_index(self.num_qubits, &kept, k, &traced, t);
        for t in 0..tdim {
            let column: Vec<C64> = (0..kdim)
                .map(|k| self.amplitudes[full_index(k, t)])
                .collect();
            for a in 0..kdim {
                for b in 0..kdim {
                    out[a * kdim + b] += column[a] * column[b].conj();
                }
            }
        }
        MixedState::from_raw_unchecked(kept.len(), out)
    }
}

/// Validates `keep` and returns `(kept, traced)` qubit lists.
pub(super) fn split_register(
    num_qubits: usize,
    keep: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::InvalidKeep("keep list is empty".into()));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidKeep(
            "keep list must be strictly increasing".into(),
        ));
    }
    if let Some(&q) = keep.iter().find(|&&q| q >= num_qubits) {
        return Err(Error::QubitOutOfRange {
            index: q,
            num_qubits,
        });
    }
    let traced = (0..num_qubits).filter(|q| !keep.contains(q)).collect();
    Ok((keep.to_vec(), traced))
}

/// Full-register index from a kept-register index and a traced-register
/// index, each read most-significant-qubit first.
pub(super) fn compose_index(
    num_qubits: usize,
    kept: &[usize],
    k: usize,
    traced: &[usize],
    t: usize,
) -> usize {
    let mut index = 0;
    for (pos, &q) in kept.iter().enumerate() {
        if k & (1 << (kept.len() - 1 - pos)) != 0 {
            index |= qubit_mask(num_qubits, q);
        }
    }
    for (pos, &q) in traced.iter().enumerate() {
        if t & (1 << (traced.len() - 1 - pos)) != 0 {
            index |= qubit_mask(num_qubits, q);
        }
    }
    index
}

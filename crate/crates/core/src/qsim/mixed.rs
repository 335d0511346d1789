use serde::{Deserialize, Serialize};

use super::state::{compose_index, split_register};
use super::{check_qubit_count, kernel, Gate, Mat2, PureState, C64, STATE_TOLERANCE};
use crate::{Error, Result};

/// Density matrix over `num_qubits` qubits, stored row-major.
///
/// Construction checks Hermiticity and unit trace. Positivity is only checked
/// by tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedState {
    num_qubits: usize,
    matrix: Vec<C64>,
}

impl MixedState {
    pub fn from_pure(psi: &PureState) -> Self {
        let amps = psi.amplitudes();
        let matrix = amps
            .iter()
            .flat_map(|a| amps.iter().map(move |b| a * b.conj()))
            .collect();
        Self {
            num_qubits: psi.num_qubits(),
            matrix,
        }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut matrix = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = C64::new(1.0 / dim as f64, 0.0);
        }
        Ok(Self { num_qubits, matrix })
    }

    /// Wraps a row-major matrix after checking shape, Hermiticity and trace.
    pub fn from_matrix(num_qubits: usize, matrix: Vec<C64>) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: matrix.len(),
            });
        }
        let state = Self { num_qubits, matrix };
        state.check()?;
        Ok(state)
    }

    pub(super) fn from_raw_unchecked(num_qubits: usize, matrix: Vec<C64>) -> Result<Self> {
        debug_assert_eq!(matrix.len(), 1 << (2 * num_qubits));
        Ok(Self { num_qubits, matrix })
    }

    /// Hermiticity and unit trace within [`STATE_TOLERANCE`].
    pub fn check(&self) -> Result<()> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i..dim {
                let a = self.matrix[i * dim + j];
                let b = self.matrix[j * dim + i];
                if (a - b.conj()).norm() > STATE_TOLERANCE {
                    return Err(Error::InvalidDensityMatrix(format!(
                        "not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > STATE_TOLERANCE || tr.im.abs() > STATE_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[row * self.dim() + col]
    }

    pub fn trace(&self) -> C64 {
        let dim = self.dim();
        (0..dim).map(|i| self.matrix[i * dim + i]).sum()
    }

    /// Diagonal Born probabilities (real parts, negative rounding noise kept).
    pub fn probabilities(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.matrix[i * dim + i].re).collect()
    }

    /// `U rho U^dagger` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        kernel::conjugate_gate_mat(&mut self.matrix, self.num_qubits, gate);
        Ok(())
    }

    /// Returns `U rho U^dagger` without modifying `self`.
    pub fn apply_gate(&self, gate: &Gate) -> Result<MixedState> {
        let mut out = self.clone();
        out.apply(gate)?;
        Ok(out)
    }

    /// `rho -> sum_k K_k rho K_k^dagger` with the `K_k` acting on `qubit`.
    ///
    /// The caller is responsible for the operators being complete; the
    /// result is not re-validated.
    pub fn apply_kraus(&mut self, qubit: usize, ops: &[Mat2]) -> Result<()> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        kernel::kraus_sum_mat(&mut self.matrix, self.num_qubits, qubit, ops);
        Ok(())
    }

    /// Reduced density matrix on `keep` (strictly increasing).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<MixedState> {
        let (kept, traced) = split_register(self.num_qubits, keep)?;
        let kdim = 1usize << kept.len();
        let tdim = 1usize << traced.len();
        let dim = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); kdim * kdim];
        for a in 0..kdim {
            for b in 0..kdim {
                out[a * kdim + b] = (0..tdim)
                    .map(|t| {
                        let i = compose_index(self.num_qubits, &kept, a, &traced, t);
                        let j = compose_index(self.num_qubits, &kept, b, &traced, t);
                        self.matrix[i * dim + j]
                    })
                    .sum();
            }
        }
        MixedState::from_raw_unchecked(kept.len(), out)
    }

    /// `|0><0|^{(x) k} (x) self`: prepends `k` qubits in `|0>`.
    pub fn prepend_zero_qubits(&self, k: usize) -> Result<MixedState> {
        check_qubit_count(self.num_qubits + k)?;
        let dim = self.dim();
        let big = dim << k;
        let mut matrix = vec![C64::new(0.0, 0.0); big * big];
        for r in 0..dim {
            matrix[r * big..r * big + dim].copy_from_slice(&self.matrix[r * dim..(r + 1) * dim]);
        }
        Ok(MixedState {
            num_qubits: self.num_qubits + k,
            matrix,
        })
    }
}

/// Fidelity `<psi| rho |psi>` of a pure state against a mixed state.
///
/// Rounding noise is clamped into `[0, 1]`; anything further than `1e-9`
/// outside is reported as an error.
pub fn fidelity_pure_mixed(psi: &PureState, rho: &MixedState) -> Result<f64> {
    if psi.num_qubits() != rho.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.num_qubits(),
            actual: psi.num_qubits(),
        });
    }
    let raw = quadratic_form(rho.matrix(), psi.amplitudes()).re;
    clamp_fidelity(raw)
}

pub(crate) fn clamp_fidelity(raw: f64) -> Result<f64> {
    if !raw.is_finite() || !(-STATE_TOLERANCE..=1.0 + STATE_TOLERANCE).contains(&raw) {
        return Err(Error::FidelityOutOfRange(raw));
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// `<v| M |v>` for a row-major square matrix.
fn quadratic_form(matrix: &[C64], v: &[C64]) -> C64 {
    let dim = v.len();
    v.iter()
        .enumerate()
        .map(|(i, vi)| {
            let row = &matrix[i * dim..(i + 1) * dim];
            let mv: C64 = row.iter().zip(v).map(|(m, x)| m * x).sum();
            vi.conj() * mv
        })
        .sum()
}

/// Hermitian observable on a register, evolved in the Heisenberg picture.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    num_qubits: usize,
    matrix: Vec<C64>,
}

impl Operator {
    /// Projector onto `|0>` of every qubit in `qubits`.
    pub fn zero_projector(num_qubits: usize, qubits: &[usize]) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let dim = 1usize << num_qubits;
        let mut mask = 0;
        for &q in qubits {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
            mask |= super::qubit_mask(num_qubits, q);
        }
        let mut matrix = vec![C64::new(0.0, 0.0); dim * dim];
        for i in (0..dim).filter(|i| i & mask == 0) {
            matrix[i * dim + i] = C64::new(1.0, 0.0);
        }
        Ok(Self { num_qubits, matrix })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// `O -> U^dagger O U`: pulls the observable back through `gate`.
    pub fn pull_back(&mut self, gate: &Gate) -> Result<()> {
        let inv = gate.inverse();
        inv.validate(self.num_qubits)?;
        kernel::conjugate_gate_mat(&mut self.matrix, self.num_qubits, &inv);
        Ok(())
    }

    /// `<psi| O |psi>` (real part; `O` is Hermitian).
    pub fn expectation(&self, psi: &PureState) -> Result<f64> {
        if psi.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: psi.num_qubits(),
            });
        }
        Ok(quadratic_form(&self.matrix, psi.amplitudes()).re)
    }
}

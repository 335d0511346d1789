//! Minimal exact quantum simulator.
//!
//! Gates are applied with bit-indexed in-place kernels over the amplitude
//! vector (or the rows and columns of a density matrix), never by building
//! the dense `2^m x 2^m` unitary.
//!
//! Qubit 0 is the most significant bit of a basis index: in a 3-qubit
//! register, `|q0 q1 q2> = |1 0 0>` is index 4.

mod counts;
mod gate;
mod kernel;
mod mixed;
mod state;

pub use counts::{sample_counts, sample_distribution, CountsHistogram};
pub use gate::{Gate, GateKind, Mat2};
pub use mixed::{fidelity_pure_mixed, MixedState, Operator};
pub use state::PureState;

use num_complex::Complex64;

pub type C64 = Complex64;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 12;

/// Tolerance used when validating norms, traces and Hermiticity.
pub const STATE_TOLERANCE: f64 = 1e-9;

/// Bit mask selecting `qubit` in a register of `num_qubits` qubits.
#[inline]
pub fn qubit_mask(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

/// Formats a basis index as a bitstring, qubit 0 first.
pub fn bitstring(index: usize, num_qubits: usize) -> String {
    (0..num_qubits)
        .map(|q| {
            if index & qubit_mask(num_qubits, q) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Marginal distribution over `keep` (in the given order) of a distribution
/// over all basis states of a `num_qubits` register.
pub fn marginal_probabilities(probs: &[f64], num_qubits: usize, keep: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; 1 << keep.len()];
    for (index, &p) in probs.iter().enumerate() {
        let mut reduced = 0;
        for &q in keep {
            reduced = (reduced << 1) | usize::from(index & qubit_mask(num_qubits, q) != 0);
        }
        out[reduced] += p;
    }
    out
}

fn check_qubit_count(num_qubits: usize) -> crate::Result<()> {
    if num_qubits == 0 || num_qubits > MAX_QUBITS {
        return Err(crate::Error::TooManyQubits(num_qubits));
    }
    Ok(())
}

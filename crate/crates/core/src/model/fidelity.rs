use crate::qsim::{fidelity_pure_mixed, sample_counts, Gate, PureState};
use crate::{Error, Result};

use super::{build_ansatz, AnsatzParameters, CircuitLayout, EncodedSample};

fn check_sample(sample: &EncodedSample, layout: &CircuitLayout) -> Result<()> {
    if sample.num_qubits() != layout.n_data() {
        return Err(Error::DimensionMismatch {
            expected: layout.n_data(),
            actual: sample.num_qubits(),
        });
    }
    Ok(())
}

/// Fidelity of the trash register of an already-compressed data-register
/// state with `|0...0>`: `<0|Tr_latent(|psi><psi|)|0>`.
pub fn trash_fidelity_of_state(state: &PureState, layout: &CircuitLayout) -> Result<f64> {
    let trash: Vec<usize> = layout.trash_qubits().collect();
    let rho_trash = state.partial_trace(&trash)?;
    fidelity_pure_mixed(&PureState::zero(layout.n_trash())?, &rho_trash)
}

/// Applies the ansatz to the encoded sample, traces out the latent register
/// and returns the fidelity of the trash register with `|0...0>`.
pub fn trash_fidelity_exact(
    params: &AnsatzParameters,
    sample: &EncodedSample,
    layout: &CircuitLayout,
) -> Result<f64> {
    check_sample(sample, layout)?;
    let mut state = sample.state.clone();
    state.apply_all(&build_ansatz(params, layout)?)?;
    trash_fidelity_of_state(&state, layout)
}

/// The full SWAP-test circuit for one sample: the initial state
/// `|0>_control |0...0>_reference |psi>_data` and the gate sequence
/// `[ansatz on data] H(control) CSWAP(control, trash_k, reference_k)... H(control)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapTestCircuit {
    pub initial: PureState,
    pub gates: Vec<Gate>,
    pub control: usize,
}

impl SwapTestCircuit {
    /// Final state of the circuit.
    pub fn run(&self) -> Result<PureState> {
        let mut state = self.initial.clone();
        state.apply_all(&self.gates)?;
        Ok(state)
    }
}

/// The SWAP-test tail: Hadamard, controlled swaps of each trash/reference
/// pair, Hadamard. Indices refer to the full circuit.
pub(crate) fn swap_test_gates(layout: &CircuitLayout) -> Vec<Gate> {
    let control = layout.control_qubit();
    let mut gates = vec![Gate::H { qubit: control }];
    for (trash, reference) in layout.trash_qubits_full().zip(layout.reference_qubits()) {
        gates.push(Gate::Cswap {
            control,
            a: trash,
            b: reference,
        });
    }
    gates.push(Gate::H { qubit: control });
    gates
}

pub fn build_swap_test_circuit(
    params: &AnsatzParameters,
    sample: &EncodedSample,
    layout: &CircuitLayout,
) -> Result<SwapTestCircuit> {
    check_sample(sample, layout)?;
    let offset = layout.data_offset();
    let mut gates: Vec<Gate> = build_ansatz(params, layout)?
        .into_iter()
        .map(|g| g.offset(offset))
        .collect();
    gates.extend(swap_test_gates(layout));
    // Control and reference start in |0>, so the data amplitudes occupy the
    // lowest 2^n_data basis indices of the full register.
    let initial = PureState::zero(1 + layout.n_reference())?.tensor(&sample.state)?;
    Ok(SwapTestCircuit {
        initial,
        gates,
        control: layout.control_qubit(),
    })
}

/// Exact probability that the SWAP-test control reads 0. Equals
/// `1/2 + F/2` with `F` the trash fidelity.
pub fn swap_test_probability_exact(
    params: &AnsatzParameters,
    sample: &EncodedSample,
    layout: &CircuitLayout,
) -> Result<f64> {
    let circuit = build_swap_test_circuit(params, sample, layout)?;
    circuit.run()?.probability_zero(circuit.control)
}

/// Shot estimate `2 * P0_hat - 1` of the trash fidelity from a seeded
/// measurement of the full SWAP-test circuit.
///
/// The estimate is not clamped: with finite shots it can fall slightly
/// outside `[0, 1]`.
pub fn swap_test_fidelity_sampled(
    params: &AnsatzParameters,
    sample: &EncodedSample,
    layout: &CircuitLayout,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    let circuit = build_swap_test_circuit(params, sample, layout)?;
    let counts = sample_counts(&circuit.run()?, shots, seed)?;
    Ok(2.0 * counts.frequency_zero(circuit.control)? - 1.0)
}

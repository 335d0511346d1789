use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{kraus_operators, NoiseChannelSpec};
use crate::model::{
    ansatz_blocks, build_ansatz, swap_test_gates, AnsatzParameters, CircuitLayout, EncodedSample,
};
use crate::qsim::{fidelity_pure_mixed, sample_distribution, MixedState, PureState};
use crate::{Error, Result};

/// Where the channel acts during the ansatz.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// On every qubit a gate touches, right after that gate.
    PerGate,
    /// On every data qubit after each pair block.
    PerBlock,
    /// Once on every data qubit after the whole ansatz, before the SWAP test.
    #[default]
    FinalOnly,
}

/// Data-register density matrix after the noisy ansatz.
pub fn noisy_data_state(
    params: &AnsatzParameters,
    sample: &EncodedSample,
    layout: &CircuitLayout,
    spec: &NoiseChannelSpec,
    placement: Placement,
) -> Result<MixedState> {
    let n = layout.n_data();
    if sample.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: sample.num_qubits(),
        });
    }
    let ops = kraus_operators(spec)?;
    let identity = [
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    ];
    let noiseless = ops == [identity];
    match placement {
        Placement::PerGate => {
            let mut rho = sample.state.to_density();
            for g in build_ansatz(params, layout)? {
                rho.apply(&g)?;
                if !noiseless {
                    for q in g.qubits() {
                        rho.apply_kraus(q, &ops)?;
                    }
                }
            }
            Ok(rho)
        }
        Placement::PerBlock => {
            let mut rho = sample.state.to_density();
            for block in ansatz_blocks(params, layout)? {
                for g in &block.gates {
                    rho.apply(g)?;
                }
                if !noiseless {
                    for q in 0..n {
                        rho.apply_kraus(q, &ops)?;
                    }
                }
            }
            Ok(rho)
        }
        Placement::FinalOnly => {
            let mut psi = sample.state.clone();
            psi.apply_all(&build_ansatz(params, layout)?)?;
            let mut rho = psi.to_density();
            if !noiseless {
                for q in 0..n {
                    rho.apply_kraus(q, &ops)?;
                }
            }
            Ok(rho)
        }
    }
}

/// `<0...0| Tr_latent(rho) |0...0>` for a data-register density matrix.
pub fn trash_fidelity_of_mixed(rho: &MixedState, layout: &CircuitLayout) -> Result<f64> {
    let trash: Vec<usize> = layout.trash_qubits().collect();
    let rho_trash = rho.partial_trace(&trash)?;
    fidelity_pure_mixed(&PureState::zero(layout.n_trash())?, &rho_trash)
}

/// Probability of reading the control qubit as 0 when the SWAP test runs on
/// the data-register state `rho` with fresh reference qubits.
pub fn swap_test_probability_mixed(rho: &MixedState, layout: &CircuitLayout) -> Result<f64> {
    let mut full = rho.prepend_zero_qubits(1 + layout.n_reference())?;
    for g in swap_test_gates(layout) {
        full.apply(&g)?;
    }
    let half = full.dim() / 2;
    Ok(full.probabilities()[..half]
        .iter()
        .sum::<f64>()
        .clamp(0.0, 1.0))
}

/// Trash fidelity under noise. With `shots`, the full SWAP-test register is
/// measured `shots` times and `2 * P0 - 1` is returned unclamped.
pub fn noisy_trash_fidelity(
    params: &AnsatzParameters,
    sample: &EncodedSample,
    layout: &CircuitLayout,
    spec: &NoiseChannelSpec,
    placement: Placement,
    shots: Option<u64>,
    seed: u64,
) -> Result<f64> {
    let rho = noisy_data_state(params, sample, layout, spec, placement)?;
    match shots {
        None => trash_fidelity_of_mixed(&rho, layout),
        Some(shots) => {
            let mut full = rho.prepend_zero_qubits(1 + layout.n_reference())?;
            for g in swap_test_gates(layout) {
                full.apply(&g)?;
            }
            let counts =
                sample_distribution(&full.probabilities(), full.num_qubits(), shots, seed)?;
            Ok(2.0 * counts.frequency_zero(layout.control_qubit())? - 1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::trash_fidelity_exact;
    use crate::noise::NoiseKind;
    use crate::seed;
    use rand::Rng;

    fn layout() -> CircuitLayout {
        CircuitLayout::new(4, 1).unwrap()
    }

    fn sample(s: u64) -> EncodedSample {
        let mut rng = seed::rng(s);
        let raw: Vec<f64> = (0..16).map(|_| rng.random_range(-1.0..1.0)).collect();
        EncodedSample::encode("s", &raw, None).unwrap()
    }

    const PLACEMENTS: [Placement; 3] = [
        Placement::PerGate,
        Placement::PerBlock,
        Placement::FinalOnly,
    ];

    #[test]
    fn zero_noise_matches_pure_path() {
        let l = layout();
        for s in 0..5 {
            let params = AnsatzParameters::random_uniform(&l, 3.0, s);
            let x = sample(100 + s);
            let pure = trash_fidelity_exact(&params, &x, &l).unwrap();
            for kind in NoiseKind::ALL {
                for placement in PLACEMENTS {
                    let spec = NoiseChannelSpec::new(kind, 0.0).unwrap();
                    let f =
                        noisy_trash_fidelity(&params, &x, &l, &spec, placement, None, 0).unwrap();
                    assert!((f - pure).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn full_depolarizing_gives_one_half() {
        let l = layout();
        let params = AnsatzParameters::random_uniform(&l, 3.0, 1);
        let spec = NoiseChannelSpec::new(NoiseKind::Depolarizing, 1.0).unwrap();
        for placement in PLACEMENTS {
            let f =
                noisy_trash_fidelity(&params, &sample(2), &l, &spec, placement, None, 0).unwrap();
            assert!((f - 0.5).abs() < 1e-9, "{placement:?}");
        }
    }

    #[test]
    fn full_damping_gives_one() {
        let l = layout();
        let params = AnsatzParameters::random_uniform(&l, 3.0, 1);
        let spec = NoiseChannelSpec::new(NoiseKind::AmplitudeDamping, 1.0).unwrap();
        for placement in PLACEMENTS {
            let f =
                noisy_trash_fidelity(&params, &sample(2), &l, &spec, placement, None, 0).unwrap();
            assert!((f - 1.0).abs() < 1e-9, "{placement:?}");
        }
    }

    #[test]
    fn full_bit_flip_complements_single_trash_fidelity() {
        let l = layout();
        let params = AnsatzParameters::random_uniform(&l, 3.0, 4);
        let x = sample(8);
        let pure = trash_fidelity_exact(&params, &x, &l).unwrap();
        let spec = NoiseChannelSpec::new(NoiseKind::BitFlip, 1.0).unwrap();
        let f =
            noisy_trash_fidelity(&params, &x, &l, &spec, Placement::FinalOnly, None, 0).unwrap();
        assert!((f - (1.0 - pure)).abs() < 1e-10);
    }

    #[test]
    fn mixed_swap_test_identity() {
        let l = layout();
        let params = AnsatzParameters::random_uniform(&l, 3.0, 5);
        for kind in NoiseKind::ALL {
            let spec = NoiseChannelSpec::new(kind, 0.3).unwrap();
            let rho = noisy_data_state(&params, &sample(6), &l, &spec, Placement::PerGate).unwrap();
            let f = trash_fidelity_of_mixed(&rho, &l).unwrap();
            let p0 = swap_test_probability_mixed(&rho, &l).unwrap();
            assert!((2.0 * p0 - 1.0 - f).abs() < 1e-10);
        }
    }

    #[test]
    fn shot_estimate_is_seeded_and_close() {
        let l = layout();
        let params = AnsatzParameters::random_uniform(&l, 3.0, 5);
        let spec = NoiseChannelSpec::new(NoiseKind::PhaseDamping, 0.5).unwrap();
        let x = sample(9);
        let exact =
            noisy_trash_fidelity(&params, &x, &l, &spec, Placement::PerGate, None, 0).unwrap();
        let a = noisy_trash_fidelity(&params, &x, &l, &spec, Placement::PerGate, Some(100_000), 3)
            .unwrap();
        let b = noisy_trash_fidelity(&params, &x, &l, &spec, Placement::PerGate, Some(100_000), 3)
            .unwrap();
        assert_eq!(a, b);
        // 2 * sd of 2 * P0_hat at 1e5 shots is at most ~0.0064.
        assert!((a - exact).abs() < 0.01, "{a} vs {exact}");
    }
}

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use super::{cost, FidelityMode, GradientMode};
use crate::model::{build_ansatz, AnsatzParameters, CircuitLayout, EncodedSample};
use crate::qsim::Operator;
use crate::{Error, Result};

/// Step for central finite differences.
pub const FD_STEP: f64 = 1e-5;

/// Gradient of the batch cost with the requested rule.
pub fn gradient(
    params: &AnsatzParameters,
    batch: &[EncodedSample],
    layout: &CircuitLayout,
    gradient_mode: GradientMode,
    fidelity_mode: FidelityMode,
    seed: u64,
) -> Result<Vec<f64>> {
    match (gradient_mode, fidelity_mode) {
        (GradientMode::ParameterShift, FidelityMode::Exact) => {
            parameter_shift_gradient(params, batch, layout)
        }
        (GradientMode::ParameterShift, _) => Err(Error::ModeMismatch {
            gradient: gradient_mode.to_string(),
            fidelity: fidelity_mode.to_string(),
        }),
        (GradientMode::FiniteDifference, mode) => {
            finite_difference_gradient(params, batch, layout, mode, seed)
        }
    }
}

/// Exact parameter-shift gradient of `1 - mean F`.
///
/// The trash-zero projector is pulled back through the circuit once per
/// call, so each shifted cost needs only one rotated copy of the prefix
/// state and one quadratic form instead of a full re-simulation.
pub fn parameter_shift_gradient(
    params: &AnsatzParameters,
    batch: &[EncodedSample],
    layout: &CircuitLayout,
) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let n = layout.n_data();
    for s in batch {
        if s.state.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: s.state.num_qubits(),
            });
        }
    }
    let gates = build_ansatz(params, layout)?;
    let trash: Vec<usize> = layout.trash_qubits().collect();

    // after[k]: projector pulled back through every gate after rotation k.
    let mut observable = Operator::zero_projector(n, &trash)?;
    let mut after = Vec::with_capacity(params.len());
    for g in gates.iter().rev() {
        if g.is_rotation() {
            after.push(observable.clone());
        }
        observable.pull_back(g)?;
    }
    after.reverse();

    let per_sample = batch
        .par_iter()
        .map(|sample| {
            let mut psi = sample.state.clone();
            let mut grad = Vec::with_capacity(after.len());
            for g in &gates {
                if let Some(angle) = g.angle() {
                    let obs = &after[grad.len()];
                    let plus =
                        obs.expectation(&psi.apply_gate(&g.with_angle(angle + FRAC_PI_2))?)?;
                    let minus =
                        obs.expectation(&psi.apply_gate(&g.with_angle(angle - FRAC_PI_2))?)?;
                    grad.push(-(plus - minus) / 2.0);
                }
                psi.apply(g)?;
            }
            Ok(grad)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;

    let scale = 1.0 / batch.len() as f64;
    let mut grad = vec![0.0; params.len()];
    for g in &per_sample {
        for (acc, v) in grad.iter_mut().zip(g) {
            *acc += v;
        }
    }
    grad.iter_mut().for_each(|g| *g *= scale);
    Ok(grad)
}

/// Central differences `(L(t + h) - L(t - h)) / 2h` with `h = FD_STEP`.
/// In sampled mode both sides reuse the same shot streams.
pub fn finite_difference_gradient(
    params: &AnsatzParameters,
    batch: &[EncodedSample],
    layout: &CircuitLayout,
    mode: FidelityMode,
    seed: u64,
) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    params
        .as_slice()
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let up = cost(&params.with(k, t + FD_STEP), batch, layout, mode, seed)?;
            let down = cost(&params.with(k, t - FD_STEP), batch, layout, mode, seed)?;
            Ok((up - down) / (2.0 * FD_STEP))
        })
        .collect()
}

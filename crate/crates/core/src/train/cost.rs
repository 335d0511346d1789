use rayon::prelude::*;

use super::FidelityMode;
use crate::model::{
    swap_test_fidelity_sampled, trash_fidelity_exact, AnsatzParameters, CircuitLayout,
    EncodedSample,
};
use crate::{seed, Error, Result};

/// Trash fidelity of every sample, in batch order. Sampled mode draws each
/// sample from its own stream keyed by `(seed, position)`.
pub fn batch_fidelities(
    params: &AnsatzParameters,
    batch: &[EncodedSample],
    layout: &CircuitLayout,
    mode: FidelityMode,
    seed: u64,
) -> Result<Vec<f64>> {
    batch
        .par_iter()
        .enumerate()
        .map(|(i, sample)| match mode {
            FidelityMode::Exact => trash_fidelity_exact(params, sample, layout),
            FidelityMode::Sampled { shots } => swap_test_fidelity_sampled(
                params,
                sample,
                layout,
                shots,
                seed::derive(seed, &[i as u64]),
            ),
        })
        .collect()
}

/// Mean of `values`, summed in order; 0 for an empty slice is an error.
pub fn mean_fidelity(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// `L = (1/N) sum_i (1 - F_i)`. Sampled estimates can stray outside
/// `[0, 1]`; the batch loss is clamped back into range.
pub fn cost(
    params: &AnsatzParameters,
    batch: &[EncodedSample],
    layout: &CircuitLayout,
    mode: FidelityMode,
    seed: u64,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let fids = batch_fidelities(params, batch, layout, mode, seed)?;
    Ok((1.0 - mean_fidelity(&fids)?).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout() -> CircuitLayout {
        CircuitLayout::new(4, 1).unwrap()
    }

    fn basis(i: usize) -> EncodedSample {
        let mut raw = vec![0.0; 16];
        raw[i] = 1.0;
        EncodedSample::encode(i.to_string(), &raw, None).unwrap()
    }

    #[test]
    fn zero_loss_when_every_trash_qubit_is_zero() {
        let batch: Vec<_> = [0, 2, 4, 14].into_iter().map(basis).collect();
        let l = cost(
            &AnsatzParameters::zeros(&layout()),
            &batch,
            &layout(),
            FidelityMode::Exact,
            0,
        )
        .unwrap();
        assert_eq!(l, 0.0);
    }

    #[test]
    fn averages_infidelity() {
        // |0000> has F = 1; (|0000> + |0001>)/sqrt2 has F = 0.5.
        let mut raw = vec![0.0; 16];
        raw[0] = 1.0;
        raw[1] = 1.0;
        let half = EncodedSample::encode("h", &raw, None).unwrap();
        let batch = vec![basis(0), half];
        let l = cost(
            &AnsatzParameters::zeros(&layout()),
            &batch,
            &layout(),
            FidelityMode::Exact,
            0,
        )
        .unwrap();
        assert!((l - 0.25).abs() < 1e-15);
    }

    #[test]
    fn empty_batch_is_an_error() {
        assert!(matches!(
            cost(
                &AnsatzParameters::zeros(&layout()),
                &[],
                &layout(),
                FidelityMode::Exact,
                0
            ),
            Err(Error::EmptyBatch)
        ));
    }

    #[test]
    fn sampled_cost_is_seeded() {
        let params = AnsatzParameters::random_uniform(&layout(), 1.0, 4);
        let batch: Vec<_> = (0..8).map(basis).collect();
        let mode = FidelityMode::Sampled { shots: 256 };
        let a = cost(&params, &batch, &layout(), mode, 17).unwrap();
        let b = cost(&params, &batch, &layout(), mode, 17).unwrap();
        assert_eq!(a, b);
    }
}

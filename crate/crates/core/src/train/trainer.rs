use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{batch_fidelities, gradient, mean_fidelity, AdamState, TrainConfig};
use crate::model::{AnsatzParameters, CircuitLayout, EncodedSample};
use crate::{seed, Error, Label, Result};

// Stream indices under the training seed.
const STREAM_INIT: u64 = 0;
const STREAM_SHUFFLE: u64 = 1;
const STREAM_STEP: u64 = 2;
const STREAM_EVAL: u64 = 3;

/// Summary of one epoch, evaluated after its last update. Sampled means
/// are clamped into `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub test_loss: f64,
    pub train_fidelity_mean: f64,
    pub test_nonfraud_fidelity_mean: f64,
    pub test_fraud_fidelity_mean: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    /// Number of optimizer updates performed.
    pub steps: u64,
}

impl TrainHistory {
    pub fn last(&self) -> Option<&EpochRecord> {
        self.epochs.last()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for rec in &self.epochs {
            w.serialize(rec)?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }
}

/// Serialized result of a training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub layout: CircuitLayout,
    pub theta: Vec<f64>,
    pub config: TrainConfig,
    pub final_epoch: usize,
}

impl TrainedModel {
    pub fn params(&self) -> Result<AnsatzParameters> {
        AnsatzParameters::new(&self.layout, self.theta.clone())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        fs::write(path, json).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let model: TrainedModel = serde_json::from_str(&text)?;
        model.params()?;
        Ok(model)
    }
}

/// Trains on legitimate samples only; see [`train_loop_with`].
pub fn train_loop(
    config: &TrainConfig,
    layout: &CircuitLayout,
    train: &[EncodedSample],
    test_nonfraud: &[EncodedSample],
    test_fraud: &[EncodedSample],
) -> Result<(TrainedModel, TrainHistory)> {
    train_loop_with(config, layout, train, test_nonfraud, test_fraud, |_| {})
}

/// Mini-batch Adam over `config.epochs` epochs. The training set is
/// reshuffled every epoch and the final partial batch is kept. Calls
/// `on_epoch` after each epoch's evaluation.
pub fn train_loop_with(
    config: &TrainConfig,
    layout: &CircuitLayout,
    train: &[EncodedSample],
    test_nonfraud: &[EncodedSample],
    test_fraud: &[EncodedSample],
    mut on_epoch: impl FnMut(&EpochRecord),
) -> Result<(TrainedModel, TrainHistory)> {
    config.validate()?;
    if train.is_empty() || test_nonfraud.is_empty() || test_fraud.is_empty() {
        return Err(Error::EmptyRecords);
    }
    if let Some(s) = train.iter().find(|s| s.label == Some(Label::Fraud)) {
        return Err(Error::FraudInTraining(s.id.clone()));
    }
    for s in train.iter().chain(test_nonfraud).chain(test_fraud) {
        if s.num_qubits() != layout.n_data() {
            return Err(Error::DimensionMismatch {
                expected: layout.n_data(),
                actual: s.num_qubits(),
            });
        }
    }

    let mut params = AnsatzParameters::random_uniform(
        layout,
        config.init_half_width,
        seed::derive(config.seed, &[STREAM_INIT]),
    );
    let mut adam = AdamState::new(params.len());
    let mut shuffle_rng = seed::rng(seed::derive(config.seed, &[STREAM_SHUFFLE]));
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut history = TrainHistory::default();

    for epoch in 1..=config.epochs {
        order.shuffle(&mut shuffle_rng);
        for chunk in order.chunks(config.batch_size) {
            let batch: Vec<EncodedSample> = chunk.iter().map(|&i| train[i].clone()).collect();
            let grad = gradient(
                &params,
                &batch,
                layout,
                config.gradient_mode,
                config.fidelity_mode,
                seed::derive(config.seed, &[STREAM_STEP, history.steps]),
            )?;
            adam.step(params.as_mut_slice(), &grad, config)?;
            history.steps += 1;
        }

        let eval = |set: &[EncodedSample], which: u64| -> Result<f64> {
            let s = seed::derive(config.seed, &[STREAM_EVAL, epoch as u64, which]);
            let f = batch_fidelities(&params, set, layout, config.fidelity_mode, s)?;
            Ok(mean_fidelity(&f)?.clamp(0.0, 1.0))
        };
        let train_f = eval(train, 0)?;
        let test_nf = eval(test_nonfraud, 1)?;
        let test_fr = eval(test_fraud, 2)?;
        let record = EpochRecord {
            epoch,
            train_loss: 1.0 - train_f,
            test_loss: 1.0 - test_nf,
            train_fidelity_mean: train_f,
            test_nonfraud_fidelity_mean: test_nf,
            test_fraud_fidelity_mean: test_fr,
        };
        log::info!(
            "epoch {epoch}: train loss {:.5}, test non-fraud F {:.4}, test fraud F {:.4}",
            record.train_loss,
            test_nf,
            test_fr
        );
        on_epoch(&record);
        history.epochs.push(record);
    }

    let model = TrainedModel {
        layout: *layout,
        theta: params.into_vec(),
        config: config.clone(),
        final_epoch: config.epochs,
    };
    Ok((model, history))
}

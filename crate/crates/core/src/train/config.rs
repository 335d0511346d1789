use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    /// Exact for single-Pauli rotations: `(L(t + pi/2) - L(t - pi/2)) / 2`.
    ParameterShift,
    /// Central difference with step [`super::FD_STEP`].
    FiniteDifference,
}

/// How trash fidelities are obtained during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityMode {
    /// Partial trace of the compressed state.
    Exact,
    /// Shot-sampled SWAP test.
    Sampled { shots: u64 },
}

impl fmt::Display for GradientMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradientMode::ParameterShift => f.write_str("parameter_shift"),
            GradientMode::FiniteDifference => f.write_str("finite_difference"),
        }
    }
}

impl fmt::Display for FidelityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FidelityMode::Exact => f.write_str("exact"),
            FidelityMode::Sampled { shots } => write!(f, "sampled({shots})"),
        }
    }
}

/// Training hyperparameters. Defaults: Adam with learning rate 0.001,
/// batch size 64, 100 epochs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub seed: u64,
    pub gradient_mode: GradientMode,
    pub fidelity_mode: FidelityMode,
    /// Initial angles are drawn uniformly from `[-init_half_width, init_half_width]`.
    pub init_half_width: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            batch_size: 64,
            learning_rate: 0.001,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            seed: 0,
            gradient_mode: GradientMode::ParameterShift,
            fidelity_mode: FidelityMode::Exact,
            init_half_width: 0.1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidConfig(
                "learning_rate must be positive".into(),
            ));
        }
        for (name, b) in [
            ("adam_beta1", self.adam_beta1),
            ("adam_beta2", self.adam_beta2),
        ] {
            if !(0.0..1.0).contains(&b) {
                return Err(Error::InvalidConfig(format!("{name} must lie in [0, 1)")));
            }
        }
        if self.adam_eps.is_nan() || self.adam_eps <= 0.0 {
            return Err(Error::InvalidConfig("adam_eps must be positive".into()));
        }
        if !(self.init_half_width >= 0.0 && self.init_half_width.is_finite()) {
            return Err(Error::InvalidConfig(
                "init_half_width must be non-negative".into(),
            ));
        }
        if let FidelityMode::Sampled { shots: 0 } = self.fidelity_mode {
            return Err(Error::ZeroShots);
        }
        if self.gradient_mode == GradientMode::ParameterShift
            && self.fidelity_mode != FidelityMode::Exact
        {
            return Err(Error::ModeMismatch {
                gradient: self.gradient_mode.to_string(),
                fidelity: self.fidelity_mode.to_string(),
            });
        }
        Ok(())
    }
}

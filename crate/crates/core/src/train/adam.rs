use serde::{Deserialize, Serialize};

use super::TrainConfig;
use crate::model::AnsatzParameters;
use crate::{Error, Result};

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            m: vec![0.0; len],
            v: vec![0.0; len],
            t: 0,
        }
    }

    /// One bias-corrected Adam update of `theta` in place.
    pub fn step(&mut self, theta: &mut [f64], grad: &[f64], config: &TrainConfig) -> Result<()> {
        if grad.len() != theta.len() || self.m.len() != theta.len() {
            return Err(Error::ParamLength {
                expected: theta.len(),
                actual: grad.len().min(self.m.len()),
            });
        }
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite("gradient"));
        }
        let (b1, b2) = (config.adam_beta1, config.adam_beta2);
        self.t += 1;
        let c1 = 1.0 - b1.powi(self.t as i32);
        let c2 = 1.0 - b2.powi(self.t as i32);
        for i in 0..theta.len() {
            self.m[i] = b1 * self.m[i] + (1.0 - b1) * grad[i];
            self.v[i] = b2 * self.v[i] + (1.0 - b2) * grad[i] * grad[i];
            let m_hat = self.m[i] / c1;
            let v_hat = self.v[i] / c2;
            theta[i] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.adam_eps);
        }
        Ok(())
    }
}

/// Functional form of [`AdamState::step`].
pub fn adam_step(
    params: &AnsatzParameters,
    grad: &[f64],
    state: &AdamState,
    config: &TrainConfig,
) -> Result<(AnsatzParameters, AdamState)> {
    let mut next = params.clone();
    let mut state = state.clone();
    state.step(next.as_mut_slice(), grad, config)?;
    Ok((next, state))
}

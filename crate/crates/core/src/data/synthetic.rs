//! Seeded generator for tables shaped like the public credit-card fraud
//! benchmark: columns `Time, V1..V28, Amount, Class`.
//!
//! Legitimate rows follow a low-rank latent-factor model plus
//! per-column noise. Fraud rows are a per-column mean shift with wide
//! spread. Factor loadings are partly orthogonalized against the fraud
//! shift, so fraud moves along directions legitimate rows rarely use.
//! Per-column scales and fraud shifts follow the published class moments
//! of the benchmark's V columns to one or two significant digits.

use rand::Rng;
use rand_distr::{Distribution, LogNormal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::TransactionTable;
use crate::{seed, Error, Label, Result};

const N_V: usize = 28;

/// Legitimate-class standard deviation of V1..V28.
const NONFRAUD_STD: [f64; N_V] = [
    1.9, 1.6, 1.4, 1.4, 1.3, 1.3, 1.2, 1.2, 1.1, 0.9, 1.0, 0.9, 1.0, 0.8, 0.9, 0.8, 0.7, 0.8, 0.8,
    0.8, 0.7, 0.7, 0.6, 0.6, 0.5, 0.5, 0.4, 0.3,
];
/// Fraud-class mean of V1..V28.
const FRAUD_MEAN: [f64; N_V] = [
    -4.8, 3.6, -7.0, 4.5, -3.2, -1.4, -5.6, 0.6, -2.6, -5.7, 3.8, -6.3, -0.1, -7.0, -0.1, -4.1,
    -6.7, -2.2, 0.7, 0.4, 0.7, 0.0, 0.0, -0.1, 0.0, 0.05, 0.2, 0.1,
];
/// Fraud-class standard deviation of V1..V28.
const FRAUD_STD: [f64; N_V] = [
    6.0, 4.3, 7.0, 2.9, 5.0, 1.9, 7.0, 6.0, 2.5, 4.9, 2.7, 4.6, 1.1, 4.3, 1.0, 3.9, 7.0, 2.9, 1.5,
    1.3, 3.9, 1.5, 1.6, 0.5, 0.8, 0.5, 1.4, 0.5,
];
const TIME_SPAN: f64 = 172_792.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticConfig {
    pub n_nonfraud: usize,
    pub n_fraud: usize,
    /// Number of latent factors driving legitimate rows.
    pub latent_rank: usize,
    /// Share of the fraud direction removed from each factor loading, in `[0, 1]`.
    pub alignment_removal: f64,
    /// Noise share of each legitimate column's standard deviation, in `[0, 1]`.
    pub noise_share: f64,
    /// Multiplier on the fraud-class spread.
    pub fraud_spread: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_nonfraud: 20_000,
            n_fraud: 492,
            latent_rank: 8,
            alignment_removal: 1.0,
            noise_share: 0.5,
            fraud_spread: 0.8,
            seed: 0,
        }
    }
}

impl SyntheticConfig {
    fn validate(&self) -> Result<()> {
        if self.n_nonfraud == 0 || self.n_fraud == 0 {
            return Err(Error::InvalidConfig(
                "both classes need at least one row".into(),
            ));
        }
        if self.latent_rank == 0 || self.latent_rank > N_V {
            return Err(Error::InvalidConfig(format!(
                "latent_rank must lie in 1..={N_V}"
            )));
        }
        for (name, v) in [
            ("alignment_removal", self.alignment_removal),
            ("noise_share", self.noise_share),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(self.fraud_spread >= 0.0 && self.fraud_spread.is_finite()) {
            return Err(Error::InvalidConfig(
                "fraud_spread must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

fn normal(rng: &mut impl Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Unit-row loading matrix (`N_V x rank`) with the fraud direction partly
/// projected out.
fn loadings(config: &SyntheticConfig, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let rank = config.latent_rank;
    let norm = FRAUD_MEAN.iter().map(|m| m * m).sum::<f64>().sqrt();
    let u: Vec<f64> = FRAUD_MEAN.iter().map(|m| m / norm).collect();
    let mut l: Vec<Vec<f64>> = (0..N_V)
        .map(|_| (0..rank).map(|_| normal(rng)).collect())
        .collect();
    for k in 0..rank {
        let proj: f64 = (0..N_V).map(|j| u[j] * l[j][k]).sum();
        for j in 0..N_V {
            l[j][k] -= config.alignment_removal * u[j] * proj;
        }
    }
    for row in &mut l {
        let n = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if n > 0.0 {
            row.iter_mut().for_each(|v| *v /= n);
        }
    }
    l
}

/// Generates a labeled table. Legitimate rows come first, then fraud rows.
pub fn generate(config: &SyntheticConfig) -> Result<TransactionTable> {
    config.validate()?;
    let mut rng = seed::rng(seed::derive(config.seed, &[0]));
    let l = loadings(config, &mut rng);
    let signal = (1.0 - config.noise_share.powi(2)).sqrt();
    let amount_nf = LogNormal::new(3.2, 1.4).expect("valid lognormal");
    let amount_fr = LogNormal::new(3.0, 1.8).expect("valid lognormal");

    let mut columns = vec!["Time".to_string()];
    columns.extend((1..=N_V).map(|i| format!("V{i}")));
    columns.push("Amount".to_string());

    let total = config.n_nonfraud + config.n_fraud;
    let mut rows = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for _ in 0..config.n_nonfraud {
        let z: Vec<f64> = (0..config.latent_rank).map(|_| normal(&mut rng)).collect();
        let mut row = Vec::with_capacity(N_V + 2);
        row.push(rng.random_range(0.0..TIME_SPAN));
        for j in 0..N_V {
            let factor: f64 = l[j].iter().zip(&z).map(|(a, b)| a * b).sum();
            let noise = normal(&mut rng);
            row.push(NONFRAUD_STD[j] * (signal * factor + config.noise_share * noise));
        }
        row.push(amount_nf.sample(&mut rng));
        rows.push(row);
        labels.push(Label::NonFraud);
    }
    for _ in 0..config.n_fraud {
        let mut row = Vec::with_capacity(N_V + 2);
        row.push(rng.random_range(0.0..TIME_SPAN));
        for j in 0..N_V {
            row.push(FRAUD_MEAN[j] + config.fraud_spread * FRAUD_STD[j] * normal(&mut rng));
        }
        row.push(amount_fr.sample(&mut rng));
        rows.push(row);
        labels.push(Label::Fraud);
    }
    TransactionTable::new(columns, rows, labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SyntheticConfig {
        SyntheticConfig {
            n_nonfraud: 500,
            n_fraud: 50,
            seed: 3,
            ..SyntheticConfig::default()
        }
    }

    #[test]
    fn shape_and_counts() {
        let t = generate(&small()).unwrap();
        assert_eq!(t.columns().len(), 30);
        assert_eq!(t.columns()[0], "Time");
        assert_eq!(t.columns()[29], "Amount");
        assert_eq!(t.len(), 550);
        assert_eq!(t.fraud_count(), 50);
    }

    #[test]
    fn deterministic() {
        assert_eq!(generate(&small()).unwrap(), generate(&small()).unwrap());
        let other = SyntheticConfig { seed: 4, ..small() };
        assert_ne!(generate(&small()).unwrap(), generate(&other).unwrap());
    }

    #[test]
    fn column_scales_follow_targets() {
        let t = generate(&SyntheticConfig {
            n_nonfraud: 20_000,
            n_fraud: 1,
            ..small()
        })
        .unwrap();
        for j in [1usize, 14, 28] {
            let col: Vec<f64> = t.column(j)[..20_000].to_vec();
            let mean = col.iter().sum::<f64>() / col.len() as f64;
            let sd =
                (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / col.len() as f64).sqrt();
            assert!((sd / NONFRAUD_STD[j - 1] - 1.0).abs() < 0.05, "V{j}: {sd}");
            assert!(mean.abs() < 0.05);
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(generate(&SyntheticConfig {
            n_fraud: 0,
            ..small()
        })
        .is_err());
        assert!(generate(&SyntheticConfig {
            latent_rank: 0,
            ..small()
        })
        .is_err());
        assert!(generate(&SyntheticConfig {
            noise_share: 1.5,
            ..small()
        })
        .is_err());
    }
}

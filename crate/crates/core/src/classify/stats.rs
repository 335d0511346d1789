use serde::{Deserialize, Serialize};

use super::FidelityRecord;
use crate::{Error, Label, Result};

/// Histogram bins on `[0, 1]` used for the overlap coefficient.
pub const OVERLAP_BINS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionStats {
    pub nonfraud: ClassStats,
    pub fraud: ClassStats,
    /// `|mu_nf - mu_f| / sqrt((var_nf + var_f) / 2)`.
    pub cohens_d: f64,
    pub overlap_coefficient: f64,
}

fn class_stats(values: &[f64]) -> ClassStats {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    ClassStats {
        count: values.len(),
        mean,
        std: var.sqrt(),
    }
}

fn histogram(values: &[f64]) -> [f64; OVERLAP_BINS] {
    let mut h = [0.0; OVERLAP_BINS];
    for &v in values {
        let bin = ((v * OVERLAP_BINS as f64) as usize).min(OVERLAP_BINS - 1);
        h[bin] += 1.0;
    }
    let n = values.len() as f64;
    h.iter_mut().for_each(|c| *c /= n);
    h
}

/// Per-class moments, Cohen's d and histogram overlap.
pub fn distribution_stats(records: &[FidelityRecord]) -> Result<DistributionStats> {
    let pick = |label| -> Vec<f64> {
        records
            .iter()
            .filter(|r| r.true_label == label)
            .map(|r| r.fidelity)
            .collect()
    };
    let nf = pick(Label::NonFraud);
    let fr = pick(Label::Fraud);
    for (values, label) in [(&nf, Label::NonFraud), (&fr, Label::Fraud)] {
        if values.len() < 2 {
            return Err(Error::MissingClass(label));
        }
    }
    let a = class_stats(&nf);
    let b = class_stats(&fr);
    let pooled = ((a.std.powi(2) + b.std.powi(2)) / 2.0).sqrt();
    let diff = (a.mean - b.mean).abs();
    let cohens_d = if pooled > 0.0 {
        diff / pooled
    } else if diff == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let (ha, hb) = (histogram(&nf), histogram(&fr));
    let overlap: f64 = ha.iter().zip(&hb).map(|(x, y)| x.min(*y)).sum();
    Ok(DistributionStats {
        nonfraud: a,
        fraud: b,
        cohens_d,
        overlap_coefficient: overlap.clamp(0.0, 1.0),
    })
}

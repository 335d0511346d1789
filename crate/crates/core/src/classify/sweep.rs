use std::io::Write;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{compute_metrics, FidelityRecord, MetricsReport};
use crate::{seed, Error, Result};

/// Decision thresholds evaluated by default.
pub const DEFAULT_THRESHOLDS: [f64; 5] = [0.40, 0.45, 0.50, 0.55, 0.65];

/// Fractions of the fraud pool used by the prevalence study.
pub const PREVALENCE_FRACTIONS: [f64; 4] = [0.2, 0.4, 0.6, 0.8];

/// One report per threshold, in input order.
pub fn threshold_sweep(
    records: &[FidelityRecord],
    thresholds: &[f64],
) -> Result<Vec<MetricsReport>> {
    if thresholds.is_empty() {
        return Err(Error::InvalidConfig("no thresholds given".into()));
    }
    thresholds
        .par_iter()
        .map(|&t| compute_metrics(records, t))
        .collect()
}

/// Report with the highest F1; ties go to the earliest entry.
pub fn best_by_f1(reports: &[MetricsReport]) -> Option<&MetricsReport> {
    reports
        .iter()
        .fold(None, |best: Option<&MetricsReport>, r| match best {
            Some(b) if b.f1 >= r.f1 => Some(b),
            _ => Some(r),
        })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrevalenceRow {
    pub fraction: f64,
    pub fraud_count: usize,
    #[serde(flatten)]
    pub metrics: MetricsReport,
}

/// Metrics per threshold after keeping `round(fraction * pool)` fraud
/// records, drawn without replacement from a stream keyed by the fraction.
/// A fraction of 1 keeps the whole pool.
pub fn prevalence_sweep(
    nonfraud: &[FidelityRecord],
    fraud_pool: &[FidelityRecord],
    fractions: &[f64],
    thresholds: &[f64],
    seed_value: u64,
) -> Result<Vec<PrevalenceRow>> {
    let mut rows = Vec::new();
    for &fraction in fractions {
        if !(fraction > 0.0 && fraction.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "fraction {fraction} must be positive"
            )));
        }
        let needed = (fraction * fraud_pool.len() as f64).round() as usize;
        if needed > fraud_pool.len() || needed == 0 {
            return Err(Error::InsufficientFraudPool {
                needed: needed.max(1),
                available: fraud_pool.len(),
            });
        }
        let mut records = nonfraud.to_vec();
        if needed == fraud_pool.len() {
            records.extend_from_slice(fraud_pool);
        } else {
            let mut rng = seed::rng(seed::derive(seed_value, &[fraction.to_bits()]));
            let mut picked = index::sample(&mut rng, fraud_pool.len(), needed).into_vec();
            picked.sort_unstable();
            records.extend(picked.into_iter().map(|i| fraud_pool[i].clone()));
        }
        for metrics in threshold_sweep(&records, thresholds)? {
            rows.push(PrevalenceRow {
                fraction,
                fraud_count: needed,
                metrics,
            });
        }
    }
    Ok(rows)
}

/// One row per report, columns `threshold, accuracy, precision, recall,
/// specificity, f1, g_mean, mcc, tp, tn, fp, fn, degenerate`.
pub fn write_metrics_csv<W: Write>(reports: &[MetricsReport], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in reports {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_prevalence_csv<W: Write>(rows: &[PrevalenceRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "fraction",
        "fraud_count",
        "threshold",
        "accuracy",
        "precision",
        "recall",
        "specificity",
        "f1",
        "g_mean",
        "mcc",
        "tp",
        "tn",
        "fp",
        "fn",
        "degenerate",
    ])?;
    for r in rows {
        let m = &r.metrics;
        w.write_record([
            r.fraction.to_string(),
            r.fraud_count.to_string(),
            m.threshold.to_string(),
            m.accuracy.to_string(),
            m.precision.to_string(),
            m.recall.to_string(),
            m.specificity.to_string(),
            m.f1.to_string(),
            m.g_mean.to_string(),
            m.mcc.to_string(),
            m.tp.to_string(),
            m.tn.to_string(),
            m.fp.to_string(),
            m.fn_.to_string(),
            m.degenerate.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

use serde::{Deserialize, Serialize};

use super::{classify_record, FidelityRecord};
use crate::{Error, Label, Result};

/// Confusion counts and derived rates at one threshold. Rates whose
/// denominator is zero are reported as 0 and set `degenerate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub threshold: f64,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub specificity: f64,
    pub f1: f64,
    pub g_mean: f64,
    pub mcc: f64,
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub degenerate: bool,
}

impl MetricsReport {
    /// Rates from raw confusion counts.
    pub fn from_counts(threshold: f64, tp: u64, tn: u64, fp: u64, fn_: u64) -> Result<Self> {
        let total = tp + tn + fp + fn_;
        if total == 0 {
            return Err(Error::EmptyRecords);
        }
        let mut degenerate = false;
        let mut ratio = |num: f64, den: f64| {
            if den == 0.0 {
                degenerate = true;
                0.0
            } else {
                num / den
            }
        };
        let (tpf, tnf, fpf, fnf) = (tp as f64, tn as f64, fp as f64, fn_ as f64);
        let accuracy = (tpf + tnf) / total as f64;
        let precision = ratio(tpf, tpf + fpf);
        let recall = ratio(tpf, tpf + fnf);
        let specificity = ratio(tnf, tnf + fpf);
        let f1 = ratio(2.0 * precision * recall, precision + recall);
        let mcc = ratio(
            tpf * tnf - fpf * fnf,
            ((tpf + fpf) * (tpf + fnf) * (tnf + fpf) * (tnf + fnf)).sqrt(),
        );
        Ok(Self {
            threshold,
            accuracy,
            precision,
            recall,
            specificity,
            f1,
            g_mean: (recall * specificity).sqrt(),
            mcc: mcc.clamp(-1.0, 1.0),
            tp,
            tn,
            fp,
            fn_,
            degenerate,
        })
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }
}

/// Confusion matrix of the threshold rule over `records`.
pub fn compute_metrics(records: &[FidelityRecord], threshold: f64) -> Result<MetricsReport> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let (mut tp, mut tn, mut fp, mut fn_) = (0, 0, 0, 0);
    for r in records {
        match (r.true_label, classify_record(r.fidelity, threshold)) {
            (Label::Fraud, Label::Fraud) => tp += 1,
            (Label::NonFraud, Label::NonFraud) => tn += 1,
            (Label::NonFraud, Label::Fraud) => fp += 1,
            (Label::Fraud, Label::NonFraud) => fn_ += 1,
        }
    }
    MetricsReport::from_counts(threshold, tp, tn, fp, fn_)
}

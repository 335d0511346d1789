use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::model::{AnsatzParameters, CircuitLayout, EncodedSample};
use crate::qsim::STATE_TOLERANCE;
use crate::train::{batch_fidelities, FidelityMode};
use crate::{Error, Label, Result};

/// One scored transaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityRecord {
    pub sample_id: String,
    pub fidelity: f64,
    #[serde(rename = "label")]
    pub true_label: Label,
}

impl FidelityRecord {
    pub fn new(sample_id: impl Into<String>, fidelity: f64, true_label: Label) -> Result<Self> {
        if !(0.0..=1.0).contains(&fidelity) {
            return Err(Error::FidelityOutOfRange(fidelity));
        }
        Ok(Self {
            sample_id: sample_id.into(),
            fidelity,
            true_label,
        })
    }
}

/// `NonFraud` iff `fidelity >= threshold`.
pub fn classify_record(fidelity: f64, threshold: f64) -> Label {
    if fidelity >= threshold {
        Label::NonFraud
    } else {
        Label::Fraud
    }
}

/// Scores labeled samples with the trained circuit. Sampled estimates are
/// clamped into `[0, 1]`; exact values are only clamped within tolerance.
pub fn score_samples(
    params: &AnsatzParameters,
    samples: &[EncodedSample],
    layout: &CircuitLayout,
    mode: FidelityMode,
    seed: u64,
) -> Result<Vec<FidelityRecord>> {
    let fids = batch_fidelities(params, samples, layout, mode, seed)?;
    samples
        .iter()
        .zip(fids)
        .map(|(s, f)| {
            let label = s.label.ok_or_else(|| Error::Unlabeled(s.id.clone()))?;
            let f = match mode {
                FidelityMode::Sampled { .. } => f.clamp(0.0, 1.0),
                FidelityMode::Exact if (-STATE_TOLERANCE..=1.0 + STATE_TOLERANCE).contains(&f) => {
                    f.clamp(0.0, 1.0)
                }
                FidelityMode::Exact => f,
            };
            FidelityRecord::new(s.id.clone(), f, label)
        })
        .collect()
}

/// Columns `sample_id,fidelity,label`.
pub fn write_records_csv<W: Write>(records: &[FidelityRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_is_legitimate() {
        assert_eq!(classify_record(0.9, 0.45), Label::NonFraud);
        assert_eq!(classify_record(0.45, 0.45), Label::NonFraud);
        assert_eq!(classify_record(0.2, 0.45), Label::Fraud);
        assert_eq!(classify_record(0.0, 0.0), Label::NonFraud);
    }

    #[test]
    fn record_rejects_out_of_range() {
        assert!(FidelityRecord::new("a", 1.01, Label::Fraud).is_err());
        assert!(FidelityRecord::new("a", -0.01, Label::Fraud).is_err());
        assert!(FidelityRecord::new("a", 1.0, Label::Fraud).is_ok());
    }

    #[test]
    fn scores_carry_labels() {
        let layout = CircuitLayout::new(4, 1).unwrap();
        let mut raw = vec![0.0; 16];
        raw[0] = 1.0;
        let a = EncodedSample::encode("a", &raw, Some(Label::NonFraud)).unwrap();
        raw[0] = 0.0;
        raw[1] = 1.0;
        let b = EncodedSample::encode("b", &raw, Some(Label::Fraud)).unwrap();
        let recs = score_samples(
            &AnsatzParameters::zeros(&layout),
            &[a.clone(), b],
            &layout,
            FidelityMode::Exact,
            0,
        )
        .unwrap();
        assert_eq!(recs[0].fidelity, 1.0);
        assert_eq!(recs[1].fidelity, 0.0);
        assert_eq!(recs[1].true_label, Label::Fraud);

        let unlabeled = EncodedSample { label: None, ..a };
        assert!(matches!(
            score_samples(
                &AnsatzParameters::zeros(&layout),
                &[unlabeled],
                &layout,
                FidelityMode::Exact,
                0
            ),
            Err(Error::Unlabeled(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let recs = vec![FidelityRecord::new("x", 0.5, Label::Fraud).unwrap()];
        let mut buf = Vec::new();
        write_records_csv(&recs, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "sample_id,fidelity,label\nx,0.5,fraud\n"
        );
    }
}

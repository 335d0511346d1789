use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{robust_scale, select_features, SelectionReport, TransactionTable};
use crate::model::EncodedSample;
use crate::{seed, Error, Label, Result};

/// Columns scaled when `scale_all` is off.
const HEAVY_TAILED_COLUMNS: [&str; 2] = ["Time", "Amount"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    /// `None` trains on every legitimate row not held out for testing.
    pub train_nonfraud_count: Option<usize>,
    pub test_nonfraud_count: usize,
    /// Share of the fraud rows placed in the test set, in `(0, 1]`.
    pub test_fraud_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_nonfraud_count: Some(2000),
            test_nonfraud_count: 1000,
            test_fraud_fraction: 1.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRow {
    pub id: usize,
    pub features: Vec<f64>,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Splits {
    pub train_nonfraud: Vec<SplitRow>,
    pub test_nonfraud: Vec<SplitRow>,
    pub test_fraud: Vec<SplitRow>,
}

/// Seeded disjoint partitions. Each partition is sorted by row id.
pub fn make_splits(table: &TransactionTable, spec: &SplitSpec) -> Result<Splits> {
    if !(spec.test_fraud_fraction > 0.0 && spec.test_fraud_fraction <= 1.0) {
        return Err(Error::InfeasibleSplit(format!(
            "test_fraud_fraction {} outside (0, 1]",
            spec.test_fraud_fraction
        )));
    }
    let mut nonfraud: Vec<usize> = Vec::new();
    let mut fraud: Vec<usize> = Vec::new();
    for (i, l) in table.labels().iter().enumerate() {
        if l.is_fraud() {
            fraud.push(i);
        } else {
            nonfraud.push(i);
        }
    }
    let n_test = spec.test_nonfraud_count;
    if n_test == 0 || n_test >= nonfraud.len() {
        return Err(Error::InfeasibleSplit(format!(
            "{n_test} test rows requested from {} legitimate rows",
            nonfraud.len()
        )));
    }
    let n_train = spec.train_nonfraud_count.unwrap_or(nonfraud.len() - n_test);
    if n_train == 0 || n_train + n_test > nonfraud.len() {
        return Err(Error::InfeasibleSplit(format!(
            "{n_train} + {n_test} legitimate rows requested, {} available",
            nonfraud.len()
        )));
    }
    let n_fraud = (spec.test_fraud_fraction * fraud.len() as f64).round() as usize;
    if n_fraud == 0 {
        return Err(Error::InfeasibleSplit(
            "no fraud rows in the test set".into(),
        ));
    }

    nonfraud.shuffle(&mut seed::rng(seed::derive(spec.seed, &[0])));
    fraud.shuffle(&mut seed::rng(seed::derive(spec.seed, &[1])));
    let rows = |idx: &[usize]| -> Vec<SplitRow> {
        let mut idx = idx.to_vec();
        idx.sort_unstable();
        idx.into_iter()
            .map(|i| SplitRow {
                id: table.ids()[i],
                features: table.rows()[i].clone(),
                label: table.labels()[i],
            })
            .collect()
    };
    Ok(Splits {
        train_nonfraud: rows(&nonfraud[..n_train]),
        test_nonfraud: rows(&nonfraud[n_train..n_train + n_test]),
        test_fraud: rows(&fraud[..n_fraud]),
    })
}

/// L2-normalizes and amplitude-encodes rows; ids become sample ids.
pub fn encode_rows(rows: &[SplitRow]) -> Result<Vec<EncodedSample>> {
    rows.iter()
        .map(|r| EncodedSample::encode(r.id.to_string(), &r.features, Some(r.label)))
        .collect()
}

/// Encoded partitions plus the selection that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    pub selection: SelectionReport,
    pub reduced: TransactionTable,
    /// Raw (scaled, not normalized) rows of each partition.
    pub splits: Splits,
    pub train_nonfraud: Vec<EncodedSample>,
    pub test_nonfraud: Vec<EncodedSample>,
    pub test_fraud: Vec<EncodedSample>,
}

/// Scaling, selection of `k` features, splitting and encoding.
///
/// Scaling and selection see the full table before it is split, so the
/// selected features carry information from the test rows.
pub fn prepare(
    table: &TransactionTable,
    k: usize,
    scale_all: bool,
    spec: &SplitSpec,
) -> Result<PreparedData> {
    let mut scaled = table.clone();
    for i in 0..table.columns().len() {
        let name = table.columns()[i].as_str();
        if scale_all || HEAVY_TAILED_COLUMNS.contains(&name) {
            let col = robust_scale(&table.column(i))?;
            if col.degenerate {
                log::warn!("column {name} has zero IQR; centred only");
            }
            scaled.set_column(i, &col.values);
        }
    }
    let (selection, reduced) = select_features(&scaled, k)?;
    let splits = make_splits(&reduced, spec)?;
    Ok(PreparedData {
        selection,
        train_nonfraud: encode_rows(&splits.train_nonfraud)?,
        test_nonfraud: encode_rows(&splits.test_nonfraud)?,
        test_fraud: encode_rows(&splits.test_fraud)?,
        reduced,
        splits,
    })
}

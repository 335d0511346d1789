use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::{Error, Label, Result};

/// Name of the 0/1 label column.
pub const LABEL_COLUMN: &str = "Class";

/// Numeric feature matrix with one 0/1 label per row.
#[derive(Debug, Clone, PartialEq)]
pub struct TransactionTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    labels: Vec<Label>,
    /// Stable row ids; the data-row position in the source file.
    ids: Vec<usize>,
    dropped: usize,
}

impl TransactionTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self> {
        let ids = (0..rows.len()).collect();
        Self::with_ids(columns, rows, labels, ids)
    }

    pub fn with_ids(
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<Label>,
        ids: Vec<usize>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyTable);
        }
        if labels.len() != rows.len() || ids.len() != rows.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                actual: labels.len().min(ids.len()),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != columns.len()) {
            return Err(Error::DimensionMismatch {
                expected: columns.len(),
                actual: r.len(),
            });
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("table values"));
        }
        Ok(Self {
            columns,
            rows,
            labels,
            ids,
            dropped: 0,
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows dropped during ingestion.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn fraud_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_fraud()).count()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[index]).collect()
    }

    pub(crate) fn set_column(&mut self, index: usize, values: &[f64]) {
        for (row, v) in self.rows.iter_mut().zip(values) {
            row[index] = *v;
        }
    }

    /// Table restricted to `indices`, in that order. Row order and ids are kept.
    pub fn select_columns(&self, indices: &[usize]) -> TransactionTable {
        TransactionTable {
            columns: indices.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| indices.iter().map(|&i| r[i]).collect())
                .collect(),
            labels: self.labels.clone(),
            ids: self.ids.clone(),
            dropped: self.dropped,
        }
    }

    /// Writes the feature columns followed by `Class`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = self.columns.clone();
        header.push(LABEL_COLUMN.to_string());
        w.write_record(&header)?;
        for (row, label) in self.rows.iter().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            rec.push(label.class().to_string());
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }
}

/// Reads a headed CSV with a `Class` column; every other column must be
/// numeric. Lines starting with `#` are skipped. Rows with unparsable, non-finite or non-0/1 label cells are
/// dropped and counted.
pub fn load_csv(path: &Path) -> Result<TransactionTable> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let header = reader.headers()?.clone();
    let label_idx = header
        .iter()
        .position(|h| h == LABEL_COLUMN)
        .ok_or_else(|| Error::MissingColumn(LABEL_COLUMN.into()))?;
    let columns: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();

    let (mut rows, mut labels, mut ids) = (Vec::new(), Vec::new(), Vec::new());
    let mut dropped = 0;
    for (row_id, record) in reader.records().enumerate() {
        let parsed = record.ok().and_then(|rec| {
            if rec.len() != header.len() {
                return None;
            }
            let label = match rec[label_idx].parse::<f64>().ok()? {
                0.0 => Label::NonFraud,
                1.0 => Label::Fraud,
                _ => return None,
            };
            let mut row = Vec::with_capacity(columns.len());
            for (i, cell) in rec.iter().enumerate() {
                if i != label_idx {
                    let v: f64 = cell.parse().ok()?;
                    if !v.is_finite() {
                        return None;
                    }
                    row.push(v);
                }
            }
            Some((row, label))
        });
        match parsed {
            Some((row, label)) => {
                rows.push(row);
                labels.push(label);
                ids.push(row_id);
            }
            None => dropped += 1,
        }
    }
    if dropped > 0 {
        log::warn!("{}: dropped {dropped} malformed rows", path.display());
    }
    let mut table = TransactionTable::with_ids(columns, rows, labels, ids)?;
    table.dropped = dropped;
    log::info!(
        "{}: {} rows, {} fraud",
        path.display(),
        table.len(),
        table.fraud_count()
    );
    Ok(table)
}

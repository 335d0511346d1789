use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledColumn {
    pub values: Vec<f64>,
    pub median: f64,
    pub iqr: f64,
    /// Set when the IQR is zero; values are then only centred.
    pub degenerate: bool,
}

/// Quantile of sorted data by linear interpolation between order
/// statistics at position `q * (n - 1)`.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// `(x - median) / IQR`.
pub fn robust_scale(values: &[f64]) -> Result<ScaledColumn> {
    if values.is_empty() {
        return Err(Error::EmptyColumn);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("column"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = quantile(&sorted, 0.5);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let degenerate = iqr == 0.0;
    let div = if degenerate { 1.0 } else { iqr };
    Ok(ScaledColumn {
        values: values.iter().map(|v| (v - median) / div).collect(),
        median,
        iqr,
        degenerate,
    })
}

use serde::{Deserialize, Serialize};

use super::TransactionTable;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    /// Constant input; `r` is reported as 0.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub name: String,
    pub r: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    /// Every feature, in table column order.
    pub correlations: Vec<FeatureScore>,
    /// Chosen features by descending `|r|`.
    pub selected: Vec<String>,
}

/// Pearson correlation of two equal-length series.
pub fn pearson_correlation(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::EmptyColumn);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(Correlation {
            r: 0.0,
            degenerate: true,
        });
    }
    Ok(Correlation {
        r: (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0),
        degenerate: false,
    })
}

/// Keeps the `k` features most correlated with the label, ranked by `|r|`
/// with ties going to the earlier column. `k` must be a power of two.
pub fn select_features(
    table: &TransactionTable,
    k: usize,
) -> Result<(SelectionReport, TransactionTable)> {
    if !k.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(k));
    }
    let available = table.columns().len();
    if k > available {
        return Err(Error::TooManyFeatures { k, available });
    }
    let labels: Vec<f64> = table.labels().iter().map(|l| l.class() as f64).collect();
    let correlations = (0..available)
        .map(|i| {
            let c = pearson_correlation(&table.column(i), &labels)?;
            Ok(FeatureScore {
                name: table.columns()[i].clone(),
                r: c.r,
                degenerate: c.degenerate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..available).collect();
    // Stable sort keeps column order among equal |r|.
    order.sort_by(|&a, &b| correlations[b].r.abs().total_cmp(&correlations[a].r.abs()));
    order.truncate(k);
    let reduced = table.select_columns(&order);
    let report = SelectionReport {
        selected: reduced.columns().to_vec(),
        correlations,
    };
    Ok((report, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Label;

    #[test]
    fn perfect_correlations() {
        let y = [0.0, 1.0, 0.0, 1.0, 1.0];
        let inv: Vec<f64> = y.iter().map(|v| 1.0 - v).collect();
        assert!((pearson_correlation(&y, &y).unwrap().r - 1.0).abs() < 1e-15);
        assert!((pearson_correlation(&inv, &y).unwrap().r + 1.0).abs() < 1e-15);
    }

    #[test]
    fn hand_dataset() {
        // x mean 3.5, y mean 0.5; sxy = 3.5, sxx = 17.5, syy = 1.5
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let y = [0.0, 0.0, 1.0, 0.0, 1.0, 1.0];
        let r = pearson_correlation(&x, &y).unwrap().r;
        assert!((r - 3.5 / (17.5f64 * 1.5).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn constant_feature_is_flagged() {
        let c = pearson_correlation(&[2.0; 4], &[0.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(c.r, 0.0);
        assert!(c.degenerate);
    }

    fn table() -> TransactionTable {
        let labels = vec![Label::NonFraud, Label::Fraud, Label::NonFraud, Label::Fraud];
        let rows = vec![
            vec![1.0, 0.0, 5.0, 0.1],
            vec![1.0, 1.0, 4.0, 0.9],
            vec![1.0, 0.0, 3.0, 0.2],
            vec![1.0, 1.0, 2.0, 0.8],
        ];
        let cols = ["a", "b", "c", "d"].map(String::from).to_vec();
        TransactionTable::new(cols, rows, labels).unwrap()
    }

    #[test]
    fn ranks_by_absolute_correlation() {
        let (report, reduced) = select_features(&table(), 2).unwrap();
        assert_eq!(report.selected, ["b", "d"]);
        assert_eq!(reduced.rows()[1], vec![1.0, 0.9]);
        let (report, reduced) = select_features(&table(), 4).unwrap();
        assert_eq!(report.selected, ["b", "d", "c", "a"]);
        assert_eq!(reduced.len(), 4);
    }

    #[test]
    fn k_must_be_power_of_two_and_available() {
        assert!(matches!(
            select_features(&table(), 3),
            Err(Error::NotPowerOfTwo(3))
        ));
        assert!(matches!(
            select_features(&table(), 8),
            Err(Error::TooManyFeatures { .. })
        ));
    }
}

//! Fidelity threshold classification and its evaluation.
//!
//! A transaction is called legitimate when its trash fidelity reaches the
//! threshold and fraudulent otherwise. Fraud is the positive class in every
//! metric.

mod metrics;
mod record;
mod stats;
mod sweep;

pub use metrics::{compute_metrics, MetricsReport};
pub use record::{classify_record, score_samples, write_records_csv, FidelityRecord};
pub use stats::{distribution_stats, ClassStats, DistributionStats, OVERLAP_BINS};
pub use sweep::{
    best_by_f1, prevalence_sweep, threshold_sweep, write_metrics_csv, write_prevalence_csv,
    PrevalenceRow, DEFAULT_THRESHOLDS, PREVALENCE_FRACTIONS,
};

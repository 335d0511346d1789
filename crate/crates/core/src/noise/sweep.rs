use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{noisy_trash_fidelity, NoiseChannelSpec, NoiseKind, Placement};
use crate::classify::{best_by_f1, threshold_sweep, FidelityRecord, MetricsReport};
use crate::model::{AnsatzParameters, CircuitLayout, EncodedSample};
use crate::{seed, Error, Result};

/// Eleven noise probabilities `0.0, 0.1, ..., 1.0`.
pub const NOISE_P_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Shot counts for the sampling study.
pub const SHOT_GRID: [u64; 7] = [128, 256, 512, 1024, 2048, 4096, 8192];

/// `0.00, 0.01, ..., 1.00`. Noise shifts the fidelity scale, so sweeps
/// search a fine grid for the best threshold.
pub const FINE_THRESHOLDS: [f64; 101] = {
    let mut t = [0.0; 101];
    let mut i = 0;
    while i < 101 {
        t[i] = i as f64 / 100.0;
        i += 1;
    }
    t
};

/// Best-F1 report for one (channel, p, shots) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSweepRow {
    pub channel: NoiseKind,
    pub p: f64,
    /// `None` for exact fidelities.
    pub shots: Option<u64>,
    pub metrics: MetricsReport,
}

/// Labeled fidelity records under noise. Shot estimates are clamped into
/// `[0, 1]`; sample `i` draws from the stream `(seed, i)`.
pub fn noisy_records(
    params: &AnsatzParameters,
    samples: &[EncodedSample],
    layout: &CircuitLayout,
    spec: &NoiseChannelSpec,
    placement: Placement,
    shots: Option<u64>,
    seed_value: u64,
) -> Result<Vec<FidelityRecord>> {
    samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let label = s.label.ok_or_else(|| Error::Unlabeled(s.id.clone()))?;
            let f = noisy_trash_fidelity(
                params,
                s,
                layout,
                spec,
                placement,
                shots,
                seed::derive(seed_value, &[i as u64]),
            )?;
            FidelityRecord::new(s.id.clone(), f.clamp(0.0, 1.0), label)
        })
        .collect()
}

fn best_cell(records: &[FidelityRecord], thresholds: &[f64]) -> Result<MetricsReport> {
    let reports = threshold_sweep(records, thresholds)?;
    Ok(best_by_f1(&reports)
        .expect("threshold grid is nonempty")
        .clone())
}

/// Exact noisy fidelities for every (channel, p), reporting the best-F1
/// threshold of `thresholds` per cell.
pub fn noise_sweep(
    params: &AnsatzParameters,
    samples: &[EncodedSample],
    layout: &CircuitLayout,
    kinds: &[NoiseKind],
    p_grid: &[f64],
    thresholds: &[f64],
    placement: Placement,
) -> Result<Vec<NoiseSweepRow>> {
    if kinds.is_empty() || p_grid.is_empty() || thresholds.is_empty() {
        return Err(Error::InvalidConfig(
            "noise sweep needs nonempty grids".into(),
        ));
    }
    let mut rows = Vec::with_capacity(kinds.len() * p_grid.len());
    for &kind in kinds {
        for &p in p_grid {
            let spec = NoiseChannelSpec::new(kind, p)?;
            let records = noisy_records(params, samples, layout, &spec, placement, None, 0)?;
            let metrics = best_cell(&records, thresholds)?;
            log::info!(
                "{kind} p={p}: best F1 {:.4} at {:.2}",
                metrics.f1,
                metrics.threshold
            );
            rows.push(NoiseSweepRow {
                channel: kind,
                p,
                shots: None,
                metrics,
            });
        }
    }
    Ok(rows)
}

/// Shot-sampled noisy fidelities at a fixed `p` for every (channel, shots).
#[allow(clippy::too_many_arguments)]
pub fn shots_sweep(
    params: &AnsatzParameters,
    samples: &[EncodedSample],
    layout: &CircuitLayout,
    kinds: &[NoiseKind],
    p: f64,
    shot_grid: &[u64],
    thresholds: &[f64],
    placement: Placement,
    seed_value: u64,
) -> Result<Vec<NoiseSweepRow>> {
    if kinds.is_empty() || shot_grid.is_empty() || thresholds.is_empty() {
        return Err(Error::InvalidConfig(
            "shots sweep needs nonempty grids".into(),
        ));
    }
    let mut rows = Vec::with_capacity(kinds.len() * shot_grid.len());
    for (ki, &kind) in kinds.iter().enumerate() {
        let spec = NoiseChannelSpec::new(kind, p)?;
        for &shots in shot_grid {
            let cell_seed = seed::derive(seed_value, &[ki as u64, shots]);
            let records = noisy_records(
                params,
                samples,
                layout,
                &spec,
                placement,
                Some(shots),
                cell_seed,
            )?;
            rows.push(NoiseSweepRow {
                channel: kind,
                p,
                shots: Some(shots),
                metrics: best_cell(&records, thresholds)?,
            });
        }
    }
    Ok(rows)
}

/// Columns `channel, p, shots, threshold, f1, accuracy, precision, recall,
/// specificity, mcc`; `shots` is empty for exact cells.
pub fn write_sweep_csv<W: Write>(rows: &[NoiseSweepRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "channel",
        "p",
        "shots",
        "threshold",
        "f1",
        "accuracy",
        "precision",
        "recall",
        "specificity",
        "mcc",
    ])?;
    for r in rows {
        let m = &r.metrics;
        w.write_record([
            r.channel.to_string(),
            r.p.to_string(),
            r.shots.map(|s| s.to_string()).unwrap_or_default(),
            m.threshold.to_string(),
            m.f1.to_string(),
            m.accuracy.to_string(),
            m.precision.to_string(),
            m.recall.to_string(),
            m.specificity.to_string(),
            m.mcc.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

use std::path::{Path, PathBuf};

use log::info;
use qae_core::classify::{
    distribution_stats, prevalence_sweep, score_samples, threshold_sweep, write_metrics_csv,
    write_prevalence_csv, write_records_csv, FidelityRecord, MetricsReport,
};
use qae_core::data::{
    encode_rows, generate_synthetic, load_csv, prepare as prepare_data, SelectionReport, Splits,
    TransactionTable,
};
use qae_core::hwfeat::{
    evaluate_jobs, extract_features, fit_logistic, load_jobs, save_jobs, synthesize_jobs,
    FeaturePair, JobRecord, JobSynthesis, LogisticModel,
};
use qae_core::model::EncodedSample;
use qae_core::noise::{noise_sweep, shots_sweep, write_sweep_csv, NoiseChannelSpec};
use qae_core::train::{train_loop, FidelityMode, TrainedModel};
use qae_core::{seed, Label};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::config::{RunConfig, SEED_HOLDOUT, SEED_JOBS, SEED_PREVALENCE, SEED_SHOTS};
use crate::output::Output;
use crate::CliError;

const PREPARED: &str = "prepared.json";
const MODEL: &str = "model.json";
/// Seed stream for scoring; only used by sampled fidelity modes.
const SCORE_STREAM: u64 = 7;

/// Cached output of `prepare`: the selection and the scaled rows of each
/// partition.
#[derive(Debug, Serialize, Deserialize)]
struct PreparedCache {
    selection: SelectionReport,
    splits: Splits,
}

struct Encoded {
    train: Vec<EncodedSample>,
    test_nonfraud: Vec<EncodedSample>,
    test_fraud: Vec<EncodedSample>,
}

fn load_table(config: &RunConfig) -> Result<TransactionTable, CliError> {
    match &config.dataset {
        Some(path) => {
            let table = load_csv(path)?;
            info!("loaded {} rows from {}", table.len(), path.display());
            Ok(table)
        }
        None => {
            info!("no dataset configured; generating the synthetic stand-in");
            Ok(generate_synthetic(&config.synthetic)?)
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{what} {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{what} {}: {e}", path.display())))
}

fn load_encoded(config: &RunConfig) -> Result<Encoded, CliError> {
    let path = config.out.join(PREPARED);
    let cache: PreparedCache = read_json(&path, "prepared data (run `qae prepare` first)")?;
    if cache.selection.selected.len() != config.k {
        return Err(CliError::Input(format!(
            "{} holds {} features but k = {}; rerun `qae prepare`",
            path.display(),
            cache.selection.selected.len(),
            config.k
        )));
    }
    Ok(Encoded {
        train: encode_rows(&cache.splits.train_nonfraud)?,
        test_nonfraud: encode_rows(&cache.splits.test_nonfraud)?,
        test_fraud: encode_rows(&cache.splits.test_fraud)?,
    })
}

fn load_model(config: &RunConfig, params: Option<PathBuf>) -> Result<TrainedModel, CliError> {
    let path = params.unwrap_or_else(|| config.out.join(MODEL));
    let model = TrainedModel::load(&path)?;
    if model.layout != config.layout()? {
        return Err(CliError::Input(format!(
            "{} was trained for a different circuit layout",
            path.display()
        )));
    }
    Ok(model)
}

/// Exact fidelities of both test partitions, non-fraud first.
fn score_test(
    config: &RunConfig,
    model: &TrainedModel,
    data: &Encoded,
) -> Result<(Vec<FidelityRecord>, Vec<FidelityRecord>), CliError> {
    let layout = config.layout()?;
    let params = model.params()?;
    let s = config.sub_seed(SCORE_STREAM);
    let nonfraud = score_samples(
        &params,
        &data.test_nonfraud,
        &layout,
        FidelityMode::Exact,
        s,
    )?;
    let fraud = score_samples(&params, &data.test_fraud, &layout, FidelityMode::Exact, s)?;
    Ok((nonfraud, fraud))
}

pub fn prepare(config: &RunConfig) -> Result<(), CliError> {
    let table = load_table(config)?;
    let prepared = prepare_data(&table, config.k, config.scale_all, &config.split)?;
    let out = Output::new(config, "prepare")?;
    out.csv("reduced.csv", |w| prepared.reduced.write_csv(w))?;
    out.json("selection.json", &prepared.selection)?;
    out.json(
        PREPARED,
        &PreparedCache {
            selection: prepared.selection.clone(),
            splits: prepared.splits.clone(),
        },
    )?;
    println!(
        "rows: {} non-fraud, {} fraud ({} malformed dropped)",
        table.len() - table.fraud_count(),
        table.fraud_count(),
        table.dropped()
    );
    println!(
        "split: train {} non-fraud, test {} non-fraud + {} fraud",
        prepared.splits.train_nonfraud.len(),
        prepared.splits.test_nonfraud.len(),
        prepared.splits.test_fraud.len()
    );
    println!("selected: {}", prepared.selection.selected.join(", "));
    Ok(())
}

pub fn train(config: &RunConfig) -> Result<(), CliError> {
    let data = load_encoded(config)?;
    let layout = config.layout()?;
    let (model, history) = train_loop(
        &config.train,
        &layout,
        &data.train,
        &data.test_nonfraud,
        &data.test_fraud,
    )?;
    let out = Output::new(config, "train")?;
    model.save(&out.path(MODEL))?;
    out.csv("history.csv", |w| history.write_csv(w))?;
    if let Some(last) = history.last() {
        println!(
            "epoch {}: train loss {:.6}, test loss {:.6}",
            last.epoch, last.train_loss, last.test_loss
        );
        println!(
            "mean fidelity: train {:.4}, test non-fraud {:.4}, test fraud {:.4}",
            last.train_fidelity_mean,
            last.test_nonfraud_fidelity_mean,
            last.test_fraud_fidelity_mean
        );
    }
    Ok(())
}

pub fn evaluate(config: &RunConfig, params: Option<PathBuf>) -> Result<(), CliError> {
    let model = load_model(config, params)?;
    let data = load_encoded(config)?;
    let (nonfraud, fraud) = score_test(config, &model, &data)?;
    let records: Vec<FidelityRecord> = nonfraud.into_iter().chain(fraud).collect();
    let reports = threshold_sweep(&records, &config.thresholds)?;
    let stats = distribution_stats(&records)?;
    let out = Output::new(config, "evaluate")?;
    out.csv("fidelities.csv", |w| write_records_csv(&records, w))?;
    out.csv("metrics.csv", |w| write_metrics_csv(&reports, w))?;
    out.json("distribution.json", &stats)?;
    print_metrics(&reports);
    println!(
        "fidelity: non-fraud {:.4} ± {:.4}, fraud {:.4} ± {:.4}, Cohen's d {:.3}, overlap {:.3}",
        stats.nonfraud.mean,
        stats.nonfraud.std,
        stats.fraud.mean,
        stats.fraud.std,
        stats.cohens_d,
        stats.overlap_coefficient
    );
    Ok(())
}

fn print_metrics(reports: &[MetricsReport]) {
    println!("threshold  accuracy  precision  recall  f1      mcc");
    for r in reports {
        println!(
            "{:<9.2}  {:<8.4}  {:<9.4}  {:<6.4}  {:<6.4}  {:.4}{}",
            r.threshold,
            r.accuracy,
            r.precision,
            r.recall,
            r.f1,
            r.mcc,
            if r.degenerate { "  (degenerate)" } else { "" }
        );
    }
}

pub fn sweep_prevalence(config: &RunConfig, params: Option<PathBuf>) -> Result<(), CliError> {
    let model = load_model(config, params)?;
    let data = load_encoded(config)?;
    let (nonfraud, fraud) = score_test(config, &model, &data)?;
    let rows = prevalence_sweep(
        &nonfraud,
        &fraud,
        &config.prevalence.fractions,
        &config.prevalence.thresholds,
        config.sub_seed(SEED_PREVALENCE),
    )?;
    let out = Output::new(config, "sweep-prevalence")?;
    let path = out.csv("prevalence.csv", |w| write_prevalence_csv(&rows, w))?;
    for r in &rows {
        println!(
            "fraction {:.1} ({} fraud) threshold {:.2}: accuracy {:.4} f1 {:.4} mcc {:.4}",
            r.fraction,
            r.fraud_count,
            r.metrics.threshold,
            r.metrics.accuracy,
            r.metrics.f1,
            r.metrics.mcc
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn test_samples(data: Encoded) -> Vec<EncodedSample> {
    data.test_nonfraud
        .into_iter()
        .chain(data.test_fraud)
        .collect()
}

pub fn sweep_noise(config: &RunConfig, params: Option<PathBuf>) -> Result<(), CliError> {
    let model = load_model(config, params)?;
    let samples = test_samples(load_encoded(config)?);
    let rows = noise_sweep(
        &model.params()?,
        &samples,
        &config.layout()?,
        &config.noise.kinds,
        &config.noise.p_grid,
        &config.noise.thresholds,
        config.noise.placement,
    )?;
    let out = Output::new(config, "sweep-noise")?;
    let path = out.csv("noise.csv", |w| write_sweep_csv(&rows, w))?;
    for r in &rows {
        println!(
            "{:<18} p={:.1}: best f1 {:.4} at threshold {:.2}",
            r.channel.to_string(),
            r.p,
            r.metrics.f1,
            r.metrics.threshold
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

pub fn sweep_shots(config: &RunConfig, params: Option<PathBuf>) -> Result<(), CliError> {
    let model = load_model(config, params)?;
    let samples = test_samples(load_encoded(config)?);
    let rows = shots_sweep(
        &model.params()?,
        &samples,
        &config.layout()?,
        &config.noise.kinds,
        config.noise.shots_p,
        &config.noise.shot_grid,
        &config.noise.thresholds,
        config.noise.placement,
        config.sub_seed(SEED_SHOTS),
    )?;
    let out = Output::new(config, "sweep-shots")?;
    let path = out.csv("shots.csv", |w| write_sweep_csv(&rows, w))?;
    for r in &rows {
        println!(
            "{:<18} shots={:<5}: best f1 {:.4} at threshold {:.2}",
            r.channel.to_string(),
            r.shots.unwrap_or(0),
            r.metrics.f1,
            r.metrics.threshold
        );
    }
    println!("wrote {}", path.display());
    Ok(())
}

#[derive(Debug, Serialize)]
struct HwMetrics {
    jobs: usize,
    /// Fit and scored on every job.
    in_sample: MetricsReport,
    /// Fit on a stratified half, scored on the other half.
    held_out: Option<HeldOut>,
}

#[derive(Debug, Clone, Serialize)]
struct HeldOut {
    train_jobs: usize,
    test_jobs: usize,
    model: LogisticModel,
    metrics: MetricsReport,
}

/// Stratified half split of job indices, seeded.
fn holdout_split(labels: &[Label], seed_value: u64) -> (Vec<usize>, Vec<usize>) {
    let mut fit = Vec::new();
    let mut test = Vec::new();
    for (k, class) in [Label::NonFraud, Label::Fraud].into_iter().enumerate() {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        idx.shuffle(&mut seed::rng(seed::derive(seed_value, &[k as u64])));
        let half = idx.len() / 2;
        fit.extend_from_slice(&idx[..half]);
        test.extend_from_slice(&idx[half..]);
    }
    fit.sort_unstable();
    test.sort_unstable();
    (fit, test)
}

fn held_out(
    config: &RunConfig,
    features: &[FeaturePair],
    labels: &[Label],
) -> Result<Option<HeldOut>, CliError> {
    let (fit, test) = holdout_split(labels, config.sub_seed(SEED_HOLDOUT));
    let pick = |idx: &[usize]| -> (Vec<_>, Vec<_>) {
        idx.iter().map(|&i| (features[i], labels[i])).unzip()
    };
    let (fx, fy) = pick(&fit);
    let (tx, ty) = pick(&test);
    let has_both = |y: &[Label]| y.contains(&Label::Fraud) && y.contains(&Label::NonFraud);
    if !has_both(&fy) || !has_both(&ty) {
        log::warn!("too few jobs per class for a held-out evaluation");
        return Ok(None);
    }
    let model = fit_logistic(&fx, &fy, &config.hw.logistic)?;
    let metrics = evaluate_jobs(&tx, &ty, &model)?;
    Ok(Some(HeldOut {
        train_jobs: fit.len(),
        test_jobs: test.len(),
        model,
        metrics,
    }))
}

pub fn hw_classify(config: &RunConfig, jobs_path: &Path) -> Result<(), CliError> {
    let jobs = load_jobs(jobs_path)?;
    let features = extract_features(&jobs)?;
    let labels: Vec<Label> = jobs.iter().map(|j| j.label).collect();
    let model = fit_logistic(&features, &labels, &config.hw.logistic)?;
    let in_sample = evaluate_jobs(&features, &labels, &model)?;
    let held_out = held_out(config, &features, &labels)?;
    let out = Output::new(config, "hw-classify")?;
    out.json("hw_model.json", &model)?;
    out.json(
        "hw_metrics.json",
        &HwMetrics {
            jobs: jobs.len(),
            in_sample: in_sample.clone(),
            held_out: held_out.clone(),
        },
    )?;
    println!(
        "model: w_fidelity {:.4}, w_entropy {:.4}, bias {:.4}, threshold {:.4}",
        model.weight_fidelity, model.weight_entropy, model.bias, model.threshold
    );
    let show = |name: &str, m: &MetricsReport| {
        println!(
            "{name}: accuracy {:.4} recall {:.4} precision {:.4} f1 {:.4} mcc {:.4}",
            m.accuracy, m.recall, m.precision, m.f1, m.mcc
        )
    };
    show("in-sample", &in_sample);
    if let Some(h) = &held_out {
        show("held-out", &h.metrics);
    }
    Ok(())
}

pub fn synth_jobs(
    config: &RunConfig,
    params: Option<PathBuf>,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let model = load_model(config, params)?;
    let data = load_encoded(config)?;
    let synth = JobSynthesis {
        n_jobs: config.hw.n_jobs,
        shots: config.hw.shots,
        noise: NoiseChannelSpec::new(config.hw.noise_kind, config.hw.noise_p)?,
        placement: config.noise.placement,
        seed: config.sub_seed(SEED_JOBS),
    };
    let jobs: Vec<JobRecord> = synthesize_jobs(
        &model.params()?,
        &data.test_nonfraud,
        &data.test_fraud,
        &config.layout()?,
        &synth,
    )?;
    Output::new(config, "synth-jobs")?;
    let path = output.unwrap_or_else(|| config.out.join("jobs.json"));
    save_jobs(&jobs, &path)?;
    println!("wrote {} jobs to {}", jobs.len(), path.display());
    Ok(())
}

pub fn synth_data(config: &RunConfig, output: Option<PathBuf>) -> Result<(), CliError> {
    let table = generate_synthetic(&config.synthetic)?;
    let out = Output::new(config, "synth-data")?;
    let path = match output {
        Some(p) => {
            let file = std::fs::File::create(&p)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", p.display())))?;
            table.write_csv(std::io::BufWriter::new(file))?;
            p
        }
        None => out.csv("synthetic.csv", |w| table.write_csv(w))?,
    };
    println!(
        "wrote {} rows ({} fraud) to {}",
        table.len(),
        table.fraud_count(),
        path.display()
    );
    Ok(())
}

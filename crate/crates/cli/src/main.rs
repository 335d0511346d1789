//! `qae`: data preparation, training, evaluation, sweeps and the
//! counts-file classifier.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Errors split by exit code: 2 for bad input or usage, 3 for failures
/// while running.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<qae_core::Error> for CliError {
    fn from(e: qae_core::Error) -> Self {
        use qae_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Io { .. }
            | E::Csv(_)
            | E::Json(_)
            | E::MissingColumn(_)
            | E::EmptyTable
            | E::EmptyColumn
            | E::NoJobs
            | E::MissingClass(_)
            | E::InvalidConfig(_)
            | E::InvalidThreshold(_)
            | E::InvalidProbability(_)
            | E::InvalidLayout(_)
            | E::InvalidCounts(_)
            | E::ModeMismatch { .. }
            | E::FraudInTraining(_)
            | E::Unlabeled(_)
            | E::ParamLength { .. }
            | E::TooManyFeatures { .. }
            | E::NotPowerOfTwo(_)
            | E::InfeasibleSplit(_)
            | E::InsufficientFraudPool { .. }
            | E::ZeroShots => CliError::Input(msg),
            _ => CliError::Runtime(msg),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qae",
    version,
    about = "Fidelity-driven quantum autoencoder for transaction anomaly detection",
    after_help = "Any configuration field can be overridden with --<dotted.name> <value>, \
                  e.g. --train.epochs 5 or --noise.placement=per_gate."
)]
struct Cli {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SweepKind {
    Prevalence,
    Noise,
    Shots,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scale, select features, split; writes reduced.csv, selection.json, prepared.json.
    Prepare,
    /// Train on the prepared split; writes model.json and history.csv.
    Train,
    /// Score the test partitions; writes fidelities.csv, metrics.csv, distribution.json.
    Evaluate {
        /// Trained model (default: <out>/model.json).
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Prevalence, noise or shot-count sweep.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Fit and evaluate the fidelity/entropy logistic classifier on a counts file.
    HwClassify {
        /// JSON array of jobs with label and counts.
        #[arg(long)]
        jobs: PathBuf,
    },
    /// Simulate a noisy counts file from the trained model and test split.
    SynthJobs {
        #[arg(long)]
        params: Option<PathBuf>,
        /// Destination (default: <out>/jobs.json).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the synthetic stand-in dataset as CSV.
    SynthData {
        /// Destination (default: <out>/synthetic.csv).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the effective configuration as JSON.
    Config,
}

/// Flags owned by clap; everything else of the form `--a.b value` or
/// `--a=value` naming a configuration field is an override.
const RESERVED: &[&str] = &[
    "config", "seed", "out", "threads", "kind", "params", "jobs", "output", "help", "version",
];

/// Splits configuration overrides out of `args`.
fn extract_overrides(args: Vec<String>) -> (Vec<String>, Vec<(String, String)>) {
    let mut rest = Vec::with_capacity(args.len());
    let mut overrides = Vec::new();
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        if arg == "--" {
            rest.push(arg);
            rest.extend(iter.by_ref());
            break;
        }
        let Some(body) = arg.strip_prefix("--") else {
            rest.push(arg);
            continue;
        };
        let (name, inline) = match body.split_once('=') {
            Some((n, v)) => (n.to_string(), Some(v.to_string())),
            None => (body.to_string(), None),
        };
        if RESERVED.contains(&name.as_str())
            || !(name.contains('.') || config::is_config_path(&name))
        {
            rest.push(arg);
            continue;
        }
        let value = match inline {
            Some(v) => Some(v),
            None => iter.next(),
        };
        match value {
            Some(v) => overrides.push((name, v)),
            // Leave it to clap to report the dangling flag.
            None => rest.push(arg),
        }
    }
    (rest, overrides)
}

fn run() -> Result<(), CliError> {
    let (args, mut overrides) = extract_overrides(std::env::args().collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(seed) = cli.seed {
        overrides.push(("seed".into(), seed.to_string()));
    }
    if let Some(out) = &cli.out {
        overrides.push((
            "out".into(),
            serde_json::to_string(out).map_err(|e| CliError::Input(e.to_string()))?,
        ));
    }
    let config = config::load(cli.config.as_deref(), &overrides)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    match cli.command {
        Command::Prepare => commands::prepare(&config),
        Command::Train => commands::train(&config),
        Command::Evaluate { params } => commands::evaluate(&config, params),
        Command::Sweep { kind, params } => match kind {
            SweepKind::Prevalence => commands::sweep_prevalence(&config, params),
            SweepKind::Noise => commands::sweep_noise(&config, params),
            SweepKind::Shots => commands::sweep_shots(&config, params),
        },
        Command::HwClassify { jobs } => commands::hw_classify(&config, &jobs),
        Command::SynthJobs { params, output } => commands::synth_jobs(&config, params, output),
        Command::SynthData { output } => commands::synth_data(&config, output),
        Command::Config => {
            println!(
                "{}",
                serde_json::to_string_pretty(&config).expect("config serializes")
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

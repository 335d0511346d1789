use std::fs;
use std::path::{Path, PathBuf};

use qae_core::classify::{DEFAULT_THRESHOLDS, PREVALENCE_FRACTIONS};
use qae_core::data::{SplitSpec, SyntheticConfig};
use qae_core::hwfeat::LogisticConfig;
use qae_core::model::CircuitLayout;
use qae_core::noise::{NoiseKind, Placement, FINE_THRESHOLDS, NOISE_P_GRID, SHOT_GRID};
use qae_core::seed;
use qae_core::train::TrainConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSettings {
    pub kinds: Vec<NoiseKind>,
    pub p_grid: Vec<f64>,
    pub placement: Placement,
    /// Threshold grid searched for the best F1 in every sweep cell.
    pub thresholds: Vec<f64>,
    /// Noise probability held fixed in the shots sweep.
    pub shots_p: f64,
    pub shot_grid: Vec<u64>,
}

impl Default for NoiseSettings {
    fn default() -> Self {
        Self {
            kinds: NoiseKind::ALL.to_vec(),
            p_grid: NOISE_P_GRID.to_vec(),
            placement: Placement::default(),
            thresholds: FINE_THRESHOLDS.to_vec(),
            shots_p: 0.5,
            shot_grid: SHOT_GRID.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrevalenceSettings {
    pub fractions: Vec<f64>,
    pub thresholds: Vec<f64>,
}

impl Default for PrevalenceSettings {
    fn default() -> Self {
        Self {
            fractions: PREVALENCE_FRACTIONS.to_vec(),
            thresholds: vec![0.30, 0.35, 0.40],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HwSettings {
    pub logistic: LogisticConfig,
    /// Jobs simulated by `synth-jobs`.
    pub n_jobs: usize,
    pub shots: u64,
    pub noise_kind: NoiseKind,
    pub noise_p: f64,
}

impl Default for HwSettings {
    fn default() -> Self {
        Self {
            logistic: LogisticConfig::default(),
            n_jobs: 200,
            shots: 1024,
            noise_kind: NoiseKind::Depolarizing,
            noise_p: 0.3,
        }
    }
}

/// Everything a run needs. Loaded as defaults, then the `--config` file,
/// then dotted command-line overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Labeled CSV; `null` uses the synthetic generator.
    pub dataset: Option<PathBuf>,
    pub synthetic: SyntheticConfig,
    pub n_qubits: usize,
    pub n_trash: usize,
    /// Selected features; must equal `2^n_qubits`.
    pub k: usize,
    /// Robust-scale every column instead of only Time and Amount.
    pub scale_all: bool,
    pub split: SplitSpec,
    pub train: TrainConfig,
    pub thresholds: Vec<f64>,
    pub noise: NoiseSettings,
    pub prevalence: PrevalenceSettings,
    pub hw: HwSettings,
    /// Master seed; data, split, training and sampling seeds derive from it.
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dataset: None,
            synthetic: SyntheticConfig::default(),
            n_qubits: 4,
            n_trash: 1,
            k: 16,
            scale_all: false,
            split: SplitSpec::default(),
            train: TrainConfig::default(),
            thresholds: DEFAULT_THRESHOLDS.to_vec(),
            noise: NoiseSettings::default(),
            prevalence: PrevalenceSettings::default(),
            hw: HwSettings::default(),
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

// Sub-seed streams under the master seed.
const SEED_SYNTHETIC: u64 = 0;
const SEED_SPLIT: u64 = 1;
const SEED_TRAIN: u64 = 2;
pub const SEED_PREVALENCE: u64 = 3;
pub const SEED_SHOTS: u64 = 4;
pub const SEED_JOBS: u64 = 5;
pub const SEED_HOLDOUT: u64 = 6;

impl RunConfig {
    pub fn layout(&self) -> Result<CircuitLayout, CliError> {
        Ok(CircuitLayout::new(self.n_qubits, self.n_trash)?)
    }

    /// Checks cross-field invariants and copies the master seed into every
    /// sub-configuration.
    pub fn finalize(mut self) -> Result<Self, CliError> {
        let layout = self.layout()?;
        if self.k != layout.feature_dim() {
            return Err(CliError::Input(format!(
                "k = {} but {} qubits encode 2^{} = {} features",
                self.k,
                self.n_qubits,
                self.n_qubits,
                layout.feature_dim()
            )));
        }
        self.synthetic.seed = seed::derive(self.seed, &[SEED_SYNTHETIC]);
        self.split.seed = seed::derive(self.seed, &[SEED_SPLIT]);
        self.train.seed = seed::derive(self.seed, &[SEED_TRAIN]);
        self.train.validate()?;
        for &t in self.thresholds.iter().chain(&self.noise.thresholds) {
            if !(0.0..=1.0).contains(&t) {
                return Err(CliError::Input(format!("threshold {t} outside [0, 1]")));
            }
        }
        Ok(self)
    }

    pub fn sub_seed(&self, stream: u64) -> u64 {
        seed::derive(self.seed, &[stream])
    }

    /// Hex SHA-256 of the canonical JSON form, ignoring the output
    /// directory so identical runs in different places hash alike.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        value["out"] = Value::Null;
        let json = value.to_string();
        Sha256::digest(json.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// `true` if `path` (dotted) names a field of the default configuration.
pub fn is_config_path(path: &str) -> bool {
    let defaults = serde_json::to_value(RunConfig::default()).expect("config serializes");
    lookup(&defaults, path).is_some()
}

fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.')
        .try_fold(v, |cur, key| cur.as_object()?.get(key))
}

/// Parses an override value: JSON when it parses, otherwise a bare string.
fn override_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

pub fn load(
    config_path: Option<&Path>,
    overrides: &[(String, String)],
) -> Result<RunConfig, CliError> {
    let mut value = serde_json::to_value(RunConfig::default()).expect("config serializes");
    if let Some(path) = config_path {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let file: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        merge(&mut value, file);
    }
    for (path, raw) in overrides {
        let mut patch = override_value(raw);
        if lookup(&value, path).is_none() && !is_config_path(path) {
            return Err(CliError::Input(format!(
                "unknown configuration field '{path}'"
            )));
        }
        for key in path.rsplit('.') {
            let mut obj = serde_json::Map::new();
            obj.insert(key.to_string(), patch);
            patch = Value::Object(obj);
        }
        merge(&mut value, patch);
    }
    let config: RunConfig = serde_json::from_value(value)
        .map_err(|e| CliError::Input(format!("invalid configuration: {e}")))?;
    config.finalize()
}

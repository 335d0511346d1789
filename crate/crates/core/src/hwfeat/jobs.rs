use std::fs;
use std::path::Path;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::model::{swap_test_gates, AnsatzParameters, CircuitLayout, EncodedSample};
use crate::noise::{noisy_data_state, NoiseChannelSpec, Placement};
use crate::qsim::{marginal_probabilities, sample_distribution, CountsHistogram};
use crate::{seed, Error, Label, Result};

/// One executed circuit with its readout histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobRecord {
    pub job_id: String,
    #[serde(serialize_with = "label_out", deserialize_with = "label_in")]
    pub label: Label,
    pub counts: CountsHistogram,
}

fn label_out<S: Serializer>(label: &Label, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u8(label.class())
}

fn label_in<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Label, D::Error> {
    match u8::deserialize(d)? {
        0 => Ok(Label::NonFraud),
        1 => Ok(Label::Fraud),
        v => Err(serde::de::Error::custom(format!(
            "label must be 0 or 1, got {v}"
        ))),
    }
}

/// Reads a JSON array of `{job_id, label: 0|1, counts: {bitstring: n}}`.
pub fn load_jobs(path: &Path) -> Result<Vec<JobRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let jobs: Vec<JobRecord> = serde_json::from_str(&text)?;
    if jobs.is_empty() {
        return Err(Error::NoJobs);
    }
    Ok(jobs)
}

pub fn save_jobs(jobs: &[JobRecord], path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(jobs)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeaturePair {
    pub fidelity: f64,
    /// Bits.
    pub entropy: f64,
}

/// Frequency of `reference` among all shots.
pub fn fidelity_feature(counts: &CountsHistogram, reference: &str) -> Result<f64> {
    if reference.len() != counts.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: counts.num_qubits(),
            actual: reference.len(),
        });
    }
    Ok(counts.get(reference) as f64 / counts.total_shots() as f64)
}

/// Shannon entropy of the empirical outcome distribution, in bits.
pub fn entropy_feature(counts: &CountsHistogram) -> f64 {
    let total = counts.total_shots() as f64;
    let h: f64 = counts
        .counts()
        .values()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum();
    h.max(0.0)
}

/// Features of every job against the all-zero reference outcome.
pub fn extract_features(jobs: &[JobRecord]) -> Result<Vec<FeaturePair>> {
    if jobs.is_empty() {
        return Err(Error::NoJobs);
    }
    jobs.par_iter()
        .map(|j| {
            let reference = "0".repeat(j.counts.num_qubits());
            Ok(FeaturePair {
                fidelity: fidelity_feature(&j.counts, &reference)?,
                entropy: entropy_feature(&j.counts),
            })
        })
        .collect()
}

/// Settings for simulated jobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JobSynthesis {
    pub n_jobs: usize,
    pub shots: u64,
    pub noise: NoiseChannelSpec,
    pub placement: Placement,
    pub seed: u64,
}

/// Simulated jobs: half legitimate, half fraud samples (drawn without
/// replacement), each run through the noisy SWAP-test circuit. The control,
/// reference and trash qubits are read out; with all of them at 0 the
/// outcome probability equals the trash fidelity.
pub fn synthesize_jobs(
    params: &AnsatzParameters,
    nonfraud: &[EncodedSample],
    fraud: &[EncodedSample],
    layout: &CircuitLayout,
    synth: &JobSynthesis,
) -> Result<Vec<JobRecord>> {
    let per_class = synth.n_jobs / 2;
    if per_class == 0 || !synth.n_jobs.is_multiple_of(2) {
        return Err(Error::InvalidConfig(
            "n_jobs must be a positive even number".into(),
        ));
    }
    for (pool, label) in [(nonfraud, Label::NonFraud), (fraud, Label::Fraud)] {
        if pool.len() < per_class {
            return Err(Error::InvalidConfig(format!(
                "{per_class} {label} samples needed, {} available",
                pool.len()
            )));
        }
    }
    let mut picked: Vec<(&EncodedSample, Label)> = Vec::with_capacity(synth.n_jobs);
    for (k, (pool, label)) in [(nonfraud, Label::NonFraud), (fraud, Label::Fraud)]
        .into_iter()
        .enumerate()
    {
        let mut rng = seed::rng(seed::derive(synth.seed, &[0, k as u64]));
        let mut idx = index::sample(&mut rng, pool.len(), per_class).into_vec();
        idx.sort_unstable();
        picked.extend(idx.into_iter().map(|i| (&pool[i], label)));
    }
    let measured: Vec<usize> = std::iter::once(layout.control_qubit())
        .chain(layout.reference_qubits())
        .chain(layout.trash_qubits_full())
        .collect();
    picked
        .par_iter()
        .enumerate()
        .map(|(i, (sample, label))| {
            let rho = noisy_data_state(params, sample, layout, &synth.noise, synth.placement)?;
            let mut full = rho.prepend_zero_qubits(1 + layout.n_reference())?;
            for g in swap_test_gates(layout) {
                full.apply(&g)?;
            }
            let probs = marginal_probabilities(&full.probabilities(), full.num_qubits(), &measured);
            let counts = sample_distribution(
                &probs,
                measured.len(),
                synth.shots,
                seed::derive(synth.seed, &[1, i as u64]),
            )?;
            Ok(JobRecord {
                job_id: format!("job-{i:04}-{}", sample.id),
                label: *label,
                counts,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn hist(pairs: &[(&str, u64)]) -> CountsHistogram {
        CountsHistogram::new(
            pairs
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect::<BTreeMap<_, _>>(),
        )
        .unwrap()
    }

    #[test]
    fn fidelity_examples() {
        assert_eq!(fidelity_feature(&hist(&[("000", 10)]), "000").unwrap(), 1.0);
        assert_eq!(fidelity_feature(&hist(&[("001", 10)]), "000").unwrap(), 0.0);
        assert_eq!(
            fidelity_feature(&hist(&[("000", 250), ("110", 750)]), "000").unwrap(),
            0.25
        );
        assert!(fidelity_feature(&hist(&[("000", 1)]), "00").is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_feature(&hist(&[("01", 7)])), 0.0);
        assert_eq!(entropy_feature(&hist(&[("0", 1), ("1", 1)])), 1.0);
        let uniform: BTreeMap<String, u64> =
            (0..64).map(|i| (crate::qsim::bitstring(i, 6), 3)).collect();
        let h = entropy_feature(&CountsHistogram::new(uniform).unwrap());
        assert!((h - 6.0).abs() < 1e-12);
    }

    #[test]
    fn json_format() {
        let text = r#"[{"job_id": "a", "label": 1, "counts": {"000": 3, "101": 1}}]"#;
        let jobs: Vec<JobRecord> = serde_json::from_str(text).unwrap();
        assert_eq!(jobs[0].label, Label::Fraud);
        assert_eq!(jobs[0].counts.total_shots(), 4);
        let back = serde_json::to_string(&jobs).unwrap();
        assert!(back.contains(r#""label":1"#));
        assert!(serde_json::from_str::<Vec<JobRecord>>(
            &text.replace("\"label\": 1", "\"label\": 2")
        )
        .is_err());
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("jobs.json");
        let jobs = vec![JobRecord {
            job_id: "x".into(),
            label: Label::NonFraud,
            counts: hist(&[("00", 5)]),
        }];
        save_jobs(&jobs, &path).unwrap();
        assert_eq!(load_jobs(&path).unwrap(), jobs);
        fs::write(&path, "[]").unwrap();
        assert!(matches!(load_jobs(&path), Err(Error::NoJobs)));
    }

    #[test]
    fn synthesized_reference_frequency_tracks_fidelity() {
        use crate::model::trash_fidelity_exact;
        use crate::noise::NoiseKind;
        let layout = CircuitLayout::new(4, 1).unwrap();
        let params = AnsatzParameters::random_uniform(&layout, 2.0, 3);
        let mk = |i: usize, label| {
            let raw: Vec<f64> = (0..16)
                .map(|k| ((k * 7 + i * 3) % 5) as f64 - 1.5)
                .collect();
            EncodedSample::encode(i.to_string(), &raw, Some(label)).unwrap()
        };
        let nf: Vec<_> = (0..3).map(|i| mk(i, Label::NonFraud)).collect();
        let fr: Vec<_> = (3..6).map(|i| mk(i, Label::Fraud)).collect();
        let synth = JobSynthesis {
            n_jobs: 2,
            shots: 200_000,
            noise: NoiseChannelSpec::new(NoiseKind::Depolarizing, 0.0).unwrap(),
            placement: Placement::FinalOnly,
            seed: 1,
        };
        let jobs = synthesize_jobs(&params, &nf, &fr, &layout, &synth).unwrap();
        assert_eq!(jobs.len(), 2);
        assert_eq!(jobs[0].label, Label::NonFraud);
        assert_eq!(jobs[1].label, Label::Fraud);
        assert_eq!(
            jobs,
            synthesize_jobs(&params, &nf, &fr, &layout, &synth).unwrap()
        );
        for job in &jobs {
            assert_eq!(job.counts.num_qubits(), 3);
            let id: String = job.job_id.rsplit('-').next().unwrap().to_string();
            let sample = nf.iter().chain(&fr).find(|s| s.id == id).unwrap();
            let f = trash_fidelity_exact(&params, sample, &layout).unwrap();
            let est = fidelity_feature(&job.counts, "000").unwrap();
            assert!((est - f).abs() < 0.01, "{est} vs {f}");
        }
        let odd = JobSynthesis { n_jobs: 3, ..synth };
        assert!(synthesize_jobs(&params, &nf, &fr, &layout, &odd).is_err());
    }
}

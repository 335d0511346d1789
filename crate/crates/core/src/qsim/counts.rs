use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::{bitstring, PureState};
use crate::{seed, Error, Result};

/// Measurement outcome histogram keyed by bitstring (qubit 0 first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCounts", into = "RawCounts")]
pub struct CountsHistogram {
    num_qubits: usize,
    counts: BTreeMap<String, u64>,
    total_shots: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawCounts(BTreeMap<String, u64>);

impl TryFrom<RawCounts> for CountsHistogram {
    type Error = Error;

    fn try_from(raw: RawCounts) -> Result<Self> {
        CountsHistogram::new(raw.0)
    }
}

impl From<CountsHistogram> for RawCounts {
    fn from(h: CountsHistogram) -> Self {
        RawCounts(h.counts)
    }
}

impl CountsHistogram {
    /// Validates keys (equal length, only `0`/`1`) and drops zero entries.
    pub fn new(counts: BTreeMap<String, u64>) -> Result<Self> {
        let num_qubits = match counts.keys().next() {
            Some(k) => k.len(),
            None => return Err(Error::InvalidCounts("histogram is empty".into())),
        };
        if num_qubits == 0 {
            return Err(Error::InvalidCounts("empty bitstring".into()));
        }
        for key in counts.keys() {
            if key.len() != num_qubits || !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(Error::InvalidCounts(format!(
                    "bad bitstring '{key}' (expected {num_qubits} binary digits)"
                )));
            }
        }
        let counts: BTreeMap<String, u64> = counts.into_iter().filter(|(_, c)| *c > 0).collect();
        let total_shots = counts.values().sum();
        if total_shots == 0 {
            return Err(Error::InvalidCounts("no shots recorded".into()));
        }
        Ok(Self {
            num_qubits,
            counts,
            total_shots,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    /// Empirical frequency of outcomes whose `qubit` digit is `0`.
    pub fn frequency_zero(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let zeros: u64 = self
            .counts
            .iter()
            .filter(|(k, _)| k.as_bytes()[qubit] == b'0')
            .map(|(_, c)| c)
            .sum();
        Ok(zeros as f64 / self.total_shots as f64)
    }
}

/// Multinomial sample of `shots` outcomes from a distribution over the
/// `2^num_qubits` basis states. Deterministic for a fixed `seed`.
pub fn sample_distribution(
    probs: &[f64],
    num_qubits: usize,
    shots: u64,
    seed: u64,
) -> Result<CountsHistogram> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut rng = seed::rng(seed);
    let draws = multinomial(probs, shots, &mut rng);
    let counts = draws
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(i, c)| (bitstring(i, num_qubits), c))
        .collect();
    CountsHistogram::new(counts)
}

/// Measures every qubit of `state` `shots` times.
pub fn sample_counts(state: &PureState, shots: u64, seed: u64) -> Result<CountsHistogram> {
    sample_distribution(&state.probabilities(), state.num_qubits(), shots, seed)
}

/// Sequential conditional binomials; exact multinomial sampling.
pub(crate) fn multinomial(probs: &[f64], shots: u64, rng: &mut impl Rng) -> Vec<u64> {
    let mut remaining_shots = shots;
    let mut remaining_mass: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    let mut out = vec![0; probs.len()];
    for (slot, &p) in out.iter_mut().zip(probs) {
        if remaining_shots == 0 {
            break;
        }
        let p = p.max(0.0);
        let q = if remaining_mass > 0.0 {
            (p / remaining_mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = if q >= 1.0 {
            remaining_shots
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining_shots, q)
                .expect("probability clamped into [0, 1]")
                .sample(rng)
        };
        *slot = k;
        remaining_shots -= k;
        remaining_mass -= p;
    }
    // Rounding can leave the final mass at ~0 with shots still unassigned.
    if remaining_shots > 0 {
        if let Some((i, _)) = probs.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) {
            out[i] += remaining_shots;
        }
    }
    out
}

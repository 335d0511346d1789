use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::qsim::{Mat2, MixedState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    AmplitudeDamping,
    PhaseDamping,
    BitFlip,
    PhaseFlip,
    Depolarizing,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 5] = [
        NoiseKind::AmplitudeDamping,
        NoiseKind::PhaseDamping,
        NoiseKind::BitFlip,
        NoiseKind::PhaseFlip,
        NoiseKind::Depolarizing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::AmplitudeDamping => "amplitude_damping",
            NoiseKind::PhaseDamping => "phase_damping",
            NoiseKind::BitFlip => "bit_flip",
            NoiseKind::PhaseFlip => "phase_flip",
            NoiseKind::Depolarizing => "depolarizing",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NoiseKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown noise channel '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseChannelSpec {
    pub kind: NoiseKind,
    pub p: f64,
}

impl NoiseChannelSpec {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self { kind, p })
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn scaled(m: [[C64; 2]; 2], s: f64) -> Mat2 {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

/// Kraus set of the channel. Operators with zero weight are omitted, so
/// every channel at `p = 0` is the single operator `I`.
///
/// Depolarizing uses `{sqrt(1 - 3p/4) I, sqrt(p/4) X, sqrt(p/4) Y, sqrt(p/4) Z}`,
/// which is the maximally mixed state at `p = 1`.
pub fn kraus_operators(spec: &NoiseChannelSpec) -> Result<Vec<Mat2>> {
    let p = spec.p;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let zero = c(0.0);
    let one = c(1.0);
    let i = [[one, zero], [zero, one]];
    let x = [[zero, one], [one, zero]];
    let y = [[zero, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), zero]];
    let z = [[one, zero], [zero, c(-1.0)]];
    let ops: Vec<(Mat2, f64)> = match spec.kind {
        NoiseKind::BitFlip => vec![(i, (1.0 - p).sqrt()), (x, p.sqrt())],
        NoiseKind::PhaseFlip => vec![(i, (1.0 - p).sqrt()), (z, p.sqrt())],
        NoiseKind::Depolarizing => {
            let w = (p / 4.0).sqrt();
            vec![((i), (1.0 - 0.75 * p).sqrt()), (x, w), (y, w), (z, w)]
        }
        NoiseKind::AmplitudeDamping => vec![
            ([[one, zero], [zero, c((1.0 - p).sqrt())]], 1.0),
            ([[zero, c(p.sqrt())], [zero, zero]], 1.0),
        ],
        NoiseKind::PhaseDamping => vec![
            ([[one, zero], [zero, c((1.0 - p).sqrt())]], 1.0),
            ([[zero, zero], [zero, c(p.sqrt())]], 1.0),
        ],
    };
    Ok(ops
        .into_iter()
        .map(|(m, s)| scaled(m, s))
        .filter(|m| m.iter().flatten().any(|v| v.norm_sqr() > 0.0))
        .collect())
}

/// `rho -> sum_k K_k rho K_k^dagger` on one qubit.
pub fn apply_channel(
    rho: &MixedState,
    spec: &NoiseChannelSpec,
    qubit: usize,
) -> Result<MixedState> {
    let ops = kraus_operators(spec)?;
    let mut out = rho.clone();
    out.apply_kraus(qubit, &ops)?;
    Ok(out)
}

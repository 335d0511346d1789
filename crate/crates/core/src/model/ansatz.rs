//! The trainable encoder `U(theta)`.
//!
//! Every unordered pair `(i, j)`, `i < j`, of data qubits gets one
//! 15-angle two-qubit block, pairs in lexicographic order. A block is
//!
//! ```text
//! ZYZ(i)  ZYZ(j)               6 angles
//! CNOT(i, j)
//! RX(i)  RY(j)  RZ(j)          3 angles
//! CNOT(i, j)
//! ZYZ(i)  ZYZ(j)               6 angles
//! ```
//!
//! where `ZYZ(q)` is `RZ, RY, RZ` applied in that order. Conjugating the
//! middle layer by the CNOT pair turns it into `XX`, `ZY` and `ZZ`
//! interactions, and with all angles zero the two CNOTs cancel, so
//! `U(0) = I`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::CircuitLayout;
use crate::qsim::Gate;
use crate::{seed, Error, Result};

pub const PARAMS_PER_PAIR: usize = 15;

/// Trainable angles of the ansatz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AnsatzParameters {
    theta: Vec<f64>,
}

impl AnsatzParameters {
    pub fn new(layout: &CircuitLayout, theta: Vec<f64>) -> Result<Self> {
        if theta.len() != layout.num_params() {
            return Err(Error::ParamLength {
                expected: layout.num_params(),
                actual: theta.len(),
            });
        }
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::NonFinite("ansatz parameters"));
        }
        Ok(Self { theta })
    }

    pub fn zeros(layout: &CircuitLayout) -> Self {
        Self {
            theta: vec![0.0; layout.num_params()],
        }
    }

    /// Uniform draws from `[-half_width, half_width]`.
    pub fn random_uniform(layout: &CircuitLayout, half_width: f64, seed: u64) -> Self {
        let mut rng = seed::rng(seed);
        Self {
            theta: (0..layout.num_params())
                .map(|_| rng.random_range(-half_width..=half_width))
                .collect(),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.theta
    }

    /// Copy with one angle replaced.
    pub fn with(&self, index: usize, value: f64) -> Self {
        let mut theta = self.theta.clone();
        theta[index] = value;
        Self { theta }
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.theta
    }
}

/// Gates of one pair block.
#[derive(Debug, Clone, PartialEq)]
pub struct AnsatzBlock {
    pub pair: (usize, usize),
    pub gates: Vec<Gate>,
}

fn zyz(q: usize, angles: &[f64]) -> [Gate; 3] {
    [
        Gate::Rz {
            qubit: q,
            angle: angles[0],
        },
        Gate::Ry {
            qubit: q,
            angle: angles[1],
        },
        Gate::Rz {
            qubit: q,
            angle: angles[2],
        },
    ]
}

fn pair_block(i: usize, j: usize, a: &[f64]) -> Vec<Gate> {
    let mut gates = Vec::with_capacity(PARAMS_PER_PAIR + 2);
    gates.extend(zyz(i, &a[0..3]));
    gates.extend(zyz(j, &a[3..6]));
    gates.push(Gate::Cnot {
        control: i,
        target: j,
    });
    gates.push(Gate::Rx {
        qubit: i,
        angle: a[6],
    });
    gates.push(Gate::Ry {
        qubit: j,
        angle: a[7],
    });
    gates.push(Gate::Rz {
        qubit: j,
        angle: a[8],
    });
    gates.push(Gate::Cnot {
        control: i,
        target: j,
    });
    gates.extend(zyz(i, &a[9..12]));
    gates.extend(zyz(j, &a[12..15]));
    gates
}

/// The ansatz split into its pair blocks, on data-register indices.
pub fn ansatz_blocks(
    params: &AnsatzParameters,
    layout: &CircuitLayout,
) -> Result<Vec<AnsatzBlock>> {
    if params.len() != layout.num_params() {
        return Err(Error::ParamLength {
            expected: layout.num_params(),
            actual: params.len(),
        });
    }
    let n = layout.n_data();
    let mut chunks = params.as_slice().chunks_exact(PARAMS_PER_PAIR);
    let mut blocks = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let angles = chunks.next().expect("length checked above");
            blocks.push(AnsatzBlock {
                pair: (i, j),
                gates: pair_block(i, j, angles),
            });
        }
    }
    Ok(blocks)
}

/// Flat gate list of the ansatz on data-register indices. The k-th rotation
/// in the list carries `params[k]`.
pub fn build_ansatz(params: &AnsatzParameters, layout: &CircuitLayout) -> Result<Vec<Gate>> {
    Ok(ansatz_blocks(params, layout)?
        .into_iter()
        .flat_map(|b| b.gates)
        .collect())
}

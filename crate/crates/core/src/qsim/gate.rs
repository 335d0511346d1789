use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::C64;
use crate::{Error, Result};

/// Row-major 2x2 complex matrix.
pub type Mat2 = [[C64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    H,
    X,
    Cnot,
    Cswap,
}

/// One gate of a circuit.
///
/// Rotations follow `R_P(angle) = exp(-i * angle * P / 2)`, so every
/// rotation angle obeys the parameter-shift rule with shift `pi/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    H { qubit: usize },
    X { qubit: usize },
    Cnot { control: usize, target: usize },
    Cswap { control: usize, a: usize, b: usize },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Rx { .. } => GateKind::Rx,
            Gate::Ry { .. } => GateKind::Ry,
            Gate::Rz { .. } => GateKind::Rz,
            Gate::H { .. } => GateKind::H,
            Gate::X { .. } => GateKind::X,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Cswap { .. } => GateKind::Cswap,
        }
    }

    /// Qubits acted on, in declaration order.
    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        let (buf, len) = match *self {
            Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::H { qubit }
            | Gate::X { qubit } => ([qubit, 0, 0], 1),
            Gate::Cnot { control, target } => ([control, target, 0], 2),
            Gate::Cswap { control, a, b } => ([control, a, b], 3),
        };
        buf.into_iter().take(len)
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => Some(angle),
            _ => None,
        }
    }

    pub fn is_rotation(&self) -> bool {
        self.angle().is_some()
    }

    /// Same gate with a new rotation angle; non-rotations are returned as is.
    pub fn with_angle(self, angle: f64) -> Gate {
        match self {
            Gate::Rx { qubit, .. } => Gate::Rx { qubit, angle },
            Gate::Ry { qubit, .. } => Gate::Ry { qubit, angle },
            Gate::Rz { qubit, .. } => Gate::Rz { qubit, angle },
            other => other,
        }
    }

    /// Inverse gate: negated angle for rotations, the gate itself otherwise.
    pub fn inverse(self) -> Gate {
        match self.angle() {
            Some(angle) => self.with_angle(-angle),
            None => self,
        }
    }

    /// Moves every qubit index up by `offset`.
    pub fn offset(self, offset: usize) -> Gate {
        match self {
            Gate::Rx { qubit, angle } => Gate::Rx {
                qubit: qubit + offset,
                angle,
            },
            Gate::Ry { qubit, angle } => Gate::Ry {
                qubit: qubit + offset,
                angle,
            },
            Gate::Rz { qubit, angle } => Gate::Rz {
                qubit: qubit + offset,
                angle,
            },
            Gate::H { qubit } => Gate::H {
                qubit: qubit + offset,
            },
            Gate::X { qubit } => Gate::X {
                qubit: qubit + offset,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: control + offset,
                target: target + offset,
            },
            Gate::Cswap { control, a, b } => Gate::Cswap {
                control: control + offset,
                a: a + offset,
                b: b + offset,
            },
        }
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let mut seen = [usize::MAX; 3];
        for (slot, q) in self.qubits().enumerate() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
            if seen[..slot].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
            seen[slot] = q;
        }
        if let Some(angle) = self.angle() {
            if !angle.is_finite() {
                return Err(Error::NonFinite("gate angle"));
            }
        }
        Ok(())
    }

    /// The 2x2 matrix and target of a single-qubit gate.
    pub fn single_qubit_matrix(&self) -> Option<(usize, Mat2)> {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let half_turn = |angle: f64| ((angle / 2.0).cos(), (angle / 2.0).sin());
        match *self {
            Gate::Rx { qubit, angle } => {
                let (c, s) = half_turn(angle);
                Some((
                    qubit,
                    [
                        [C64::new(c, 0.0), C64::new(0.0, -s)],
                        [C64::new(0.0, -s), C64::new(c, 0.0)],
                    ],
                ))
            }
            Gate::Ry { qubit, angle } => {
                let (c, s) = half_turn(angle);
                Some((
                    qubit,
                    [
                        [C64::new(c, 0.0), C64::new(-s, 0.0)],
                        [C64::new(s, 0.0), C64::new(c, 0.0)],
                    ],
                ))
            }
            Gate::Rz { qubit, angle } => {
                let (c, s) = half_turn(angle);
                Some((qubit, [[C64::new(c, -s), zero], [zero, C64::new(c, s)]]))
            }
            Gate::H { qubit } => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                Some((qubit, [[h, h], [h, -h]]))
            }
            Gate::X { qubit } => Some((qubit, [[zero, one], [one, zero]])),
            Gate::Cnot { .. } | Gate::Cswap { .. } => None,
        }
    }
}

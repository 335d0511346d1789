use serde::{Deserialize, Serialize};

use crate::qsim::{PureState, STATE_TOLERANCE};
use crate::{Error, Label, Result};

/// Scales `raw` to unit L2 norm.
pub fn l2_normalize(raw: &[f64]) -> Result<Vec<f64>> {
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("feature vector"));
    }
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(raw.iter().map(|x| x / norm).collect())
}

/// Amplitude encoding: `x -> sum_i x_i |i>` for a unit vector `x` whose
/// length is a power of two.
pub fn amplitude_encode(unit: &[f64]) -> Result<PureState> {
    if unit.len() < 2 || !unit.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(unit.len()));
    }
    let norm = unit.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > STATE_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    PureState::from_real(unit)
}

/// A transaction ready for the circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedSample {
    pub id: String,
    /// Unit-norm feature vector.
    pub features: Vec<f64>,
    pub state: PureState,
    pub label: Option<Label>,
}

impl EncodedSample {
    /// Normalizes and encodes a raw feature row.
    pub fn encode(id: impl Into<String>, raw: &[f64], label: Option<Label>) -> Result<Self> {
        let features = l2_normalize(raw)?;
        let state = amplitude_encode(&features)?;
        Ok(Self {
            id: id.into(),
            features,
            state,
            label,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.state.num_qubits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_three_four_five() {
        let mut raw = vec![0.0; 16];
        raw[0] = 3.0;
        raw[1] = 4.0;
        let unit = l2_normalize(&raw).unwrap();
        assert!((unit[0] - 0.6).abs() < 1e-15);
        assert!((unit[1] - 0.8).abs() < 1e-15);
        assert!(unit[2..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn unit_vectors_are_fixed_points() {
        let mut e5 = vec![0.0; 16];
        e5[5] = 1.0;
        assert_eq!(l2_normalize(&e5).unwrap(), e5);
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert!(matches!(l2_normalize(&[0.0; 16]), Err(Error::ZeroNorm)));
    }

    #[test]
    fn basis_vector_encodes_to_basis_state() {
        let mut e0 = vec![0.0; 16];
        e0[0] = 1.0;
        assert_eq!(amplitude_encode(&e0).unwrap(), PureState::zero(4).unwrap());
    }

    #[test]
    fn uniform_vector_is_equal_superposition() {
        let psi = amplitude_encode(&[0.25; 16]).unwrap();
        assert_eq!(psi.num_qubits(), 4);
        assert!(psi
            .probabilities()
            .iter()
            .all(|p| (p - 1.0 / 16.0).abs() < 1e-15));
    }

    #[test]
    fn encoding_rejects_bad_input() {
        assert!(matches!(
            amplitude_encode(&[1.0, 0.0, 0.0]),
            Err(Error::NotPowerOfTwo(3))
        ));
        assert!(matches!(
            amplitude_encode(&[0.5, 0.5]),
            Err(Error::NotNormalized(_))
        ));
    }

    proptest::proptest! {
        #[test]
        fn encoding_round_trips(raw in proptest::collection::vec(-10.0f64..10.0, 16)) {
            proptest::prop_assume!(raw.iter().any(|x| x.abs() > 1e-3));
            let unit = l2_normalize(&raw).unwrap();
            let psi = amplitude_encode(&unit).unwrap();
            for (a, x) in psi.amplitudes().iter().zip(&unit) {
                proptest::prop_assert_eq!(a.re, *x);
                proptest::prop_assert_eq!(a.im, 0.0);
            }
        }
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

/// Ground-truth or predicted class of a transaction. Fraud is the positive
/// class in every confusion matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    NonFraud,
    Fraud,
}

impl Label {
    /// Maps the dataset encoding (`Class` column, 1 = fraud).
    pub fn from_class(class: u8) -> Option<Self> {
        match class {
            0 => Some(Label::NonFraud),
            1 => Some(Label::Fraud),
            _ => None,
        }
    }

    pub fn class(self) -> u8 {
        match self {
            Label::NonFraud => 0,
            Label::Fraud => 1,
        }
    }

    pub fn is_fraud(self) -> bool {
        self == Label::Fraud
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::NonFraud => "non-fraud",
            Label::Fraud => "fraud",
        })
    }
}

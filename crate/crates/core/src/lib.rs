//! Fidelity-driven quantum autoencoder for anomaly detection on tabular
//! transaction data.
//!
//! Each transaction is amplitude-encoded into a small register of simulated
//! qubits, compressed by a trained variational circuit, and scored by the
//! fidelity between the discarded "trash" qubit(s) and the all-zero
//! reference state. Legitimate transactions compress well (high fidelity);
//! anomalies do not.
//!
//! Modules, bottom-up:
//!
//! - [`qsim`]: exact statevector / density-matrix simulator.
//! - [`model`]: amplitude encoding, the ansatz, exact and SWAP-test fidelity.
//! - [`train`]: cost, parameter-shift gradients, Adam, the training loop.
//! - [`classify`]: threshold rule, metrics, distribution statistics, sweeps.
//! - [`noise`]: Kraus channels and the noise / shot-count experiments.
//! - [`data`]: CSV ingestion, robust scaling, feature selection, splits.
//! - [`hwfeat`]: fidelity/entropy features from measurement counts and a
//!   logistic classifier with a Youden-optimal threshold.
//!
//! Basis convention (fixed crate-wide): in a register of `m` qubits, qubit 0
//! is the most significant bit of the basis index.

pub mod classify;
pub mod data;
mod error;
pub mod hwfeat;
mod label;
pub mod model;
pub mod noise;
pub mod qsim;
pub mod seed;
pub mod train;

pub use error::{Error, Result};
pub use label::Label;

//! Kraus noise channels and robustness sweeps of a trained model.

mod channel;
mod evolve;
mod sweep;

pub use channel::{apply_channel, kraus_operators, NoiseChannelSpec, NoiseKind};
pub use evolve::{
    noisy_data_state, noisy_trash_fidelity, swap_test_probability_mixed, trash_fidelity_of_mixed,
    Placement,
};
pub use sweep::{
    noise_sweep, noisy_records, shots_sweep, write_sweep_csv, NoiseSweepRow, FINE_THRESHOLDS,
    NOISE_P_GRID, SHOT_GRID,
};

//! Cost, gradients, the Adam optimizer and the training loop.
//!
//! The model is trained on legitimate transactions only: the cost is
//! `1 - mean trash fidelity` over a batch, minimized with Adam on
//! parameter-shift gradients.

mod adam;
mod config;
mod cost;
mod gradient;
mod trainer;

pub use adam::{adam_step, AdamState};
pub use config::{FidelityMode, GradientMode, TrainConfig};
pub use cost::{batch_fidelities, cost, mean_fidelity};
pub use gradient::{finite_difference_gradient, gradient, parameter_shift_gradient, FD_STEP};
pub use trainer::{train_loop, train_loop_with, EpochRecord, TrainHistory, TrainedModel};

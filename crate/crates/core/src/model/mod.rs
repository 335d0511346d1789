//! The autoencoder circuit: amplitude encoding, the trainable ansatz, and
//! trash-register fidelity (exact partial trace, exact SWAP test, or
//! shot-sampled SWAP test).

mod ansatz;
mod encoding;
mod fidelity;
mod layout;

pub use ansatz::{ansatz_blocks, build_ansatz, AnsatzBlock, AnsatzParameters, PARAMS_PER_PAIR};
pub use encoding::{amplitude_encode, l2_normalize, EncodedSample};
pub(crate) use fidelity::swap_test_gates;
pub use fidelity::{
    build_swap_test_circuit, swap_test_fidelity_sampled, swap_test_probability_exact,
    trash_fidelity_exact, trash_fidelity_of_state, SwapTestCircuit,
};
pub use layout::CircuitLayout;

//! Quantum metrology of a two-qubit probe whose second qubit undergoes a
//! pre-measurement, acceleration-induced decoherence, and a reversal
//! measurement.
//!
//! The crate provides the state pipeline, quantum Fisher information
//! (numeric and closed-form), local quantum uncertainty, maximal steered
//! coherence, and the optimal-parameter solvers, together with the small
//! dense linear algebra they need.

pub mod channels;
pub mod correlations;
pub mod error;
pub mod linalg;
pub mod qfi;
pub mod states;

pub use channels::{
    acceleration_to_r, apply_unruh, model_state, model_state_pipeline, reversal_op,
    weak_measurement_op, ModelParams, ModelState,
};
pub use correlations::{
    fibonacci_sphere, lqu_closed, lqu_direction_scan, lqu_numeric, msc_bruteforce,
    msc_bruteforce_with_dirs, msc_model_closed, msc_xstate, skew_information, w_matrix, WMatrix,
};
pub use error::{Error, Result};
pub use qfi::{
    block_sld, block_sld_qfi, optimal_p, optimal_p_q0, optimal_q, optimal_r, phase_family,
    qfi_numeric, qfi_phase_closed, qfi_weight_closed, weight_family, QfiMethod, QfiResult,
    StateFamily, DEFAULT_FD_HALF_STEP,
};
pub use linalg::{
    eig_hermitian, kron, partial_trace, pauli_x, pauli_y, pauli_z, sqrt_psd, ComplexMatrix,
    DensityMatrix, EigenDecomposition, Subsystem,
};
pub use states::{
    coherence, initial_state, pauli_decomposition, steered_state, steered_state_along,
    steering_ellipsoid, Ellipsoid, PauliDecomposition, XState,
};

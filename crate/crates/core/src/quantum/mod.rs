//! Exact small-register simulation and the quantum counterparts of the
//! classical measures.

pub mod amplify;
pub mod circuit;
pub mod gap;
pub mod measures;
pub mod sim;

pub use amplify::{
    amplification_constants, amplify, amplify_distribution, failure_bound, plan, AmplificationPlan,
    AmplifyError, AmplifyResult,
};
pub use circuit::{CircuitError, Gate, GateCircuit, MAX_QUBITS};
pub use gap::{gap_index, gap_threshold, GapError, GapIndex};
pub use measures::{
    acceptance_probability, confidence_readout, is_quantum_consistent, output_probability, qc_t,
    qcd_t, qic_t, CircuitTable, ConfidenceReadout, QuantumError, DEFAULT_EPSILON,
};
pub use sim::{run_on_input, simulate, OutcomeDistribution, ResourceError, StateVector};

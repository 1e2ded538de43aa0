//! Sources of Bell-sampling data, plus the SWAP-test estimator.

mod bell;
mod dense;
mod singleton;
mod stabilizer;
mod swap;

pub use bell::{BellPairOutcome, BellRun, SampleMeta, SampleSet};
pub use dense::sample_dense;
pub use singleton::sample_pauli_singleton;
pub use stabilizer::{
    enumerate_group, group_support, random_stabilizer, random_stabilizer_with_gates, sample_stabilizer,
    sample_stabilizer_with_ceiling, StabilizerTableau, DEFAULT_SAMPLING_CEILING, MAX_GROUP_QUBITS, MAX_TABLEAU_QUBITS,
};
pub use swap::{swap_test_estimate, swap_test_expectation, swap_test_mean};

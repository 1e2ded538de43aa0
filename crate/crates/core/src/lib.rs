//! Best-first recovery of the largest Pauli coefficients of an n-qubit state.
//!
//! Node weights of the prefix tree over Pauli strings are estimated from
//! Bell samples on two copies of the state (or computed exactly at desk
//! scale), and a priority-queue search expands the heaviest node first.
//!
//! ```
//! use bellsearch::{find_above_threshold, sample_pauli_singleton, ValueSource};
//!
//! let samples = sample_pauli_singleton(3, 1 << 12, 7).unwrap();
//! let result = find_above_threshold(ValueSource::Sampled(&samples), 0.5).unwrap();
//! assert!(result.found.iter().any(|leaf| leaf.pauli.to_string() == "XXX"));
//! ```

pub mod cli;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod io;
pub mod oracle;
pub mod pauli;
pub mod samplers;
pub mod search;

pub use error::{Error, Result};
pub use estimator::{
    child_sign_vector, estimate, required_samples, root_sign_vector, sign_vector_direct, NodeEstimate, SampleBudget,
    SignVector,
};
pub use oracle::{bell_distribution_dense, delta_paths_enumerated, node_value_exact, BellDistribution, NodeWeight};
pub use pauli::{coefficient, pauli_matrix, purity, DenseState, PauliAxis, PauliString, Prefix};
pub use samplers::{
    enumerate_group, random_stabilizer, sample_dense, sample_pauli_singleton, sample_stabilizer, swap_test_estimate,
    BellPairOutcome, BellRun, SampleMeta, SampleSet, StabilizerTableau,
};
pub use search::{
    find_above_threshold, find_top_t, quality_score, SearchResult, SearchStats, Termination, ValueSource,
};

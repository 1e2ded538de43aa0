use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bell::{BellRun, SampleMeta, SampleSet};
use crate::error::{Error, Result};
use crate::oracle::bell_distribution_dense;
use crate::pauli::DenseState;

/// Draws `runs` independent outcomes from the exact Bell law of `rho (x) rho`.
pub fn sample_dense(rho: &DenseState, runs: usize, seed: u64) -> Result<SampleSet> {
    let n = rho.num_qubits();
    let dist = bell_distribution_dense(rho)?;
    let meta = SampleMeta {
        source: "dense".into(),
        seed: Some(seed),
    };
    if runs == 0 {
        return SampleSet::new(n, Vec::new(), meta);
    }
    let table = WeightedIndex::new(dist.probs()).map_err(|e| Error::InvalidState(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let runs = (0..runs)
        .map(|_| BellRun::from_index(n, table.sample(&mut rng)))
        .collect();
    SampleSet::new(n, runs, meta)
}

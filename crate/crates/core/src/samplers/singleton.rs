use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bell::{BellPairOutcome, BellRun, SampleMeta, SampleSet};
use crate::error::{Error, Result};

/// Bell runs on two copies of `(I^n + X^n) / 2^n`.
///
/// The law is `p(b) = 4^-n (1 + prod_i s_X(b_i))`: the X signs are uniform
/// subject to a positive product and each pair's Z sign is a fair coin.
pub fn sample_pauli_singleton(n: usize, runs: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::param("the Pauli singleton needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let runs = (0..runs)
        .map(|_| {
            let mut parity = false;
            let outcomes = (0..n)
                .map(|i| {
                    let x_negative = if i + 1 < n { rng.random::<bool>() } else { parity };
                    parity ^= x_negative;
                    let z_negative = rng.random::<bool>();
                    BellPairOutcome::from_code(u8::from(x_negative) | (u8::from(z_negative) << 1)).unwrap()
                })
                .collect();
            BellRun::new(outcomes)
        })
        .collect();
    SampleSet::new(
        n,
        runs,
        SampleMeta {
            source: "singleton".into(),
            seed: Some(seed),
        },
    )
}

//! Node-weight estimates from Bell samples.
//!
//! For a prefix `mu` the per-run component is `s_j(mu) (-1)^A_j`, where
//! `s_j(mu)` is the product of the `P (x) P` signs over the prefix positions
//! and `A_j` counts `Psi-` outcomes after the prefix. The estimate is
//! `2^(n-|mu|) / M` times the component sum.
//!
//! Components are packed one bit per run (set bit = -1), so deriving a child
//! is one XOR with a precomputed column of the sample set and summing is a
//! popcount.

use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, Prefix};
use crate::samplers::{BellPairOutcome, SampleSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignVector {
    prefix_len: usize,
    runs: usize,
    negative: Vec<u64>,
}

impl SignVector {
    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn len(&self) -> usize {
        self.runs
    }

    pub fn is_empty(&self) -> bool {
        self.runs == 0
    }

    pub fn component(&self, j: usize) -> i8 {
        assert!(j < self.runs);
        if (self.negative[j / 64] >> (j % 64)) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn components(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.runs).map(|j| self.component(j))
    }

    /// Sum of the +-1 components.
    pub fn signed_sum(&self) -> i64 {
        let negatives: u32 = self.negative.iter().map(|w| w.count_ones()).sum();
        self.runs as i64 - 2 * i64::from(negatives)
    }
}

/// A node estimate, which may be negative.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeEstimate {
    pub prefix: Prefix,
    pub value: f64,
}

/// Hoeffding sample count; always at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SampleBudget(usize);

impl SampleBudget {
    pub fn runs(self) -> usize {
        self.0
    }
}

/// Root components `(-1)^(number of Psi- outcomes in the run)`.
pub fn root_sign_vector(samples: &SampleSet) -> Result<SignVector> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let words = samples.num_runs().div_ceil(64);
    let mut negative = vec![0u64; words];
    for pos in 0..samples.num_qubits() {
        for (w, m) in negative.iter_mut().zip(samples.flip_mask(pos, PauliAxis::I)) {
            *w ^= m;
        }
    }
    Ok(SignVector {
        prefix_len: 0,
        runs: samples.num_runs(),
        negative,
    })
}

/// Component j becomes `parent_j * s_j(pos, symbol) * (-1)^[Psi- at pos]`.
pub fn child_sign_vector(parent: &SignVector, samples: &SampleSet, symbol: PauliAxis) -> Result<SignVector> {
    let pos = parent.prefix_len;
    if pos >= samples.num_qubits() {
        return Err(Error::PrefixFull(pos));
    }
    if parent.runs != samples.num_runs() {
        return Err(Error::LengthMismatch {
            expected: samples.num_runs(),
            got: parent.runs,
        });
    }
    let negative = parent
        .negative
        .iter()
        .zip(samples.flip_mask(pos, symbol))
        .map(|(p, m)| p ^ m)
        .collect();
    Ok(SignVector {
        prefix_len: pos + 1,
        runs: parent.runs,
        negative,
    })
}

/// Builds the sign vector of `mu` straight from the run outcomes.
pub fn sign_vector_direct(samples: &SampleSet, mu: &Prefix) -> Result<SignVector> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let n = samples.num_qubits();
    if mu.len() > n {
        return Err(Error::PrefixFull(mu.len()));
    }
    let k = mu.len();
    let mut negative = vec![0u64; samples.num_runs().div_ceil(64)];
    for (j, run) in samples.runs().iter().enumerate() {
        let head: i8 = run.outcomes()[..k]
            .iter()
            .zip(mu.symbols())
            .map(|(o, s)| o.sign(*s))
            .product();
        let tail_flip = run.outcomes()[k..]
            .iter()
            .filter(|o| **o == BellPairOutcome::PsiMinus)
            .count()
            % 2
            == 1;
        if (head < 0) != tail_flip {
            negative[j / 64] |= 1 << (j % 64);
        }
    }
    Ok(SignVector {
        prefix_len: k,
        runs: samples.num_runs(),
        negative,
    })
}

/// `2^(n - |mu|) / M * sum_j sv_j`.
pub fn estimate(sv: &SignVector, samples: &SampleSet) -> f64 {
    if sv.runs == 0 {
        return 0.0;
    }
    let scale = (1u64 << (samples.num_qubits() - sv.prefix_len)) as f64;
    scale * sv.signed_sum() as f64 / sv.runs as f64
}

/// Runs needed so every one of the `< 4^(n+1)` tree nodes is within `epsilon`
/// of its mean with overall failure probability `delta`:
/// `ceil(2 eps^-2 ln(2 * 4^(n+1) / delta))`.
pub fn required_samples(epsilon: f64, delta: f64, n: usize) -> Result<SampleBudget> {
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::param(format!("epsilon must lie in (0, 2], got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta must lie in (0, 1), got {delta}")));
    }
    let log_term = std::f64::consts::LN_2 + (n as f64 + 1.0) * 4f64.ln() - delta.ln();
    let m = (2.0 * log_term / (epsilon * epsilon)).ceil();
    Ok(SampleBudget((m as usize).max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;
    use crate::samplers::{BellRun, SampleMeta};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use BellPairOutcome::*;

    fn set(n: usize, runs: Vec<Vec<BellPairOutcome>>) -> SampleSet {
        SampleSet::new(n, runs.into_iter().map(BellRun::new).collect(), SampleMeta::default()).unwrap()
    }

    fn random_set(n: usize, m: usize, seed: u64) -> SampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let runs = (0..m)
            .map(|_| BellRun::from_index(n, rng.random_range(0..1 << (2 * n))))
            .collect();
        SampleSet::new(n, runs, SampleMeta::default()).unwrap()
    }

    #[test]
    fn root_examples() {
        assert_eq!(
            root_sign_vector(&set(1, vec![vec![PsiMinus]])).unwrap().component(0),
            -1
        );
        assert_eq!(
            root_sign_vector(&set(2, vec![vec![PhiPlus, PhiPlus]]))
                .unwrap()
                .component(0),
            1
        );
        assert_eq!(
            root_sign_vector(&set(2, vec![vec![PsiMinus, PsiMinus]]))
                .unwrap()
                .component(0),
            1
        );
        assert!(matches!(root_sign_vector(&set(2, vec![])), Err(Error::EmptySamples)));
    }

    #[test]
    fn child_examples() {
        let s = set(1, vec![vec![PhiPlus]]);
        let root = root_sign_vector(&s).unwrap();
        assert_eq!(child_sign_vector(&root, &s, PauliAxis::X).unwrap().component(0), 1);

        let s = set(1, vec![vec![PsiMinus]]);
        let root = root_sign_vector(&s).unwrap();
        let child = child_sign_vector(&root, &s, PauliAxis::I).unwrap();
        assert_eq!(child.component(0), 1);
        assert!(matches!(
            child_sign_vector(&child, &s, PauliAxis::I),
            Err(Error::PrefixFull(1))
        ));
    }

    #[test]
    fn root_estimate_examples() {
        // brute force: sum over nu of s(nu) for a single pair
        for (outcome, want) in [(PsiMinus, -2.0), (PhiPlus, 2.0)] {
            let s = set(1, vec![vec![outcome]]);
            let brute: i32 = PauliAxis::ALL.iter().map(|a| i32::from(outcome.sign(*a))).sum();
            assert_eq!(f64::from(brute), want);
            assert_eq!(estimate(&root_sign_vector(&s).unwrap(), &s), want);
        }
    }

    #[test]
    fn leaf_estimate_is_plain_mean() {
        let s = random_set(3, 300, 4);
        for nu in PauliString::all(3) {
            let mut sv = root_sign_vector(&s).unwrap();
            for a in nu.symbols() {
                sv = child_sign_vector(&sv, &s, *a).unwrap();
            }
            let plain: i64 = s
                .runs()
                .iter()
                .map(|r| {
                    r.outcomes()
                        .iter()
                        .zip(nu.symbols())
                        .map(|(o, a)| i64::from(o.sign(*a)))
                        .product::<i64>()
                })
                .sum();
            assert_eq!(sv.signed_sum(), plain);
            assert!((estimate(&sv, &s) - plain as f64 / 300.0).abs() < 1e-15);
        }
    }

    #[test]
    fn required_samples_examples() {
        assert_eq!(required_samples(0.5, 0.05, 1).unwrap().runs(), 52);
        assert_eq!((8.0 * 640f64.ln()).ceil() as usize, 52);
        assert!(required_samples(0.0, 0.05, 1).is_err());
        assert!(required_samples(2.5, 0.05, 1).is_err());
        assert!(required_samples(0.5, 1.0, 1).is_err());
        assert!(required_samples(0.5, 0.0, 1).is_err());
        let coarse = required_samples(0.4, 0.01, 5).unwrap().runs() as f64;
        let fine = required_samples(0.2, 0.01, 5).unwrap().runs() as f64;
        assert!((fine / coarse - 4.0).abs() < 0.05);
    }

    proptest! {
        #[test]
        fn siblings_sum_to_parent(n in 1usize..=5, m in 1usize..200, seed in any::<u64>(), path in any::<u64>()) {
            let s = random_set(n, m, seed);
            let mut sv = root_sign_vector(&s).unwrap();
            for level in 0..n {
                let children: Vec<_> = PauliAxis::ALL
                    .iter()
                    .map(|a| child_sign_vector(&sv, &s, *a).unwrap())
                    .collect();
                let total: i64 = children.iter().map(|c| c.signed_sum()).sum();
                prop_assert_eq!(total, 2 * sv.signed_sum());
                let est: f64 = children.iter().map(|c| estimate(c, &s)).sum();
                prop_assert!((est - estimate(&sv, &s)).abs() < 1e-9);
                sv = children[((path >> (2 * level)) & 3) as usize].clone();
            }
        }

        #[test]
        fn incremental_matches_direct(n in 1usize..=4, m in 1usize..150, seed in any::<u64>(), path in any::<u64>()) {
            let s = random_set(n, m, seed);
            let mut sv = root_sign_vector(&s).unwrap();
            let mut mu = Prefix::root();
            prop_assert_eq!(&sv, &sign_vector_direct(&s, &mu).unwrap());
            for level in 0..n {
                let a = PauliAxis::from_index((path >> (2 * level)) as usize);
                sv = child_sign_vector(&sv, &s, a).unwrap();
                mu = mu.child(a);
                prop_assert_eq!(&sv, &sign_vector_direct(&s, &mu).unwrap());
            }
        }

        #[test]
        fn required_samples_monotone(e1 in 0.01f64..2.0, e2 in 0.01f64..2.0, d1 in 0.001f64..0.99, d2 in 0.001f64..0.99, n in 1usize..30) {
            let (elo, ehi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
            let (dlo, dhi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
            let m = |e, d, n| required_samples(e, d, n).unwrap().runs();
            prop_assert!(m(ehi, dlo, n) <= m(elo, dlo, n));
            prop_assert!(m(elo, dhi, n) <= m(elo, dlo, n));
            prop_assert!(m(elo, dlo, n) <= m(elo, dlo, n + 1));
        }
    }
}

//! Brute-force ground truth for tests and fluctuation-free search.

use crate::error::{Error, Result};
use crate::pauli::{coefficient, dense_guard, DenseState, PauliAxis, PauliString, Prefix, MAX_DENSE_QUBITS};
use crate::samplers::{BellPairOutcome, BellRun};

/// Largest qubit count for the exact Bell law (its table has `4^n` entries).
pub const MAX_BELL_QUBITS: usize = 6;

const CLAMP_TOL: f64 = 1e-9;

/// Exact node value `K_mu`, never negative.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct NodeWeight(f64);

impl NodeWeight {
    /// Clamps values within `1e-9` below zero to zero.
    pub fn new(value: f64) -> Self {
        debug_assert!(value >= -CLAMP_TOL, "node weight {value} is negative");
        NodeWeight(value.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `K_mu = sum over nu with prefix mu of c_nu^2`.
pub fn node_value_exact(rho: &DenseState, mu: &Prefix) -> Result<NodeWeight> {
    let n = rho.num_qubits();
    dense_guard("exact node value", n, MAX_DENSE_QUBITS)?;
    if mu.len() > n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: mu.len(),
        });
    }
    let mut sum = 0.0;
    for index in mu.index_range(n) {
        sum += coefficient(rho, &PauliString::from_index(n, index))?.powi(2);
    }
    Ok(NodeWeight::new(sum))
}

/// Exact node values for every prefix, stored level by level.
///
/// Level `k` holds `4^k` sums indexed like the prefixes of length `k`, so
/// lookups are O(1) after an O(8^n) build.
#[derive(Clone, Debug)]
pub struct ExactNodeTable {
    n: usize,
    levels: Vec<Vec<f64>>,
}

impl ExactNodeTable {
    pub fn new(rho: &DenseState) -> Result<Self> {
        let n = rho.num_qubits();
        dense_guard("exact node table", n, MAX_DENSE_QUBITS)?;
        let mut leaves = Vec::with_capacity(1 << (2 * n));
        for nu in PauliString::all(n) {
            leaves.push(coefficient(rho, &nu)?.powi(2));
        }
        let mut levels = vec![leaves];
        for _ in 0..n {
            let below = levels.last().unwrap();
            let above = below.chunks(4).map(|c| c.iter().sum()).collect();
            levels.push(above);
        }
        levels.reverse();
        Ok(ExactNodeTable { n, levels })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn get(&self, mu: &Prefix) -> NodeWeight {
        let index = mu.symbols().iter().fold(0usize, |acc, s| (acc << 2) | s.index());
        NodeWeight::new(self.levels[mu.len()][index])
    }
}

/// Exact law of one Bell-sampling run on `rho (x) rho`, indexed by
/// [`BellRun::index`].
#[derive(Clone, Debug)]
pub struct BellDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl BellDistribution {
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, run: &BellRun) -> f64 {
        self.probs[run.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (BellRun, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| (BellRun::from_index(self.n, i), *p))
    }

    /// Total-variation distance to an empirical frequency table.
    pub fn total_variation(&self, freqs: &[f64]) -> f64 {
        assert_eq!(freqs.len(), self.probs.len());
        0.5 * self.probs.iter().zip(freqs).map(|(p, q)| (p - q).abs()).sum::<f64>()
    }
}

/// For one Bell state, the partner bit and amplitude for each copy-one bit:
/// the vector has exactly one nonzero entry `(a, b)` per value of `a`.
fn pair_structure(outcome: BellPairOutcome) -> [(usize, f64); 2] {
    let v = outcome.state_vector();
    let pick = |a: usize| {
        let b = (0..2)
            .find(|&b| v[2 * a + b].norm() > 0.0)
            .expect("Bell vectors have full Schmidt rank");
        debug_assert!(v[2 * a + b].im == 0.0);
        (b, v[2 * a + b].re)
    };
    [pick(0), pick(1)]
}

/// `p(b) = <b| rho (x) rho |b>` with `|b>` pairing qubit i of each copy.
///
/// Writing `|b> = sum_x B(x, y(x)) |x>|y(x)>`,
/// `p(b) = sum_{x, x'} B(x) B(x') rho[x, x'] rho[y(x), y(x')]`.
pub fn bell_distribution_dense(rho: &DenseState) -> Result<BellDistribution> {
    let n = rho.num_qubits();
    dense_guard("exact Bell distribution", n, MAX_BELL_QUBITS)?;
    let dim = 1usize << n;
    let structures: Vec<[(usize, f64); 2]> = BellPairOutcome::ALL.iter().map(|o| pair_structure(*o)).collect();

    let mut probs = Vec::with_capacity(1 << (2 * n));
    let mut partner = vec![0usize; dim];
    let mut amp = vec![0f64; dim];
    for b in 0..1usize << (2 * n) {
        let run = BellRun::from_index(n, b);
        for x in 0..dim {
            let mut y = 0;
            let mut a = 1.0;
            for (q, outcome) in run.outcomes().iter().enumerate() {
                let shift = n - 1 - q;
                let (yb, amplitude) = structures[outcome.code() as usize][(x >> shift) & 1];
                y |= yb << shift;
                a *= amplitude;
            }
            partner[x] = y;
            amp[x] = a;
        }
        let mut p = 0.0;
        for x in 0..dim {
            for xp in 0..dim {
                let term = rho.entry(x, xp) * rho.entry(partner[x], partner[xp]);
                p += amp[x] * amp[xp] * term.re;
            }
        }
        probs.push(p);
    }
    // clean rounding noise on impossible outcomes
    for p in &mut probs {
        if p.abs() < 1e-15 {
            *p = 0.0;
        }
    }
    Ok(BellDistribution { n, probs })
}

/// `paths+(r) - paths-(r)` by listing all `4^(n-r)` suffixes.
pub fn delta_paths_enumerated(run: &BellRun, r: usize) -> i64 {
    let n = run.len();
    assert!(r <= n, "position {r} beyond run length {n}");
    let tail = &run.outcomes()[r..];
    let mut delta = 0i64;
    for suffix in 0..1usize << (2 * tail.len()) {
        let mut sign = 1i8;
        for (k, outcome) in tail.iter().enumerate() {
            let axis = PauliAxis::from_index(suffix >> (2 * (tail.len() - 1 - k)));
            sign *= outcome.sign(axis);
        }
        delta += i64::from(sign);
    }
    delta
}

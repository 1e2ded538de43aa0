//! Stabilizer states in binary symplectic form.
//!
//! A row stores `x` and `z` bit masks (qubit `q` at bit `q`) and a sign bit;
//! it denotes `(-1)^sign * i^(x.z) X^x Z^z`, so `x = z = 1` on a qubit reads
//! as `Y`.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bell::{BellPairOutcome, BellRun, SampleMeta, SampleSet};
use crate::error::{Error, Result};
use crate::pauli::{dense_guard, pauli_matrix, DenseState, PauliAxis, PauliString, MAX_DENSE_QUBITS};

/// Widest tableau the 64-bit row encoding can hold.
pub const MAX_TABLEAU_QUBITS: usize = 64;
/// Default qubit ceiling for Bell sampling (the doubled system uses 2n bits).
pub const DEFAULT_SAMPLING_CEILING: usize = 16;
/// Ceiling for enumerating all `2^n` group elements.
pub const MAX_GROUP_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct PauliRow {
    x: u64,
    z: u64,
    negative: bool,
}

impl PauliRow {
    fn from_string(sign: i8, p: &PauliString) -> Self {
        let mut row = PauliRow {
            x: 0,
            z: 0,
            negative: sign < 0,
        };
        for (q, s) in p.symbols().iter().enumerate() {
            let bit = 1u64 << q;
            match s {
                PauliAxis::I => {}
                PauliAxis::X => row.x |= bit,
                PauliAxis::Y => {
                    row.x |= bit;
                    row.z |= bit;
                }
                PauliAxis::Z => row.z |= bit,
            }
        }
        row
    }

    fn to_string(self, n: usize) -> PauliString {
        let symbols = (0..n)
            .map(|q| match ((self.x >> q) & 1, (self.z >> q) & 1) {
                (0, 0) => PauliAxis::I,
                (1, 0) => PauliAxis::X,
                (1, 1) => PauliAxis::Y,
                _ => PauliAxis::Z,
            })
            .collect();
        PauliString::new(symbols).expect("n >= 1")
    }

    fn commutes_with(&self, other: &PauliRow) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `self <- self * other` for commuting rows, tracking the sign.
    fn mul_assign(&mut self, other: &PauliRow) {
        // power of i picked up per qubit, summed mod 4
        let mut exponent: i32 = 2 * i32::from(self.negative) + 2 * i32::from(other.negative);
        let mut bits = self.x | self.z;
        while bits != 0 {
            let q = bits.trailing_zeros();
            bits &= bits - 1;
            let (x1, z1) = ((self.x >> q) & 1, (self.z >> q) & 1);
            let (x2, z2) = (((other.x >> q) & 1) as i32, ((other.z >> q) & 1) as i32);
            exponent += match (x1, z1) {
                (1, 1) => z2 - x2,
                (1, 0) => z2 * (2 * x2 - 1),
                (0, 1) => x2 * (1 - 2 * z2),
                _ => 0,
            };
        }
        let exponent = exponent.rem_euclid(4);
        debug_assert!(exponent % 2 == 0, "product of anticommuting rows");
        self.x ^= other.x;
        self.z ^= other.z;
        self.negative = exponent == 2;
    }
}

fn gf2_rank(rows: &[PauliRow]) -> usize {
    let mut vecs: Vec<u128> = rows.iter().map(|r| u128::from(r.x) | (u128::from(r.z) << 64)).collect();
    let mut rank = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        if let Some(p) = (rank..vecs.len()).find(|&i| vecs[i] & mask != 0) {
            vecs.swap(rank, p);
            let pivot = vecs[rank];
            for (i, v) in vecs.iter_mut().enumerate() {
                if i != rank && *v & mask != 0 {
                    *v ^= pivot;
                }
            }
            rank += 1;
        }
    }
    rank
}

/// n commuting, independent signed Pauli generators of a stabilizer state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<PauliRow>,
}

impl StabilizerTableau {
    /// Tableau of `|0...0>`, generated by the single-qubit `Z`s.
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::check_width(n)?;
        let rows = (0..n)
            .map(|q| PauliRow {
                x: 0,
                z: 1 << q,
                negative: false,
            })
            .collect();
        Ok(StabilizerTableau { n, rows })
    }

    pub fn from_generators(n: usize, generators: &[(i8, PauliString)]) -> Result<Self> {
        Self::check_width(n)?;
        if generators.len() != n {
            return Err(Error::InvalidTableau(format!(
                "expected {n} generators, got {}",
                generators.len()
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for (sign, p) in generators {
            if p.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            if sign.abs() != 1 {
                return Err(Error::InvalidTableau(format!("sign must be +1 or -1, got {sign}")));
            }
            rows.push(PauliRow::from_string(*sign, p));
        }
        let tab = StabilizerTableau { n, rows };
        tab.validate()?;
        Ok(tab)
    }

    fn check_width(n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidTableau("need at least one qubit".into()));
        }
        dense_guard("stabilizer tableau", n, MAX_TABLEAU_QUBITS)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.rows.iter().enumerate() {
            for (j, b) in self.rows.iter().enumerate().skip(i + 1) {
                if !a.commutes_with(b) {
                    return Err(Error::InvalidTableau(format!("generators {i} and {j} anticommute")));
                }
            }
        }
        if gf2_rank(&self.rows) != self.rows.len() {
            return Err(Error::InvalidTableau("generators are not independent".into()));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> Vec<(i8, PauliString)> {
        self.rows
            .iter()
            .map(|r| (if r.negative { -1 } else { 1 }, r.to_string(self.n)))
            .collect()
    }

    pub fn apply_h(&mut self, q: usize) {
        apply_h(&mut self.rows, q);
    }

    pub fn apply_s(&mut self, q: usize) {
        apply_s(&mut self.rows, q);
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        apply_cnot(&mut self.rows, control, target);
    }

    /// `prod_k (I + g_k) / 2` as a dense matrix.
    pub fn to_dense(&self) -> Result<DenseState> {
        dense_guard("dense stabilizer state", self.n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << self.n;
        let half = Complex64::new(0.5, 0.0);
        let mut rho = DMatrix::<Complex64>::identity(dim, dim);
        for (sign, p) in self.generators() {
            let g = pauli_matrix(&p) * Complex64::new(f64::from(sign), 0.0);
            let projector = (DMatrix::identity(dim, dim) + g) * half;
            rho *= projector;
        }
        // the product of commuting projectors is rank one with unit trace
        DenseState::new_unchecked(rho)
    }
}

fn apply_h(rows: &mut [PauliRow], q: usize) {
    let bit = 1u64 << q;
    for r in rows {
        let (x, z) = (r.x & bit != 0, r.z & bit != 0);
        r.negative ^= x && z;
        if x != z {
            r.x ^= bit;
            r.z ^= bit;
        }
    }
}

fn apply_s(rows: &mut [PauliRow], q: usize) {
    let bit = 1u64 << q;
    for r in rows {
        let x = r.x & bit != 0;
        r.negative ^= x && (r.z & bit != 0);
        if x {
            r.z ^= bit;
        }
    }
}

fn apply_cnot(rows: &mut [PauliRow], control: usize, target: usize) {
    let (cb, tb) = (1u64 << control, 1u64 << target);
    for r in rows {
        let xa = r.x & cb != 0;
        let zb = r.z & tb != 0;
        let xb = r.x & tb != 0;
        let za = r.z & cb != 0;
        r.negative ^= xa && zb && !(xb ^ za);
        if xa {
            r.x ^= tb;
        }
        if zb {
            r.z ^= cb;
        }
    }
}

/// Random stabilizer state from `10 n^2` uniformly chosen H / S / CNOT gates
/// applied to `|0...0>`.
pub fn random_stabilizer(n: usize, seed: u64) -> Result<StabilizerTableau> {
    random_stabilizer_with_gates(n, 10 * n * n, seed)
}

pub fn random_stabilizer_with_gates(n: usize, gates: usize, seed: u64) -> Result<StabilizerTableau> {
    let mut tab = StabilizerTableau::zero_state(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kinds = if n >= 2 { 3 } else { 2 };
    for _ in 0..gates {
        match rng.random_range(0..kinds) {
            0 => tab.apply_h(rng.random_range(0..n)),
            1 => tab.apply_s(rng.random_range(0..n)),
            _ => {
                let c = rng.random_range(0..n);
                let mut t = rng.random_range(0..n - 1);
                if t >= c {
                    t += 1;
                }
                tab.apply_cnot(c, t);
            }
        }
    }
    Ok(tab)
}

/// All `2^n` signed elements of the stabilizer group, sorted by string.
pub fn enumerate_group(tab: &StabilizerTableau) -> Result<Vec<(i8, PauliString)>> {
    dense_guard("stabilizer group enumeration", tab.n, MAX_GROUP_QUBITS)?;
    let n = tab.n;
    let mut out = Vec::with_capacity(1 << n);
    let mut current = PauliRow {
        x: 0,
        z: 0,
        negative: false,
    };
    out.push((1, current.to_string(n)));
    // Gray code: step i toggles generator trailing_zeros(i)
    for i in 1usize..1 << n {
        let g = i.trailing_zeros() as usize;
        current.mul_assign(&tab.rows[g]);
        out.push((if current.negative { -1 } else { 1 }, current.to_string(n)));
    }
    out.sort_by(|a, b| a.1.cmp(&b.1));
    Ok(out)
}

/// Support of the group as a set of strings.
pub fn group_support(tab: &StabilizerTableau) -> Result<BTreeSet<PauliString>> {
    Ok(enumerate_group(tab)?.into_iter().map(|(_, p)| p).collect())
}

/// Computational-basis outcome law of a stabilizer state: uniform over
/// `offset ^ span(directions)`.
struct BasisLaw {
    offset: u64,
    directions: Vec<u64>,
}

fn basis_law(mut rows: Vec<PauliRow>, qubits: usize) -> BasisLaw {
    // eliminate X parts; pivot rows end up first
    let mut rank = 0;
    for q in 0..qubits {
        let bit = 1u64 << q;
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].x & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r.x & bit != 0 {
                r.mul_assign(&pivot);
            }
        }
        rank += 1;
    }
    let directions = rows[..rank].iter().map(|r| r.x).collect();

    // Z-only rows (-1)^s Z^z fix z . x = s; reduce and read off one solution
    let mut constraints: Vec<(u64, bool)> = rows[rank..].iter().map(|r| (r.z, r.negative)).collect();
    let mut pivots = Vec::new();
    let mut done = 0;
    for q in 0..qubits {
        let bit = 1u64 << q;
        let Some(p) = (done..constraints.len()).find(|&i| constraints[i].0 & bit != 0) else {
            continue;
        };
        constraints.swap(done, p);
        let pivot = constraints[done];
        for (i, c) in constraints.iter_mut().enumerate() {
            if i != done && c.0 & bit != 0 {
                c.0 ^= pivot.0;
                c.1 ^= pivot.1;
            }
        }
        pivots.push(q);
        done += 1;
    }
    let offset = pivots
        .iter()
        .zip(&constraints)
        .filter(|(_, c)| c.1)
        .fold(0u64, |acc, (q, _)| acc | (1 << q));
    BasisLaw { offset, directions }
}

/// Bell sampling on two copies of a stabilizer state.
pub fn sample_stabilizer(tab: &StabilizerTableau, runs: usize, seed: u64) -> Result<SampleSet> {
    sample_stabilizer_with_ceiling(tab, runs, seed, DEFAULT_SAMPLING_CEILING)
}

/// As [`sample_stabilizer`] with an explicit qubit ceiling (at most 32).
///
/// The doubled 2n-qubit tableau gets `CNOT(i -> i+n); H(i)` on every pair,
/// after which both registers are read out in the computational basis.
pub fn sample_stabilizer_with_ceiling(
    tab: &StabilizerTableau,
    runs: usize,
    seed: u64,
    ceiling: usize,
) -> Result<SampleSet> {
    let n = tab.n;
    dense_guard("stabilizer Bell sampling", n, ceiling.min(MAX_TABLEAU_QUBITS / 2))?;
    tab.validate()?;

    let mut doubled: Vec<PauliRow> = tab.rows.clone();
    doubled.extend(tab.rows.iter().map(|r| PauliRow {
        x: r.x << n,
        z: r.z << n,
        negative: r.negative,
    }));
    for i in 0..n {
        apply_cnot(&mut doubled, i, i + n);
        apply_h(&mut doubled, i);
    }
    let law = basis_law(doubled, 2 * n);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let runs = (0..runs)
        .map(|_| {
            let mut bits = law.offset;
            for d in &law.directions {
                if rng.random::<bool>() {
                    bits ^= d;
                }
            }
            let outcomes = (0..n)
                .map(|i| BellPairOutcome::from_measurement((bits >> i) & 1 == 1, (bits >> (i + n)) & 1 == 1))
                .collect();
            BellRun::new(outcomes)
        })
        .collect();
    SampleSet::new(
        n,
        runs,
        SampleMeta {
            source: "stabilizer".into(),
            seed: Some(seed),
        },
    )
}

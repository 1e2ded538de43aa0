use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliAxis;

/// Outcome of a Bell-basis measurement on one qubit pair.
///
/// The numeric code doubles as the sample-file digit. Bit 0 is set when the
/// pair has a negative `X (x) X` sign, bit 1 when `Z (x) Z` is negative; the
/// `Y (x) Y` sign is always `-s_X * s_Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum BellPairOutcome {
    PhiPlus = 0,
    PhiMinus = 1,
    PsiPlus = 2,
    PsiMinus = 3,
}

impl BellPairOutcome {
    pub const ALL: [BellPairOutcome; 4] = [
        BellPairOutcome::PhiPlus,
        BellPairOutcome::PhiMinus,
        BellPairOutcome::PsiPlus,
        BellPairOutcome::PsiMinus,
    ];

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(usize::from(code)).copied()
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    /// Maps the two bits read out after `CNOT(a -> b); H(a)` on the pair.
    pub fn from_measurement(control: bool, target: bool) -> Self {
        Self::ALL[usize::from(control) | (usize::from(target) << 1)]
    }

    pub fn x_negative(self) -> bool {
        self.code() & 1 == 1
    }

    pub fn z_negative(self) -> bool {
        self.code() & 2 == 2
    }

    /// Whether `P (x) P` has eigenvalue -1 on this Bell state.
    pub fn is_negative(self, axis: PauliAxis) -> bool {
        match axis {
            PauliAxis::I => false,
            PauliAxis::X => self.x_negative(),
            PauliAxis::Z => self.z_negative(),
            PauliAxis::Y => self.x_negative() == self.z_negative(),
        }
    }

    pub fn sign(self, axis: PauliAxis) -> i8 {
        if self.is_negative(axis) {
            -1
        } else {
            1
        }
    }

    /// Amplitudes over `|00>, |01>, |10>, |11>`, first bit on copy one.
    pub fn state_vector(self) -> [Complex64; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64| Complex64::new(re, 0.0);
        match self {
            BellPairOutcome::PhiPlus => [c(h), c(0.0), c(0.0), c(h)],
            BellPairOutcome::PhiMinus => [c(h), c(0.0), c(0.0), c(-h)],
            BellPairOutcome::PsiPlus => [c(0.0), c(h), c(h), c(0.0)],
            BellPairOutcome::PsiMinus => [c(0.0), c(h), c(-h), c(0.0)],
        }
    }
}

impl fmt::Display for BellPairOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BellPairOutcome::PhiPlus => "Phi+",
            BellPairOutcome::PhiMinus => "Phi-",
            BellPairOutcome::PsiPlus => "Psi+",
            BellPairOutcome::PsiMinus => "Psi-",
        };
        f.write_str(name)
    }
}

/// One run: a Bell outcome for each of the n qubit pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BellRun(Vec<BellPairOutcome>);

impl BellRun {
    pub fn new(outcomes: Vec<BellPairOutcome>) -> Self {
        BellRun(outcomes)
    }

    /// Decodes a base-4 outcome index, pair 0 in the most significant digit.
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut outcomes = vec![BellPairOutcome::PhiPlus; n];
        for slot in outcomes.iter_mut().rev() {
            *slot = BellPairOutcome::ALL[index & 3];
            index >>= 2;
        }
        BellRun(outcomes)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, o| (acc << 2) | usize::from(o.code()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn outcomes(&self) -> &[BellPairOutcome] {
        &self.0
    }

    /// Number of `Psi-` outcomes at positions `r..n`.
    pub fn psi_minus_count(&self, r: usize) -> usize {
        self.0[r..].iter().filter(|o| **o == BellPairOutcome::PsiMinus).count()
    }
}

impl fmt::Display for BellRun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            write!(f, "{}", o.code())?;
        }
        Ok(())
    }
}

/// Where a sample set came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SampleMeta {
    pub source: String,
    pub seed: Option<u64>,
}

/// M Bell runs over n pairs.
///
/// On construction the runs are also transposed into bit columns: for each
/// pair position and each Pauli symbol, one bit per run marking whether
/// appending that symbol at that position flips the sign-vector component.
#[derive(Clone, Debug)]
pub struct SampleSet {
    n: usize,
    runs: Vec<BellRun>,
    meta: SampleMeta,
    flips: Vec<[Vec<u64>; 4]>,
}

impl SampleSet {
    pub fn new(n: usize, runs: Vec<BellRun>, meta: SampleMeta) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("sample sets need at least one qubit pair"));
        }
        if let Some(bad) = runs.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        let words = runs.len().div_ceil(64);
        let mut flips = vec![
            [
                vec![0u64; words],
                vec![0u64; words],
                vec![0u64; words],
                vec![0u64; words]
            ];
            n
        ];
        for (j, run) in runs.iter().enumerate() {
            let (word, bit) = (j / 64, 1u64 << (j % 64));
            for (pos, outcome) in run.outcomes().iter().enumerate() {
                flips[pos][child_flip_symbol(*outcome).index()][word] |= bit;
            }
        }
        Ok(SampleSet { n, runs, meta, flips })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_runs(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[BellRun] {
        &self.runs
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    /// Bit column for `(position, symbol)`; see the type docs.
    pub fn flip_mask(&self, position: usize, axis: PauliAxis) -> &[u64] {
        &self.flips[position][axis.index()]
    }

    /// Empirical frequency of each full outcome index.
    pub fn outcome_frequencies(&self) -> Vec<f64> {
        let mut counts = vec![0usize; 1 << (2 * self.n)];
        for run in &self.runs {
            counts[run.index()] += 1;
        }
        let m = self.runs.len().max(1) as f64;
        counts.into_iter().map(|c| c as f64 / m).collect()
    }
}

/// The one symbol whose child component flips relative to its parent.
///
/// The child factor is `s(symbol) * (-1)^[outcome is Psi-]`; for each outcome
/// exactly one symbol makes it negative.
fn child_flip_symbol(outcome: BellPairOutcome) -> PauliAxis {
    match outcome {
        BellPairOutcome::PhiPlus => PauliAxis::Y,
        BellPairOutcome::PhiMinus => PauliAxis::X,
        BellPairOutcome::PsiPlus => PauliAxis::Z,
        BellPairOutcome::PsiMinus => PauliAxis::I,
    }
}

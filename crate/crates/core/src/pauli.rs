//! Pauli strings, prefixes and dense density matrices.
//!
//! Qubit 0 is the leftmost tensor factor, which is also the most significant
//! bit of a computational basis index. A prefix therefore constrains the
//! first qubits of a string.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Largest qubit count accepted by dense-matrix operations.
pub const MAX_DENSE_QUBITS: usize = 8;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const PSD_TOL: f64 = 1e-10;
const IMAG_TOL: f64 = 1e-10;

/// Single-qubit Pauli symbol. The derived order `I < X < Y < Z` is used for
/// child ordering and tie-breaking throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PauliAxis {
    I,
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 4] = [PauliAxis::I, PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(PauliAxis::I),
            'X' => Ok(PauliAxis::X),
            'Y' => Ok(PauliAxis::Y),
            'Z' => Ok(PauliAxis::Z),
            other => Err(Error::InvalidSymbol(other)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliAxis::I => 'I',
            PauliAxis::X => 'X',
            PauliAxis::Y => 'Y',
            PauliAxis::Z => 'Z',
        }
    }

    /// Base-4 digit, `I = 0 .. Z = 3`.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    /// Whether the operator flips the computational basis bit it acts on.
    pub fn flips(self) -> bool {
        matches!(self, PauliAxis::X | PauliAxis::Y)
    }

    /// Phase picked up when acting on basis bit `bit`: `P|b> = phase(b) |b ^ flip>`.
    pub fn phase(self, bit: bool) -> Complex64 {
        match (self, bit) {
            (PauliAxis::I, _) | (PauliAxis::X, _) | (PauliAxis::Z, false) => Complex64::new(1.0, 0.0),
            (PauliAxis::Z, true) => Complex64::new(-1.0, 0.0),
            (PauliAxis::Y, false) => Complex64::new(0.0, 1.0),
            (PauliAxis::Y, true) => Complex64::new(0.0, -1.0),
        }
    }

    /// The 2x2 matrix of the symbol.
    pub fn matrix(self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(2, 2);
        for col in 0..2 {
            let row = col ^ usize::from(self.flips());
            m[(row, col)] = self.phase(col == 1);
        }
        m
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

fn parse_symbols(s: &str) -> Result<Vec<PauliAxis>> {
    s.chars().map(PauliAxis::from_char).collect()
}

fn write_symbols(f: &mut fmt::Formatter<'_>, symbols: &[PauliAxis]) -> fmt::Result {
    for s in symbols {
        write!(f, "{}", s.as_char())?;
    }
    Ok(())
}

/// Full-length index of a Pauli operator, written like `"IXZY"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<PauliAxis>);

impl PauliString {
    pub fn new(symbols: Vec<PauliAxis>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::param("a Pauli string needs at least one qubit"));
        }
        Ok(PauliString(symbols))
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![PauliAxis::I; n])
    }

    pub fn uniform(axis: PauliAxis, n: usize) -> Self {
        PauliString(vec![axis; n])
    }

    /// Decodes a base-4 index where position 0 is the most significant digit.
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut symbols = vec![PauliAxis::I; n];
        for slot in symbols.iter_mut().rev() {
            *slot = PauliAxis::from_index(index & 3);
            index >>= 2;
        }
        PauliString(symbols)
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, s| (acc << 2) | s.index())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[PauliAxis] {
        &self.0
    }

    pub fn to_prefix(&self) -> Prefix {
        Prefix(self.0.clone())
    }

    /// Every string of length `n`, in base-4 index order.
    pub fn all(n: usize) -> impl Iterator<Item = PauliString> {
        (0..1usize << (2 * n)).map(move |i| PauliString::from_index(n, i))
    }

    /// Action on a computational basis state: `P|x> = phase |y>`.
    pub fn apply_to_basis(&self, x: usize) -> (usize, Complex64) {
        let n = self.len();
        let mut y = x;
        let mut phase = Complex64::new(1.0, 0.0);
        for (q, s) in self.0.iter().enumerate() {
            let shift = n - 1 - q;
            let bit = (x >> shift) & 1 == 1;
            phase *= s.phase(bit);
            if s.flips() {
                y ^= 1 << shift;
            }
        }
        (y, phase)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliString::new(parse_symbols(s)?)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0)
    }
}

/// Prefix naming the tree node of all strings that start with it.
/// The empty prefix is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prefix(Vec<PauliAxis>);

impl Prefix {
    pub fn root() -> Self {
        Prefix(Vec::new())
    }

    pub fn new(symbols: Vec<PauliAxis>) -> Self {
        Prefix(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[PauliAxis] {
        &self.0
    }

    pub fn child(&self, axis: PauliAxis) -> Prefix {
        let mut symbols = Vec::with_capacity(self.0.len() + 1);
        symbols.extend_from_slice(&self.0);
        symbols.push(axis);
        Prefix(symbols)
    }

    pub fn is_prefix_of(&self, nu: &PauliString) -> bool {
        nu.symbols().starts_with(&self.0)
    }

    /// Converts to a full string when the prefix has length `n`.
    pub fn to_pauli_string(&self, n: usize) -> Option<PauliString> {
        (self.0.len() == n && n > 0).then(|| PauliString(self.0.clone()))
    }

    /// Range of base-4 string indices covered by this node.
    pub fn index_range(&self, n: usize) -> std::ops::Range<usize> {
        let k = self.0.len();
        let head = self.0.iter().fold(0usize, |acc, s| (acc << 2) | s.index());
        let width = 1usize << (2 * (n - k));
        head * width..(head + 1) * width
    }

    /// Every prefix of length `k` over the four symbols.
    pub fn all_of_length(k: usize) -> impl Iterator<Item = Prefix> {
        (0..1usize << (2 * k)).map(move |i| {
            if k == 0 {
                Prefix::root()
            } else {
                PauliString::from_index(k, i).to_prefix()
            }
        })
    }
}

impl FromStr for Prefix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Prefix(parse_symbols(s)?))
    }
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_symbols(f, &self.0)
    }
}

pub(crate) fn dense_guard(what: &'static str, n: usize, max: usize) -> Result<()> {
    if n > max {
        Err(Error::SizeGuard { what, n, max })
    } else {
        Ok(())
    }
}

/// An n-qubit density matrix held as a dense `2^n x 2^n` complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl DenseState {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let state = Self::new_unchecked(matrix)?;
        state.validate()?;
        Ok(state)
    }

    /// Skips the physical checks; only the shape is verified.
    pub fn new_unchecked(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim != matrix.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "expected a square matrix of power-of-two dimension, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = dim.trailing_zeros() as usize;
        dense_guard("dense state", n, MAX_DENSE_QUBITS)?;
        Ok(DenseState { n, matrix })
    }

    fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        let dim = m.nrows();
        for i in 0..dim {
            for j in 0..=i {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > HERMITIAN_TOL {
                    return Err(Error::InvalidState(format!("not Hermitian at ({i}, {j})")));
                }
            }
        }
        let trace = m.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let min_eig = m
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(())
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        dense_guard("dense state", n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        let scale = Complex64::new(1.0 / dim as f64, 0.0);
        Self::new_unchecked(DMatrix::identity(dim, dim) * scale)
    }

    /// Projector onto a normalized state vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        let dim = amplitudes.len();
        let m = DMatrix::from_fn(dim, dim, |i, j| amplitudes[i] * amplitudes[j].conj() / norm);
        Self::new(m)
    }

    /// `|x><x|` for a computational basis index `x`.
    pub fn basis(n: usize, x: usize) -> Result<Self> {
        dense_guard("dense state", n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        m[(x, x)] = Complex64::new(1.0, 0.0);
        Self::new_unchecked(m)
    }

    /// `(1/2^n) sum_nu c_nu P_nu`; validated.
    pub fn from_pauli_terms(n: usize, terms: &[(PauliString, f64)]) -> Result<Self> {
        dense_guard("dense state", n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        let mut m = DMatrix::zeros(dim, dim);
        for (nu, c) in terms {
            if nu.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: nu.len(),
                });
            }
            for x in 0..dim {
                let (y, phase) = nu.apply_to_basis(x);
                m[(y, x)] += phase * (*c / dim as f64);
            }
        }
        Self::new(m)
    }

    /// `(I^n + X^n) / 2^n`, whose only nontrivial coefficient is `c_{X..X} = 1`.
    pub fn pauli_singleton(n: usize) -> Result<Self> {
        Self::from_pauli_terms(
            n,
            &[
                (PauliString::identity(n), 1.0),
                (PauliString::uniform(PauliAxis::X, n), 1.0),
            ],
        )
    }

    /// Full-rank mixed state `G G^dagger / Tr`, with `G` complex Gaussian.
    pub fn random_mixed(n: usize, seed: u64) -> Result<Self> {
        dense_guard("dense state", n, MAX_DENSE_QUBITS)?;
        let dim = 1usize << n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        let mut m = &g * g.adjoint();
        let tr = m.trace();
        m /= tr;
        // symmetrize away rounding so the 1e-12 Hermitian check holds
        let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        Self::new(m)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }
}

/// `P_nu` as a `2^n x 2^n` matrix, built as the ordered tensor product.
pub fn pauli_matrix(nu: &PauliString) -> DMatrix<Complex64> {
    nu.symbols()
        .iter()
        .fold(DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)), |acc, s| {
            acc.kronecker(&s.matrix())
        })
}

/// `c_nu = Tr[rho P_nu]`.
pub fn coefficient(rho: &DenseState, nu: &PauliString) -> Result<f64> {
    if nu.len() != rho.n {
        return Err(Error::LengthMismatch {
            expected: rho.n,
            got: nu.len(),
        });
    }
    // Tr[rho P] = sum_x rho[x, y] phase(x) with P|x> = phase(x)|y>
    let mut trace = Complex64::new(0.0, 0.0);
    for x in 0..rho.dim() {
        let (y, phase) = nu.apply_to_basis(x);
        trace += rho.matrix[(x, y)] * phase;
    }
    if trace.im.abs() >= IMAG_TOL {
        return Err(Error::InvalidState(format!(
            "Tr[rho P_{nu}] has imaginary part {:e}",
            trace.im
        )));
    }
    Ok(trace.re)
}

/// `Tr[rho^2]`.
pub fn purity(rho: &DenseState) -> f64 {
    rho.matrix.iter().map(|z| z.norm_sqr()).sum()
}

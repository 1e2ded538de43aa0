//! Text formats.
//!
//! Sample file: a header line `n M`, then one line per run holding `n`
//! digits `0..=3` (`Phi+`, `Phi-`, `Psi+`, `Psi-`) for pairs `0..n`.
//!
//! Dense-state file: a line with `n`, then `2^n` rows of `2^(n+1)` reals,
//! alternating real and imaginary parts, row-major.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{DenseState, MAX_DENSE_QUBITS};
use crate::samplers::{BellPairOutcome, BellRun, SampleMeta, SampleSet};

pub fn write_samples<W: Write>(samples: &SampleSet, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", samples.num_qubits(), samples.num_runs())?;
    for run in samples.runs() {
        writeln!(out, "{run}")?;
    }
    out.flush()?;
    Ok(())
}

fn parse_count(line: usize, column: usize, field: &str, what: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| Error::parse(line, column, format!("expected {what}, found {field:?}")))
}

/// Reads a sample file. Errors carry 1-based line and column numbers.
pub fn read_samples<R: BufRead>(input: R) -> Result<SampleSet> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::parse(1, 1, "missing header"))??;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 2 {
        return Err(Error::parse(1, 1, "header must be `n M`"));
    }
    let n = parse_count(1, 1, fields[0], "qubit count")?;
    let m = parse_count(1, fields[0].len() + 2, fields[1], "run count")?;
    if n == 0 {
        return Err(Error::parse(1, 1, "qubit count must be at least 1"));
    }

    let mut runs = Vec::with_capacity(m);
    for j in 0..m {
        let line_no = j + 2;
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(line_no, 1, format!("expected {m} runs, file ends after {j}")))??;
        if line.chars().count() != n {
            return Err(Error::parse(
                line_no,
                1,
                format!("expected {n} outcome digits, found {}", line.chars().count()),
            ));
        }
        let outcomes = line
            .chars()
            .enumerate()
            .map(|(col, c)| {
                c.to_digit(10)
                    .and_then(|d| BellPairOutcome::from_code(d as u8))
                    .ok_or_else(|| Error::parse(line_no, col + 1, format!("invalid outcome digit {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        runs.push(BellRun::new(outcomes));
    }
    if let Some(extra) = lines.next() {
        let extra = extra?;
        if !extra.is_empty() {
            return Err(Error::parse(m + 2, 1, "unexpected data after the last run"));
        }
    }
    SampleSet::new(
        n,
        runs,
        SampleMeta {
            source: "file".into(),
            seed: None,
        },
    )
}

pub fn write_dense<W: Write>(rho: &DenseState, mut out: W) -> Result<()> {
    writeln!(out, "{}", rho.num_qubits())?;
    for i in 0..rho.dim() {
        let row: Vec<String> = (0..rho.dim())
            .flat_map(|j| {
                let z = rho.entry(i, j);
                [z.re.to_string(), z.im.to_string()]
            })
            .collect();
        writeln!(out, "{}", row.join(" "))?;
    }
    out.flush()?;
    Ok(())
}

/// Reads and validates a dense density matrix.
pub fn read_dense<R: BufRead>(input: R) -> Result<DenseState> {
    let mut lines = input.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::parse(1, 1, "missing qubit count"))??;
    let n = parse_count(1, 1, first.trim(), "qubit count")?;
    if n == 0 {
        return Err(Error::parse(1, 1, "qubit count must be at least 1"));
    }
    if n > MAX_DENSE_QUBITS {
        return Err(Error::SizeGuard {
            what: "dense state",
            n,
            max: MAX_DENSE_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let line_no = i + 2;
        let line = lines
            .next()
            .ok_or_else(|| Error::parse(line_no, 1, format!("expected {dim} matrix rows")))??;
        let values = line
            .split_whitespace()
            .enumerate()
            .map(|(k, v)| {
                v.parse::<f64>()
                    .map_err(|_| Error::parse(line_no, k + 1, format!("invalid number {v:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != 2 * dim {
            return Err(Error::parse(
                line_no,
                1,
                format!("expected {} numbers, found {}", 2 * dim, values.len()),
            ));
        }
        for j in 0..dim {
            m[(i, j)] = Complex64::new(values[2 * j], values[2 * j + 1]);
        }
    }
    DenseState::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::sample_pauli_singleton;
    use proptest::prelude::*;

    fn parse_err(text: &str) -> (usize, usize) {
        match read_samples(text.as_bytes()) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn exact_layout() {
        let s = SampleSet::new(
            2,
            vec![BellRun::from_index(2, 0b0011), BellRun::from_index(2, 0b1001)],
            SampleMeta::default(),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_samples(&s, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "2 2\n03\n21\n");
    }

    #[test]
    fn malformed_sample_files() {
        assert_eq!(parse_err(""), (1, 1));
        assert_eq!(parse_err("2\n"), (1, 1));
        assert_eq!(parse_err("2 x\n"), (1, 3));
        assert_eq!(parse_err("2 2\n01\n0\n"), (3, 1));
        assert_eq!(parse_err("2 2\n01\n04\n"), (3, 2));
        assert_eq!(parse_err("3 1\n0a1\n"), (2, 2));
        assert_eq!(parse_err("2 3\n01\n"), (3, 1));
        assert_eq!(parse_err("1 1\n0\n2\n"), (3, 1));
    }

    #[test]
    fn dense_round_trip() {
        let rho = DenseState::random_mixed(2, 1).unwrap();
        let mut buf = Vec::new();
        write_dense(&rho, &mut buf).unwrap();
        let back = read_dense(buf.as_slice()).unwrap();
        assert_eq!(back, rho);
    }

    #[test]
    fn dense_errors() {
        assert!(matches!(read_dense("9\n".as_bytes()), Err(Error::SizeGuard { .. })));
        assert!(matches!(
            read_dense("1\n1 0 0\n0 0 1 0\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            read_dense("1\n1 0 0 0\n0 0 1 0\n".as_bytes()),
            Err(Error::InvalidState(_))
        ));
    }

    proptest! {
        #[test]
        fn samples_round_trip(n in 1usize..6, m in 0usize..40, seed in any::<u64>()) {
            let s = sample_pauli_singleton(n, m, seed).unwrap();
            let mut buf = Vec::new();
            write_samples(&s, &mut buf).unwrap();
            let back = read_samples(buf.as_slice()).unwrap();
            prop_assert_eq!(back.runs(), s.runs());
            prop_assert_eq!(back.num_qubits(), n);
        }
    }
}

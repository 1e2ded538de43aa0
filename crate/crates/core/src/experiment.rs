//! Repeated sample-and-search campaigns over grids of qubit counts and shot
//! counts, written as CSV.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliAxis, PauliString};
use crate::samplers::{group_support, random_stabilizer, sample_pauli_singleton, sample_stabilizer};
use crate::search::{find_above_threshold_with_budget, find_top_t, quality_score, ValueSource, DEFAULT_BUDGET};

pub const CSV_HEADER: &str = "n,M,rep,success_or_quality,nodes_expanded,wall_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    /// Threshold search on `(I^n + X^n)/2^n`; success means `X^n` was found.
    SingletonP1,
    /// Top-t search on a random stabilizer state, scored by support overlap.
    StabilizerP2,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singleton-p1" => Ok(ExperimentKind::SingletonP1),
            "stabilizer-p2" => Ok(ExperimentKind::StabilizerP2),
            other => Err(Error::param(format!("unknown experiment kind {other:?}"))),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::SingletonP1 => "singleton-p1",
            ExperimentKind::StabilizerP2 => "stabilizer-p2",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub qubits: Vec<usize>,
    pub shots: Vec<usize>,
    pub repetitions: usize,
    /// Threshold for the singleton experiment.
    pub epsilon: f64,
    /// Leaves to recover in the stabilizer experiment; `None` means `2^n`.
    pub t: Option<usize>,
    pub seed: u64,
    pub budget: usize,
    /// Record wall-clock time per repetition. Off by default so that the CSV
    /// is a pure function of the configuration.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn singleton_p1() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::SingletonP1,
            qubits: (2..=8).collect(),
            shots: vec![1 << 8, 1 << 10, 1 << 12, 1 << 14, 1 << 16],
            repetitions: 100,
            epsilon: 0.5,
            t: None,
            seed: 0,
            budget: DEFAULT_BUDGET,
            record_timing: false,
        }
    }

    pub fn stabilizer_p2() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::StabilizerP2,
            qubits: (2..=6).collect(),
            repetitions: 50,
            ..Self::singleton_p1()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::param("repetitions must be at least 1"));
        }
        if self.qubits.is_empty() || self.qubits.contains(&0) {
            return Err(Error::param("qubit counts must be a non-empty list of positive values"));
        }
        if self.shots.is_empty() || self.shots.contains(&0) {
            return Err(Error::param("shot counts must be a non-empty list of positive values"));
        }
        if self.budget == 0 {
            return Err(Error::param("budget must be at least 1"));
        }
        match self.kind {
            ExperimentKind::SingletonP1 if self.epsilon.is_nan() || self.epsilon <= 0.0 => {
                Err(Error::param(format!("epsilon must be positive, got {}", self.epsilon)))
            }
            ExperimentKind::StabilizerP2 if self.t == Some(0) => Err(Error::param("t must be at least 1")),
            _ => Ok(()),
        }
    }
}

/// One CSV row; `rep == None` marks the per-(n, M) mean.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub shots: usize,
    pub rep: Option<usize>,
    pub score: f64,
    pub nodes_expanded: f64,
    pub wall_ms: f64,
}

/// Seed for one cell of the grid, independent of execution order.
fn derive_seed(base: u64, n: usize, shots: usize, rep: u64) -> u64 {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&base.to_le_bytes());
    key[8..16].copy_from_slice(&(n as u64).to_le_bytes());
    key[16..24].copy_from_slice(&(shots as u64).to_le_bytes());
    key[24..].copy_from_slice(&rep.to_le_bytes());
    ChaCha8Rng::from_seed(key).next_u64()
}

struct Outcome {
    score: f64,
    nodes: usize,
    wall_ms: f64,
}

fn singleton_rep(cfg: &ExperimentConfig, n: usize, shots: usize, rep: usize) -> Result<Outcome> {
    let start = Instant::now();
    let samples = sample_pauli_singleton(n, shots, derive_seed(cfg.seed, n, shots, rep as u64))?;
    let result = find_above_threshold_with_budget(ValueSource::Sampled(&samples), cfg.epsilon, cfg.budget)?;
    let target = PauliString::uniform(PauliAxis::X, n);
    let hit = result.found.iter().any(|f| f.pauli == target);
    Ok(Outcome {
        score: if hit { 1.0 } else { 0.0 },
        nodes: result.stats.nodes_expanded,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn stabilizer_rep(
    cfg: &ExperimentConfig,
    tab: &crate::samplers::StabilizerTableau,
    truth: &BTreeSet<PauliString>,
    shots: usize,
    rep: usize,
) -> Result<Outcome> {
    let n = tab.num_qubits();
    let start = Instant::now();
    let samples = sample_stabilizer(tab, shots, derive_seed(cfg.seed, n, shots, rep as u64))?;
    let t = cfg.t.unwrap_or(1 << n);
    let result = find_top_t(ValueSource::Sampled(&samples), t, cfg.budget)?;
    Ok(Outcome {
        score: quality_score(truth, &result.found_set(), n),
        nodes: result.stats.nodes_expanded,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs every `(n, M, rep)` cell; per-repetition rows come first, in grid
/// order, followed by one mean row per `(n, M)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut means = Vec::new();
    for &n in &cfg.qubits {
        for &shots in &cfg.shots {
            let outcomes: Vec<Outcome> = match cfg.kind {
                ExperimentKind::SingletonP1 => (0..cfg.repetitions)
                    .into_par_iter()
                    .map(|rep| singleton_rep(cfg, n, shots, rep))
                    .collect::<Result<_>>()?,
                ExperimentKind::StabilizerP2 => {
                    // one random state per (n, M), sampled `repetitions` times
                    let tab = random_stabilizer(n, derive_seed(cfg.seed, n, shots, u64::MAX))?;
                    let truth = group_support(&tab)?;
                    (0..cfg.repetitions)
                        .into_par_iter()
                        .map(|rep| stabilizer_rep(cfg, &tab, &truth, shots, rep))
                        .collect::<Result<_>>()?
                }
            };
            let count = outcomes.len() as f64;
            let (mut score, mut nodes, mut wall) = (0.0, 0.0, 0.0);
            for (rep, o) in outcomes.into_iter().enumerate() {
                let wall_ms = if cfg.record_timing { o.wall_ms } else { 0.0 };
                score += o.score;
                nodes += o.nodes as f64;
                wall += wall_ms;
                rows.push(ExperimentRow {
                    n,
                    shots,
                    rep: Some(rep),
                    score: o.score,
                    nodes_expanded: o.nodes as f64,
                    wall_ms,
                });
            }
            let mean = ExperimentRow {
                n,
                shots,
                rep: None,
                score: score / count,
                nodes_expanded: nodes / count,
                wall_ms: wall / count,
            };
            means.push(mean);
        }
    }
    rows.extend(means);
    Ok(rows)
}

/// Mean rows only.
pub fn means(rows: &[ExperimentRow]) -> impl Iterator<Item = &ExperimentRow> {
    rows.iter().filter(|r| r.rep.is_none())
}

pub fn write_csv<W: Write>(rows: &[ExperimentRow], mut out: W) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        match r.rep {
            Some(rep) => writeln!(
                out,
                "{},{},{},{},{},{:.3}",
                r.n, r.shots, rep, r.score, r.nodes_expanded, r.wall_ms
            )?,
            None => writeln!(
                out,
                "{},{},mean,{},{},{:.3}",
                r.n, r.shots, r.score, r.nodes_expanded, r.wall_ms
            )?,
        }
    }
    out.flush()?;
    Ok(())
}

/// Two-panel SVG over the mean rows: score and mean expanded nodes (log
/// scale) against `log2 M`, one polyline per qubit count.
pub fn write_svg<W: Write>(rows: &[ExperimentRow], kind: ExperimentKind, mut out: W) -> Result<()> {
    const W_PANEL: f64 = 360.0;
    const H_PANEL: f64 = 260.0;
    const PAD: f64 = 40.0;
    const COLORS: [&str; 8] = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    ];

    let points: Vec<&ExperimentRow> = means(rows).collect();
    let qubits: BTreeSet<usize> = points.iter().map(|r| r.n).collect();
    let log_m = |r: &ExperimentRow| (r.shots as f64).log2();
    let (xmin, xmax) = points
        .iter()
        .map(|r| log_m(r))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let xspan = if xmax > xmin { xmax - xmin } else { 1.0 };
    let nodes_max = points
        .iter()
        .map(|r| r.nodes_expanded.max(1.0).log10())
        .fold(0.0, f64::max)
        .max(1.0);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">"#,
        2.0 * W_PANEL,
        H_PANEL
    )?;
    let score_label = match kind {
        ExperimentKind::SingletonP1 => "success rate",
        ExperimentKind::StabilizerP2 => "quality",
    };
    for (panel, label) in [score_label, "log10 nodes expanded"].iter().enumerate() {
        let x0 = panel as f64 * W_PANEL;
        writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x0 + PAD,
            PAD / 2.0,
            W_PANEL - 1.5 * PAD,
            H_PANEL - 1.5 * PAD
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{}">{label} vs log2 M</text>"#,
            x0 + PAD,
            PAD / 2.0 - 4.0
        )?;
        for (i, n) in qubits.iter().enumerate() {
            let coords: Vec<String> = points
                .iter()
                .filter(|r| r.n == *n)
                .map(|r| {
                    let fx = (log_m(r) - xmin) / xspan;
                    let fy = if panel == 0 {
                        r.score
                    } else {
                        r.nodes_expanded.max(1.0).log10() / nodes_max
                    };
                    format!(
                        "{:.1},{:.1}",
                        x0 + PAD + fx * (W_PANEL - 1.5 * PAD),
                        PAD / 2.0 + (1.0 - fy) * (H_PANEL - 1.5 * PAD)
                    )
                })
                .collect();
            let color = COLORS[i % COLORS.len()];
            writeln!(
                out,
                r#"<polyline fill="none" stroke="{color}" points="{}"><title>n={n}</title></polyline>"#,
                coords.join(" ")
            )?;
            writeln!(
                out,
                r#"<text x="{}" y="{}" fill="{color}">n={n}</text>"#,
                x0 + W_PANEL - PAD / 2.0 - 30.0,
                PAD + 12.0 * i as f64
            )?;
        }
    }
    writeln!(out, "</svg>")?;
    out.flush()?;
    Ok(())
}

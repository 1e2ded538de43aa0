//! Best-first traversal of the prefix tree.
//!
//! Every pop counts as one expanded node, leaves included. Ties on the
//! estimate go to the lexicographically smaller prefix (`I < X < Y < Z`,
//! shorter first). Threshold comparisons are strict: a node or leaf needs an
//! estimate `> epsilon^2`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use crate::error::Result;
use crate::estimator::{child_sign_vector, estimate, root_sign_vector, SignVector};
use crate::oracle::ExactNodeTable;
use crate::pauli::{DenseState, PauliAxis, PauliString, Prefix};
use crate::samplers::SampleSet;

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Where node values come from.
#[derive(Clone, Copy, Debug)]
pub enum ValueSource<'a> {
    Sampled(&'a SampleSet),
    Exact(&'a DenseState),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    TargetReached,
    BelowThreshold,
    FrontierExhausted,
    BudgetExhausted,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::TargetReached => "target_reached",
            Termination::BelowThreshold => "below_threshold",
            Termination::FrontierExhausted => "frontier_exhausted",
            Termination::BudgetExhausted => "budget_exhausted",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: usize,
    pub leaves_emitted: usize,
    pub frontier_peak: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FoundLeaf {
    pub pauli: PauliString,
    /// `max(estimate, 0)`; Bell sampling only sees `c^2`, never the sign.
    pub weight: f64,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub found: Vec<FoundLeaf>,
    pub stats: SearchStats,
    pub termination: Termination,
}

impl SearchResult {
    pub fn found_set(&self) -> BTreeSet<PauliString> {
        self.found.iter().map(|f| f.pauli.clone()).collect()
    }
}

/// What an observer sees at each pop, before the node is expanded.
pub struct SearchStep<'a> {
    pub popped: &'a Prefix,
    pub estimate: f64,
    /// Nodes still in the frontier, in no particular order.
    pub frontier: Vec<(&'a Prefix, f64)>,
    pub emitted: &'a [FoundLeaf],
}

struct FrontierNode<H> {
    prefix: Prefix,
    estimate: f64,
    handle: H,
}

impl<H> PartialEq for FrontierNode<H> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<H> Eq for FrontierNode<H> {}

impl<H> PartialOrd for FrontierNode<H> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<H> Ord for FrontierNode<H> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.estimate
            .total_cmp(&other.estimate)
            .then_with(|| other.prefix.cmp(&self.prefix))
    }
}

trait Evaluator {
    type Handle;
    fn num_qubits(&self) -> usize;
    fn root(&self) -> Result<(f64, Self::Handle)>;
    fn child(&self, prefix: &Prefix, parent: &Self::Handle, axis: PauliAxis) -> Result<(f64, Self::Handle)>;
}

struct SampledEvaluator<'a>(&'a SampleSet);

impl Evaluator for SampledEvaluator<'_> {
    type Handle = SignVector;

    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    fn root(&self) -> Result<(f64, SignVector)> {
        let sv = root_sign_vector(self.0)?;
        Ok((estimate(&sv, self.0), sv))
    }

    fn child(&self, _prefix: &Prefix, parent: &SignVector, axis: PauliAxis) -> Result<(f64, SignVector)> {
        let sv = child_sign_vector(parent, self.0, axis)?;
        Ok((estimate(&sv, self.0), sv))
    }
}

struct ExactEvaluator(ExactNodeTable);

impl Evaluator for ExactEvaluator {
    type Handle = ();

    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    fn root(&self) -> Result<(f64, ())> {
        Ok((self.0.get(&Prefix::root()).value(), ()))
    }

    fn child(&self, prefix: &Prefix, _parent: &(), axis: PauliAxis) -> Result<(f64, ())> {
        Ok((self.0.get(&prefix.child(axis)).value(), ()))
    }
}

#[derive(Clone, Copy)]
enum Goal {
    Threshold(f64),
    TopT(usize),
}

type Observer<'o> = Option<&'o mut dyn FnMut(&SearchStep<'_>)>;

fn best_first<E: Evaluator>(eval: &E, goal: Goal, budget: usize, mut observer: Observer<'_>) -> Result<SearchResult> {
    let n = eval.num_qubits();
    let mut frontier = BinaryHeap::new();
    let (value, handle) = eval.root()?;
    frontier.push(FrontierNode {
        prefix: Prefix::root(),
        estimate: value,
        handle,
    });
    let mut stats = SearchStats {
        frontier_peak: 1,
        ..SearchStats::default()
    };
    let mut found = Vec::new();

    let termination = loop {
        if let Goal::TopT(t) = goal {
            if found.len() >= t {
                break Termination::TargetReached;
            }
        }
        if stats.nodes_expanded >= budget {
            break Termination::BudgetExhausted;
        }
        let Some(node) = frontier.pop() else {
            break Termination::FrontierExhausted;
        };
        if let Goal::Threshold(level) = goal {
            if node.estimate <= level {
                break Termination::BelowThreshold;
            }
        }
        if let Some(obs) = observer.as_mut() {
            obs(&SearchStep {
                popped: &node.prefix,
                estimate: node.estimate,
                frontier: frontier.iter().map(|f| (&f.prefix, f.estimate)).collect(),
                emitted: &found,
            });
        }
        stats.nodes_expanded += 1;
        if let Some(pauli) = node.prefix.to_pauli_string(n) {
            found.push(FoundLeaf {
                pauli,
                weight: node.estimate.max(0.0),
            });
            stats.leaves_emitted += 1;
            continue;
        }
        for axis in PauliAxis::ALL {
            let (value, handle) = eval.child(&node.prefix, &node.handle, axis)?;
            frontier.push(FrontierNode {
                prefix: node.prefix.child(axis),
                estimate: value,
                handle,
            });
        }
        stats.frontier_peak = stats.frontier_peak.max(frontier.len());
    };

    Ok(SearchResult {
        found,
        stats,
        termination,
    })
}

fn dispatch(source: ValueSource<'_>, goal: Goal, budget: usize, observer: Observer<'_>) -> Result<SearchResult> {
    match source {
        ValueSource::Sampled(samples) => best_first(&SampledEvaluator(samples), goal, budget, observer),
        ValueSource::Exact(rho) => best_first(&ExactEvaluator(ExactNodeTable::new(rho)?), goal, budget, observer),
    }
}

/// Pops the heaviest node until `t` leaves have been emitted, the frontier
/// empties or `budget` pops have been spent.
pub fn find_top_t(source: ValueSource<'_>, t: usize, budget: usize) -> Result<SearchResult> {
    dispatch(source, Goal::TopT(t), budget, None)
}

/// Expands every node whose estimate exceeds `epsilon^2` and emits every leaf
/// that does, using [`DEFAULT_BUDGET`].
pub fn find_above_threshold(source: ValueSource<'_>, epsilon: f64) -> Result<SearchResult> {
    find_above_threshold_with_budget(source, epsilon, DEFAULT_BUDGET)
}

pub fn find_above_threshold_with_budget(source: ValueSource<'_>, epsilon: f64, budget: usize) -> Result<SearchResult> {
    dispatch(source, Goal::Threshold(epsilon * epsilon), budget, None)
}

/// [`find_top_t`] with a callback at every pop.
pub fn find_top_t_observed(
    source: ValueSource<'_>,
    t: usize,
    budget: usize,
    observer: &mut dyn FnMut(&SearchStep<'_>),
) -> Result<SearchResult> {
    dispatch(source, Goal::TopT(t), budget, Some(observer))
}

/// [`find_above_threshold`] with a callback at every pop.
pub fn find_above_threshold_observed(
    source: ValueSource<'_>,
    epsilon: f64,
    observer: &mut dyn FnMut(&SearchStep<'_>),
) -> Result<SearchResult> {
    dispatch(
        source,
        Goal::Threshold(epsilon * epsilon),
        DEFAULT_BUDGET,
        Some(observer),
    )
}

/// `1 - |truth symmetric-difference recovered| / 2^n`.
pub fn quality_score(truth: &BTreeSet<PauliString>, recovered: &BTreeSet<PauliString>, n: usize) -> f64 {
    let diff = truth.symmetric_difference(recovered).count();
    1.0 - diff as f64 / (1u64 << n) as f64
}

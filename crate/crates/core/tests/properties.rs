use std::collections::BTreeSet;

use bellsearch::oracle::{bell_distribution_dense, delta_paths_enumerated, node_value_exact};
use bellsearch::samplers::{
    enumerate_group, random_stabilizer, sample_dense, sample_pauli_singleton, sample_stabilizer,
};
use bellsearch::search::{find_above_threshold_observed, find_top_t_observed, SearchStep, DEFAULT_BUDGET};
use bellsearch::{
    coefficient, estimate, find_above_threshold, find_top_t, purity, root_sign_vector, sign_vector_direct, DenseState,
    PauliString, Prefix, SampleSet, StabilizerTableau, Termination, ValueSource,
};

fn plain_estimate(samples: &SampleSet, nu: &PauliString) -> f64 {
    let sv = sign_vector_direct(samples, &nu.to_prefix()).unwrap();
    estimate(&sv, samples)
}

/// Fraction of seeds whose plain estimate of every full string lies within
/// `5/sqrt(M)` of the squared coefficient; the worst string is reported.
fn plain_estimator_coverage(rho: &DenseState, draw: impl Fn(u64) -> SampleSet, shots: usize) -> f64 {
    let n = rho.num_qubits();
    let truth: Vec<f64> = PauliString::all(n)
        .map(|nu| coefficient(rho, &nu).unwrap().powi(2))
        .collect();
    let tol = 5.0 / (shots as f64).sqrt();
    let seeds = 100;
    let mut hits = vec![0usize; truth.len()];
    for seed in 0..seeds {
        let samples = draw(seed);
        for (i, nu) in PauliString::all(n).enumerate() {
            if (plain_estimate(&samples, &nu) - truth[i]).abs() <= tol {
                hits[i] += 1;
            }
        }
    }
    *hits.iter().min().unwrap() as f64 / seeds as f64
}

#[test]
fn plain_estimator_concentrates_for_every_sampler() {
    let shots = 2000;
    let rho = DenseState::random_mixed(3, 17).unwrap();
    assert!(plain_estimator_coverage(&rho, |s| sample_dense(&rho, shots, s).unwrap(), shots) >= 0.99);

    let tab = random_stabilizer(4, 18).unwrap();
    let rho = tab.to_dense().unwrap();
    assert!(plain_estimator_coverage(&rho, |s| sample_stabilizer(&tab, shots, s).unwrap(), shots) >= 0.99);

    let rho = DenseState::pauli_singleton(4).unwrap();
    assert!(plain_estimator_coverage(&rho, |s| sample_pauli_singleton(4, shots, s).unwrap(), shots) >= 0.99);
}

#[test]
fn singleton_x_estimate_converges() {
    let shots = 100_000;
    let samples = sample_pauli_singleton(1, shots, 4).unwrap();
    let est = plain_estimate(&samples, &"X".parse().unwrap());
    assert!((est - 1.0).abs() <= 5.0 / (shots as f64).sqrt());
}

#[test]
fn zero_state_zz_estimate_converges() {
    let tab = StabilizerTableau::zero_state(2).unwrap();
    for shots in [100, 10_000, 100_000] {
        let samples = sample_stabilizer(&tab, shots, 8).unwrap();
        let est = plain_estimate(&samples, &"ZZ".parse().unwrap());
        assert!((est - 1.0).abs() <= 5.0 / (shots as f64).sqrt());
    }
}

#[test]
fn estimate_spread_scales_with_depth() {
    let rho = DenseState::random_mixed(3, 5).unwrap();
    let n = rho.num_qubits();
    let shots = 400;
    let seeds = 200;
    let sets: Vec<SampleSet> = (0..seeds).map(|s| sample_dense(&rho, shots, s).unwrap()).collect();
    for k in 0..=n {
        for mu in Prefix::all_of_length(k) {
            let scale = (1u64 << (n - k)) as f64;
            let bound = scale / (shots as f64).sqrt();

            // exact single-run variance: contributions are +-2^(n-k)
            let mean = node_value_exact(&rho, &mu).unwrap().value();
            let exact_var = (scale * scale - mean * mean) / shots as f64;
            assert!(exact_var <= bound * bound + 1e-12);

            let values: Vec<f64> = sets
                .iter()
                .map(|s| estimate(&sign_vector_direct(s, &mu).unwrap(), s))
                .collect();
            let m = values.iter().sum::<f64>() / seeds as f64;
            let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (seeds - 1) as f64;
            // sample-std fluctuation allowance: three standard errors
            let allowance = 1.0 + 3.0 / (2.0 * (seeds - 1) as f64).sqrt();
            assert!(var.sqrt() <= bound * allowance, "{mu:?}: std {} > {bound}", var.sqrt());
        }
    }
}

#[test]
fn root_estimate_matches_path_enumeration() {
    for n in 1..=4 {
        let samples = sample_dense(&DenseState::random_mixed(n, n as u64).unwrap(), 300, 2).unwrap();
        let sv = root_sign_vector(&samples).unwrap();
        for (j, run) in samples.runs().iter().enumerate() {
            assert_eq!(i64::from(sv.component(j)) << n, delta_paths_enumerated(run, 0));
        }
    }
}

#[test]
fn stabilizer_and_dense_samplers_agree() {
    for n in 1..=3 {
        let tab = random_stabilizer(n, 40 + n as u64).unwrap();
        let rho = tab.to_dense().unwrap();
        let law = bell_distribution_dense(&rho).unwrap();
        let a = sample_stabilizer(&tab, 100_000, 1).unwrap().outcome_frequencies();
        let b = sample_dense(&rho, 100_000, 2).unwrap().outcome_frequencies();
        let between: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / 2.0;
        assert!(between <= 0.02, "n={n}: {between}");
        assert!(law.total_variation(&a) <= 0.02);
        assert!(law.total_variation(&b) <= 0.02);
    }
}

#[test]
fn stabilizer_group_matches_dense_coefficients() {
    for n in 1..=4 {
        let tab = random_stabilizer(n, 60 + n as u64).unwrap();
        let rho = tab.to_dense().unwrap();
        let group = enumerate_group(&tab).unwrap();
        assert_eq!(group.len(), 1 << n);
        let support: BTreeSet<_> = group.iter().map(|(_, p)| p.clone()).collect();
        for nu in PauliString::all(n) {
            let c = coefficient(&rho, &nu).unwrap();
            if let Some((sign, _)) = group.iter().find(|(_, p)| *p == nu) {
                assert!((c - f64::from(*sign)).abs() < 1e-9);
            } else {
                assert!(c.abs() < 1e-9);
                assert!(!support.contains(&nu));
            }
        }
    }
}

fn test_states() -> Vec<DenseState> {
    let mut out = vec![
        DenseState::maximally_mixed(3).unwrap(),
        DenseState::pauli_singleton(3).unwrap(),
        DenseState::basis(2, 1).unwrap(),
    ];
    for n in 1..=4 {
        out.push(DenseState::random_mixed(n, 300 + n as u64).unwrap());
        out.push(random_stabilizer(n, 400 + n as u64).unwrap().to_dense().unwrap());
    }
    out
}

/// Checks the frontier partition and max-first order at one pop.
fn check_step(step: &SearchStep<'_>, n: usize) {
    let mut covered = vec![0u8; 1 << (2 * n)];
    let mut mark = |r: std::ops::Range<usize>| r.for_each(|i| covered[i] += 1);
    mark(step.popped.index_range(n));
    for (p, _) in &step.frontier {
        mark(p.index_range(n));
    }
    for leaf in step.emitted {
        let i = leaf.pauli.index();
        mark(i..i + 1);
    }
    assert!(
        covered.iter().all(|&c| c == 1),
        "frontier does not partition the index space"
    );

    for (p, est) in &step.frontier {
        assert!(
            *est < step.estimate || (*est == step.estimate && step.popped < *p),
            "popped {:?} ({}) but {:?} ({est}) was preferred",
            step.popped,
            step.estimate,
            p
        );
    }
}

#[test]
fn frontier_invariants_hold_at_every_pop() {
    for rho in test_states() {
        let n = rho.num_qubits();
        let samples = sample_dense(&rho, 512, 3).unwrap();
        for source in [ValueSource::Exact(&rho), ValueSource::Sampled(&samples)] {
            let mut pops = 0;
            find_top_t_observed(source, 1 << n, 10_000, &mut |s| {
                check_step(s, n);
                pops += 1;
            })
            .unwrap();
            assert!(pops > 0);
            find_above_threshold_observed(source, 0.3, &mut |s| check_step(s, n)).unwrap();
        }
    }
}

#[test]
fn exact_threshold_output_is_the_coefficient_set() {
    for rho in test_states() {
        let n = rho.num_qubits();
        for eps in [0.1, 0.25, 0.5] {
            let r = find_above_threshold(ValueSource::Exact(&rho), eps).unwrap();
            let expected: BTreeSet<_> = PauliString::all(n)
                .filter(|nu| coefficient(&rho, nu).unwrap().abs() > eps)
                .collect();
            assert_eq!(r.found_set(), expected);
            assert_eq!(r.termination, Termination::BelowThreshold);
        }
    }
}

#[test]
fn exact_top_t_returns_largest_in_order() {
    for n in 1..=4 {
        let rho = DenseState::random_mixed(n, 500 + n as u64).unwrap();
        let mut weights: Vec<(f64, PauliString)> = PauliString::all(n)
            .map(|nu| (coefficient(&rho, &nu).unwrap().powi(2), nu))
            .collect();
        weights.sort_by(|a, b| b.0.total_cmp(&a.0));
        let t = 1 << n;
        let r = find_top_t(ValueSource::Exact(&rho), t, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.termination, Termination::TargetReached);
        for (leaf, (w, nu)) in r.found.iter().zip(&weights) {
            assert_eq!(&leaf.pauli, nu);
            assert!((leaf.weight - w).abs() < 1e-9);
        }
    }
}

#[test]
fn exact_top_t_node_count_is_bounded() {
    // Every pop before the t-th leaf has value >= w_t and each level of the
    // tree sums to 2^n purity, so at most 2^n purity / w_t pops per level.
    for rho in test_states() {
        let n = rho.num_qubits();
        let level_sum = (1u64 << n) as f64 * purity(&rho);
        for t in 1..=(1usize << n) {
            let r = find_top_t(ValueSource::Exact(&rho), t, DEFAULT_BUDGET).unwrap();
            let w_t = r.found.last().unwrap().weight;
            if w_t < 1e-9 {
                continue;
            }
            let bound = (n + 1) as f64 * level_sum / w_t;
            assert!(r.stats.nodes_expanded as f64 <= bound + 1e-9, "n={n} t={t}");
        }
    }
}

#[test]
fn sparse_states_open_at_most_s_nodes_per_level() {
    let mut states: Vec<DenseState> = (1..=4)
        .map(|n| random_stabilizer(n, 700 + n as u64).unwrap().to_dense().unwrap())
        .collect();
    states.push(DenseState::pauli_singleton(4).unwrap());
    states.push(DenseState::maximally_mixed(4).unwrap());
    for rho in states {
        let n = rho.num_qubits();
        let s = PauliString::all(n)
            .filter(|nu| coefficient(&rho, nu).unwrap().abs() > 1e-9)
            .count();
        let mut per_level = vec![0usize; n + 1];
        find_top_t_observed(ValueSource::Exact(&rho), s, DEFAULT_BUDGET, &mut |st| {
            per_level[st.popped.len()] += 1
        })
        .unwrap();
        assert!(per_level.iter().all(|&c| c <= s), "{per_level:?} with s={s}");
        let mut per_level = vec![0usize; n + 1];
        find_above_threshold_observed(ValueSource::Exact(&rho), 0.1, &mut |st| per_level[st.popped.len()] += 1)
            .unwrap();
        assert!(per_level.iter().all(|&c| c <= s), "{per_level:?} with s={s}");
    }
}

#[test]
fn sampled_top_t_reports_frontier_exhaustion() {
    let samples = sample_pauli_singleton(1, 64, 0).unwrap();
    let r = find_top_t(ValueSource::Sampled(&samples), 10, DEFAULT_BUDGET).unwrap();
    assert_eq!(r.found.len(), 4);
    assert_eq!(r.termination, Termination::FrontierExhausted);
    let r = find_top_t(ValueSource::Sampled(&samples), 10, 2).unwrap();
    assert_eq!(r.termination, Termination::BudgetExhausted);
    assert_eq!(r.stats.nodes_expanded, 2);
}

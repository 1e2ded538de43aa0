//! Small versions of the singleton and stabilizer experiments, written as CSV.

use bellsearch::experiment::{means, run_experiment, write_csv, ExperimentConfig};

fn main() -> bellsearch::Result<()> {
    let singleton = ExperimentConfig {
        qubits: vec![2, 4, 6],
        shots: vec![1 << 8, 1 << 12],
        repetitions: 20,
        ..ExperimentConfig::singleton_p1()
    };
    let rows = run_experiment(&singleton)?;
    println!("singleton, threshold 1/2 (means):");
    for r in means(&rows) {
        println!(
            "  n={} M={:>5}: success {:.2}, pops {:.1}",
            r.n, r.shots, r.score, r.nodes_expanded
        );
    }

    let stabilizer = ExperimentConfig {
        qubits: vec![2, 3, 4],
        shots: vec![1 << 10],
        repetitions: 10,
        ..ExperimentConfig::stabilizer_p2()
    };
    let rows = run_experiment(&stabilizer)?;
    println!("stabilizer, top 2^n, full CSV:");
    write_csv(&rows, std::io::stdout().lock())
}

//! Find every coefficient with |c| above a threshold, exactly and from samples.

use bellsearch::samplers::sample_pauli_singleton;
use bellsearch::{find_above_threshold, required_samples, DenseState, ValueSource};

fn main() -> bellsearch::Result<()> {
    let n = 5;
    let eps = 0.5;
    let rho = DenseState::pauli_singleton(n)?;
    let exact = find_above_threshold(ValueSource::Exact(&rho), eps)?;
    let found: Vec<String> = exact.found_set().iter().map(ToString::to_string).collect();
    println!("exact: {} after {} pops", found.join(" "), exact.stats.nodes_expanded);

    let budget = required_samples(eps, 0.05, n)?;
    println!("Hoeffding budget for eps={eps}, delta=0.05: M = {}", budget.runs());
    for shots in [budget.runs(), 1 << 8, 1 << 12] {
        let samples = sample_pauli_singleton(n, shots, 1)?;
        let r = find_above_threshold(ValueSource::Sampled(&samples), eps)?;
        let found: Vec<String> = r.found.iter().map(|l| format!("{}:{:.3}", l.pauli, l.weight)).collect();
        println!(
            "M = {shots:>6}: {} pops, {} ({})",
            r.stats.nodes_expanded,
            found.join(" "),
            r.termination
        );
    }
    Ok(())
}

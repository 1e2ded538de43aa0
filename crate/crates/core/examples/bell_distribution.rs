//! Exact Bell-measurement law of two copies of a state, and dense sampling from it.

use bellsearch::samplers::sample_dense;
use bellsearch::{bell_distribution_dense, DenseState};

fn main() -> bellsearch::Result<()> {
    let rho = DenseState::basis(1, 0)?;
    let law = bell_distribution_dense(&rho)?;
    println!("|0><0| (digits: 0=Phi+ 1=Phi- 2=Psi+ 3=Psi-)");
    for (run, p) in law.iter() {
        println!("  {run}: {p:.4}");
    }

    let rho = DenseState::random_mixed(2, 3)?;
    let law = bell_distribution_dense(&rho)?;
    for shots in [100, 10_000, 1_000_000] {
        let samples = sample_dense(&rho, shots, 1)?;
        let tv = law.total_variation(&samples.outcome_frequencies());
        println!("random 2-qubit state, M = {shots:>7}: total variation {tv:.4}");
    }
    Ok(())
}

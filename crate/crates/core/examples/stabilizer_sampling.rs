//! Random stabilizer states: tableau, group enumeration and Bell sampling.

use bellsearch::samplers::{enumerate_group, random_stabilizer, sample_stabilizer, sample_stabilizer_with_ceiling};
use bellsearch::{bell_distribution_dense, estimate, sign_vector_direct};

fn main() -> bellsearch::Result<()> {
    let tab = random_stabilizer(3, 42)?;
    println!("generators:");
    for (sign, p) in tab.generators() {
        println!("  {}{p}", if sign < 0 { '-' } else { '+' });
    }
    let group = enumerate_group(&tab)?;
    println!("group ({} elements):", group.len());
    for (sign, p) in &group {
        print!(" {}{p}", if *sign < 0 { '-' } else { '+' });
    }
    println!();

    let samples = sample_stabilizer(&tab, 20_000, 7)?;
    let law = bell_distribution_dense(&tab.to_dense()?)?;
    println!(
        "TV to dense law: {:.4}",
        law.total_variation(&samples.outcome_frequencies())
    );
    for (_, p) in group.iter().take(4) {
        let sv = sign_vector_direct(&samples, &p.to_prefix())?;
        println!("estimate of c_{p}^2: {:.4}", estimate(&sv, &samples));
    }

    // tableaux scale well past what dense matrices allow; sampling above the
    // default ceiling of 16 qubits has to be asked for
    let big = random_stabilizer(30, 1)?;
    let samples = sample_stabilizer_with_ceiling(&big, 1000, 2, 30)?;
    println!(
        "30-qubit stabilizer: {} runs of {} pairs",
        samples.num_runs(),
        samples.num_qubits()
    );
    Ok(())
}

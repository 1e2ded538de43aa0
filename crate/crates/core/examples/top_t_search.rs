//! Recover the 2^n Pauli strings of a random stabilizer state.

use bellsearch::samplers::{group_support, random_stabilizer, sample_stabilizer};
use bellsearch::search::DEFAULT_BUDGET;
use bellsearch::{find_top_t, quality_score, ValueSource};

fn main() -> bellsearch::Result<()> {
    let n = 5;
    let t = 1 << n;
    let tab = random_stabilizer(n, 5)?;
    let truth = group_support(&tab)?;

    for shots in [1 << 8, 1 << 10, 1 << 12, 1 << 14] {
        let samples = sample_stabilizer(&tab, shots, 1)?;
        let r = find_top_t(ValueSource::Sampled(&samples), t, DEFAULT_BUDGET)?;
        println!(
            "M = {shots:>5}: quality {:.3}, {} pops, {}",
            quality_score(&truth, &r.found_set(), n),
            r.stats.nodes_expanded,
            r.termination
        );
    }

    let exact = find_top_t(ValueSource::Exact(&tab.to_dense()?), t, DEFAULT_BUDGET)?;
    println!(
        "exact: quality {:.3}, {} pops",
        quality_score(&truth, &exact.found_set(), n),
        exact.stats.nodes_expanded
    );
    Ok(())
}

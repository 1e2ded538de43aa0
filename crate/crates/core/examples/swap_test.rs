//! Node weights from subsystem SWAP tests instead of Bell sampling.

use bellsearch::samplers::{swap_test_estimate, swap_test_mean};
use bellsearch::{node_value_exact, DenseState, Prefix};

fn main() -> bellsearch::Result<()> {
    let rho = DenseState::random_mixed(3, 21)?;
    for mu in ["", "X", "ZY", "IXZ"] {
        let mu: Prefix = mu.parse()?;
        let exact = node_value_exact(&rho, &mu)?.value();
        let mean = swap_test_mean(&rho, &mu)?;
        let shot = swap_test_estimate(&rho, &mu, 100_000, 4)?;
        println!(
            "{:<6} exact {exact:.5}  swap mean {mean:.5}  100k shots {shot:.5}",
            format!("[{mu}]")
        );
    }
    Ok(())
}

//! Incremental node estimates along one path of the prefix tree.

use bellsearch::samplers::sample_dense;
use bellsearch::{child_sign_vector, estimate, node_value_exact, root_sign_vector, DenseState, PauliAxis, Prefix};

fn main() -> bellsearch::Result<()> {
    let rho = DenseState::random_mixed(4, 9)?;
    let samples = sample_dense(&rho, 1 << 16, 3)?;

    let path = [PauliAxis::Z, PauliAxis::I, PauliAxis::X, PauliAxis::Y];
    let mut prefix = Prefix::root();
    let mut sv = root_sign_vector(&samples)?;
    println!("{:<6} {:>10} {:>10} {:>10}", "prefix", "estimate", "exact", "std bound");
    loop {
        let scale = (1u64 << (4 - prefix.len())) as f64;
        println!(
            "{:<6} {:>10.4} {:>10.4} {:>10.4}",
            format!("[{prefix}]"),
            estimate(&sv, &samples),
            node_value_exact(&rho, &prefix)?.value(),
            scale / (samples.num_runs() as f64).sqrt()
        );
        let Some(&axis) = path.get(prefix.len()) else { break };

        let children: Vec<_> = PauliAxis::ALL
            .iter()
            .map(|a| child_sign_vector(&sv, &samples, *a))
            .collect::<Result<_, _>>()?;
        let sum: f64 = children.iter().map(|c| estimate(c, &samples)).sum();
        println!("       children sum to {sum:.4}");

        sv = children[axis.index()].clone();
        prefix = prefix.child(axis);
    }
    Ok(())
}

//! Pauli coefficients and node weights of a small state.

use bellsearch::{coefficient, node_value_exact, purity, DenseState, PauliString, Prefix};

fn main() -> bellsearch::Result<()> {
    let rho = DenseState::pauli_singleton(2)?;
    println!("purity of (II + XX)/4: {}", purity(&rho));
    for nu in PauliString::all(2) {
        let c = coefficient(&rho, &nu)?;
        if c.abs() > 1e-12 {
            println!("c_{nu} = {c}");
        }
    }

    // node weights of every prefix of length <= 1
    for k in 0..=1 {
        for mu in Prefix::all_of_length(k) {
            println!("K[{mu}] = {}", node_value_exact(&rho, &mu)?.value());
        }
    }

    let mixed = DenseState::random_mixed(3, 11)?;
    let total: f64 = PauliString::all(3)
        .map(|nu| coefficient(&mixed, &nu).unwrap().powi(2))
        .sum();
    println!(
        "random 3-qubit state: sum of c^2 = {total:.6}, 2^n purity = {:.6}",
        8.0 * purity(&mixed)
    );
    Ok(())
}

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::MAX_BELL_QUBITS;
use crate::pauli::{dense_guard, DenseState, PauliAxis, PauliString, Prefix};

/// `<U> = Tr[(rho (x) rho) U]` for `U = (P_mu (x) I)^(x)2 . SWAP` on the last
/// `n - k` qubits of each copy.
///
/// With `T = Tr_first-k[rho (P_mu (x) I)]` this equals `Tr[T^2]`.
pub fn swap_test_expectation(rho: &DenseState, mu: &Prefix) -> Result<f64> {
    let n = rho.num_qubits();
    dense_guard("SWAP test", n, MAX_BELL_QUBITS)?;
    let k = mu.len();
    if k > n {
        return Err(Error::LengthMismatch { expected: n, got: k });
    }
    let mut symbols = mu.symbols().to_vec();
    symbols.resize(n, PauliAxis::I);
    let op = PauliString::new(symbols)?;

    let dim = rho.dim();
    let tail = 1usize << (n - k);
    // T[b, b'] = sum_a (rho A)[(a,b), (a,b')], where (rho A)[r, c] = rho[r, y(c)] phase(c)
    let mut t = vec![num_complex::Complex64::new(0.0, 0.0); tail * tail];
    for c in 0..dim {
        let (y, phase) = op.apply_to_basis(c);
        let (a, bp) = (c / tail, c % tail);
        for b in 0..tail {
            t[b * tail + bp] += rho.entry(a * tail + b, y) * phase;
        }
    }
    let mut tr = num_complex::Complex64::new(0.0, 0.0);
    for b in 0..tail {
        for bp in 0..tail {
            tr += t[b * tail + bp] * t[bp * tail + b];
        }
    }
    if tr.im.abs() > 1e-10 {
        return Err(Error::InvalidState(format!("<U> has imaginary part {:e}", tr.im)));
    }
    Ok(tr.re)
}

/// Expected value of [`swap_test_estimate`]: `2^(n-k) <U>`.
pub fn swap_test_mean(rho: &DenseState, mu: &Prefix) -> Result<f64> {
    let u = swap_test_expectation(rho, mu)?;
    Ok(((1usize << (rho.num_qubits() - mu.len())) as f64) * u)
}

/// Runs `shots` Hadamard-test rounds with `p(0) = (1 + <U>) / 2` and returns
/// `2^(n-k) (2 f_0 - 1)`.
pub fn swap_test_estimate(rho: &DenseState, mu: &Prefix, shots: usize, seed: u64) -> Result<f64> {
    if shots == 0 {
        return Err(Error::EmptySamples);
    }
    let u = swap_test_expectation(rho, mu)?;
    let p0 = ((1.0 + u) / 2.0).clamp(0.0, 1.0);
    let coin = Bernoulli::new(p0).map_err(|e| Error::InvalidState(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zeros = (0..shots).filter(|_| coin.sample(&mut rng)).count();
    let scale = (1usize << (rho.num_qubits() - mu.len())) as f64;
    Ok(scale * (2.0 * zeros as f64 / shots as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::node_value_exact;
    use crate::pauli::purity;

    #[test]
    fn root_gives_scaled_purity() {
        let rho = DenseState::basis(3, 2).unwrap();
        assert!((swap_test_expectation(&rho, &Prefix::root()).unwrap() - purity(&rho)).abs() < 1e-12);
        assert!((swap_test_mean(&rho, &Prefix::root()).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn singleton_prefix_x() {
        let rho = DenseState::pauli_singleton(2).unwrap();
        let mu: Prefix = "X".parse().unwrap();
        let want = node_value_exact(&rho, &mu).unwrap().value();
        assert!((want - 1.0).abs() < 1e-12);
        assert!((swap_test_mean(&rho, &mu).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_leaf_is_zero() {
        let rho = DenseState::maximally_mixed(2).unwrap();
        assert!(swap_test_mean(&rho, &"XZ".parse().unwrap()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn estimate_concentrates() {
        let rho = DenseState::random_mixed(2, 5).unwrap();
        let mu: Prefix = "Z".parse().unwrap();
        let want = node_value_exact(&rho, &mu).unwrap().value();
        let shots = 200_000;
        let got = swap_test_estimate(&rho, &mu, shots, 8).unwrap();
        assert!((got - want).abs() < 5.0 * 2.0 / (shots as f64).sqrt());
    }

    #[test]
    fn errors() {
        let rho = DenseState::maximally_mixed(2).unwrap();
        assert!(swap_test_estimate(&rho, &"XYZ".parse().unwrap(), 10, 0).is_err());
        assert!(swap_test_estimate(&rho, &Prefix::root(), 0, 0).is_err());
    }
}

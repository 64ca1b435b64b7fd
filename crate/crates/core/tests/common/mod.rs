// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use corrdyn_core::linalg::Matrix;
use corrdyn_core::network::{build_network, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symmetric network with N sites, energies in [-1, 1], couplings in
/// [-1, 1] and rates in [0, 3].
pub fn random_network(rng: &mut ChaCha8Rng, n: usize) -> Network<f64> {
    let energies = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut k = Matrix::zeros(n, n);
    for p in 0..n {
        for r in p + 1..n {
            let v = rng.random_range(-1.0..1.0);
            k[(p, r)] = v;
            k[(r, p)] = v;
        }
    }
    let rates = (0..n).map(|_| rng.random_range(0.0..3.0)).collect();
    build_network(energies, k, rates).unwrap()
}

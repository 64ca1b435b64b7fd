// SPDX-License-Identifier: Apache-2.0

//! Tight-binding network: onsite energies, real symmetric couplings and
//! per-site dephasing rates.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Real, C};

/// A validated tight-binding network. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Network<T> {
    energies: Vec<T>,
    couplings: Matrix<T>,
    dephasing_rates: Vec<T>,
}

/// Validates and assembles a [`Network`].
pub fn build_network<T: Real>(
    energies: Vec<T>,
    couplings: Matrix<T>,
    dephasing_rates: Vec<T>,
) -> Result<Network<T>> {
    let n = energies.len();
    if n == 0 {
        return Err(Error::EmptyNetwork);
    }
    if couplings.rows() != n || couplings.cols() != n {
        return Err(Error::Dimension(format!(
            "couplings are {}x{} but there are {n} energies",
            couplings.rows(),
            couplings.cols()
        )));
    }
    if dephasing_rates.len() != n {
        return Err(Error::Dimension(format!(
            "{} dephasing rates for {n} sites",
            dephasing_rates.len()
        )));
    }
    for (p, e) in energies.iter().enumerate() {
        if !e.is_finite() {
            return Err(Error::NonFinite(format!("energy at site {}", p + 1)));
        }
    }
    for p in 0..n {
        for r in 0..n {
            let k = couplings[(p, r)];
            if !k.is_finite() {
                return Err(Error::NonFinite(format!("coupling ({}, {})", p + 1, r + 1)));
            }
            if p == r && k != T::zero() {
                return Err(Error::SelfCoupling {
                    site: p + 1,
                    value: k.as_f64(),
                });
            }
            if r > p && k != couplings[(r, p)] {
                return Err(Error::AsymmetricCoupling {
                    p: p + 1,
                    r: r + 1,
                    forward: k.as_f64(),
                    backward: couplings[(r, p)].as_f64(),
                });
            }
        }
    }
    for (site, &g) in dephasing_rates.iter().enumerate() {
        if !g.is_finite() {
            return Err(Error::NonFinite(format!(
                "dephasing rate at site {}",
                site + 1
            )));
        }
        if g < T::zero() {
            return Err(Error::NegativeRate {
                site: site + 1,
                value: g.as_f64(),
            });
        }
    }
    Ok(Network {
        energies,
        couplings,
        dephasing_rates,
    })
}

/// The 3-site example network: ε = (1, 1, 1), κ₁₂ = 1, κ₁₃ = κ₂₃ = 1/3,
/// γ = (2, 2, 2).
pub fn paper_example_network<T: Real>() -> Network<T> {
    let one = T::one();
    let third = T::one() / T::lit(3.0);
    let z = T::zero();
    let couplings = Matrix::from_vec(3, 3, vec![z, one, third, one, z, third, third, third, z]);
    build_network(vec![one; 3], couplings, vec![T::lit(2.0); 3]).expect("example network is valid")
}

impl<T: Real> Network<T> {
    pub fn n_sites(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn couplings(&self) -> &Matrix<T> {
        &self.couplings
    }

    pub fn dephasing_rates(&self) -> &[T] {
        &self.dephasing_rates
    }

    /// The same network with a different dephasing-rate vector.
    pub fn with_dephasing_rates(&self, rates: Vec<T>) -> Result<Self> {
        build_network(self.energies.clone(), self.couplings.clone(), rates)
    }

    pub fn with_uniform_dephasing(&self, gamma: T) -> Result<Self> {
        self.with_dephasing_rates(vec![gamma; self.n_sites()])
    }

    /// `H = diag(ε) + κ`, so that `dU/dt = i·H·U`.
    pub fn real_hamiltonian(&self) -> Matrix<T> {
        let n = self.n_sites();
        Matrix::from_fn(n, n, |p, r| {
            if p == r {
                self.energies[p]
            } else {
                self.couplings[(p, r)]
            }
        })
    }

    pub fn hamiltonian(&self) -> Matrix<C<T>> {
        self.real_hamiltonian().to_complex()
    }
}

/// Splits a real symmetric Hamiltonian back into energies and couplings.
pub fn network_from_hamiltonian<T: Real>(h: &Matrix<T>, rates: Vec<T>) -> Result<Network<T>> {
    let n = h.rows();
    let energies = (0..n).map(|p| h[(p, p)]).collect();
    let couplings = Matrix::from_fn(n, n, |p, r| if p == r { T::zero() } else { h[(p, r)] });
    build_network(energies, couplings, rates)
}

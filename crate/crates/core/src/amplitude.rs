// SPDX-License-Identifier: Apache-2.0

//! Two-particle probability amplitudes `Ψ_{p,q}` and their evolution.
//!
//! `Ψ_{p,q}(t) = Σ_{m,n} φ_{m,n} [U_{p,n}U_{q,m} ± U_{p,m}U_{q,n}]`, which in
//! matrix form reads `Ψ = U (φᵀ ± φ) Uᵀ`. Distinguishable particles keep only
//! the first (direct) term, `Ψ = U φᵀ Uᵀ`.
//!
//! The symmetrized sum is not unit-norm in general (state i) comes out with
//! norm² 4), so every amplitude is rescaled by the norm of `φᵀ ± φ`. Because
//! `U ⊗ U` is unitary this equals renormalizing `Ψ(t)` itself.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::integrate::Rk4;
use crate::linalg::Matrix;
use crate::network::Network;
use crate::propagator::{check_time, evolve_exact, IntegratorConfig, Method, Propagator};
use crate::scalar::{i_unit, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExchangeStatistics {
    Boson,
    Fermion,
    Distinguishable,
}

impl ExchangeStatistics {
    pub fn name(self) -> &'static str {
        match self {
            Self::Boson => "boson",
            Self::Fermion => "fermion",
            Self::Distinguishable => "distinguishable",
        }
    }
}

/// Initial amplitude profile `φ_{m,n}` with unit Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct InputProfile<T> {
    matrix: Matrix<C<T>>,
}

impl<T: Real> InputProfile<T> {
    pub fn new(matrix: Matrix<C<T>>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::Dimension(
                "input profile must be square and non-empty".into(),
            ));
        }
        let norm = matrix.norm_sqr();
        if (norm - T::one()).abs() > T::tol(1e-12) {
            return Err(Error::UnnormalizedProfile(norm.as_f64()));
        }
        Ok(Self { matrix })
    }

    /// `φ_{m,n} = 1` for 0-based sites `(m, n)`.
    pub fn localized(n_sites: usize, m: usize, n: usize) -> Result<Self> {
        if m >= n_sites || n >= n_sites {
            return Err(Error::Dimension(format!(
                "site pair ({}, {}) outside a {n_sites}-site network",
                m + 1,
                n + 1
            )));
        }
        let mut phi = Matrix::zeros(n_sites, n_sites);
        phi[(m, n)] = Complex::new(T::one(), T::zero());
        Self::new(phi)
    }

    pub fn matrix(&self) -> &Matrix<C<T>> {
        &self.matrix
    }

    pub fn n_sites(&self) -> usize {
        self.matrix.rows()
    }

    /// `φᵀ ± φ` (or `φᵀ`) scaled to unit norm: the amplitude at `t = 0`.
    fn symmetrized(&self, stats: ExchangeStatistics) -> Result<Matrix<C<T>>> {
        let phi_t = self.matrix.transpose();
        let raw = match stats {
            ExchangeStatistics::Boson => &phi_t + &self.matrix,
            ExchangeStatistics::Fermion => &phi_t - &self.matrix,
            ExchangeStatistics::Distinguishable => phi_t,
        };
        let norm = raw.norm_sqr().sqrt();
        if norm <= T::tol(1e-12) {
            return Err(match stats {
                ExchangeStatistics::Fermion => Error::VanishingFermionicState,
                other => Error::VanishingAmplitude(other.name()),
            });
        }
        Ok(raw.scale(Complex::new(T::one() / norm, T::zero())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoParticleAmplitude<T> {
    pub matrix: Matrix<C<T>>,
    pub statistics: ExchangeStatistics,
    pub time: T,
}

impl<T: Real> TwoParticleAmplitude<T> {
    pub fn n_sites(&self) -> usize {
        self.matrix.rows()
    }

    pub fn norm_sqr(&self) -> T {
        self.matrix.norm_sqr()
    }

    /// max |Ψ_{p,q} ∓ Ψ_{q,p}| for the declared statistics (0 for
    /// distinguishable particles).
    pub fn exchange_residual(&self) -> T {
        let n = self.n_sites();
        let sign = match self.statistics {
            ExchangeStatistics::Boson => T::one(),
            ExchangeStatistics::Fermion => -T::one(),
            ExchangeStatistics::Distinguishable => return T::zero(),
        };
        let mut worst = T::zero();
        for p in 0..n {
            for q in 0..n {
                worst = worst.max((self.matrix[(p, q)] - self.matrix[(q, p)] * sign).norm());
            }
        }
        worst
    }
}

/// Builds `Ψ(t)` from a profile and a single-particle propagator.
pub fn amplitude_from_propagator<T: Real>(
    phi: &InputProfile<T>,
    u: &Propagator<T>,
    stats: ExchangeStatistics,
) -> Result<TwoParticleAmplitude<T>> {
    if phi.n_sites() != u.n_sites() {
        return Err(Error::Dimension(format!(
            "profile has {} sites, propagator {}",
            phi.n_sites(),
            u.n_sites()
        )));
    }
    let psi0 = phi.symmetrized(stats)?;
    let matrix = u.matrix.matmul(&psi0).matmul(&u.matrix.transpose());
    Ok(TwoParticleAmplitude {
        matrix,
        statistics: stats,
        time: u.time,
    })
}

/// Evolves `Ψ` for a further time `t` under the noiseless network.
///
/// The matrix-exponential path uses `Ψ(t) = U Ψ(0) Uᵀ`; the RK4 path
/// integrates `dΨ_{p,q}/dt = i(ε_p+ε_q)Ψ_{p,q} + iΣ_r(κ_{p,r}Ψ_{r,q} + κ_{q,r}Ψ_{p,r})`
/// directly.
pub fn evolve_amplitude<T: Real>(
    net: &Network<T>,
    psi0: &TwoParticleAmplitude<T>,
    t: T,
    cfg: &IntegratorConfig<T>,
) -> Result<TwoParticleAmplitude<T>> {
    check_time(t)?;
    cfg.validate()?;
    let n = net.n_sites();
    if psi0.n_sites() != n {
        return Err(Error::Dimension(format!(
            "amplitude has {} sites, network {n}",
            psi0.n_sites()
        )));
    }
    let matrix = match cfg.method {
        Method::MatrixExponential => {
            let u = evolve_exact(net, t)?.matrix;
            u.matmul(&psi0.matrix).matmul(&u.transpose())
        }
        Method::FixedStepRk4 => {
            let h = net.real_hamiltonian();
            let mut y = psi0.matrix.clone().into_vec();
            let mut rk = Rk4::new(n * n);
            rk.integrate(&mut y, t, cfg.step_size, &mut |psi, out| {
                amplitude_rhs(&h, psi, out)
            });
            Matrix::from_vec(n, n, y)
        }
    };
    Ok(TwoParticleAmplitude {
        matrix,
        statistics: psi0.statistics,
        time: psi0.time + t,
    })
}

/// Right-hand side of the two-particle evolution equation, with the onsite
/// energies carried on the diagonal of `h`.
pub(crate) fn amplitude_rhs<T: Real>(h: &Matrix<T>, psi: &[C<T>], out: &mut [C<T>]) {
    let n = h.rows();
    let iu = i_unit::<T>();
    for p in 0..n {
        for q in 0..n {
            let mut acc = C::zero();
            for r in 0..n {
                acc += psi[r * n + q] * h[(p, r)] + psi[p * n + r] * h[(q, r)];
            }
            out[p * n + q] = iu * acc;
        }
    }
}

/// `G²_{p,q} = |Ψ_{p,q}|²`.
pub fn g2_from_amplitude<T: Real>(psi: &TwoParticleAmplitude<T>) -> Matrix<T> {
    psi.matrix.map(|z| z.norm_sqr())
}

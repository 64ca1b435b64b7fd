// SPDX-License-Identifier: Apache-2.0

//! Deterministic single-particle evolution `U(t)` with `dU/dt = i·H·U`.
//!
//! Two independent routes are provided: the closed form `exp(iHt)` from the
//! symmetric eigen-decomposition of `H`, and fixed-step RK4 integration of
//! the ODE. The exponential is the default; RK4 exists to cross-check it and
//! is the same kernel the correlation generators use.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::integrate::Rk4;
use crate::linalg::{unitary_exp, Matrix};
use crate::network::Network;
use crate::scalar::{i_unit, Real, C};

/// How deterministic evolutions are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    MatrixExponential,
    FixedStepRk4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig<T> {
    pub step_size: T,
    pub method: Method,
    pub snapshot_times: Vec<T>,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            step_size: T::lit(1e-3),
            method: Method::MatrixExponential,
            snapshot_times: Vec::new(),
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn rk4(step_size: T) -> Self {
        Self {
            step_size,
            method: Method::FixedStepRk4,
            snapshot_times: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > T::zero()) || !self.step_size.is_finite() {
            return Err(Error::InvalidIntegrator(format!(
                "step_size must be positive, got {}",
                self.step_size
            )));
        }
        if self
            .snapshot_times
            .iter()
            .any(|&t| t < T::zero() || !t.is_finite())
        {
            return Err(Error::InvalidIntegrator(
                "snapshot_times must be finite and non-negative".into(),
            ));
        }
        if self.snapshot_times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidIntegrator(
                "snapshot_times must be ascending".into(),
            ));
        }
        Ok(())
    }
}

/// Single-particle evolution matrix; entry `(p, n)` is the amplitude at site
/// `p` for a particle launched at site `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator<T> {
    pub matrix: Matrix<C<T>>,
    pub time: T,
}

impl<T: Real> Propagator<T> {
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: Matrix::identity(n),
            time: T::zero(),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.matrix.rows()
    }

    /// max over columns of |1 − Σ_p |U_{p,n}|²|.
    pub fn unitarity_residual(&self) -> T {
        let n = self.n_sites();
        (0..n)
            .map(|col| {
                let s: T = (0..n).map(|p| self.matrix[(p, col)].norm_sqr()).sum();
                (T::one() - s).abs()
            })
            .fold(T::zero(), T::max)
    }
}

pub(crate) fn check_time<T: Real>(t: T) -> Result<()> {
    if t < T::zero() || !t.is_finite() {
        return Err(Error::NegativeTime(t.as_f64()));
    }
    Ok(())
}

/// `U(t) = exp(i·H·t)`.
pub fn evolve_exact<T: Real>(net: &Network<T>, t: T) -> Result<Propagator<T>> {
    check_time(t)?;
    if t == T::zero() {
        return Ok(Propagator::identity(net.n_sites()));
    }
    Ok(Propagator {
        matrix: unitary_exp(&net.real_hamiltonian(), t),
        time: t,
    })
}

/// RK4 integration of `dU/dt = i·H·U` from the identity.
pub fn evolve_ode<T: Real>(
    net: &Network<T>,
    t: T,
    cfg: &IntegratorConfig<T>,
) -> Result<Propagator<T>> {
    check_time(t)?;
    cfg.validate()?;
    let n = net.n_sites();
    let h = net.real_hamiltonian();
    let mut y = Matrix::<C<T>>::identity(n).into_vec();
    let mut rk = Rk4::new(n * n);
    let iu = i_unit::<T>();
    let mut rhs = |u: &[C<T>], out: &mut [C<T>]| {
        for p in 0..n {
            for col in 0..n {
                let mut acc = Complex::zero();
                for r in 0..n {
                    acc += u[r * n + col] * h[(p, r)];
                }
                out[p * n + col] = iu * acc;
            }
        }
    };
    rk.integrate(&mut y, t, cfg.step_size, &mut rhs);
    Ok(Propagator {
        matrix: Matrix::from_vec(n, n, y),
        time: t,
    })
}

/// Dispatches on `cfg.method`.
pub fn evolve<T: Real>(net: &Network<T>, t: T, cfg: &IntegratorConfig<T>) -> Result<Propagator<T>> {
    match cfg.method {
        Method::MatrixExponential => evolve_exact(net, t),
        Method::FixedStepRk4 => evolve_ode(net, t, cfg),
    }
}

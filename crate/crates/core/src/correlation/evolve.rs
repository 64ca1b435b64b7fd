// SPDX-License-Identifier: Apache-2.0

//! Time integration of four-point tensors under a generator.

use crate::error::{Error, Result};
use crate::integrate::{step_count, Rk4};
use crate::linalg::Matrix;
use crate::propagator::{check_time, IntegratorConfig};
use crate::scalar::Real;

use super::{CorrelationTensor, GeneratorMatrix};

/// Largest accepted `‖L‖∞·h` for RK4 on these generators.
const MAX_STEP_NORM: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct G4Evolution<T> {
    pub final_state: CorrelationTensor<T>,
    /// States at `cfg.snapshot_times` that fall inside `[0, t]`, in order.
    pub snapshots: Vec<CorrelationTensor<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SteadyStatus<T> {
    /// Residual dropped below the tolerance at this time.
    Converged { time: T },
    /// `t_max` reached with the residual still above tolerance.
    NotConverged { t_max: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState<T> {
    pub state: CorrelationTensor<T>,
    pub status: SteadyStatus<T>,
    /// max |dG/dt| element at the returned state.
    pub residual: T,
}

impl<T: Real> SteadyState<T> {
    pub fn converged(&self) -> bool {
        matches!(self.status, SteadyStatus::Converged { .. })
    }
}

fn check_step<T: Real>(gen: &GeneratorMatrix<T>, h: T) -> Result<()> {
    let norm = gen.norm_inf();
    let product = norm * h;
    if product > T::lit(MAX_STEP_NORM) {
        return Err(Error::StepTooLarge {
            step: h.as_f64(),
            norm: norm.as_f64(),
            product: product.as_f64(),
            max_step: MAX_STEP_NORM / norm.as_f64(),
        });
    }
    Ok(())
}

fn check_shape<T: Real>(gen: &GeneratorMatrix<T>, g0: &CorrelationTensor<T>) -> Result<()> {
    if gen.n_sites() != g0.n_sites() {
        return Err(Error::Dimension(format!(
            "generator for {} sites applied to a {}-site tensor",
            gen.n_sites(),
            g0.n_sites()
        )));
    }
    Ok(())
}

/// RK4 integration of `dG/dt = L G` over `[0, t]` (relative to `g0.time`).
pub fn evolve_g4<T: Real>(
    gen: &GeneratorMatrix<T>,
    g0: &CorrelationTensor<T>,
    t: T,
    cfg: &IntegratorConfig<T>,
) -> Result<G4Evolution<T>> {
    check_time(t)?;
    cfg.validate()?;
    check_shape(gen, g0)?;
    check_step(gen, cfg.step_size)?;

    let n = g0.n_sites();
    let d = n * n;
    let mut y = g0.matrix.as_slice().to_vec();
    let mut rk = Rk4::new(y.len());
    let mut f = |x: &[_], out: &mut [_]| gen.apply(x, out);
    let snapshot = |y: &[_], at: T| CorrelationTensor {
        matrix: Matrix::from_vec(d, d, y.to_vec()),
        time: g0.time + at,
        n_sites: n,
    };

    let mut snapshots = Vec::new();
    let mut now = T::zero();
    for &target in cfg.snapshot_times.iter().filter(|&&s| s <= t) {
        rk.integrate(&mut y, target - now, cfg.step_size, &mut f);
        now = target;
        snapshots.push(snapshot(&y, now));
    }
    rk.integrate(&mut y, t - now, cfg.step_size, &mut f);
    Ok(G4Evolution {
        final_state: snapshot(&y, t),
        snapshots,
    })
}

/// Integrates until the largest element of `L G` falls below `tol`, or until
/// `t_max`. Non-convergence is reported in the status, not as an error.
pub fn find_steady_state<T: Real>(
    gen: &GeneratorMatrix<T>,
    g0: &CorrelationTensor<T>,
    tol: T,
    t_max: T,
    step_size: T,
) -> Result<SteadyState<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidIntegrator(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    check_time(t_max)?;
    IntegratorConfig::rk4(step_size).validate()?;
    check_shape(gen, g0)?;
    check_step(gen, step_size)?;

    let n = g0.n_sites();
    let d = n * n;
    let mut y = g0.matrix.as_slice().to_vec();
    let mut deriv = vec![Default::default(); y.len()];
    let max_abs = |v: &[crate::scalar::C<T>]| v.iter().fold(T::zero(), |m, z| m.max(z.norm()));

    let steps = step_count(t_max, step_size);
    let h = if steps == 0 {
        step_size
    } else {
        t_max / T::from_usize(steps).expect("step count fits")
    };
    let mut rk = Rk4::new(y.len());
    let mut f = |x: &[_], out: &mut [_]| gen.apply(x, out);

    gen.apply(&y, &mut deriv);
    let mut residual = max_abs(&deriv);
    let mut status = SteadyStatus::NotConverged { t_max };
    if residual < tol {
        status = SteadyStatus::Converged { time: T::zero() };
    } else {
        for k in 1..=steps {
            rk.step(&mut y, h, &mut f);
            gen.apply(&y, &mut deriv);
            residual = max_abs(&deriv);
            if residual < tol {
                status = SteadyStatus::Converged {
                    time: h * T::from_usize(k).expect("step index fits"),
                };
                break;
            }
        }
    }
    let elapsed = match status {
        SteadyStatus::Converged { time } => time,
        SteadyStatus::NotConverged { t_max } => t_max,
    };
    Ok(SteadyState {
        state: CorrelationTensor {
            matrix: Matrix::from_vec(d, d, y),
            time: g0.time + elapsed,
            n_sites: n,
        },
        status,
        residual,
    })
}

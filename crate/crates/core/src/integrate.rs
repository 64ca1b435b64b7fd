// SPDX-License-Identifier: Apache-2.0

//! Fixed-step classical Runge–Kutta kernel for linear complex systems.

use num_traits::Zero;

use crate::scalar::{Real, C};

/// Number of equal steps covering `duration` with steps no longer than `h`.
pub(crate) fn step_count<T: Real>(duration: T, h: T) -> usize {
    if duration <= T::zero() {
        return 0;
    }
    // Guard against 50/1e-3 landing a hair above an integer.
    let raw = duration / h;
    let nearest = raw.round();
    let n = if (raw - nearest).abs() <= T::lit(1e-9) * nearest.max(T::one()) {
        nearest
    } else {
        raw.ceil()
    };
    n.to_usize().unwrap_or(usize::MAX).max(1)
}

/// Reusable RK4 workspace for `dy/dt = f(y)` on a complex state vector.
pub(crate) struct Rk4<T> {
    k1: Vec<C<T>>,
    k2: Vec<C<T>>,
    k3: Vec<C<T>>,
    k4: Vec<C<T>>,
    tmp: Vec<C<T>>,
}

impl<T: Real> Rk4<T> {
    pub(crate) fn new(len: usize) -> Self {
        let z = vec![C::zero(); len];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    /// Advances `y` by one step of size `h`.
    pub(crate) fn step<F>(&mut self, y: &mut [C<T>], h: T, f: &mut F)
    where
        F: FnMut(&[C<T>], &mut [C<T>]),
    {
        let half = h * T::lit(0.5);
        f(y, &mut self.k1);
        for ((t, &yi), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k1) {
            *t = yi + k * half;
        }
        f(&self.tmp, &mut self.k2);
        for ((t, &yi), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k2) {
            *t = yi + k * half;
        }
        f(&self.tmp, &mut self.k3);
        for ((t, &yi), &k) in self.tmp.iter_mut().zip(y.iter()).zip(&self.k3) {
            *t = yi + k * h;
        }
        f(&self.tmp, &mut self.k4);
        let sixth = h / T::lit(6.0);
        let two = T::lit(2.0);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += (self.k1[i] + (self.k2[i] + self.k3[i]) * two + self.k4[i]) * sixth;
        }
    }

    /// Integrates over `duration` with equal steps no longer than `h`.
    pub(crate) fn integrate<F>(&mut self, y: &mut [C<T>], duration: T, h: T, f: &mut F)
    where
        F: FnMut(&[C<T>], &mut [C<T>]),
    {
        let n = step_count(duration, h);
        if n == 0 {
            return;
        }
        let dt = duration / T::from_usize(n).expect("step count fits");
        for _ in 0..n {
            self.step(y, dt, f);
        }
    }
}

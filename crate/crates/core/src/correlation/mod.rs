// SPDX-License-Identifier: Apache-2.0

//! Four-point correlations `G⁴_{(p,q);(p',q')} = Ψ_{p,q}Ψ*_{p',q'}`, i.e. the
//! two-particle density matrix over ordered site pairs.
//!
//! Pair `(p, q)` (0-based) is flattened to row/column `p·N + q`; in 1-based
//! file coordinates that is `(p−1)·N + (q−1)`. The convention is fixed.

mod evolve;
mod generator;

pub use evolve::{evolve_g4, find_steady_state, G4Evolution, SteadyState, SteadyStatus};
pub use generator::{
    averaged_generator, coherent_generator, dephasing_coefficient, dephasing_generator,
    lindblad_oracle, GeneratorKind, GeneratorMatrix, MATRIX_FREE_ABOVE,
};

use num_traits::Zero;

use crate::amplitude::TwoParticleAmplitude;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, Matrix};
use crate::scalar::{Real, C};

/// Flattened index of the ordered pair `(p, q)`, both 0-based.
#[inline]
pub fn pair_index(n_sites: usize, p: usize, q: usize) -> usize {
    p * n_sites + q
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor<T> {
    pub matrix: Matrix<C<T>>,
    pub time: T,
    n_sites: usize,
}

/// Invariant diagnostics of a tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorDiagnostics<T> {
    pub trace_drift: T,
    pub hermiticity_residual: T,
    pub min_eigenvalue: T,
    pub sym_weight: T,
    pub antisym_weight: T,
}

impl<T: Real> CorrelationTensor<T> {
    pub fn new(n_sites: usize, matrix: Matrix<C<T>>, time: T) -> Result<Self> {
        let d = n_sites * n_sites;
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::Dimension(format!(
                "tensor for {n_sites} sites must be {d}x{d}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self {
            matrix,
            time,
            n_sites,
        })
    }

    pub fn zeros(n_sites: usize) -> Self {
        let d = n_sites * n_sites;
        Self {
            matrix: Matrix::zeros(d, d),
            time: T::zero(),
            n_sites,
        }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Element `(p,q);(p',q')`, 0-based sites.
    pub fn get(&self, p: usize, q: usize, pp: usize, qq: usize) -> C<T> {
        let n = self.n_sites;
        self.matrix[(pair_index(n, p, q), pair_index(n, pp, qq))]
    }

    pub fn trace(&self) -> C<T> {
        self.matrix.trace()
    }

    pub fn hermiticity_residual(&self) -> T {
        self.matrix.hermiticity_residual()
    }

    /// Smallest eigenvalue of the Hermitized tensor.
    pub fn min_eigenvalue(&self) -> T {
        hermitian_eigenvalues(&self.matrix)
            .first()
            .copied()
            .unwrap_or_else(T::zero)
    }

    /// Weighted sum `Σ wᵢ Gᵢ`, time taken from the first component.
    pub fn mixture(parts: &[(T, &CorrelationTensor<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?
            .1;
        let mut out = CorrelationTensor::zeros(first.n_sites);
        out.time = first.time;
        for (w, g) in parts {
            if g.n_sites != first.n_sites {
                return Err(Error::Dimension("mixture components differ in size".into()));
            }
            let wc = C::new(*w, T::zero());
            for (o, &x) in out
                .matrix
                .as_mut_slice()
                .iter_mut()
                .zip(g.matrix.as_slice())
            {
                *o += x * wc;
            }
        }
        Ok(out)
    }

    pub fn diagnostics(&self) -> TensorDiagnostics<T> {
        let (sym_weight, antisym_weight) = swap_block_weights(self);
        TensorDiagnostics {
            trace_drift: (self.trace() - C::new(T::one(), T::zero())).norm(),
            hermiticity_residual: self.hermiticity_residual(),
            min_eigenvalue: self.min_eigenvalue(),
            sym_weight,
            antisym_weight,
        }
    }
}

/// Rank-one tensor `ΨΨ†`.
pub fn g4_from_amplitude<T: Real>(psi: &TwoParticleAmplitude<T>) -> CorrelationTensor<T> {
    let n = psi.n_sites();
    let v = psi.matrix.as_slice();
    let d = n * n;
    CorrelationTensor {
        matrix: Matrix::from_fn(d, d, |r, col| v[r] * v[col].conj()),
        time: psi.time,
        n_sites: n,
    }
}

/// `G²_{p,q} = Re G⁴_{(p,q);(p,q)}`; fails if a population carries an
/// imaginary part above 1e-9.
pub fn g2_from_g4<T: Real>(g: &CorrelationTensor<T>) -> Result<Matrix<T>> {
    let n = g.n_sites;
    let limit = T::tol(1e-9);
    let mut out = Matrix::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            let z = g.get(p, q, p, q);
            if z.im.abs() > limit {
                return Err(Error::ComplexPopulation {
                    p: p + 1,
                    q: q + 1,
                    imag: z.im.as_f64(),
                });
            }
            out[(p, q)] = z.re;
        }
    }
    Ok(out)
}

/// Populations of the exchange-symmetric and exchange-antisymmetric
/// subspaces: `tr(P± G)` with `P± = (1 ± SWAP)/2`.
pub fn swap_block_weights<T: Real>(g: &CorrelationTensor<T>) -> (T, T) {
    let n = g.n_sites;
    let mut trace = C::<T>::zero();
    let mut swapped = C::<T>::zero();
    for p in 0..n {
        for q in 0..n {
            trace += g.get(p, q, p, q);
            swapped += g.get(q, p, p, q);
        }
    }
    let half = T::lit(0.5);
    (
        (trace.re + swapped.re) * half,
        (trace.re - swapped.re) * half,
    )
}

// SPDX-License-Identifier: Apache-2.0

//! Linear generators acting on vectorized four-point tensors.
//!
//! The tensor `G` (an `N²×N²` matrix) is vectorized row-major, so element
//! `(P, P')` lives at `P·N² + P'`. A generator is the `N⁴×N⁴` matrix `L`
//! with `d vec(G)/dt = L vec(G)`.

use num_complex::Complex;
use num_traits::Zero;

use crate::linalg::Matrix;
use crate::network::Network;
use crate::scalar::{c, i_unit, Real, C};

/// Networks with more sites than this get a matrix-free generator.
pub const MATRIX_FREE_ABOVE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Noiseless Liouvillian: onsite phases and hopping.
    Coherent,
    /// Dephasing attenuation only (real, diagonal).
    Dephasing,
    /// Coherent plus dephasing: the mean dynamics under dynamic disorder.
    Total,
}

impl GeneratorKind {
    fn hopping(self) -> bool {
        !matches!(self, Self::Dephasing)
    }

    fn phases(self) -> bool {
        !matches!(self, Self::Dephasing)
    }

    fn damping(self) -> bool {
        !matches!(self, Self::Coherent)
    }
}

#[derive(Debug, Clone)]
struct Csr<T> {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C<T>>,
}

#[derive(Debug, Clone)]
struct Parameters<T> {
    energies: Vec<T>,
    couplings: Matrix<T>,
    rates: Vec<T>,
}

#[derive(Debug, Clone)]
enum Repr<T> {
    Sparse(Csr<T>),
    MatrixFree(Parameters<T>),
    Dense(Matrix<C<T>>),
}

#[derive(Debug, Clone)]
pub struct GeneratorMatrix<T> {
    n_sites: usize,
    kind: GeneratorKind,
    repr: Repr<T>,
}

/// The scalar multiplying `G̃⁴_{(p,q);(p',q')}` in the averaged equation of
/// motion (0-based sites):
///
/// `i(ε_p+ε_q−ε_p'−ε_q') − ½(γ_p+γ_q+γ_p'+γ_q') + √(γ_pγ_p')δ_pp' + √(γ_qγ_q')δ_qq'
///  + √(γ_pγ_q')δ_pq' + √(γ_qγ_p')δ_qp' − √(γ_pγ_q)δ_pq − √(γ_p'γ_q')δ_p'q'`
///
/// Terms are grouped so that diagonal and exchange elements cancel exactly in
/// floating point, not just to rounding.
pub fn dephasing_coefficient<T: Real>(
    net: &Network<T>,
    p: usize,
    q: usize,
    pp: usize,
    qq: usize,
) -> C<T> {
    let e = net.energies();
    let g = net.dephasing_rates();
    c(damping(g, p, q, pp, qq), (e[p] + e[q]) - (e[pp] + e[qq]))
}

fn damping<T: Real>(g: &[T], p: usize, q: usize, pp: usize, qq: usize) -> T {
    let cross = |a: usize, b: usize| {
        if a == b {
            (g[a] * g[b]).sqrt()
        } else {
            T::zero()
        }
    };
    let direct = cross(p, pp) + cross(q, qq);
    let exchanged = cross(p, qq) + cross(q, pp);
    let bunched = cross(p, q) + cross(pp, qq);
    let half = T::lit(0.5) * ((g[p] + g[q]) + (g[pp] + g[qq]));
    ((direct + exchanged) - bunched) - half
}

/// Calls `emit(row, col, value)` for every structural non-zero, row by row.
fn for_each_entry<T: Real>(
    n: usize,
    params: &Parameters<T>,
    kind: GeneratorKind,
    mut emit: impl FnMut(usize, usize, C<T>),
) {
    let d = n * n;
    let iu = i_unit::<T>();
    let e = &params.energies;
    let k = &params.couplings;
    for p in 0..n {
        for q in 0..n {
            let big_p = p * n + q;
            for pp in 0..n {
                for qq in 0..n {
                    let big_pp = pp * n + qq;
                    let row = big_p * d + big_pp;
                    let mut diag = C::zero();
                    if kind.phases() {
                        diag.im = (e[p] + e[q]) - (e[pp] + e[qq]);
                    }
                    if kind.damping() {
                        diag.re = damping(&params.rates, p, q, pp, qq);
                    }
                    if diag != C::zero() {
                        emit(row, row, diag);
                    }
                    if !kind.hopping() {
                        continue;
                    }
                    for r in 0..n {
                        let kpr = k[(p, r)];
                        if kpr != T::zero() {
                            emit(row, (r * n + q) * d + big_pp, iu * kpr);
                        }
                        let kqr = k[(q, r)];
                        if kqr != T::zero() {
                            emit(row, (p * n + r) * d + big_pp, iu * kqr);
                        }
                        let kppr = k[(pp, r)];
                        if kppr != T::zero() {
                            emit(row, big_p * d + r * n + qq, -iu * kppr);
                        }
                        let kqqr = k[(qq, r)];
                        if kqqr != T::zero() {
                            emit(row, big_p * d + pp * n + r, -iu * kqqr);
                        }
                    }
                }
            }
        }
    }
}

fn assemble_sparse<T: Real>(n: usize, params: &Parameters<T>, kind: GeneratorKind) -> Csr<T> {
    let dim = n.pow(4);
    let mut rows: Vec<Vec<(usize, C<T>)>> = vec![Vec::new(); dim];
    for_each_entry(n, params, kind, |row, col, v| rows[row].push((col, v)));
    let mut row_ptr = Vec::with_capacity(dim + 1);
    let mut cols = Vec::new();
    let mut vals: Vec<C<T>> = Vec::new();
    row_ptr.push(0);
    for mut entries in rows {
        entries.sort_by_key(|&(col, _)| col);
        let start = cols.len();
        for (col, v) in entries {
            if cols.len() > start && cols.last() == Some(&col) {
                *vals.last_mut().expect("non-empty") += v;
            } else {
                cols.push(col);
                vals.push(v);
            }
        }
        row_ptr.push(cols.len());
    }
    Csr {
        row_ptr,
        cols,
        vals,
    }
}

fn build<T: Real>(net: &Network<T>, kind: GeneratorKind) -> GeneratorMatrix<T> {
    let n = net.n_sites();
    let params = Parameters {
        energies: net.energies().to_vec(),
        couplings: net.couplings().clone(),
        rates: net.dephasing_rates().to_vec(),
    };
    let repr = if n > MATRIX_FREE_ABOVE {
        Repr::MatrixFree(params)
    } else {
        Repr::Sparse(assemble_sparse(n, &params, kind))
    };
    GeneratorMatrix {
        n_sites: n,
        kind,
        repr,
    }
}

/// Noiseless four-point Liouvillian.
pub fn coherent_generator<T: Real>(net: &Network<T>) -> GeneratorMatrix<T> {
    build(net, GeneratorKind::Coherent)
}

/// Real diagonal attenuation from dynamic disorder alone.
pub fn dephasing_generator<T: Real>(net: &Network<T>) -> GeneratorMatrix<T> {
    build(net, GeneratorKind::Dephasing)
}

/// Generator of the disorder-averaged four-point dynamics.
pub fn averaged_generator<T: Real>(net: &Network<T>) -> GeneratorMatrix<T> {
    build(net, GeneratorKind::Total)
}

/// Independent check on [`averaged_generator`]: the Lindblad generator with
/// Hamiltonian `H⊗1 + 1⊗H` and one jump operator per site,
/// `A_k = √γ_k (P_k⊗1 + 1⊗P_k)`, assembled densely from Kronecker products.
///
/// The result is `N⁴×N⁴` dense, so this is meant for small networks.
pub fn lindblad_oracle<T: Real>(net: &Network<T>) -> GeneratorMatrix<T> {
    let n = net.n_sites();
    let d = n * n;
    let one = Matrix::<C<T>>::identity(n);
    let id2 = Matrix::<C<T>>::identity(d);
    let h = net.hamiltonian();
    let h2 = &h.kron(&one) + &one.kron(&h);
    let iu = i_unit::<T>();
    // d vec(ρ)/dt for dρ/dt = i[H₂, ρ]  (row-major: vec(AXB) = (A ⊗ Bᵀ) vec X)
    let mut l = (&h2.kron(&id2) - &id2.kron(&h2.transpose())).scale(iu);
    let half = Complex::new(T::lit(0.5), T::zero());
    for (k, &gamma) in net.dephasing_rates().iter().enumerate() {
        if gamma == T::zero() {
            continue;
        }
        let mut proj = Matrix::<C<T>>::zeros(n, n);
        proj[(k, k)] = Complex::new(T::one(), T::zero());
        let a = (&proj.kron(&one) + &one.kron(&proj)).scale(Complex::new(gamma.sqrt(), T::zero()));
        let ada = a.adjoint().matmul(&a);
        let jump = a.kron(&a.conj());
        let left = ada.kron(&id2).scale(half);
        let right = id2.kron(&ada.transpose()).scale(half);
        l = &(&(&l + &jump) - &left) - &right;
    }
    GeneratorMatrix {
        n_sites: n,
        kind: GeneratorKind::Total,
        repr: Repr::Dense(l),
    }
}

impl<T: Real> GeneratorMatrix<T> {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    /// Side length `N⁴`.
    pub fn dim(&self) -> usize {
        self.n_sites.pow(4)
    }

    pub fn is_matrix_free(&self) -> bool {
        matches!(self.repr, Repr::MatrixFree(_))
    }

    /// Number of stored entries (`N⁸` for dense and matrix-free forms).
    pub fn stored_entries(&self) -> usize {
        match &self.repr {
            Repr::Sparse(csr) => csr.vals.len(),
            _ => self.dim() * self.dim(),
        }
    }

    /// `out = L x`.
    pub fn apply(&self, x: &[C<T>], out: &mut [C<T>]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        match &self.repr {
            Repr::Sparse(csr) => {
                for (row, o) in out.iter_mut().enumerate() {
                    let mut acc = C::zero();
                    for k in csr.row_ptr[row]..csr.row_ptr[row + 1] {
                        acc += csr.vals[k] * x[csr.cols[k]];
                    }
                    *o = acc;
                }
            }
            Repr::Dense(m) => {
                let dim = m.cols();
                for (row, o) in out.iter_mut().enumerate() {
                    let r = &m.as_slice()[row * dim..(row + 1) * dim];
                    *o = r.iter().zip(x).fold(C::zero(), |acc, (&a, &b)| acc + a * b);
                }
            }
            Repr::MatrixFree(params) => apply_matrix_free(self.n_sites, params, self.kind, x, out),
        }
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> T {
        match &self.repr {
            Repr::Sparse(csr) => (0..self.dim())
                .map(|row| {
                    (csr.row_ptr[row]..csr.row_ptr[row + 1])
                        .map(|k| csr.vals[k].norm())
                        .sum::<T>()
                })
                .fold(T::zero(), T::max),
            Repr::Dense(m) => (0..m.rows())
                .map(|row| m.row(row).iter().map(|z| z.norm()).sum::<T>())
                .fold(T::zero(), T::max),
            Repr::MatrixFree(params) => {
                let n = self.n_sites;
                let mut sums = vec![T::zero(); self.dim()];
                for_each_entry(n, params, self.kind, |row, _, v| sums[row] += v.norm());
                sums.into_iter().fold(T::zero(), T::max)
            }
        }
    }

    /// Materializes the generator densely.
    pub fn to_dense(&self) -> Matrix<C<T>> {
        let dim = self.dim();
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Sparse(csr) => {
                let mut m = Matrix::zeros(dim, dim);
                for row in 0..dim {
                    for k in csr.row_ptr[row]..csr.row_ptr[row + 1] {
                        m[(row, csr.cols[k])] += csr.vals[k];
                    }
                }
                m
            }
            Repr::MatrixFree(params) => {
                let mut m = Matrix::zeros(dim, dim);
                for_each_entry(self.n_sites, params, self.kind, |row, col, v| {
                    m[(row, col)] += v
                });
                m
            }
        }
    }
}

fn apply_matrix_free<T: Real>(
    n: usize,
    params: &Parameters<T>,
    kind: GeneratorKind,
    x: &[C<T>],
    out: &mut [C<T>],
) {
    out.iter_mut().for_each(|o| *o = C::zero());
    for_each_entry(n, params, kind, |row, col, v| out[row] += v * x[col]);
}

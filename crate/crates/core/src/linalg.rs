// SPDX-License-Identifier: Apache-2.0

//! Small dense matrices and the eigen-solvers the propagators need.
//!
//! Everything here is sized for desk-scale networks (a handful of sites, so
//! at most a few hundred rows after tensoring). Storage is row-major.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::scalar::{c, Real, C};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Copy + Zero> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in 0..cols {
                data.push(f(r, col));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row-major data. Panics if the length does not match.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Option<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return None;
        }
        Some(Self::from_vec(n_rows, n_cols, rows.concat()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [S] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, col| self[(col, r)])
    }

    pub fn map<U: Copy + Zero>(&self, f: impl Fn(S) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }
}

impl<S: Copy + Zero + One> Matrix<S> {
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, col| if r == col { S::one() } else { S::zero() })
    }
}

impl<S> Matrix<S>
where
    S: Copy + Zero + Mul<Output = S> + Add<Output = S>,
{
    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        Self::from_fn(rows, cols, |r, col| {
            self[(r / rhs.rows, col / rhs.cols)] * rhs[(r % rhs.rows, col % rhs.cols)]
        })
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|x| x * s)
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, k| acc + self[(k, k)])
    }
}

impl<S: Copy + Zero + Add<Output = S>> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: Self) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<S: Copy + Zero + Sub<Output = S>> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: Self) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (r, col): (usize, usize)) -> &S {
        debug_assert!(r < self.rows && col < self.cols);
        &self.data[r * self.cols + col]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (r, col): (usize, usize)) -> &mut S {
        debug_assert!(r < self.rows && col < self.cols);
        &mut self.data[r * self.cols + col]
    }
}

impl<T: Real> Matrix<T> {
    pub fn to_complex(&self) -> Matrix<C<T>> {
        self.map(|x| c(x, T::zero()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    pub fn sum(&self) -> T {
        self.data.iter().copied().sum()
    }
}

impl<T: Real> Matrix<C<T>> {
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, col| self[(col, r)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn re(&self) -> Matrix<T> {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> Matrix<T> {
        self.map(|z| z.im)
    }

    pub fn abs(&self) -> Matrix<T> {
        self.map(|z| z.norm())
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).norm()))
    }

    /// Frobenius norm squared.
    pub fn norm_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// max |A − A†| over all entries.
    pub fn hermiticity_residual(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.rows {
            for col in r..self.cols {
                worst = worst.max((self[(r, col)] - self[(col, r)].conj()).norm());
            }
        }
        worst
    }
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the orthogonal matrix whose
/// columns are the matching eigenvectors. Only the symmetric part of `a` is
/// read.
pub fn symmetric_eigen<T: Real>(a: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    assert!(a.is_square(), "eigen-decomposition needs a square matrix");
    let n = a.rows();
    let mut m = Matrix::from_fn(n, n, |r, col| (a[(r, col)] + a[(col, r)]) * T::lit(0.5));
    let mut v = Matrix::<T>::identity(n);
    let two = T::lit(2.0);

    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut scale = T::zero();
        for r in 0..n {
            scale += m[(r, r)] * m[(r, r)];
            for col in (r + 1)..n {
                off += m[(r, col)] * m[(r, col)];
            }
        }
        if off <= T::epsilon() * T::epsilon() * (scale + off) || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (two * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = cs * mkp - sn * mkq;
                    m[(k, q)] = sn * mkp + cs * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = cs * mpk - sn * mqk;
                    m[(q, k)] = sn * mpk + cs * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + cs * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        m[(x, x)]
            .partial_cmp(&m[(y, y)])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| m[(k, k)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, col| v[(r, order[col])]);
    (values, vectors)
}

/// Eigenvalues (ascending) of a Hermitian matrix.
///
/// Uses the real embedding `[[A, −B], [B, A]]` of `A + iB`, whose spectrum is
/// that of the Hermitian matrix with every eigenvalue doubled.
pub fn hermitian_eigenvalues<T: Real>(h: &Matrix<C<T>>) -> Vec<T> {
    assert!(h.is_square());
    let n = h.rows();
    let half = T::lit(0.5);
    let embed = Matrix::from_fn(2 * n, 2 * n, |r, col| {
        // Hermitize first so rounding asymmetry does not leak into the spectrum.
        let (rr, cc) = (r % n, col % n);
        let z = (h[(rr, cc)] + h[(cc, rr)].conj()) * half;
        match (r < n, col < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let (values, _) = symmetric_eigen(&embed);
    values.into_iter().step_by(2).collect()
}

/// `exp(i·H·t)` for a real symmetric `H`, via its eigen-decomposition.
pub fn unitary_exp<T: Real>(h: &Matrix<T>, t: T) -> Matrix<C<T>> {
    let (values, vectors) = symmetric_eigen(h);
    unitary_exp_from_eigen(&values, &vectors, t)
}

pub(crate) fn unitary_exp_from_eigen<T: Real>(
    values: &[T],
    vectors: &Matrix<T>,
    t: T,
) -> Matrix<C<T>> {
    let n = values.len();
    let phases: Vec<C<T>> = values
        .iter()
        .map(|&l| C::from_polar(T::one(), l * t))
        .collect();
    Matrix::from_fn(n, n, |r, col| {
        (0..n).fold(C::zero(), |acc, k| {
            acc + phases[k] * (vectors[(r, k)] * vectors[(col, k)])
        })
    })
}

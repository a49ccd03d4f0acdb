//! Dense complex linear algebra on `C^n`.
//!
//! Matrices are nalgebra `DMatrix` values; every spectral quantity goes
//! through the one-sided Jacobi SVD in [`jacobi`], under a single numerical
//! rank convention (see [`Tolerance`]).

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

mod jacobi;

use jacobi::{jacobi_singular_values, jacobi_svd};

/// Floor applied to the automatic rank tolerance.
pub const TOL_FLOOR: f64 = 1e-12;

/// Dense square complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds an `n x n` matrix from row-major entries.
    pub fn from_row_major(n: usize, data: &[Complex64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != n * n {
            return Err(Error::Shape { n, len: data.len(), expected: n * n });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(n, n, data))
    }

    /// Real input embedded with zero imaginary parts.
    pub fn from_real_row_major(n: usize, data: &[f64]) -> Result<Self> {
        let data: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_row_major(n, &data)
    }

    pub fn from_dmatrix(inner: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = inner.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        for col in 0..cols {
            for row in 0..rows {
                let z = inner[(row, col)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row, col });
                }
            }
        }
        Ok(Self { inner })
    }

    /// Caller guarantees the matrix is square, non-empty and finite.
    pub(crate) fn from_dmatrix_unchecked(inner: DMatrix<Complex64>) -> Self {
        debug_assert!(inner.is_square() && inner.nrows() > 0);
        Self { inner }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_dmatrix_unchecked(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_dmatrix_unchecked(DMatrix::identity(n, n))
    }

    /// Real diagonal matrix.
    ///
    /// # Panics
    /// If `diag` is empty or holds a non-finite value.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        assert!(!diag.is_empty(), "empty diagonal");
        assert!(diag.iter().all(|x| x.is_finite()), "non-finite diagonal");
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::from_dmatrix_unchecked(DMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn adjoint(&self) -> Self {
        Self::from_dmatrix_unchecked(self.inner.adjoint())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_dmatrix_unchecked(self.inner.map(|z| z * factor))
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for row in 0..n {
            for col in 0..n {
                out.push(self.inner[(row, col)]);
            }
        }
        out
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(&self.inner + &rhs.inner)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(&self.inner - &rhs.inner)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(&self.inner * &rhs.inner)
    }
}

/// Rank-decision threshold.
///
/// `auto()` resolves to `max(n * eps * sigma_max, 1e-12)` against the matrix
/// it is applied to; `fixed` pins an absolute value.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tolerance(Option<f64>);

impl Tolerance {
    pub const fn auto() -> Self {
        Tolerance(None)
    }

    pub fn fixed(tol: f64) -> Result<Self> {
        if tol.is_finite() && tol > 0.0 {
            Ok(Tolerance(Some(tol)))
        } else {
            Err(Error::InvalidTolerance(tol))
        }
    }

    pub fn resolve(self, n: usize, sigma_max: f64) -> f64 {
        match self.0 {
            Some(tol) => tol,
            None => (n as f64 * f64::EPSILON * sigma_max).max(TOL_FLOOR),
        }
    }

    pub fn is_auto(self) -> bool {
        self.0.is_none()
    }
}

/// `A = U diag(singulars) W*` with singular values in descending order.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub left: DMatrix<Complex64>,
    pub singulars: Vec<f64>,
    pub right_adjoint: DMatrix<Complex64>,
    /// Resolved rank threshold.
    pub tol: f64,
}

impl SvdFactors {
    pub fn dim(&self) -> usize {
        self.singulars.len()
    }

    /// Number of singular values strictly above `tol`.
    pub fn rank(&self) -> usize {
        self.singulars.iter().take_while(|&&s| s > self.tol).count()
    }

    pub fn norm(&self) -> f64 {
        self.singulars.first().copied().unwrap_or(0.0)
    }

    /// i-th left singular vector `u_i`.
    pub fn left_vector(&self, i: usize) -> DVector<Complex64> {
        self.left.column(i).into_owned()
    }

    /// i-th right singular vector `w_i` (conjugate of row i of `W*`).
    pub fn right_vector(&self, i: usize) -> DVector<Complex64> {
        self.right_adjoint.row(i).adjoint()
    }

    /// `sum_i weights[i] * u_i w_i^*`.
    pub fn weighted_sum(&self, weights: &[f64]) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut scaled = self.left.clone();
        for (j, &w) in weights.iter().enumerate().take(n) {
            scaled.column_mut(j).scale_mut(w);
        }
        scaled * &self.right_adjoint
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(self.weighted_sum(&self.singulars))
    }
}

/// Full SVD of a square matrix.
pub fn svd(a: &ComplexMatrix, tol: Tolerance) -> SvdFactors {
    let n = a.dim();
    let decomposition = jacobi_svd(a.as_dmatrix(), true, true);
    let singulars = decomposition.singulars;
    let left = decomposition.left.expect("left vectors requested");
    let right_adjoint = decomposition.right.expect("right vectors requested").adjoint();
    let sigma_max = singulars.first().copied().unwrap_or(0.0);
    SvdFactors { left, singulars, right_adjoint, tol: tol.resolve(n, sigma_max) }
}

/// Operator (spectral) norm: the largest singular value.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    spectral_norm(a.as_dmatrix())
}

pub fn rank_tol(a: &ComplexMatrix, tol: Tolerance) -> usize {
    svd(a, tol).rank()
}

/// Subspace of `C^n` held as an orthonormal basis (`n x k`, `k` may be 0).
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: DMatrix<Complex64>,
}

impl Subspace {
    /// Wraps a basis whose columns are orthonormal within `1e-10`.
    pub fn from_orthonormal(basis: DMatrix<Complex64>) -> Result<Self> {
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let residual = (gram - DMatrix::<Complex64>::identity(k, k)).camax();
        if residual > 1e-10 {
            return Err(Error::NotProjection { residual });
        }
        Ok(Self { basis })
    }

    pub(crate) fn from_columns_unchecked(basis: DMatrix<Complex64>) -> Self {
        Self { basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<Complex64> {
        &self.basis
    }

    /// Orthogonal projection onto the subspace.
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::from_dmatrix_unchecked(&self.basis * self.basis.adjoint())
    }
}

fn select_columns(m: &DMatrix<Complex64>, cols: impl Iterator<Item = usize>) -> DMatrix<Complex64> {
    let cols: Vec<usize> = cols.collect();
    let mut out = DMatrix::zeros(m.nrows(), cols.len());
    for (dst, &src) in cols.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    out
}

/// Left singular vectors with `sigma > tol`.
pub fn range_basis(a: &ComplexMatrix, tol: Tolerance) -> Subspace {
    let f = svd(a, tol);
    Subspace::from_columns_unchecked(select_columns(&f.left, 0..f.rank()))
}

/// Right singular vectors with `sigma <= tol`.
pub fn kernel_basis(a: &ComplexMatrix, tol: Tolerance) -> Subspace {
    let f = svd(a, tol);
    let w = f.right_adjoint.adjoint();
    Subspace::from_columns_unchecked(select_columns(&w, f.rank()..f.dim()))
}

/// `dim(S1 ∩ S2) = k1 + k2 - rank([B1 B2])`.
pub fn subspace_intersection_dim(s1: &Subspace, s2: &Subspace, tol: Tolerance) -> Result<usize> {
    let n = s1.ambient_dim();
    if n != s2.ambient_dim() {
        return Err(Error::DimensionMismatch { left: n, right: s2.ambient_dim() });
    }
    let (k1, k2) = (s1.dim(), s2.dim());
    if k1 == 0 || k2 == 0 {
        return Ok(0);
    }
    let mut stacked = DMatrix::zeros(n, k1 + k2);
    stacked.columns_mut(0, k1).copy_from(s1.basis());
    stacked.columns_mut(k1, k2).copy_from(s2.basis());
    let sv = singular_values(&stacked);
    let tol = tol.resolve(n, sv.first().copied().unwrap_or(0.0));
    let rank = sv.iter().filter(|&&s| s > tol).count();
    Ok(k1 + k2 - rank)
}

/// Largest eigenvalue of the Hermitian part `(A + A*)/2`.
///
/// This is `max Re W(A)`, the rightmost point of the numerical range.
/// Shifting by the Frobenius norm makes `H + sI` positive semidefinite, so
/// its top eigenvalue is its top singular value.
pub fn herm_eig_max(a: &ComplexMatrix) -> f64 {
    let m = a.as_dmatrix();
    let mut h = (m + m.adjoint()).map(|z| z * 0.5);
    let shift = h.norm();
    for i in 0..h.nrows() {
        h[(i, i)] += shift;
    }
    spectral_norm(&h) - shift
}

/// Singular values of an arbitrary (possibly rectangular) matrix, descending.
pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    if m.nrows() >= m.ncols() {
        jacobi_singular_values(m)
    } else {
        jacobi_singular_values(&m.adjoint())
    }
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m)[0]
}

/// Smallest singular value of a tall `m x k` matrix (`m >= k >= 1`) and its
/// right singular vector.
pub(crate) fn smallest_singular_pair(m: &DMatrix<Complex64>) -> (f64, DVector<Complex64>) {
    debug_assert!(m.nrows() >= m.ncols() && m.ncols() > 0);
    let decomposition = jacobi_svd(m, false, true);
    let k = m.ncols();
    let right = decomposition.right.expect("right vectors requested");
    (decomposition.singulars[k - 1], right.column(k - 1).into_owned())
}

/// Euclidean norm of a complex vector.
pub(crate) fn vector_norm(v: &DVector<Complex64>) -> f64 {
    v.norm()
}

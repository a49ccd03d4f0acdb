//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Column pairs are rotated until every pair is orthogonal to working
//! precision relative to the column norms. The singular values come out with
//! high relative accuracy and exact zeros stay exact, which matters for the
//! rank decisions made everywhere else in the crate.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 80;

pub(crate) struct JacobiSvd {
    /// Descending.
    pub singulars: Vec<f64>,
    /// `m x k` with orthonormal columns, when requested.
    pub left: Option<DMatrix<Complex64>>,
    /// `k x k` unitary with `A = U diag(s) V*`, when requested.
    pub right: Option<DMatrix<Complex64>>,
}

/// Rotates the columns of `a` (and `v`, if given) until they are mutually
/// orthogonal.
fn orthogonalize(a: &mut DMatrix<Complex64>, mut v: Option<&mut DMatrix<Complex64>>) {
    let (rows, k) = a.shape();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..k {
            for j in i + 1..k {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut g = Complex64::new(0.0, 0.0);
                for r in 0..rows {
                    let x = a[(r, i)];
                    let y = a[(r, j)];
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    g += x.conj() * y;
                }
                let g_abs = g.norm();
                if alpha == 0.0 || beta == 0.0 || g_abs <= f64::EPSILON * libm::sqrt(alpha) * libm::sqrt(beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g_abs);
                let root = libm::sqrt(1.0 + zeta * zeta);
                let t = if zeta >= 0.0 { 1.0 / (zeta + root) } else { -1.0 / (-zeta + root) };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let phase = g.conj() / g_abs;
                rotate(a, i, j, c, s, phase);
                if let Some(v) = v.as_deref_mut() {
                    rotate(v, i, j, c, s, phase);
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

fn rotate(m: &mut DMatrix<Complex64>, i: usize, j: usize, c: f64, s: f64, phase: Complex64) {
    for r in 0..m.nrows() {
        let x = m[(r, i)];
        let y = m[(r, j)] * phase;
        m[(r, i)] = x * c - y * s;
        m[(r, j)] = x * s + y * c;
    }
}

/// Removes the components of `x` along the first `count` columns of `q`,
/// twice for stability.
fn project_out(q: &DMatrix<Complex64>, count: usize, x: &mut DMatrix<Complex64>) {
    for _ in 0..2 {
        for c in 0..count {
            let col = q.column(c);
            let coef = col.dotc(&x.column(0));
            for r in 0..x.nrows() {
                x[(r, 0)] -= col[r] * coef;
            }
        }
    }
}

/// SVD of an `m x k` matrix with `m >= k`.
pub(crate) fn jacobi_svd(m: &DMatrix<Complex64>, want_left: bool, want_right: bool) -> JacobiSvd {
    let (rows, k) = m.shape();
    debug_assert!(rows >= k);
    let mut a = m.clone();
    let mut v = want_right.then(|| DMatrix::identity(k, k));
    orthogonalize(&mut a, v.as_mut());

    let norms: Vec<f64> = (0..k).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let singulars: Vec<f64> = order.iter().map(|&j| norms[j]).collect();

    let right = v.map(|v| {
        let mut sorted = DMatrix::zeros(k, k);
        for (dst, &src) in order.iter().enumerate() {
            sorted.set_column(dst, &v.column(src));
        }
        sorted
    });

    let left = want_left.then(|| {
        // `basis` packs accepted columns at the front; `u` holds them in
        // singular-value order.
        let mut basis = DMatrix::zeros(rows, k);
        let mut u = DMatrix::zeros(rows, k);
        let mut filled = 0;
        let mut missing = Vec::new();
        for (dst, &src) in order.iter().enumerate() {
            let s = norms[src];
            let mut col = DMatrix::from_column_slice(rows, 1, a.column(src).as_slice());
            if s > 0.0 {
                col.unscale_mut(s);
                project_out(&basis, filled, &mut col);
                let residual = col.norm();
                if residual > 0.5 {
                    col.unscale_mut(residual);
                    basis.set_column(filled, &col.column(0));
                    u.set_column(dst, &col.column(0));
                    filled += 1;
                    continue;
                }
            }
            missing.push(dst);
        }
        // Complete the zero directions with the standard basis vector that
        // has the largest component outside the current span.
        for dst in missing {
            let mut best: Option<(f64, DMatrix<Complex64>)> = None;
            for e in 0..rows {
                let mut col = DMatrix::zeros(rows, 1);
                col[(e, 0)] = Complex64::new(1.0, 0.0);
                project_out(&basis, filled, &mut col);
                let r = col.norm();
                if best.as_ref().is_none_or(|(b, _)| r > *b) {
                    best = Some((r, col));
                }
            }
            let (r, mut col) = best.expect("rows >= 1");
            col.unscale_mut(r);
            basis.set_column(filled, &col.column(0));
            u.set_column(dst, &col.column(0));
            filled += 1;
        }
        u
    });

    JacobiSvd { singulars, left, right }
}

/// Singular values only, descending.
pub(crate) fn jacobi_singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    jacobi_svd(m, false, false).singulars
}

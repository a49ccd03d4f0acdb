//! Polar decomposition `T = V|T|`, partial isometries, and the index
//! `j(P, Q)` of a pair of orthogonal projections.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    kernel_basis, op_norm, range_basis, subspace_intersection_dim, svd, ComplexMatrix, SvdFactors, Tolerance,
};

/// Acceptance threshold for the Hermitian/idempotent residuals of a projection.
pub const PROJECTION_TOL: f64 = 1e-10;

/// A validated partial isometry `X` (`XX*X = X`) with its initial projection
/// `X*X` (onto `ker(X)^⊥`) and final projection `XX*` (onto `ran(X)`).
#[derive(Clone, Debug)]
pub struct PartialIsometry {
    matrix: ComplexMatrix,
    initial: ComplexMatrix,
    final_: ComplexMatrix,
    rank: usize,
}

impl PartialIsometry {
    pub(crate) fn from_trusted(matrix: ComplexMatrix, rank: usize) -> Self {
        let initial = &matrix.adjoint() * &matrix;
        let final_ = &matrix * &matrix.adjoint();
        Self { matrix, initial, final_, rank }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_trusted(ComplexMatrix::zeros(n), 0)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn initial_projection(&self) -> &ComplexMatrix {
        &self.initial
    }

    pub fn final_projection(&self) -> &ComplexMatrix {
        &self.final_
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0
    }

    /// Operator norm, exactly 1 unless `X = 0`.
    pub fn norm(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    /// `X*` is again a partial isometry, with the projections swapped.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            initial: self.final_.clone(),
            final_: self.initial.clone(),
            rank: self.rank,
        }
    }
}

/// Checks `‖XX*X − X‖ <= 10 tol` and wraps `X`.
pub fn validate_partial_isometry(x: &ComplexMatrix, tol: Tolerance) -> Result<PartialIsometry> {
    let factors = svd(x, tol);
    let cubed = &(x * &x.adjoint()) * x;
    let residual = op_norm(&(&cubed - x));
    if residual > 10.0 * factors.tol {
        return Err(Error::NotPartialIsometry { residual });
    }
    Ok(PartialIsometry::from_trusted(x.clone(), factors.rank()))
}

/// Polar factor, modulus, and the scalar invariants of `T`.
#[derive(Clone, Debug)]
pub struct PolarData {
    /// The polar factor `V`, with `ker V = ker T`.
    pub factor: PartialIsometry,
    /// `|T| = (T*T)^{1/2}`.
    pub modulus: ComplexMatrix,
    /// Reduced minimum modulus; `None` when `T` is numerically zero.
    pub gamma: Option<f64>,
    pub norm: f64,
    /// `‖T − V‖`, evaluated directly.
    pub dist_to_polar: f64,
    pub svd: SvdFactors,
}

pub fn polar_decompose(t: &ComplexMatrix, tol: Tolerance) -> PolarData {
    let factors = svd(t, tol);
    let n = factors.dim();
    let rank = factors.rank();
    let ones: alloc::vec::Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    let v = ComplexMatrix::from_dmatrix_unchecked(factors.weighted_sum(&ones));
    let mut w_scaled = factors.right_adjoint.adjoint();
    for (j, &s) in factors.singulars.iter().enumerate() {
        w_scaled.column_mut(j).scale_mut(s);
    }
    let modulus = ComplexMatrix::from_dmatrix_unchecked(w_scaled * &factors.right_adjoint);
    let gamma = (rank > 0).then(|| factors.singulars[rank - 1]);
    let dist_to_polar = if rank == 0 { 0.0 } else { op_norm(&(t - &v)) };
    PolarData {
        factor: PartialIsometry::from_trusted(v, rank),
        modulus,
        gamma,
        norm: factors.norm(),
        dist_to_polar,
        svd: factors,
    }
}

/// `γ(T) = inf σ(|T|) \ {0}`: the smallest singular value above `tol`.
pub fn reduced_min_modulus(t: &ComplexMatrix, tol: Tolerance) -> Result<f64> {
    let factors = svd(t, tol);
    match factors.rank() {
        0 => Err(Error::UndefinedGamma),
        r => Ok(factors.singulars[r - 1]),
    }
}

/// `V φ(|T|) = Σ φ(σ_i) u_i w_i*`.
///
/// `phi` is evaluated on every singular value, with those at or below `tol`
/// read as 0. Directions in `ker V` are annihilated by the left factor
/// whatever `φ(0)` is.
pub fn apply_to_modulus<F>(t: &ComplexMatrix, phi: F, tol: Tolerance) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> f64,
{
    apply_to_factors(&svd(t, tol), phi)
}

pub(crate) fn apply_to_factors<F>(factors: &SvdFactors, phi: F) -> Result<ComplexMatrix>
where
    F: Fn(f64) -> f64,
{
    let rank = factors.rank();
    let mut weights = alloc::vec::Vec::with_capacity(factors.dim());
    for (i, &s) in factors.singulars.iter().enumerate() {
        let at = if i < rank { s } else { 0.0 };
        let value = phi(at);
        if !value.is_finite() {
            return Err(Error::FunctionUndefined { at });
        }
        weights.push(if i < rank { value } else { 0.0 });
    }
    Ok(ComplexMatrix::from_dmatrix_unchecked(factors.weighted_sum(&weights)))
}

/// A pair of orthogonal projections and its index
/// `j(P,Q) = dim(ran P ∩ ker Q) − dim(ker P ∩ ran Q)`.
#[derive(Clone, Debug)]
pub struct ProjectionPair {
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
    pub dim_ran_p_ker_q: usize,
    pub dim_ker_p_ran_q: usize,
    pub j: i64,
    pub rank_p: usize,
    pub rank_q: usize,
}

impl ProjectionPair {
    /// `rank P − rank Q`, which equals `j` in finite dimension.
    pub fn rank_difference(&self) -> i64 {
        self.rank_p as i64 - self.rank_q as i64
    }
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    let a = m.as_dmatrix();
    ComplexMatrix::from_dmatrix_unchecked((a + a.adjoint()).map(|z: Complex64| z * 0.5))
}

fn projection_residual(p: &ComplexMatrix) -> f64 {
    let hermitian = op_norm(&(p - &p.adjoint()));
    let idempotent = op_norm(&(&(p * p) - p));
    hermitian.max(idempotent)
}

/// Index of a pair of orthogonal projections, from subspace intersections.
pub fn index_j(p: &ComplexMatrix, q: &ComplexMatrix, tol: Tolerance) -> Result<ProjectionPair> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { left: p.dim(), right: q.dim() });
    }
    for m in [p, q] {
        let residual = projection_residual(m);
        if residual > PROJECTION_TOL {
            return Err(Error::NotProjection { residual });
        }
    }
    let (ps, qs) = (hermitian_part(p), hermitian_part(q));
    let ran_p = range_basis(&ps, tol);
    let ker_p = kernel_basis(&ps, tol);
    let ran_q = range_basis(&qs, tol);
    let ker_q = kernel_basis(&qs, tol);
    let dim_ran_p_ker_q = subspace_intersection_dim(&ran_p, &ker_q, tol)?;
    let dim_ker_p_ran_q = subspace_intersection_dim(&ker_p, &ran_q, tol)?;
    Ok(ProjectionPair {
        p: p.clone(),
        q: q.clone(),
        dim_ran_p_ker_q,
        dim_ker_p_ran_q,
        j: dim_ran_p_ker_q as i64 - dim_ker_p_ran_q as i64,
        rank_p: ran_p.dim(),
        rank_q: ran_q.dim(),
    })
}

/// `j(V*V, X*X)` for two partial isometries.
pub fn initial_index(v: &PartialIsometry, x: &PartialIsometry, tol: Tolerance) -> Result<ProjectionPair> {
    index_j(v.initial_projection(), x.initial_projection(), tol)
}

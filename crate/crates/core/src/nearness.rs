//! Distances from `T` to partial isometries, the minimizers that realise
//! them, and the attained-vector criteria that recognise constrained
//! minimizers.
//!
//! Notation: `V` is the polar factor of `T`, `γ = γ(T)` its reduced minimum
//! modulus, and `I` the set of partial isometries. Two distances matter:
//!
//! * `‖T − V‖ = max(1 − γ, ‖T‖ − 1)`, the minimum over `X ∈ I` with
//!   `j(V*V, X*X) <= 0`;
//! * `i0 = max_i min(σ_i, |1 − σ_i|)`, the unconstrained minimum over `I`,
//!   attained at `V φ(|T|)` with `φ = 1 − χ_(0,1/2)`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    herm_eig_max, kernel_basis, op_norm, range_basis, singular_values, smallest_singular_pair, svd,
    vector_norm, ComplexMatrix, SvdFactors, Tolerance,
};
use crate::polar::{apply_to_factors, initial_index, polar_decompose, PartialIsometry, PolarData};

/// Slack applied toward the "condition holds" side at the boundaries
/// `γ = 1/2` and `‖T‖ − 1 = 1 − γ`.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// Label carried by reports: sequence conditions are checked as exact
/// vector conditions, which is exact on the compact unit sphere of `C^n`.
pub const CRITERION_LABEL: &str = "finite-dim criterion";

/// Tolerance used by the triangle-equality test.
pub const TRIANGLE_TOL: f64 = 1e-9;

fn boundary_slack(tol: f64) -> f64 {
    tol.max(BOUNDARY_SLACK)
}

/// `max(1 − γ, ‖T‖ − 1)`; zero for the zero operator.
pub fn dist_to_polar_factor(t: &ComplexMatrix, tol: Tolerance) -> f64 {
    formula_distance(&svd(t, tol))
}

fn formula_distance(factors: &SvdFactors) -> f64 {
    match factors.rank() {
        0 => 0.0,
        r => (1.0 - factors.singulars[r - 1]).max(factors.norm() - 1.0),
    }
}

/// Lower bound on `‖T − S‖` from the singular spectra.
///
/// First form: `sup_λ inf_μ min(λ, |λ − μ|)`. Second form drops the `λ`
/// term and requires `dim ker S >= dim ran(S)^⊥`.
pub fn wu_lower_bound(t: &ComplexMatrix, s: &ComplexMatrix, second_form: bool) -> Result<f64> {
    if t.dim() != s.dim() {
        return Err(Error::DimensionMismatch { left: t.dim(), right: s.dim() });
    }
    let tol = Tolerance::auto();
    if second_form {
        let kernel = kernel_basis(s, tol).dim();
        let cokernel = s.dim() - range_basis(s, tol).dim();
        if kernel < cokernel {
            return Err(Error::BoundPrecondition { kernel, cokernel });
        }
    }
    let spec_t = singular_values(t.as_dmatrix());
    let spec_s = singular_values(s.as_dmatrix());
    let bound = spec_t
        .iter()
        .map(|&lambda| {
            let nearest = spec_s.iter().map(|&mu| (lambda - mu).abs()).fold(f64::INFINITY, f64::min);
            if second_form {
                nearest
            } else {
                lambda.min(nearest)
            }
        })
        .fold(0.0, f64::max);
    Ok(bound)
}

/// `f(λ) = min(λ, |1 − λ|)`.
pub fn wu_profile(lambda: f64) -> f64 {
    lambda.min((1.0 - lambda).abs())
}

/// `i0 = max f(σ_i)`, the distance from `T` to the set of partial isometries.
pub fn wu_distance_to_isometries(t: &ComplexMatrix, tol: Tolerance) -> f64 {
    wu_distance_from_factors(&svd(t, tol))
}

fn wu_distance_from_factors(factors: &SvdFactors) -> f64 {
    let rank = factors.rank();
    factors.singulars[..rank].iter().copied().map(wu_profile).fold(0.0, f64::max)
}

/// Whether `φ = 1 − χ_(0,1/2)` keeps the singular value `s`; values within
/// the boundary slack below 1/2 are kept.
pub(crate) fn wu_keeps(s: f64, tol: f64) -> bool {
    !(s > 0.0 && s < 0.5 - boundary_slack(tol))
}

/// The minimizer `X0 = V φ(|T|)` over all partial isometries.
pub fn wu_minimizer(t: &ComplexMatrix, tol: Tolerance) -> Result<PartialIsometry> {
    wu_minimizer_from_factors(&svd(t, tol))
}

pub(crate) fn wu_minimizer_from_factors(factors: &SvdFactors) -> Result<PartialIsometry> {
    let rank = factors.rank();
    if rank == 0 {
        return Err(Error::UndefinedGamma);
    }
    let tol = factors.tol;
    let kept = factors.singulars[..rank].iter().filter(|&&s| wu_keeps(s, tol)).count();
    let x0 = apply_to_factors(factors, |s| if wu_keeps(s, tol) { 1.0 } else { 0.0 })?;
    Ok(PartialIsometry::from_trusted(x0, kept))
}

/// `‖T‖ − 1 >= 1 − γ` or `γ >= 1/2`: the polar factor is a best
/// approximant among all partial isometries.
pub fn is_polar_factor_global_best(t: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    global_best_from_factors(&svd(t, tol))
}

fn global_best_from_factors(factors: &SvdFactors) -> Result<bool> {
    let rank = factors.rank();
    if rank == 0 {
        return Err(Error::UndefinedGamma);
    }
    let gamma = factors.singulars[rank - 1];
    let norm = factors.norm();
    Ok(norm - 1.0 >= 1.0 - gamma - BOUNDARY_SLACK || gamma >= 0.5 - boundary_slack(factors.tol))
}

/// Outcome of an attained-vector condition on `ξ ∈ ran(X0*X0)`.
#[derive(Clone, Debug)]
pub struct ConditionCheck {
    pub holds: bool,
    /// Smallest singular value of the (stacked) system restricted to
    /// `ran(X0*X0)`; `None` when that range is `{0}`.
    pub residual: Option<f64>,
    /// Unit witness `ξ`, present iff `holds`.
    pub witness: Option<DVector<Complex64>>,
    /// Smallest singular value of each equation on its own.
    pub equation_residuals: Vec<f64>,
    /// Threshold the residual was compared against.
    pub tol: f64,
}

impl ConditionCheck {
    fn vacuous(equations: usize, tol: f64) -> Self {
        Self { holds: false, residual: None, witness: None, equation_residuals: vec![f64::INFINITY; equations], tol }
    }
}

struct Setup {
    polar: PolarData,
    gap_operator: DMatrix<Complex64>,
    distance: f64,
    basis: DMatrix<Complex64>,
    tol: f64,
}

fn setup(t: &ComplexMatrix, x0: &PartialIsometry, tol: Tolerance) -> Result<Setup> {
    if t.dim() != x0.dim() {
        return Err(Error::DimensionMismatch { left: t.dim(), right: x0.dim() });
    }
    let polar = polar_decompose(t, tol);
    let pair = initial_index(&polar.factor, x0, Tolerance::auto())?;
    if pair.j > 0 {
        return Err(Error::IndexConstraint { j: pair.j });
    }
    let gap_operator = t.as_dmatrix() - x0.matrix().as_dmatrix();
    let distance = crate::linalg::spectral_norm(&gap_operator);
    let basis = range_basis(x0.initial_projection(), Tolerance::auto()).basis().clone();
    let tol = polar.svd.tol;
    Ok(Setup { polar, gap_operator, distance, basis, tol })
}

fn restricted(system: &DMatrix<Complex64>, basis: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    system * basis
}

fn solve_system(blocks: &[DMatrix<Complex64>], basis: &DMatrix<Complex64>, tol: f64) -> ConditionCheck {
    let k = basis.ncols();
    if k == 0 {
        return ConditionCheck::vacuous(blocks.len(), tol);
    }
    let n = basis.nrows();
    let parts: Vec<DMatrix<Complex64>> = blocks.iter().map(|b| restricted(b, basis)).collect();
    let equation_residuals = parts.iter().map(|p| smallest_singular_pair(p).0).collect();
    let mut stacked = DMatrix::zeros(n * parts.len(), k);
    for (i, part) in parts.iter().enumerate() {
        stacked.rows_mut(i * n, n).copy_from(part);
    }
    let (residual, v) = smallest_singular_pair(&stacked);
    let holds = residual <= tol;
    let witness = holds.then(|| {
        let xi = basis * v;
        let norm = vector_norm(&xi);
        xi / Complex64::new(norm, 0.0)
    });
    ConditionCheck { holds, residual: Some(residual), witness, equation_residuals, tol }
}

/// Condition (i): a unit `ξ ∈ ran(X0*X0)` with `(T − X0)ξ = ‖T − X0‖ X0 ξ`.
///
/// Errors when `j(V*V, X0*X0) > 0`.
pub fn check_minimizer_condition_i(t: &ComplexMatrix, x0: &PartialIsometry, tol: Tolerance) -> Result<ConditionCheck> {
    let s = setup(t, x0, tol)?;
    Ok(condition_i(&s, x0))
}

fn condition_i(s: &Setup, x0: &PartialIsometry) -> ConditionCheck {
    let x = x0.matrix().as_dmatrix();
    let system = &s.gap_operator - x * Complex64::new(s.distance, 0.0);
    solve_system(&[system], &s.basis, s.tol)
}

/// Condition (ii): a unit `ξ ∈ ran(X0*X0)` with both
/// `((T − X0) + ‖T − X0‖ X0)ξ = 0` and `(T − γ X0)ξ = 0`.
pub fn check_minimizer_condition_ii(t: &ComplexMatrix, x0: &PartialIsometry, tol: Tolerance) -> Result<ConditionCheck> {
    let s = setup(t, x0, tol)?;
    condition_ii(&s, t, x0)
}

fn condition_ii(s: &Setup, t: &ComplexMatrix, x0: &PartialIsometry) -> Result<ConditionCheck> {
    let gamma = s.polar.gamma.ok_or(Error::UndefinedGamma)?;
    let x = x0.matrix().as_dmatrix();
    let first = &s.gap_operator + x * Complex64::new(s.distance, 0.0);
    let second = t.as_dmatrix() - x * Complex64::new(gamma, 0.0);
    Ok(solve_system(&[first, second], &s.basis, s.tol))
}

/// Full verdict on a feasible candidate `X0`.
#[derive(Clone, Debug)]
pub struct Characterization {
    pub condition_i: ConditionCheck,
    /// `None` for the zero operator, where `γ` is undefined.
    pub condition_ii: Option<ConditionCheck>,
    /// `‖T − X0‖`.
    pub distance: f64,
    /// `‖T − V‖`.
    pub polar_distance: f64,
    /// True when `T` is numerically zero; the vector conditions are then
    /// vacuous and the verdict is `X0 = 0`.
    pub zero_operator: bool,
    pub x0_is_zero: bool,
}

impl Characterization {
    pub fn is_minimizer(&self) -> bool {
        if self.zero_operator {
            return self.x0_is_zero;
        }
        self.condition_i.holds || self.condition_ii.as_ref().is_some_and(|c| c.holds)
    }

    /// `‖T − X0‖ − ‖T − V‖`, non-negative up to rounding for feasible `X0`.
    pub fn gap(&self) -> f64 {
        self.distance - self.polar_distance
    }
}

pub fn characterize(t: &ComplexMatrix, x0: &PartialIsometry, tol: Tolerance) -> Result<Characterization> {
    let s = setup(t, x0, tol)?;
    let zero_operator = s.polar.gamma.is_none();
    let condition_i = condition_i(&s, x0);
    let condition_ii = if zero_operator { None } else { Some(condition_ii(&s, t, x0)?) };
    Ok(Characterization {
        condition_i,
        condition_ii,
        distance: s.distance,
        polar_distance: s.polar.dist_to_polar,
        zero_operator,
        x0_is_zero: x0.is_zero(),
    })
}

/// Whether `X0` attains `min { ‖T − X‖ : X ∈ I, j(V*V, X*X) <= 0 }`, decided
/// by conditions (i) and (ii).
pub fn is_constrained_minimizer(t: &ComplexMatrix, x0: &PartialIsometry, tol: Tolerance) -> Result<bool> {
    Ok(characterize(t, x0, tol)?.is_minimizer())
}

/// `‖X0 + D‖ = ‖X0‖ + ‖D‖`, tested as `‖X0‖‖D‖ ∈ closure W(X0* D)`.
///
/// Since `|<Cξ, ξ>| <= ‖X0‖‖D‖`, membership of that real point reduces to
/// the top eigenvalue of the Hermitian part of `X0* D`.
pub fn triangle_equality_with_isometry(x0: &PartialIsometry, d: &ComplexMatrix) -> Result<bool> {
    if x0.is_zero() {
        return Err(Error::ZeroIsometry);
    }
    if x0.dim() != d.dim() {
        return Err(Error::DimensionMismatch { left: x0.dim(), right: d.dim() });
    }
    let top = herm_eig_max(&(&x0.matrix().adjoint() * d));
    Ok(top >= x0.norm() * op_norm(d) - TRIANGLE_TOL)
}

/// Everything the toolkit knows about one operator.
#[derive(Clone, Debug)]
pub struct NearnessReport {
    pub polar: PolarData,
    /// `max(1 − γ, ‖T‖ − 1)`, to compare with `polar.dist_to_polar`.
    pub dist_formula: f64,
    pub wu_distance: f64,
    pub polar_is_global_best: bool,
    /// `V φ(|T|)`; `None` only for the zero operator.
    pub wu_minimizer: Option<PartialIsometry>,
    pub wu_minimizer_distance: Option<f64>,
    /// `j(V*V, X0*X0)` for the Wu minimizer.
    pub wu_minimizer_index: Option<i64>,
    /// Conditions evaluated for the pair `(T, V)`.
    pub condition_i: Option<ConditionCheck>,
    pub condition_ii: Option<ConditionCheck>,
    /// `‖T‖ = ‖V‖ + ‖T − V‖`; `None` for the zero operator.
    pub triangle_equality: Option<bool>,
    pub criterion: &'static str,
}

pub fn analyze(t: &ComplexMatrix, tol: Tolerance) -> Result<NearnessReport> {
    let polar = polar_decompose(t, tol);
    let factors = &polar.svd;
    let dist_formula = formula_distance(factors);
    let wu_distance = wu_distance_from_factors(factors);
    if polar.factor.is_zero() {
        return Ok(NearnessReport {
            polar,
            dist_formula,
            wu_distance,
            // V = 0 already sits at distance ‖T‖ <= tol.
            polar_is_global_best: true,
            wu_minimizer: None,
            wu_minimizer_distance: None,
            wu_minimizer_index: None,
            condition_i: None,
            condition_ii: None,
            triangle_equality: None,
            criterion: CRITERION_LABEL,
        });
    }
    let polar_is_global_best = global_best_from_factors(factors)?;
    let wu = wu_minimizer_from_factors(factors)?;
    let wu_minimizer_distance = op_norm(&(t - wu.matrix()));
    let wu_minimizer_index = initial_index(&polar.factor, &wu, Tolerance::auto())?.j;
    let verdict = characterize(t, &polar.factor, tol)?;
    let triangle = triangle_equality_with_isometry(&polar.factor, &(t - polar.factor.matrix()))?;
    Ok(NearnessReport {
        dist_formula,
        wu_distance,
        polar_is_global_best,
        wu_minimizer: Some(wu),
        wu_minimizer_distance: Some(wu_minimizer_distance),
        wu_minimizer_index: Some(wu_minimizer_index),
        condition_i: Some(verdict.condition_i),
        condition_ii: verdict.condition_ii,
        triangle_equality: Some(triangle),
        criterion: CRITERION_LABEL,
        polar,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::validate_partial_isometry;
    use approx::assert_abs_diff_eq;

    const AUTO: Tolerance = Tolerance::auto();

    fn ex31_t(a: f64) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[a, 1.0, 1.0])
    }

    fn ex31_x0() -> PartialIsometry {
        let x = ComplexMatrix::from_real_row_major(3, &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, -1.0, 0.0]).unwrap();
        validate_partial_isometry(&x, AUTO).unwrap()
    }

    fn iso(m: ComplexMatrix) -> PartialIsometry {
        validate_partial_isometry(&m, AUTO).unwrap()
    }

    fn e(n: usize, i: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(n);
        v[i] = Complex64::new(1.0, 0.0);
        v
    }

    /// `‖ξ − phase·e‖` minimised over unit phases.
    fn dist_up_to_phase(xi: &DVector<Complex64>, target: &DVector<Complex64>) -> f64 {
        let inner = target.dotc(xi);
        let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { Complex64::new(1.0, 0.0) };
        (xi - target * phase).norm()
    }

    #[test]
    fn polar_distance_examples() {
        assert_abs_diff_eq!(dist_to_polar_factor(&ex31_t(4.0), AUTO), 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(dist_to_polar_factor(&ComplexMatrix::from_diagonal(&[1.0, 0.5]), AUTO), 0.5);
        assert_abs_diff_eq!(dist_to_polar_factor(&ComplexMatrix::identity(3), AUTO), 0.0, epsilon = 1e-14);
        assert_eq!(dist_to_polar_factor(&ComplexMatrix::zeros(2), AUTO), 0.0);
    }

    #[test]
    fn wu_lower_bound_examples() {
        // sup over {4,1,1} of |λ − 1|.
        let bound = wu_lower_bound(&ex31_t(4.0), ex31_x0().matrix(), true).unwrap();
        assert_abs_diff_eq!(bound, 3.0, epsilon = 1e-13);

        let t = ComplexMatrix::from_real_row_major(2, &[0.4, -1.0, 2.0, 0.1]).unwrap();
        assert_abs_diff_eq!(wu_lower_bound(&t, &t, false).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(wu_lower_bound(&t, &t, true).unwrap(), 0.0, epsilon = 1e-14);

        // max(min(1.2, 0.2), min(0.3, 0.7)).
        let t = ComplexMatrix::from_diagonal(&[1.2, 0.3]);
        let bound = wu_lower_bound(&t, &ComplexMatrix::identity(2), false).unwrap();
        assert_abs_diff_eq!(bound, 0.3, epsilon = 1e-15);
    }

    #[test]
    fn wu_distance_examples() {
        assert_abs_diff_eq!(wu_distance_to_isometries(&ComplexMatrix::from_diagonal(&[1.2, 0.3]), AUTO), 0.3);
        assert_abs_diff_eq!(wu_distance_to_isometries(&ComplexMatrix::from_diagonal(&[1.0, 0.5]), AUTO), 0.5);
        assert_abs_diff_eq!(wu_distance_to_isometries(&ComplexMatrix::identity(4), AUTO), 0.0, epsilon = 1e-14);
        assert_eq!(wu_distance_to_isometries(&ComplexMatrix::zeros(2), AUTO), 0.0);
    }

    #[test]
    fn wu_minimizer_examples() {
        let t = ComplexMatrix::from_diagonal(&[1.2, 0.3]);
        let x0 = wu_minimizer(&t, AUTO).unwrap();
        assert_abs_diff_eq!(op_norm(&(x0.matrix() - &ComplexMatrix::from_diagonal(&[1.0, 0.0]))), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(op_norm(&(&t - x0.matrix())), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(dist_to_polar_factor(&t, AUTO), 0.7, epsilon = 1e-15);
        let pair = initial_index(&polar_decompose(&t, AUTO).factor, &x0, AUTO).unwrap();
        assert_eq!(pair.j, 1);

        let t = ComplexMatrix::from_diagonal(&[1.0, 0.4, 0.2]);
        let x0 = wu_minimizer(&t, AUTO).unwrap();
        assert_eq!(x0.rank(), 1);
        assert_abs_diff_eq!(op_norm(&(x0.matrix() - &ComplexMatrix::from_diagonal(&[1.0, 0.0, 0.0]))), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(op_norm(&(&t - x0.matrix())), 0.4, epsilon = 1e-15);

        let x0 = wu_minimizer(&ex31_t(4.0), AUTO).unwrap();
        assert_abs_diff_eq!(op_norm(&(x0.matrix() - &ComplexMatrix::identity(3))), 0.0, epsilon = 1e-14);

        assert_eq!(wu_minimizer(&ComplexMatrix::zeros(2), AUTO).unwrap_err(), Error::UndefinedGamma);
    }

    #[test]
    fn half_is_kept_by_phi() {
        let x0 = wu_minimizer(&ComplexMatrix::from_diagonal(&[1.0, 0.5]), AUTO).unwrap();
        assert_eq!(x0.rank(), 2);
        let x0 = wu_minimizer(&ComplexMatrix::from_diagonal(&[1.0, 0.5 - 1e-13]), AUTO).unwrap();
        assert_eq!(x0.rank(), 2);
        let x0 = wu_minimizer(&ComplexMatrix::from_diagonal(&[1.0, 0.5 - 1e-9]), AUTO).unwrap();
        assert_eq!(x0.rank(), 1);
    }

    #[test]
    fn global_best_examples() {
        assert!(is_polar_factor_global_best(&ex31_t(4.0), AUTO).unwrap());
        assert!(is_polar_factor_global_best(&ComplexMatrix::from_diagonal(&[1.0, 0.5]), AUTO).unwrap());
        assert!(!is_polar_factor_global_best(&ComplexMatrix::from_diagonal(&[1.2, 0.3]), AUTO).unwrap());
        // ‖T‖ − 1 = 1 − γ exactly.
        assert!(is_polar_factor_global_best(&ComplexMatrix::from_diagonal(&[1.75, 0.25]), AUTO).unwrap());
        assert_eq!(is_polar_factor_global_best(&ComplexMatrix::zeros(2), AUTO), Err(Error::UndefinedGamma));
    }

    #[test]
    fn condition_i_examples() {
        let t = ex31_t(4.0);
        let check = check_minimizer_condition_i(&t, &ex31_x0(), AUTO).unwrap();
        assert!(check.holds);
        assert!(dist_up_to_phase(check.witness.as_ref().unwrap(), &e(3, 0)) < 1e-10);

        let check = check_minimizer_condition_i(&t, &iso(ComplexMatrix::identity(3)), AUTO).unwrap();
        assert!(check.holds);
        assert!(dist_up_to_phase(check.witness.as_ref().unwrap(), &e(3, 0)) < 1e-10);

        // T − I − 0.7 I = diag(−0.5, −1.4).
        let t = ComplexMatrix::from_diagonal(&[1.2, 0.3]);
        let check = check_minimizer_condition_i(&t, &iso(ComplexMatrix::identity(2)), AUTO).unwrap();
        assert!(!check.holds);
        assert!(check.witness.is_none());
        assert_abs_diff_eq!(check.residual.unwrap(), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn condition_ii_examples() {
        let t = ComplexMatrix::from_diagonal(&[1.2, 0.3]);
        let check = check_minimizer_condition_ii(&t, &iso(ComplexMatrix::identity(2)), AUTO).unwrap();
        assert!(check.holds);
        assert!(dist_up_to_phase(check.witness.as_ref().unwrap(), &e(2, 1)) < 1e-10);

        // Each equation is solvable on its own, but not jointly.
        let t = ComplexMatrix::from_diagonal(&[1.0, 0.5]);
        let x0 = iso(ComplexMatrix::from_diagonal(&[-1.0, 1.0]));
        let check = check_minimizer_condition_ii(&t, &x0, AUTO).unwrap();
        assert!(!check.holds);
        assert!(check.equation_residuals[0] <= check.tol);
        assert!(check.equation_residuals[1] <= check.tol);
        assert!(check.residual.unwrap() > 0.1);

        let check = check_minimizer_condition_ii(&ex31_t(4.0), &iso(ComplexMatrix::identity(3)), AUTO).unwrap();
        assert!(!check.holds);
        assert!(check.residual.unwrap() > 1e-3);
    }

    #[test]
    fn conditions_reject_infeasible_candidates() {
        let t = ComplexMatrix::from_diagonal(&[1.2, 0.3]);
        let x0 = wu_minimizer(&t, AUTO).unwrap();
        assert_eq!(check_minimizer_condition_i(&t, &x0, AUTO).unwrap_err(), Error::IndexConstraint { j: 1 });
        assert_eq!(check_minimizer_condition_ii(&t, &x0, AUTO).unwrap_err(), Error::IndexConstraint { j: 1 });
        assert_eq!(is_constrained_minimizer(&t, &x0, AUTO).unwrap_err(), Error::IndexConstraint { j: 1 });
    }

    #[test]
    fn constrained_minimizer_examples() {
        assert!(is_constrained_minimizer(&ex31_t(4.0), &ex31_x0(), AUTO).unwrap());

        let t = ComplexMatrix::from_diagonal(&[1.0, 0.5]);
        let x0 = iso(ComplexMatrix::from_diagonal(&[-1.0, 1.0]));
        let verdict = characterize(&t, &x0, AUTO).unwrap();
        assert!(!verdict.is_minimizer());
        assert_abs_diff_eq!(verdict.distance, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(verdict.polar_distance, 0.5, epsilon = 1e-15);

        let t = ComplexMatrix::from_real_row_major(3, &[0.2, 1.0, 0.0, -0.5, 0.3, 0.1, 0.0, 0.0, 0.0]).unwrap();
        let v = polar_decompose(&t, AUTO).factor;
        assert!(is_constrained_minimizer(&t, &v, AUTO).unwrap());
    }

    #[test]
    fn zero_operator_verdict() {
        let t = ComplexMatrix::zeros(2);
        assert!(is_constrained_minimizer(&t, &PartialIsometry::zero(2), AUTO).unwrap());
        assert!(!is_constrained_minimizer(&t, &iso(ComplexMatrix::identity(2)), AUTO).unwrap());
    }

    #[test]
    fn triangle_examples() {
        let d = &ex31_t(4.0) - ex31_x0().matrix();
        assert!(triangle_equality_with_isometry(&ex31_x0(), &d).unwrap());
        let id = iso(ComplexMatrix::identity(2));
        assert!(triangle_equality_with_isometry(&id, &ComplexMatrix::identity(2)).unwrap());
        let d = ComplexMatrix::from_diagonal(&[0.2, -0.7]);
        assert!(!triangle_equality_with_isometry(&id, &d).unwrap());
        assert_abs_diff_eq!(op_norm(&(id.matrix() + &d)), 1.2, epsilon = 1e-15);
        assert_eq!(
            triangle_equality_with_isometry(&PartialIsometry::zero(2), &d).unwrap_err(),
            Error::ZeroIsometry
        );
    }

    #[test]
    fn analyze_examples() {
        let r = analyze(&ex31_t(4.0), AUTO).unwrap();
        assert_abs_diff_eq!(r.polar.dist_to_polar, 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.wu_distance, 3.0, epsilon = 1e-13);
        assert!(r.polar_is_global_best);
        assert_eq!(r.triangle_equality, Some(true));
        assert!(r.condition_i.as_ref().unwrap().holds);

        let r = analyze(&ComplexMatrix::from_diagonal(&[1.2, 0.3]), AUTO).unwrap();
        assert_abs_diff_eq!(r.polar.dist_to_polar, 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(r.wu_distance, 0.3, epsilon = 1e-15);
        assert!(!r.polar_is_global_best);
        let x0 = r.wu_minimizer.as_ref().unwrap();
        assert_abs_diff_eq!(op_norm(&(x0.matrix() - &ComplexMatrix::from_diagonal(&[1.0, 0.0]))), 0.0, epsilon = 1e-15);
        assert_eq!(r.wu_minimizer_index, Some(1));
        assert!(r.condition_ii.as_ref().unwrap().holds);

        let r = analyze(&ComplexMatrix::zeros(3), AUTO).unwrap();
        assert_eq!(r.polar.dist_to_polar, 0.0);
        assert_eq!(r.wu_distance, 0.0);
        assert!(r.wu_minimizer.is_none());
    }
}

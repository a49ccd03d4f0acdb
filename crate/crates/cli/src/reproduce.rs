//! Two worked examples with known answers.
//!
//! `ex31`: `T = diag(a, 1, 1)` with `a > 3`. Both `I` and the candidate
//! `X0 = 1 ⊕ [[0, −1], [−1, 0]]` sit at the minimal distance `a − 1`, since
//! the inner block of `T − X0` has norm 2 < a − 1.
//!
//! `remark33`: `T = diag(1, 1/2)` with `X0 = diag(−1, 1)`. Each equation of
//! condition (ii) has a solution on its own (`e1` and `e2`), but there is no
//! common one, and `X0` is far from optimal.

use isonear_core::linalg::op_norm;
use isonear_core::nearness::{analyze, characterize};
use isonear_core::polar::{initial_index, validate_partial_isometry};
use isonear_core::{Complex64, ComplexMatrix, Tolerance};

use crate::error::CliError;
use crate::matrix_file::MatrixFile;
use crate::report::{AnalysisRecord, AssertionRecord, ReproduceRecord};

pub const EQUALITY_TOL: f64 = 1e-10;
pub const SIGN_FLIP_TOL: f64 = 1e-12;

fn close(name: &str, observed: f64, expected: f64, tol: f64) -> AssertionRecord {
    AssertionRecord {
        name: name.to_owned(),
        expected: Some(expected),
        observed: Some(observed),
        tolerance: Some(tol),
        pass: (observed - expected).abs() <= tol,
    }
}

fn at_most(name: &str, observed: f64, bound: f64) -> AssertionRecord {
    AssertionRecord { name: name.to_owned(), expected: None, observed: Some(observed), tolerance: Some(bound), pass: observed <= bound }
}

fn above(name: &str, observed: f64, bound: f64) -> AssertionRecord {
    AssertionRecord { name: name.to_owned(), expected: None, observed: Some(observed), tolerance: Some(bound), pass: observed > bound }
}

fn flag(name: &str, pass: bool) -> AssertionRecord {
    AssertionRecord { name: name.to_owned(), expected: None, observed: None, tolerance: None, pass }
}

/// `‖M e_i‖`.
fn column_norm(m: &ComplexMatrix, i: usize) -> f64 {
    (0..m.dim()).map(|r| m.get(r, i).norm_sqr()).sum::<f64>().sqrt()
}

fn block(m: &ComplexMatrix, start: usize, size: usize) -> ComplexMatrix {
    let entries: Vec<Complex64> =
        (0..size).flat_map(|i| (0..size).map(move |j| (i, j))).map(|(i, j)| m.get(start + i, start + j)).collect();
    ComplexMatrix::from_row_major(size, &entries).expect("finite block")
}

fn finish(
    name: &str,
    a: Option<f64>,
    t: &ComplexMatrix,
    x0: &ComplexMatrix,
    mut assertions: Vec<AssertionRecord>,
    expect_minimizer: bool,
) -> Result<ReproduceRecord, CliError> {
    let auto = Tolerance::auto();
    let x0 = validate_partial_isometry(x0, auto)?;
    let verdict = characterize(t, &x0, auto)?;
    let report = analyze(t, auto)?;
    let condition_ii = verdict.condition_ii.as_ref().expect("nonzero operator");
    if expect_minimizer {
        assertions.push(flag("X0 satisfies condition (i)", verdict.condition_i.holds));
        assertions.push(flag("X0 classified as constrained minimizer", verdict.is_minimizer()));
    } else {
        assertions.push(flag("condition (ii) fails for X0", !condition_ii.holds));
        for (i, &r) in condition_ii.equation_residuals.iter().enumerate() {
            assertions.push(at_most(&format!("equation {} of (ii) solvable alone", i + 1), r, condition_ii.tol));
        }
        assertions.push(above("joint system of (ii) infeasible", condition_ii.residual.unwrap_or(0.0), 0.1));
        assertions.push(flag("condition (i) fails for X0", !verdict.condition_i.holds));
        assertions.push(flag("X0 classified as non-minimizer", !verdict.is_minimizer()));
    }
    let passed = assertions.iter().all(|a| a.pass);
    Ok(ReproduceRecord {
        name: name.to_owned(),
        a,
        operator: MatrixFile::from_matrix(t),
        candidate: MatrixFile::from_matrix(x0.matrix()),
        analysis: AnalysisRecord::from_report(&report, None),
        candidate_condition_i: (&verdict.condition_i).into(),
        candidate_condition_ii: condition_ii.into(),
        assertions,
        passed,
    })
}

pub fn block_swap_operator(a: f64) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[a, 1.0, 1.0])
}

pub fn block_swap_candidate() -> ComplexMatrix {
    ComplexMatrix::from_real_row_major(3, &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, -1.0, 0.0]).expect("finite")
}

/// `diag(a, 1, 1)` against `1 ⊕ [[0, −1], [−1, 0]]`; requires `a > 3`.
pub fn reproduce_block_swap(a: f64) -> Result<ReproduceRecord, CliError> {
    if !(a.is_finite() && a > 3.0) {
        return Err(CliError::usage(format!(
            "ex31 requires a > 3 (so that a - 1 exceeds the inner block norm 2); got a = {a}"
        )));
    }
    let auto = Tolerance::auto();
    let t = block_swap_operator(a);
    let x0 = block_swap_candidate();
    let identity = ComplexMatrix::identity(3);
    let v = isonear_core::polar::polar_decompose(&t, auto).factor;
    let diff = &t - &x0;
    let x0_iso = validate_partial_isometry(&x0, auto)?;
    let assertions = vec![
        close("polar factor V = I", op_norm(&(v.matrix() - &identity)), 0.0, EQUALITY_TOL),
        close("||T - I|| = a - 1", op_norm(&(&t - &identity)), a - 1.0, EQUALITY_TOL),
        close("||T - X0|| = a - 1", op_norm(&diff), a - 1.0, EQUALITY_TOL),
        close("inner 2x2 block of T - X0 has norm 2", op_norm(&block(&diff, 1, 2)), 2.0, EQUALITY_TOL),
        close("||T - X0|| = max(a - 1, 2)", op_norm(&diff), (a - 1.0).max(2.0), EQUALITY_TOL),
        above("X0 != I", op_norm(&(&x0 - &identity)), 0.5),
        close("j(V*V, X0*X0) = 0", initial_index(&v, &x0_iso, auto)?.j as f64, 0.0, 0.0),
    ];
    finish("ex31", Some(a), &t, &x0, assertions, true)
}

pub fn sign_flip_operator() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[1.0, 0.5])
}

pub fn sign_flip_candidate() -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&[-1.0, 1.0])
}

/// `diag(1, 1/2)` against `diag(−1, 1)`.
pub fn reproduce_sign_flip() -> Result<ReproduceRecord, CliError> {
    let auto = Tolerance::auto();
    let t = sign_flip_operator();
    let x0 = sign_flip_candidate();
    let v = isonear_core::polar::polar_decompose(&t, auto).factor;
    let diff = &t - &x0;
    let c = op_norm(&diff);
    let gamma = isonear_core::polar::reduced_min_modulus(&t, auto)?;
    let first = &diff + &x0.scale(c);
    let second = &t - &x0.scale(gamma);
    let assertions = vec![
        close("||T - V|| = 1/2", op_norm(&(&t - v.matrix())), 0.5, SIGN_FLIP_TOL),
        close("||T - X0|| = 2", c, 2.0, SIGN_FLIP_TOL),
        at_most("((T - X0) + ||T - X0|| X0) e1 = 0", column_norm(&first, 0), SIGN_FLIP_TOL),
        at_most("(T - gamma X0) e2 = 0", column_norm(&second, 1), SIGN_FLIP_TOL),
    ];
    finish("remark33", None, &t, &x0, assertions, false)
}

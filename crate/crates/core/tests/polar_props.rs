mod common;

use common::{hermitian_eigenvalues, operator, unit_vector};
use isonear_core::linalg::{kernel_basis, op_norm, rank_tol, range_basis};
use isonear_core::oracle::random::{haar_frame, operator_with_singular_values};
use isonear_core::oracle::{random_partial_isometry, trial_rng};
use isonear_core::polar::{
    apply_to_modulus, index_j, initial_index, polar_decompose, reduced_min_modulus, validate_partial_isometry,
};
use isonear_core::{ComplexMatrix, Error, Tolerance};
use proptest::prelude::*;
use rand::Rng;

fn projector(n: usize, k: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let b = haar_frame(n, k, rng);
    ComplexMatrix::from_dmatrix(&b * b.adjoint()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polar_factorization_is_consistent((t, _) in operator(8)) {
        let auto = Tolerance::auto();
        let p = polar_decompose(&t, auto);
        let scale = 1.0 + op_norm(&t);
        // T = V|T| with |T|² = T*T.
        prop_assert!(op_norm(&(&(p.factor.matrix() * &p.modulus) - &t)) <= 1e-11 * scale);
        let m = p.modulus.as_dmatrix();
        let g = t.as_dmatrix().adjoint() * t.as_dmatrix();
        prop_assert!((m * m - &g).norm() <= 1e-11 * scale * scale);
        prop_assert!((m - m.adjoint()).norm() <= 1e-12 * scale);
        prop_assert!(hermitian_eigenvalues(m).iter().all(|&e| e >= -1e-12 * scale));
        // V is a partial isometry with ker V = ker T.
        prop_assert!(validate_partial_isometry(p.factor.matrix(), auto).is_ok());
        prop_assert_eq!(p.factor.rank(), rank_tol(&t, auto));
        let kernel = kernel_basis(&t, auto);
        if kernel.dim() > 0 {
            prop_assert!((p.factor.matrix().as_dmatrix() * kernel.basis()).norm() <= 1e-12);
        }
        // The stored distance is the direct one.
        prop_assert!((p.dist_to_polar - op_norm(&(&t - p.factor.matrix()))).abs() <= 1e-14 * scale);
    }

    #[test]
    fn adjoint_has_adjoint_polar_factor((t, _) in operator(8)) {
        let auto = Tolerance::auto();
        let p = polar_decompose(&t, auto);
        let q = polar_decompose(&t.adjoint(), auto);
        // T* = W Σ U*, so its factor is V* whenever the rank decision agrees.
        prop_assert_eq!(p.factor.rank(), q.factor.rank());
        prop_assert!(op_norm(&(q.factor.matrix() - &p.factor.matrix().adjoint())) <= 1e-8);
        prop_assert!((p.dist_to_polar - q.dist_to_polar).abs() <= 1e-12 * (1.0 + p.norm));
        prop_assert_eq!(p.gamma.is_some(), q.gamma.is_some());
    }

    #[test]
    fn index_is_rank_difference_and_antisymmetric(n in 1usize..=10, k1 in 0usize..=10, k2 in 0usize..=10, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 0);
        let p = projector(n, k1.min(n), &mut rng);
        let q = projector(n, k2.min(n), &mut rng);
        let auto = Tolerance::auto();
        let pq = index_j(&p, &q, auto).unwrap();
        let qp = index_j(&q, &p, auto).unwrap();
        prop_assert_eq!(pq.j, k1.min(n) as i64 - k2.min(n) as i64);
        prop_assert_eq!(pq.j, pq.rank_difference());
        prop_assert_eq!(qp.j, -pq.j);
    }

    #[test]
    fn gamma_matches_construction_and_sampling(n in 1usize..=6, seed in any::<u64>(), log in proptest::collection::vec(-3.0f64..1.0, 6), rank in 1usize..=6) {
        let mut rng = trial_rng(seed, 0);
        let rank = rank.min(n);
        let mut sigma: Vec<f64> = (0..n).map(|i| if i < rank { 10f64.powf(log[i]) } else { 0.0 }).collect();
        sigma.sort_by(|a, b| b.total_cmp(a));
        let t = operator_with_singular_values(&sigma, &mut rng);
        let gamma = reduced_min_modulus(&t, Tolerance::auto()).unwrap();
        let expected = sigma[rank - 1];
        prop_assert!((gamma - expected).abs() <= 1e-12 * (1.0 + sigma[0]));
        // Eigenvalue route: γ² is the rank-th eigenvalue of T*T.
        let tm = t.as_dmatrix();
        let ev = hermitian_eigenvalues(&(tm.adjoint() * tm));
        let by_eig = ev[rank - 1].max(0.0).sqrt();
        prop_assert!((gamma - by_eig).abs() <= 1e-8 * (1.0 + sigma[0]) / gamma.max(1e-3));
        // Sampling route: ‖Tx‖ >= γ on the unit sphere of ker(T)^⊥.
        let co = range_basis(&t.adjoint(), Tolerance::auto());
        let b = co.basis();
        for _ in 0..200 {
            let x = b * unit_vector(b.ncols(), &mut rng);
            prop_assert!((tm * x).norm() >= gamma * (1.0 - 1e-10));
        }
    }

    #[test]
    fn random_partial_isometries_validate(n in 1usize..=8, k in 0usize..=8, seed in any::<u64>()) {
        let k = k.min(n);
        let x = random_partial_isometry(n, k, &mut trial_rng(seed, 0)).unwrap();
        let m = x.matrix().as_dmatrix();
        prop_assert!((m * m.adjoint() * m - m).norm() <= 1e-12);
        prop_assert_eq!(x.rank(), k);
        let v = validate_partial_isometry(x.matrix(), Tolerance::auto()).unwrap();
        prop_assert_eq!(v.rank(), k);
        prop_assert_eq!(initial_index(&x, &x, Tolerance::auto()).unwrap().j, 0);
    }

    #[test]
    fn functional_calculus_of_identity_and_square((t, _) in operator(6)) {
        let auto = Tolerance::auto();
        let p = polar_decompose(&t, auto);
        let scale = 1.0 + p.norm;
        // V·id(|T|) = T and V·1 = V on the support.
        let t_again = apply_to_modulus(&t, |s| s, auto).unwrap();
        prop_assert!(op_norm(&(&t_again - &t)) <= 1e-11 * scale);
        let v_again = apply_to_modulus(&t, |_| 1.0, auto).unwrap();
        prop_assert!(op_norm(&(&v_again - p.factor.matrix())) <= 1e-12);
    }
}

#[test]
fn gamma_undefined_for_zero() {
    assert_eq!(reduced_min_modulus(&ComplexMatrix::zeros(3), Tolerance::auto()), Err(Error::UndefinedGamma));
}

#[test]
fn index_rejects_non_projections() {
    let p = ComplexMatrix::from_real_row_major(2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
    let q = ComplexMatrix::identity(2);
    assert!(matches!(index_j(&p, &q, Tolerance::auto()), Err(Error::NotProjection { .. })));
    let scaled = ComplexMatrix::identity(2).scale(2.0);
    assert!(matches!(index_j(&q, &scaled, Tolerance::auto()), Err(Error::NotProjection { .. })));
}

#[test]
fn non_partial_isometry_rejected() {
    let a = ComplexMatrix::from_diagonal(&[1.0, 0.5]);
    assert!(matches!(validate_partial_isometry(&a, Tolerance::auto()), Err(Error::NotPartialIsometry { .. })));
}

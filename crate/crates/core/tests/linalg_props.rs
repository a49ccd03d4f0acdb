mod common;

use common::{hermitian_eigenvalues, operator, unit_vector};
use isonear_core::linalg::{
    herm_eig_max, kernel_basis, op_norm, range_basis, subspace_intersection_dim, svd, Subspace,
};
use isonear_core::oracle::random::haar_frame;
use isonear_core::oracle::trial_rng;
use isonear_core::{Complex64, ComplexMatrix, Tolerance};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn identity_error(m: &DMatrix<Complex64>) -> f64 {
    (m.adjoint() * m - DMatrix::identity(m.ncols(), m.ncols())).norm()
}

/// Intersection dimension from principal angles: cosines equal to one.
fn intersection_by_angles(a: &Subspace, b: &Subspace) -> usize {
    if a.dim() == 0 || b.dim() == 0 {
        return 0;
    }
    let c = a.basis().adjoint() * b.basis();
    let gram = &c * c.adjoint();
    hermitian_eigenvalues(&gram).iter().filter(|&&e| e > 1.0 - 1e-8).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn svd_reconstructs_with_unitary_factors((t, _) in operator(8)) {
        let f = svd(&t, Tolerance::auto());
        let scale = 1.0 + op_norm(&t);
        prop_assert!(op_norm(&(&f.reconstruct() - &t)) <= 1e-12 * scale);
        prop_assert!(identity_error(&f.left) <= 1e-12);
        prop_assert!(identity_error(&f.right_adjoint) <= 1e-12);
        prop_assert!(f.singulars.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(f.singulars.iter().all(|&s| s >= 0.0));
    }

    #[test]
    fn op_norm_matches_gram_eigenvalue_and_bounds((t, mut rng) in operator(8)) {
        let m = t.as_dmatrix();
        let norm = op_norm(&t);
        let top = hermitian_eigenvalues(&(m.adjoint() * m))[0].max(0.0).sqrt();
        prop_assert!((norm - top).abs() <= 1e-9 * (1.0 + norm));
        prop_assert!(norm <= m.norm() * (1.0 + 1e-14));
        for _ in 0..20 {
            let x = unit_vector(t.dim(), &mut rng);
            prop_assert!((m * x).norm() <= norm * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn rank_plus_nullity((t, _) in operator(8)) {
        let tol = Tolerance::auto();
        let range = range_basis(&t, tol);
        let kernel = kernel_basis(&t, tol);
        prop_assert_eq!(range.dim() + kernel.dim(), t.dim());
        let k = kernel.basis();
        if kernel.dim() > 0 {
            let f = svd(&t, tol);
            prop_assert!((t.as_dmatrix() * k).norm() <= f.tol * 10.0 * kernel.dim() as f64);
        }
    }

    #[test]
    fn intersection_is_symmetric_and_matches_angles(n in 1usize..=8, k1 in 0usize..=8, k2 in 0usize..=8, shared in 0usize..=8, seed in any::<u64>()) {
        let k1 = k1.min(n);
        let k2 = k2.min(n);
        let shared = shared.min(k1).min(k2);
        let mut rng = trial_rng(seed, 0);
        // Two subspaces built around a common `shared`-dimensional core.
        let frame = haar_frame(n, n, &mut rng);
        let core = frame.columns(0, shared).into_owned();
        let mut build = |k: usize| {
            let extra = haar_frame(n, k - shared, &mut rng);
            let mut cols = DMatrix::zeros(n, k);
            cols.columns_mut(0, shared).copy_from(&core);
            cols.columns_mut(shared, k - shared).copy_from(&extra);
            range_basis(&ComplexMatrix::from_dmatrix({
                let mut sq = DMatrix::zeros(n, n);
                sq.columns_mut(0, k).copy_from(&cols);
                sq
            }).unwrap(), Tolerance::auto())
        };
        let a = build(k1);
        let b = build(k2);
        let tol = Tolerance::auto();
        let ab = subspace_intersection_dim(&a, &b, tol).unwrap();
        prop_assert_eq!(ab, subspace_intersection_dim(&b, &a, tol).unwrap());
        prop_assert_eq!(ab, intersection_by_angles(&a, &b));
        // Generic position beyond the shared core.
        prop_assert_eq!(ab, shared.max((k1 + k2).saturating_sub(n)));
    }

    #[test]
    fn herm_eig_max_matches_eigensolver((t, mut rng) in operator(8)) {
        let m = t.as_dmatrix();
        let h = (m + m.adjoint()).map(|z| z * 0.5);
        let expected = hermitian_eigenvalues(&h)[0];
        let got = herm_eig_max(&t);
        prop_assert!((got - expected).abs() <= 1e-10 * (1.0 + m.norm()));
        for _ in 0..20 {
            let x = unit_vector(t.dim(), &mut rng);
            prop_assert!(x.dotc(&(m * &x)).re <= got + 1e-12 * (1.0 + m.norm()));
        }
    }
}

#[test]
fn three_and_two_dimensional_subspaces_of_c4_meet_in_a_line() {
    let mut rng = trial_rng(17, 0);
    for _ in 0..50 {
        let a = Subspace::from_orthonormal(haar_frame(4, 3, &mut rng)).unwrap();
        let b = Subspace::from_orthonormal(haar_frame(4, 2, &mut rng)).unwrap();
        assert_eq!(subspace_intersection_dim(&a, &b, Tolerance::auto()).unwrap(), 1);
        assert_eq!(intersection_by_angles(&a, &b), 1);
    }
}

#[test]
fn subspaces_of_different_ambient_dimension_are_rejected() {
    let a = Subspace::from_orthonormal(DMatrix::identity(3, 1)).unwrap();
    let b = Subspace::from_orthonormal(DMatrix::identity(4, 1)).unwrap();
    assert!(subspace_intersection_dim(&a, &b, Tolerance::auto()).is_err());
}

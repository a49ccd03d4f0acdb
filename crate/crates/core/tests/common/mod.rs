#![allow(dead_code)]

use isonear_core::oracle::{random_operator, trial_rng, Ensemble};
use isonear_core::{ComplexMatrix, Complex64};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `(T, rng)` drawn from any ensemble with `1 <= n <= max_n`.
pub fn operator(max_n: usize) -> impl Strategy<Value = (ComplexMatrix, ChaCha8Rng)> {
    (1..=max_n, 0..Ensemble::ALL.len(), any::<u64>()).prop_map(|(n, e, seed)| {
        let mut rng = trial_rng(seed, 0);
        let t = random_operator(n, Ensemble::ALL[e], &mut rng);
        (t, rng)
    })
}

pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<Complex64> {
    let v = DVector::from_fn(n, |_, _| isonear_core::oracle::random::complex_normal(rng));
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Eigenvalues of a Hermitian matrix through nalgebra's eigensolver.
pub fn hermitian_eigenvalues(h: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

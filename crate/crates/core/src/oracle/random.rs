//! Random operators, Haar frames and partial isometries.

use alloc::vec::Vec;
use core::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::polar::PartialIsometry;

/// Independent, reproducible stream for one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Standard complex normal: `E|z|^2 = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Orthonormalises the columns of a full-column-rank `n x k` matrix.
///
/// Column phases are fixed so that `R` has a positive diagonal; for a
/// Gaussian input the result is Haar distributed on the Stiefel manifold.
pub fn orthonormalize(m: DMatrix<Complex64>) -> DMatrix<Complex64> {
    let k = m.ncols();
    if k == 0 {
        return m;
    }
    let qr = m.qr();
    let r_diag: Vec<Complex64> = {
        let r = qr.r();
        (0..k).map(|i| r[(i, i)]).collect()
    };
    let mut q = qr.q();
    for (j, d) in r_diag.into_iter().enumerate() {
        let modulus = d.norm();
        if modulus > 0.0 {
            let phase = d / modulus;
            q.column_mut(j).apply(|x| *x *= phase);
        }
    }
    q
}

/// Haar-distributed `n x k` frame with orthonormal columns.
pub fn haar_frame<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> DMatrix<Complex64> {
    orthonormalize(gaussian_matrix(n, k, rng))
}

pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    haar_frame(n, n, rng)
}

/// `X = U1 U2*` with independent Haar frames `U1, U2` of width `k`.
pub fn random_partial_isometry<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<PartialIsometry> {
    if n == 0 || k > n {
        return Err(Error::RankOutOfRange { n, k });
    }
    let left = haar_frame(n, k, rng);
    let right = haar_frame(n, k, rng);
    Ok(PartialIsometry::from_trusted(ComplexMatrix::from_dmatrix_unchecked(left * right.adjoint()), k))
}

/// Random unitary close to the identity: `exp(i eps H)` with `‖H‖ = 1`.
///
/// `‖I − exp(i eps H)‖ <= eps`.
pub fn unitary_near_identity<R: Rng + ?Sized>(n: usize, eps: f64, rng: &mut R) -> DMatrix<Complex64> {
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let g = gaussian_matrix(n, n, rng);
    let h = (&g + g.adjoint()).map(|z| z * 0.5);
    let eig = h.symmetric_eigen();
    let scale = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let phases = DVector::from_iterator(
        n,
        eig.eigenvalues.iter().map(|&l| {
            let angle = eps * l / scale;
            Complex64::new(libm::cos(angle), libm::sin(angle))
        }),
    );
    let vecs = &eig.eigenvectors;
    let mut scaled = vecs.clone();
    for (j, p) in phases.iter().enumerate() {
        scaled.column_mut(j).apply(|x| *x *= *p);
    }
    scaled * vecs.adjoint()
}

/// Operator families drawn by the campaigns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ensemble {
    /// i.i.d. standard complex normal entries.
    Gaussian,
    /// Positive diagonal, log-uniform in `[1e-3, 10]`.
    Diagonal,
    /// `A diag(σ) B*` with rank drawn from `[0, n)`.
    RankDeficient,
    /// Spectra within `1e-3` of `γ = 1/2` or of `‖T‖ − 1 = 1 − γ`.
    NearBoundary,
}

impl Ensemble {
    pub const ALL: [Ensemble; 4] = [Ensemble::Gaussian, Ensemble::Diagonal, Ensemble::RankDeficient, Ensemble::NearBoundary];

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Gaussian => "gaussian",
            Ensemble::Diagonal => "diagonal",
            Ensemble::RankDeficient => "rankDeficient",
            Ensemble::NearBoundary => "nearBoundary",
        }
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ensemble::ALL
            .into_iter()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidConfig("unknown ensemble"))
    }
}

pub const LOG_UNIFORM_RANGE: (f64, f64) = (1e-3, 10.0);
pub const BOUNDARY_WIDTH: f64 = 1e-3;

fn log_uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    libm::exp(libm::log(lo) + u * (libm::log(hi) - libm::log(lo)))
}

fn uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    lo + u * (hi - lo)
}

/// `A diag(singulars) B*` with independent Haar unitaries `A`, `B`.
pub fn operator_with_singular_values<R: Rng + ?Sized>(singulars: &[f64], rng: &mut R) -> ComplexMatrix {
    let n = singulars.len();
    let mut a = haar_unitary(n, rng);
    let b = haar_unitary(n, rng);
    for (j, &s) in singulars.iter().enumerate() {
        a.column_mut(j).scale_mut(s);
    }
    ComplexMatrix::from_dmatrix_unchecked(a * b.adjoint())
}

/// Draws one operator of dimension `n` from `ensemble`.
pub fn random_operator<R: Rng + ?Sized>(n: usize, ensemble: Ensemble, rng: &mut R) -> ComplexMatrix {
    assert!(n > 0, "dimension must be positive");
    let (lo, hi) = LOG_UNIFORM_RANGE;
    match ensemble {
        Ensemble::Gaussian => ComplexMatrix::from_dmatrix_unchecked(gaussian_matrix(n, n, rng)),
        Ensemble::Diagonal => {
            let d: Vec<f64> = (0..n).map(|_| log_uniform(lo, hi, rng)).collect();
            ComplexMatrix::from_diagonal(&d)
        }
        Ensemble::RankDeficient => {
            let rank = rng.random_range(0..n);
            let s: Vec<f64> = (0..n).map(|i| if i < rank { log_uniform(lo, hi, rng) } else { 0.0 }).collect();
            operator_with_singular_values(&s, rng)
        }
        Ensemble::NearBoundary => operator_with_singular_values(&near_boundary_spectrum(n, rng), rng),
    }
}

/// Spectrum straddling one of the two boundaries of the global-best
/// condition. For `n >= 2` one value always sits within `1e-3` of 1/2.
pub fn near_boundary_spectrum<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let jitter = |rng: &mut R| uniform(-BOUNDARY_WIDTH, BOUNDARY_WIDTH, rng);
    if n == 1 {
        let centre = if rng.random::<bool>() { 0.5 } else { 1.0 };
        return alloc::vec![centre + jitter(rng)];
    }
    let mut s = Vec::with_capacity(n);
    if n == 2 || rng.random::<bool>() {
        // γ near 1/2, either with a free top value or with ‖T‖ − 1 near 1 − γ.
        let gamma = 0.5 + jitter(rng);
        let top = if rng.random::<bool>() { 2.0 - gamma + jitter(rng) } else { uniform(gamma, 3.0, rng) };
        s.push(top);
        for _ in 2..n {
            s.push(uniform(gamma, top, rng));
        }
        s.push(gamma);
    } else {
        // ‖T‖ − 1 near 1 − γ with γ < 1/2, plus an interior value near 1/2.
        let gamma = uniform(0.02, 0.45, rng);
        let top = 2.0 - gamma + jitter(rng);
        s.push(top);
        s.push(0.5 + jitter(rng));
        for _ in 3..n {
            s.push(uniform(gamma, top, rng));
        }
        s.push(gamma);
    }
    s
}

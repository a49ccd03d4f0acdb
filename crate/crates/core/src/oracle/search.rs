//! Randomized search for the partial isometry closest to `T`.
//!
//! Candidates are kept as pairs of orthonormal frames `(L, R)` with
//! `X = L R*`, so every candidate is a partial isometry of rank `k` by
//! construction. The returned value is always an upper bound on the true
//! constrained minimum.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, svd, ComplexMatrix, Tolerance};
use crate::nearness::{wu_keeps, wu_minimizer_from_factors};
use crate::polar::PartialIsometry;

use super::random::{gaussian_matrix, haar_frame, orthonormalize};

/// Where the winning candidate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateSource {
    Random,
    PolarFactor,
    WuMinimizer,
    SignFlip,
    SpectralTruncation,
    UnitaryCompletion,
    Refined,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Number of random partial isometries.
    pub budget: usize,
    /// Accept-if-better perturbation steps applied to the best candidate.
    pub refine_steps: usize,
    /// Include the polar-factor-derived candidates.
    pub structured: bool,
    pub initial_step: f64,
    pub final_step: f64,
}

impl SearchOptions {
    pub fn with_budget(budget: usize) -> Self {
        Self { budget, ..Self::default() }
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { budget: 1000, refine_steps: 200, structured: true, initial_step: 0.2, final_step: 1e-4 }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: PartialIsometry,
    /// `‖T − best‖`.
    pub value: f64,
    pub source: CandidateSource,
    /// Candidates evaluated, including refinement steps.
    pub evaluated: usize,
}

#[derive(Clone)]
struct Frame {
    left: DMatrix<Complex64>,
    right: DMatrix<Complex64>,
}

impl Frame {
    fn rank(&self) -> usize {
        self.left.ncols()
    }

    fn matrix(&self) -> DMatrix<Complex64> {
        &self.left * self.right.adjoint()
    }
}

type Scored = (Frame, f64, CandidateSource);

struct Evaluator<'a> {
    t: &'a DMatrix<Complex64>,
    /// Best candidate of each rank.
    best: Vec<Option<Scored>>,
    evaluated: usize,
}

impl Evaluator<'_> {
    fn value(&mut self, frame: &Frame) -> f64 {
        self.evaluated += 1;
        spectral_norm(&(self.t - frame.matrix()))
    }

    fn offer(&mut self, frame: Frame, source: CandidateSource) {
        let value = self.value(&frame);
        let slot = &mut self.best[frame.rank()];
        if slot.as_ref().is_none_or(|(_, best, _)| value < *best) {
            *slot = Some((frame, value, source));
        }
    }
}

fn columns(m: &DMatrix<Complex64>, idx: &[usize]) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(m.nrows(), idx.len());
    for (dst, &src) in idx.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    out
}

/// Best candidate over random, structured and locally refined partial
/// isometries of rank at least `min_rank`. The best candidate of each rank is
/// refined.
///
/// In finite dimension `j(V*V, X*X) <= 0` is `rank X >= rank V`, so passing
/// `min_rank = rank V` searches the constrained set.
pub fn search_best_partial_isometry<R: Rng + ?Sized>(
    t: &ComplexMatrix,
    min_rank: usize,
    budget: usize,
    rng: &mut R,
) -> Result<(PartialIsometry, f64)> {
    let outcome = search_with_options(t, min_rank, &SearchOptions::with_budget(budget), rng)?;
    Ok((outcome.best, outcome.value))
}

pub fn search_with_options<R: Rng + ?Sized>(
    t: &ComplexMatrix,
    min_rank: usize,
    options: &SearchOptions,
    rng: &mut R,
) -> Result<SearchOutcome> {
    let n = t.dim();
    if min_rank > n {
        return Err(Error::RankOutOfRange { n, k: min_rank });
    }
    if options.budget == 0 {
        return Err(Error::InvalidConfig("search budget must be at least 1"));
    }
    let mut eval = Evaluator { t: t.as_dmatrix(), best: alloc::vec![None; n + 1], evaluated: 0 };

    for _ in 0..options.budget {
        let k = rng.random_range(min_rank..=n);
        let frame = Frame { left: haar_frame(n, k, rng), right: haar_frame(n, k, rng) };
        eval.offer(frame, CandidateSource::Random);
    }

    if options.structured {
        structured_candidates(t, min_rank, &mut eval, rng);
    }

    // Refinement cannot change the rank, so the best sample of every rank is
    // refined and the overall winner kept.
    let leaders: Vec<Scored> = core::mem::take(&mut eval.best).into_iter().flatten().collect();
    let (frame, value, source) = leaders
        .into_iter()
        .map(|(frame, value, source)| refine(&mut eval, frame, value, source, options, rng))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("budget >= 1");
    let best = PartialIsometry::from_trusted(ComplexMatrix::from_dmatrix_unchecked(frame.matrix()), frame.rank());
    Ok(SearchOutcome { best, value, source, evaluated: eval.evaluated })
}

const MAX_ENUMERATED_RANK: usize = 8;
const SAMPLED_PATTERNS: usize = 256;

fn structured_candidates<R: Rng + ?Sized>(t: &ComplexMatrix, min_rank: usize, eval: &mut Evaluator<'_>, rng: &mut R) {
    let factors = svd(t, Tolerance::auto());
    let n = factors.dim();
    let rank = factors.rank();
    let u = &factors.left;
    let w = factors.right_adjoint.adjoint();
    let frame_of = |idx: &[usize]| Frame { left: columns(u, idx), right: columns(&w, idx) };
    let top: Vec<usize> = (0..rank).collect();

    if rank >= min_rank {
        eval.offer(frame_of(&top), CandidateSource::PolarFactor);
    }

    if let Ok(wu) = wu_minimizer_from_factors(&factors) {
        if wu.rank() >= min_rank {
            let kept: Vec<usize> = (0..rank).filter(|&i| wu_keeps(factors.singulars[i], factors.tol)).collect();
            debug_assert_eq!(kept.len(), wu.rank());
            eval.offer(frame_of(&kept), CandidateSource::WuMinimizer);
        }
    }

    // V with column signs flipped, and V restricted to spectral subsets of |T|.
    if rank >= min_rank && rank > 0 {
        for pattern in sign_patterns(rank, rng) {
            let mut frame = frame_of(&top);
            for (j, flip) in pattern.iter().enumerate() {
                if *flip {
                    frame.left.column_mut(j).neg_mut();
                }
            }
            eval.offer(frame, CandidateSource::SignFlip);
        }
    }
    for subset in index_subsets(rank, rng) {
        if subset.len() >= min_rank && subset.len() < rank {
            eval.offer(frame_of(&subset), CandidateSource::SpectralTruncation);
        }
    }

    // Unitary completions through ker T.
    if rank < n {
        let all: Vec<usize> = (0..n).collect();
        eval.offer(frame_of(&all), CandidateSource::UnitaryCompletion);
        let mut twisted = frame_of(&all);
        let kernel = twisted.right.columns(rank, n - rank).into_owned();
        let mix = haar_frame(n - rank, n - rank, rng);
        twisted.right.columns_mut(rank, n - rank).copy_from(&(kernel * mix));
        eval.offer(twisted, CandidateSource::UnitaryCompletion);
    }
}

fn sign_patterns<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> Vec<Vec<bool>> {
    if rank <= MAX_ENUMERATED_RANK {
        (1u32..(1 << rank)).map(|mask| (0..rank).map(|j| mask & (1 << j) != 0).collect()).collect()
    } else {
        (0..SAMPLED_PATTERNS).map(|_| (0..rank).map(|_| rng.random::<bool>()).collect()).collect()
    }
}

fn index_subsets<R: Rng + ?Sized>(rank: usize, rng: &mut R) -> Vec<Vec<usize>> {
    if rank <= MAX_ENUMERATED_RANK {
        (0u32..(1 << rank)).map(|mask| (0..rank).filter(|&j| mask & (1 << j) != 0).collect()).collect()
    } else {
        let mut out: Vec<Vec<usize>> = (0..=rank).map(|k| (0..k).collect()).collect();
        let mut idx: Vec<usize> = (0..rank).collect();
        for _ in 0..SAMPLED_PATTERNS {
            idx.shuffle(rng);
            let k = rng.random_range(0..=rank);
            let mut subset = idx[..k].to_vec();
            subset.sort_unstable();
            out.push(subset);
        }
        out
    }
}

fn perturb<R: Rng + ?Sized>(frame: &Frame, step: f64, rng: &mut R) -> Frame {
    let (n, k) = frame.left.shape();
    let left = orthonormalize(&frame.left + gaussian_matrix(n, k, rng) * Complex64::new(step, 0.0));
    let right = orthonormalize(&frame.right + gaussian_matrix(n, k, rng) * Complex64::new(step, 0.0));
    Frame { left, right }
}

fn refine<R: Rng + ?Sized>(
    eval: &mut Evaluator<'_>,
    mut frame: Frame,
    mut value: f64,
    mut source: CandidateSource,
    options: &SearchOptions,
    rng: &mut R,
) -> (Frame, f64, CandidateSource) {
    let steps = options.refine_steps;
    if frame.rank() == 0 || steps == 0 {
        return (frame, value, source);
    }
    let ratio = options.final_step / options.initial_step;
    for i in 0..steps {
        let fraction = if steps > 1 { i as f64 / (steps - 1) as f64 } else { 0.0 };
        let step = options.initial_step * libm::pow(ratio, fraction);
        let candidate = perturb(&frame, step, rng);
        let candidate_value = eval.value(&candidate);
        if candidate_value < value {
            frame = candidate;
            value = candidate_value;
            source = CandidateSource::Refined;
        }
    }
    (frame, value, source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nearness::wu_distance_to_isometries;
    use crate::oracle::random::trial_rng;
    use crate::polar::validate_partial_isometry;

    #[test]
    fn constrained_search_finds_polar_value() {
        let t = ComplexMatrix::from_diagonal(&[4.0, 1.0, 1.0]);
        let (x, value) = search_best_partial_isometry(&t, 3, 500, &mut trial_rng(5, 0)).unwrap();
        assert!((value - 3.0).abs() < 1e-6, "{value}");
        assert!(x.rank() >= 3);
    }

    #[test]
    fn partial_isometry_input_is_found_exactly() {
        let x = ComplexMatrix::from_real_row_major(3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        let (best, value) = search_best_partial_isometry(&x, 2, 50, &mut trial_rng(6, 0)).unwrap();
        assert!(value < 1e-14);
        assert!(validate_partial_isometry(best.matrix(), Tolerance::auto()).is_ok());
    }

    #[test]
    fn pure_random_search_approaches_wu_distance() {
        // Unstructured search with refinement converges on a small example.
        let t = ComplexMatrix::from_diagonal(&[1.2, 0.3]);
        let options = SearchOptions { budget: 10_000, structured: false, refine_steps: 2000, ..SearchOptions::default() };
        let out = search_with_options(&t, 0, &options, &mut trial_rng(9, 0)).unwrap();
        let target = wu_distance_to_isometries(&t, Tolerance::auto());
        assert!(out.value >= target - 1e-12);
        assert!(out.value - target < 1e-3, "{} vs {}", out.value, target);
    }

    #[test]
    fn rejects_bad_arguments() {
        let t = ComplexMatrix::identity(2);
        let mut rng = trial_rng(0, 0);
        assert_eq!(search_best_partial_isometry(&t, 3, 10, &mut rng).unwrap_err(), Error::RankOutOfRange { n: 2, k: 3 });
        assert!(search_best_partial_isometry(&t, 0, 0, &mut rng).is_err());
    }
}

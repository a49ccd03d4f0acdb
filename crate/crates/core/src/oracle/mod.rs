//! Randomized verification campaigns.
//!
//! Each campaign draws one operator per trial from its own counter-based
//! stream `(seed, trial)`, so trials are independent and may run in any
//! order or in parallel. [`aggregate`] merges trial records by index, which
//! makes the final [`CampaignResult`] independent of scheduling.

pub mod random;
pub mod search;

use alloc::vec::Vec;
use core::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{op_norm, ComplexMatrix, SvdFactors, Tolerance};
use crate::nearness::{characterize, is_polar_factor_global_best, wu_distance_to_isometries, wu_minimizer};
use crate::polar::{initial_index, polar_decompose, PartialIsometry, PolarData};

pub use random::{random_operator, random_partial_isometry, trial_rng, Ensemble};
pub use search::{search_best_partial_isometry, search_with_options, SearchOptions, SearchOutcome};

use random::unitary_near_identity;

/// Violation tolerance for checks that compare closed-form values.
pub const FORMULA_TOL: f64 = 1e-8;
/// Default violation tolerance for search-based checks.
pub const SEARCH_TOL: f64 = 1e-6;
/// Ground-truth threshold separating minimizers from non-minimizers.
pub const MINIMIZER_GAP: f64 = 1e-6;
/// Non-minimizers enter the characterization corpus only above this gap.
pub const NON_MINIMIZER_GAP: f64 = 1e-3;
pub const DEFAULT_REFINE_STEPS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `‖T − V‖ = min { ‖T − X‖ : j(V*V, X*X) <= 0 }`, and the final-projection form.
    Principal,
    /// The polar factor is a global best iff `‖T‖ − 1 >= 1 − γ` or `γ >= 1/2`.
    Dichotomy,
    /// Conditions (i)/(ii) recognise exactly the constrained minimizers.
    Characterization,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::Principal, Theorem::Dichotomy, Theorem::Characterization];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Principal => "principal",
            Theorem::Dichotomy => "dichotomy",
            Theorem::Characterization => "characterization",
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL.into_iter().find(|t| t.name() == s).ok_or(Error::InvalidConfig("unknown theorem"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignConfig {
    pub n: usize,
    pub trials: usize,
    /// Random candidates per search.
    pub search_budget: usize,
    pub seed: u64,
    /// Violation tolerance for search-based checks.
    pub tol: f64,
    pub ensemble: Ensemble,
    pub refine_steps: usize,
}

impl CampaignConfig {
    pub fn new(n: usize, trials: usize, search_budget: usize, seed: u64) -> Self {
        Self {
            n,
            trials,
            search_budget,
            seed,
            tol: SEARCH_TOL,
            ensemble: Ensemble::Gaussian,
            refine_steps: DEFAULT_REFINE_STEPS,
        }
    }

    pub fn with_ensemble(mut self, ensemble: Ensemble) -> Self {
        self.ensemble = ensemble;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1"));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1"));
        }
        if self.search_budget == 0 {
            return Err(Error::InvalidConfig("search budget must be at least 1"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidConfig("tol must be positive and finite"));
        }
        Ok(())
    }

    fn search_options(&self) -> SearchOptions {
        SearchOptions { budget: self.search_budget, refine_steps: self.refine_steps, ..SearchOptions::default() }
    }
}

/// One failed check.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub trial: usize,
    pub check: &'static str,
    pub operator: ComplexMatrix,
    pub candidate: ComplexMatrix,
    /// Signed margin of the failed inequality; negative means violated.
    pub gap: f64,
}

/// Output of one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub violations: Vec<Violation>,
    /// Smallest margin seen across the trial's checks.
    pub min_gap: f64,
    pub checks: usize,
}

impl TrialRecord {
    fn new(trial: usize) -> Self {
        Self { trial, violations: Vec::new(), min_gap: f64::INFINITY, checks: 0 }
    }

    /// Records a margin; a value below `-tol` is a violation.
    fn check(&mut self, name: &'static str, margin: f64, tol: f64, operator: &ComplexMatrix, candidate: &ComplexMatrix) {
        self.checks += 1;
        self.min_gap = self.min_gap.min(margin);
        if margin < -tol || margin.is_nan() {
            self.fail(name, margin, operator, candidate);
        }
    }

    fn fail(&mut self, name: &'static str, gap: f64, operator: &ComplexMatrix, candidate: &ComplexMatrix) {
        self.violations.push(Violation {
            trial: self.trial,
            check: name,
            operator: operator.clone(),
            candidate: candidate.clone(),
            gap,
        });
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CampaignResult {
    pub violations: Vec<Violation>,
    /// Smallest margin observed; `+inf` when no margin was recorded.
    pub min_gap_observed: f64,
    pub trials_run: usize,
    pub checks_run: usize,
}

impl CampaignResult {
    pub fn upheld(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Order-independent merge of trial records.
pub fn aggregate(mut records: Vec<TrialRecord>) -> CampaignResult {
    records.sort_by_key(|r| r.trial);
    let mut result =
        CampaignResult { violations: Vec::new(), min_gap_observed: f64::INFINITY, trials_run: 0, checks_run: 0 };
    for record in records {
        result.trials_run += 1;
        result.checks_run += record.checks;
        result.min_gap_observed = result.min_gap_observed.min(record.min_gap);
        result.violations.extend(record.violations);
    }
    result
}

/// Runs trial `trial` of the campaign for `theorem`.
pub fn run_trial(theorem: Theorem, config: &CampaignConfig, trial: usize) -> TrialRecord {
    let mut rng = trial_rng(config.seed, trial as u64);
    let t = random_operator(config.n, config.ensemble, &mut rng);
    match theorem {
        Theorem::Principal => principal_trial(&t, config, trial, &mut rng),
        Theorem::Dichotomy => dichotomy_trial(&t, config, trial, &mut rng),
        Theorem::Characterization => characterization_trial(&t, config, trial, &mut rng),
    }
}

/// Sequential campaign.
pub fn verify(theorem: Theorem, config: &CampaignConfig) -> Result<CampaignResult> {
    config.validate()?;
    Ok(aggregate((0..config.trials).map(|i| run_trial(theorem, config, i)).collect()))
}

pub fn verify_principal_theorem(config: &CampaignConfig) -> Result<CampaignResult> {
    verify(Theorem::Principal, config)
}

pub fn verify_spectral_dichotomy(config: &CampaignConfig) -> Result<CampaignResult> {
    verify(Theorem::Dichotomy, config)
}

pub fn verify_characterization(config: &CampaignConfig) -> Result<CampaignResult> {
    verify(Theorem::Characterization, config)
}

/// Checks one operator against the constrained minimum, in both the
/// initial-projection form (on `T`) and the final-projection form (on `T*`).
pub fn principal_trial<R: Rng + ?Sized>(t: &ComplexMatrix, config: &CampaignConfig, trial: usize, rng: &mut R) -> TrialRecord {
    let mut record = TrialRecord::new(trial);
    let options = config.search_options();
    for (name, op) in [("principal.initial", t.clone()), ("principal.final", t.adjoint())] {
        let polar = polar_decompose(&op, Tolerance::auto());
        let min_rank = polar.factor.rank();
        let outcome = search_with_options(&op, min_rank, &options, rng).expect("min_rank <= n and budget >= 1");
        record.check(name, outcome.value - polar.dist_to_polar, config.tol, &op, outcome.best.matrix());
        feasibility_check(&mut record, &polar, &outcome.best, &op);
    }
    record
}

fn feasibility_check(record: &mut TrialRecord, polar: &PolarData, x: &PartialIsometry, op: &ComplexMatrix) {
    record.checks += 1;
    match initial_index(&polar.factor, x, Tolerance::auto()) {
        Ok(pair) if pair.j <= 0 => {}
        Ok(pair) => record.fail("principal.feasibility", -(pair.j as f64), op, x.matrix()),
        Err(_) => record.fail("principal.feasibility", f64::NAN, op, x.matrix()),
    }
}

/// Global-best regime: no partial isometry beats `‖T − V‖`. Otherwise the
/// Wu minimizer improves on `V` by exactly `(1 − γ) − i0` and has
/// `j(V*V, X0*X0) = rank V − rank X0 > 0`. In both regimes the search must
/// not beat `i0`.
pub fn dichotomy_trial<R: Rng + ?Sized>(t: &ComplexMatrix, config: &CampaignConfig, trial: usize, rng: &mut R) -> TrialRecord {
    let mut record = TrialRecord::new(trial);
    let auto = Tolerance::auto();
    let polar = polar_decompose(t, auto);
    let Some(gamma) = polar.gamma else {
        return record;
    };
    let i0 = wu_distance_to_isometries(t, auto);
    let holds = is_polar_factor_global_best(t, auto).expect("nonzero operator");
    let outcome = search_with_options(t, 0, &config.search_options(), rng).expect("budget >= 1");
    record.check("dichotomy.wu_bound", outcome.value - i0, config.tol, t, outcome.best.matrix());

    if holds {
        record.check("dichotomy.polar_is_best", outcome.value - polar.dist_to_polar, config.tol, t, outcome.best.matrix());
        return record;
    }

    let x0 = wu_minimizer(t, auto).expect("nonzero operator");
    let predicted = (1.0 - gamma) - i0;
    let observed = polar.dist_to_polar - op_norm(&(t - x0.matrix()));
    record.check("dichotomy.strict_improvement", predicted, FORMULA_TOL, t, x0.matrix());
    record.check("dichotomy.improvement", FORMULA_TOL - (observed - predicted).abs(), 0.0, t, x0.matrix());
    record.checks += 1;
    match initial_index(&polar.factor, &x0, auto) {
        Ok(pair) if pair.j > 0 && pair.j == polar.factor.rank() as i64 - x0.rank() as i64 => {}
        Ok(pair) => record.fail("dichotomy.index", pair.j as f64, t, x0.matrix()),
        Err(_) => record.fail("dichotomy.index", f64::NAN, t, x0.matrix()),
    }
    record
}

/// How a corpus entry was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    PolarFactor,
    WuMinimizer,
    /// `U (1 ⊕ K) W*`, the norm-attaining direction kept, when `‖T − V‖ = ‖T‖ − 1`.
    NormBlock,
    /// `U (K ⊕ 1 ⊕ 0) W*`, the `γ` direction kept, when `‖T − V‖ = 1 − γ`.
    GammaBlock,
    RandomFeasible,
    SignFlip,
    Perturbed,
}

impl CorpusKind {
    pub fn is_known_minimizer(self) -> bool {
        matches!(self, CorpusKind::PolarFactor | CorpusKind::WuMinimizer | CorpusKind::NormBlock | CorpusKind::GammaBlock)
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub kind: CorpusKind,
    pub candidate: PartialIsometry,
    /// `‖T − X‖ − ‖T − V‖`.
    pub gap: f64,
}

impl CorpusEntry {
    /// Distance-based ground truth.
    pub fn truth(&self) -> bool {
        self.gap.abs() <= MINIMIZER_GAP
    }
}

/// `U D W*` for a diagonal `D` given as a vector of complex weights.
fn diag_in_basis(factors: &SvdFactors, d: &[Complex64]) -> DMatrix<Complex64> {
    let mut left = factors.left.clone();
    for (j, z) in d.iter().enumerate() {
        left.column_mut(j).apply(|x| *x *= *z);
    }
    left * &factors.right_adjoint
}

/// A unit phase `e^{iθ}` with `|s − e^{iθ}| <= radius`, drawn uniformly in
/// the admissible arc. Requires `|s − 1| <= radius`, and `radius >= 1` when
/// `s = 0`.
fn admissible_phase<R: Rng + ?Sized>(s: f64, radius: f64, rng: &mut R) -> Complex64 {
    let cos_min = if s > 0.0 { (s * s + 1.0 - radius * radius) / (2.0 * s) } else { -1.0 };
    let theta_max = if cos_min <= -1.0 { core::f64::consts::PI } else { libm::acos(cos_min.min(1.0)) };
    let theta = (2.0 * rng.random::<f64>() - 1.0) * theta_max;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// A minimizer `U (1 ⊕ D K) W*` that keeps direction `fixed` and twists the
/// directions in `others` (plus the kernel if `kernel` is set) by unit phases
/// `D` and a rotation `K` near the identity, keeping every error entry within
/// `radius`.
fn block_minimizer<R: Rng + ?Sized>(
    factors: &SvdFactors,
    fixed: usize,
    others: &[usize],
    kernel: bool,
    radius: f64,
    rng: &mut R,
) -> (DMatrix<Complex64>, usize) {
    let n = factors.dim();
    let rank = factors.rank();
    // 90% of the radius goes to the phases, the rest to the rotation.
    let inner = 0.9 * radius;
    let rotation = radius - inner;
    let mut d = alloc::vec![Complex64::new(0.0, 0.0); n];
    d[fixed] = Complex64::new(1.0, 0.0);
    let mut twisted: Vec<usize> = Vec::new();
    for &i in others {
        let s = factors.singulars[i];
        if (s - 1.0).abs() < inner {
            d[i] = admissible_phase(s, inner, rng);
            twisted.push(i);
        } else {
            d[i] = Complex64::new(1.0, 0.0);
        }
    }
    let kernel = kernel && inner >= 1.0;
    if kernel {
        for (i, z) in d.iter_mut().enumerate().skip(rank) {
            *z = admissible_phase(0.0, inner, rng);
            twisted.push(i);
        }
    }
    let mut w = factors.right_adjoint.adjoint();
    if twisted.len() > 1 {
        let k = unitary_near_identity(twisted.len(), rotation, rng);
        let rotated = columns(&w, &twisted) * k.adjoint();
        for (dst, &src) in twisted.iter().enumerate() {
            w.set_column(src, &rotated.column(dst));
        }
    }
    let mut left = factors.left.clone();
    for (j, z) in d.iter().enumerate() {
        left.column_mut(j).apply(|x| *x *= *z);
    }
    (left * w.adjoint(), if kernel { n } else { rank })
}

fn columns(m: &DMatrix<Complex64>, idx: &[usize]) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(m.nrows(), idx.len());
    for (dst, &src) in idx.iter().enumerate() {
        out.set_column(dst, &m.column(src));
    }
    out
}

/// Known minimizers and non-minimizers for `T`, each with its distance gap.
pub fn characterization_corpus<R: Rng + ?Sized>(t: &ComplexMatrix, rng: &mut R) -> Vec<CorpusEntry> {
    let auto = Tolerance::auto();
    let polar = polar_decompose(t, auto);
    let factors = &polar.svd;
    let n = factors.dim();
    let rank = factors.rank();
    let Some(gamma) = polar.gamma else {
        return Vec::new();
    };
    let polar_distance = polar.dist_to_polar;
    let mut out = Vec::new();
    let mut push = |kind: CorpusKind, m: DMatrix<Complex64>, k: usize| {
        let candidate = PartialIsometry::from_trusted(ComplexMatrix::from_dmatrix_unchecked(m), k);
        let gap = op_norm(&(t - candidate.matrix())) - polar_distance;
        out.push(CorpusEntry { kind, candidate, gap });
    };

    push(CorpusKind::PolarFactor, polar.factor.matrix().as_dmatrix().clone(), rank);
    if is_polar_factor_global_best(t, auto).unwrap_or(false) {
        if let Ok(wu) = wu_minimizer(t, auto) {
            if wu.rank() >= rank {
                let k = wu.rank();
                push(CorpusKind::WuMinimizer, wu.into_matrix().into_dmatrix(), k);
            }
        }
    }

    let norm_regime = polar.norm - 1.0 >= 1.0 - gamma;
    let gamma_regime = 1.0 - gamma >= polar.norm - 1.0;
    for _ in 0..2 {
        if norm_regime {
            let radius = polar.norm - 1.0;
            let others: Vec<usize> = (1..rank).collect();
            let with_kernel = rank < n && rng.random::<bool>();
            let (m, k) = block_minimizer(factors, 0, &others, with_kernel, radius, rng);
            push(CorpusKind::NormBlock, m, k);
        }
        if gamma_regime {
            let radius = 1.0 - gamma;
            let others: Vec<usize> = (0..rank - 1).collect();
            let (m, k) = block_minimizer(factors, rank - 1, &others, false, radius, rng);
            push(CorpusKind::GammaBlock, m, k);
        }
    }

    // Non-minimizers: random feasible partial isometries, sign flips of V,
    // and large rotations of V.
    for _ in 0..3 {
        let k = rng.random_range(rank..=n);
        let x = random::random_partial_isometry(n, k, rng).expect("k <= n");
        push(CorpusKind::RandomFeasible, x.into_matrix().into_dmatrix(), k);
    }
    let flip = rng.random_range(0..rank);
    let mut d: Vec<Complex64> = (0..n).map(|i| Complex64::new(if i < rank { 1.0 } else { 0.0 }, 0.0)).collect();
    d[flip] = Complex64::new(-1.0, 0.0);
    push(CorpusKind::SignFlip, diag_in_basis(factors, &d), rank);

    let left = factors.left.columns(0, rank).into_owned();
    let right = factors.right_adjoint.adjoint().columns(0, rank).into_owned();
    let turn = unitary_near_identity(rank, 0.5 + rng.random::<f64>(), rng);
    push(CorpusKind::Perturbed, left * turn * right.adjoint(), rank);

    out.retain(|e| e.kind.is_known_minimizer() || e.gap > NON_MINIMIZER_GAP);
    out
}

/// Classifier agreement on the corpus; constructed minimizers must also be
/// minimizers by distance.
pub fn characterization_trial<R: Rng + ?Sized>(
    t: &ComplexMatrix,
    _config: &CampaignConfig,
    trial: usize,
    rng: &mut R,
) -> TrialRecord {
    let mut record = TrialRecord::new(trial);
    for entry in characterization_corpus(t, rng) {
        record.checks += 1;
        record.min_gap = record.min_gap.min(entry.gap);
        let truth = entry.truth();
        if entry.kind.is_known_minimizer() && !truth {
            record.fail("characterization.construction", entry.gap, t, entry.candidate.matrix());
            continue;
        }
        match characterize(t, &entry.candidate, Tolerance::auto()) {
            Ok(verdict) if verdict.is_minimizer() == truth => {}
            Ok(_) => record.fail("characterization.classifier", entry.gap, t, entry.candidate.matrix()),
            Err(_) => record.fail("characterization.feasibility", entry.gap, t, entry.candidate.matrix()),
        }
    }
    record
}

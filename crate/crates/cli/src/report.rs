//! Machine-readable reports.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which is
//! enough to round-trip any `f64` exactly. Values that may be non-finite are
//! stored as `Option<f64>` and written as `null`.

use std::io;

use isonear_core::nearness::{ConditionCheck, NearnessReport};
use isonear_core::oracle::{CampaignConfig, CampaignResult, Theorem};
use isonear_core::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::CliError;
use crate::matrix_file::{sha256_hex, MatrixFile};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool: ToolInfo,
    /// `sha256:<hex>` of the input file, or of the canonical JSON of the
    /// generated input for `reproduce` and `verify`.
    pub input_digest: String,
    pub body: ReportBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
// One report per process; boxing would only complicate matching.
#[allow(clippy::large_enum_variant)]
pub enum ReportBody {
    Analyze(AnalysisRecord),
    Reproduce(ReproduceRecord),
    Verify(CampaignRecord),
}

impl ReportFile {
    pub fn new(input_digest: String, body: ReportBody) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: ToolInfo { name: TOOL_NAME.to_owned(), version: TOOL_VERSION.to_owned() },
            input_digest,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseFormatter::default());
        self.serialize(&mut ser).expect("reports serialize to memory");
        out.push(b'\n');
        String::from_utf8(out).expect("serde_json writes UTF-8")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::input(format!("report {}: {}", e.path(), e.inner())))
    }
}

pub fn digest_of(bytes: &[u8]) -> String {
    format!("sha256:{}", sha256_hex(bytes))
}

/// Digest of a value's canonical (compact, precise) JSON.
pub fn digest_of_value<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PreciseCompact);
    value.serialize(&mut ser).expect("values serialize to memory");
    digest_of(&out)
}

fn write_precise<W: ?Sized + io::Write>(writer: &mut W, value: f64) -> io::Result<()> {
    if value.is_finite() {
        write!(writer, "{value:.16e}")
    } else {
        writer.write_all(b"null")
    }
}

/// Pretty layout with lossless floats.
#[derive(Default)]
struct PreciseFormatter(PrettyFormatter<'static>);

impl Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_precise(writer, value)
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        write_precise(writer, value.into())
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

struct PreciseCompact;

impl Formatter for PreciseCompact {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write_precise(writer, value)
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub holds: bool,
    /// Smallest singular value of the restricted system.
    pub residual: Option<f64>,
    /// Unit vector solving the system, when it holds.
    pub witness: Option<Vec<[f64; 2]>>,
    /// Per-equation residuals, each solved on its own.
    pub equation_residuals: Vec<f64>,
    pub tol: f64,
}

impl From<&ConditionCheck> for ConditionRecord {
    fn from(c: &ConditionCheck) -> Self {
        Self {
            holds: c.holds,
            residual: c.residual,
            witness: c.witness.as_ref().map(|w| w.iter().map(|z: &Complex64| [z.re, z.im]).collect()),
            equation_residuals: c.equation_residuals.clone(),
            tol: c.tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimizerRecord {
    pub matrix: MatrixFile,
    pub rank: usize,
    /// `‖T − X0‖`.
    pub distance: f64,
    /// `j(V*V, X0*X0)`.
    pub index_j: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub budget: usize,
    pub seed: u64,
    /// Best `‖T − X‖` found with `rank X >= rank V`.
    pub constrained_value: f64,
    pub constrained_rank: usize,
    /// Best `‖T − X‖` found over all ranks.
    pub unconstrained_value: f64,
    pub unconstrained_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub n: usize,
    /// The `--tol` value, or `None` for the automatic tolerance.
    pub tol_requested: Option<f64>,
    pub tol_resolved: f64,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub norm: f64,
    pub gamma: Option<f64>,
    pub polar_factor: MatrixFile,
    pub modulus: MatrixFile,
    /// `‖T − V‖`, computed directly.
    pub dist_to_polar: f64,
    /// `max(1 − γ, ‖T‖ − 1)`.
    pub dist_formula: f64,
    pub wu_distance: f64,
    pub polar_is_global_best: bool,
    pub wu_minimizer: Option<MinimizerRecord>,
    /// Conditions for the pair `(T, V)`.
    pub condition_i: Option<ConditionRecord>,
    pub condition_ii: Option<ConditionRecord>,
    pub triangle_equality: Option<bool>,
    pub criterion: String,
    pub search: Option<SearchRecord>,
}

impl AnalysisRecord {
    pub fn from_report(report: &NearnessReport, requested: Option<f64>) -> Self {
        let polar = &report.polar;
        let wu_minimizer = match (&report.wu_minimizer, report.wu_minimizer_distance, report.wu_minimizer_index) {
            (Some(x), Some(distance), Some(index_j)) => Some(MinimizerRecord {
                matrix: MatrixFile::from_matrix(x.matrix()),
                rank: x.rank(),
                distance,
                index_j,
            }),
            _ => None,
        };
        Self {
            n: polar.factor.dim(),
            tol_requested: requested,
            tol_resolved: polar.svd.tol,
            singular_values: polar.svd.singulars.clone(),
            rank: polar.factor.rank(),
            norm: polar.norm,
            gamma: polar.gamma,
            polar_factor: MatrixFile::from_matrix(polar.factor.matrix()),
            modulus: MatrixFile::from_matrix(&polar.modulus),
            dist_to_polar: polar.dist_to_polar,
            dist_formula: report.dist_formula,
            wu_distance: report.wu_distance,
            polar_is_global_best: report.polar_is_global_best,
            wu_minimizer,
            condition_i: report.condition_i.as_ref().map(ConditionRecord::from),
            condition_ii: report.condition_ii.as_ref().map(ConditionRecord::from),
            triangle_equality: report.triangle_equality,
            criterion: report.criterion.to_owned(),
            search: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssertionRecord {
    pub name: String,
    pub expected: Option<f64>,
    pub observed: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReproduceRecord {
    pub name: String,
    /// Parameter `a` for the `diag(a, 1, 1)` example.
    pub a: Option<f64>,
    pub operator: MatrixFile,
    pub candidate: MatrixFile,
    pub analysis: AnalysisRecord,
    pub candidate_condition_i: ConditionRecord,
    pub candidate_condition_ii: ConditionRecord,
    pub assertions: Vec<AssertionRecord>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub n: usize,
    pub trials: usize,
    pub search_budget: usize,
    pub seed: u64,
    pub tol: f64,
    pub ensemble: String,
    pub refine_steps: usize,
}

impl From<&CampaignConfig> for ConfigRecord {
    fn from(c: &CampaignConfig) -> Self {
        Self {
            n: c.n,
            trials: c.trials,
            search_budget: c.search_budget,
            seed: c.seed,
            tol: c.tol,
            ensemble: c.ensemble.name().to_owned(),
            refine_steps: c.refine_steps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub trial: usize,
    pub check: String,
    pub gap: Option<f64>,
    pub operator: MatrixFile,
    pub candidate: MatrixFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignRecord {
    pub theorem: String,
    pub config: ConfigRecord,
    pub jobs: usize,
    pub trials_run: usize,
    pub checks_run: usize,
    /// `None` when no margin was recorded.
    pub min_gap_observed: Option<f64>,
    pub violations: Vec<ViolationRecord>,
    pub upheld: bool,
    pub elapsed_seconds: f64,
}

impl CampaignRecord {
    pub fn new(theorem: Theorem, config: &CampaignConfig, result: &CampaignResult, jobs: usize, elapsed: f64) -> Self {
        Self {
            theorem: theorem.name().to_owned(),
            config: config.into(),
            jobs,
            trials_run: result.trials_run,
            checks_run: result.checks_run,
            min_gap_observed: finite(result.min_gap_observed),
            violations: result
                .violations
                .iter()
                .map(|v| ViolationRecord {
                    trial: v.trial,
                    check: v.check.to_owned(),
                    gap: finite(v.gap),
                    operator: MatrixFile::from_matrix(&v.operator),
                    candidate: MatrixFile::from_matrix(&v.candidate),
                })
                .collect(),
            upheld: result.upheld(),
            elapsed_seconds: elapsed,
        }
    }
}

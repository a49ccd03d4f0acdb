use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use isonear_core::nearness::analyze;
use isonear_core::oracle::{search_best_partial_isometry, trial_rng, CampaignConfig, Ensemble, Theorem, SEARCH_TOL};
use isonear_core::{ComplexMatrix, Tolerance};

use crate::error::CliError;
use crate::matrix_file::MatrixFile;
use crate::report::{
    digest_of, digest_of_value, AnalysisRecord, CampaignRecord, ConfigRecord, ReportBody, ReportFile, SearchRecord,
};
use crate::reproduce::{reproduce_block_swap, reproduce_sign_flip};
use crate::runner::run_campaign;

#[derive(Parser, Debug)]
#[command(name = "isonear", version, about = "Nearest partial isometries in the spectral norm")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// diag(a, 1, 1): a second minimizer besides the identity.
    Ex31,
    /// diag(1, 1/2) against diag(-1, 1): each equation alone is solvable.
    Remark33,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Principal,
    Dichotomy,
    Characterization,
}

impl From<TheoremArg> for Theorem {
    fn from(t: TheoremArg) -> Self {
        match t {
            TheoremArg::Principal => Theorem::Principal,
            TheoremArg::Dichotomy => Theorem::Dichotomy,
            TheoremArg::Characterization => Theorem::Characterization,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze one matrix file.
    Analyze {
        path: PathBuf,
        /// Rank tolerance; defaults to max(n * eps * ||T||, 1e-12).
        #[arg(long)]
        tol: Option<f64>,
        /// Random candidates for the search evidence; 0 disables the search.
        #[arg(long, default_value_t = 1000)]
        search_budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rebuild a worked example and check its stated equalities.
    Reproduce {
        example: Example,
        /// Diagonal entry for ex31; must exceed 3.
        #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
        a: f64,
    },
    /// Run a randomized verification campaign.
    Verify {
        theorem: TheoremArg,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Violation tolerance for search-based checks.
        #[arg(long, default_value_t = SEARCH_TOL)]
        tol: f64,
        #[arg(long, default_value = "gaussian")]
        ensemble: String,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        jobs: Option<usize>,
    },
}

/// Result of a command: the report and the exit code it implies.
pub struct Outcome {
    pub report: ReportFile,
    pub code: u8,
}

pub fn execute(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze { path, tol, search_budget, seed } => cmd_analyze(path, *tol, *search_budget, *seed),
        Command::Reproduce { example, a } => cmd_reproduce(*example, *a),
        Command::Verify { theorem, n, trials, budget, seed, tol, ensemble, jobs } => {
            let ensemble: Ensemble = ensemble.parse().map_err(|_| {
                CliError::usage(format!(
                    "--ensemble: unknown ensemble {ensemble:?}; expected one of {}",
                    Ensemble::ALL.map(|e| e.name()).join(", ")
                ))
            })?;
            let config = CampaignConfig::new(*n, *trials, *budget, *seed).with_ensemble(ensemble).with_tol(*tol);
            cmd_verify((*theorem).into(), &config, *jobs)
        }
    }
}

fn cmd_analyze(path: &PathBuf, tol: Option<f64>, search_budget: usize, seed: u64) -> Result<Outcome, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::input("matrix file: not valid UTF-8"))?;
    let t = MatrixFile::parse_matrix(text)?;
    let record = analyze_matrix(&t, tol, search_budget, seed)?;
    Ok(Outcome { report: ReportFile::new(digest_of(&bytes), ReportBody::Analyze(record)), code: 0 })
}

/// Analysis plus optional search evidence for one matrix.
pub fn analyze_matrix(t: &ComplexMatrix, tol: Option<f64>, search_budget: usize, seed: u64) -> Result<AnalysisRecord, CliError> {
    let tolerance = match tol {
        Some(x) => Tolerance::fixed(x).map_err(|_| CliError::usage(format!("--tol: must be positive and finite, got {x}")))?,
        None => Tolerance::auto(),
    };
    let report = analyze(t, tolerance)?;
    let mut record = AnalysisRecord::from_report(&report, tol);
    if search_budget > 0 {
        let min_rank = report.polar.factor.rank();
        let (constrained, constrained_value) =
            search_best_partial_isometry(t, min_rank, search_budget, &mut trial_rng(seed, 0))?;
        let (free, free_value) = search_best_partial_isometry(t, 0, search_budget, &mut trial_rng(seed, 1))?;
        record.search = Some(SearchRecord {
            budget: search_budget,
            seed,
            constrained_value,
            constrained_rank: constrained.rank(),
            unconstrained_value: free_value,
            unconstrained_rank: free.rank(),
        });
    }
    Ok(record)
}

fn cmd_reproduce(example: Example, a: f64) -> Result<Outcome, CliError> {
    let record = match example {
        Example::Ex31 => reproduce_block_swap(a)?,
        Example::Remark33 => reproduce_sign_flip()?,
    };
    let digest = digest_of_value(&record.operator);
    let code = if record.passed { 0 } else { 1 };
    Ok(Outcome { report: ReportFile::new(digest, ReportBody::Reproduce(record)), code })
}

fn cmd_verify(theorem: Theorem, config: &CampaignConfig, jobs: Option<usize>) -> Result<Outcome, CliError> {
    let run = run_campaign(theorem, config, jobs)?;
    let record = CampaignRecord::new(theorem, config, &run.result, run.jobs, run.elapsed.as_secs_f64());
    let digest = digest_of_value(&(theorem.name(), ConfigRecord::from(config)));
    let code = if record.upheld { 0 } else { 1 };
    Ok(Outcome { report: ReportFile::new(digest, ReportBody::Verify(record)), code })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_owned(), |v| format!("{v:.15e}"))
}

/// Human-readable rendering.
pub fn render_table(report: &ReportFile) -> String {
    let mut out = String::new();
    let mut row = |k: &str, v: String| {
        let _ = writeln!(out, "{k:<32} {v}");
    };
    row("tool", format!("{} {}", report.tool.name, report.tool.version));
    row("input", report.input_digest.clone());
    match &report.body {
        ReportBody::Analyze(a) => render_analysis(a, &mut row),
        ReportBody::Reproduce(r) => {
            row("example", r.name.clone());
            if let Some(a) = r.a {
                row("a", format!("{a}"));
            }
            for a in &r.assertions {
                row(if a.pass { "PASS" } else { "FAIL" }, format!("{} (observed {})", a.name, fmt_opt(a.observed)));
            }
        }
        ReportBody::Verify(v) => {
            row("theorem", v.theorem.clone());
            row("config", format!(
                "n={} trials={} budget={} seed={} tol={:e} ensemble={}",
                v.config.n, v.config.trials, v.config.search_budget, v.config.seed, v.config.tol, v.config.ensemble
            ));
            row("trials run", v.trials_run.to_string());
            row("checks run", v.checks_run.to_string());
            row("min gap observed", fmt_opt(v.min_gap_observed));
            row("violations", v.violations.len().to_string());
            for x in &v.violations {
                row("  violation", format!("trial {} {} gap {}", x.trial, x.check, fmt_opt(x.gap)));
            }
            row("elapsed (s)", format!("{:.3}", v.elapsed_seconds));
            row("verdict", if v.upheld { "upheld".into() } else { "VIOLATED".into() });
        }
    }
    out
}

fn render_analysis(a: &AnalysisRecord, row: &mut impl FnMut(&str, String)) {
    row("n", a.n.to_string());
    row("tolerance", format!("{:e}", a.tol_resolved));
    row("singular values", a.singular_values.iter().map(|s| format!("{s:.15e}")).collect::<Vec<_>>().join(" "));
    row("rank", a.rank.to_string());
    row("||T||", format!("{:.15e}", a.norm));
    row("gamma(T)", fmt_opt(a.gamma));
    row("||T - V||", format!("{:.15e}", a.dist_to_polar));
    row("max(1 - gamma, ||T|| - 1)", format!("{:.15e}", a.dist_formula));
    row("distance to partial isometries", format!("{:.15e}", a.wu_distance));
    row("V is a global best", a.polar_is_global_best.to_string());
    if let Some(m) = &a.wu_minimizer {
        row("X0 = V phi(|T|): rank", m.rank.to_string());
        row("X0: ||T - X0||", format!("{:.15e}", m.distance));
        row("X0: j(V*V, X0*X0)", m.index_j.to_string());
    }
    if let Some(c) = &a.condition_i {
        row("condition (i) for V", format!("{} (residual {})", c.holds, fmt_opt(c.residual)));
    }
    if let Some(c) = &a.condition_ii {
        row("condition (ii) for V", format!("{} (residual {})", c.holds, fmt_opt(c.residual)));
    }
    if let Some(t) = a.triangle_equality {
        row("||T|| = ||V|| + ||T - V||", t.to_string());
    }
    if let Some(s) = &a.search {
        row("search: best with rank >= rank V", format!("{:.15e} (rank {})", s.constrained_value, s.constrained_rank));
        row("search: best over all ranks", format!("{:.15e} (rank {})", s.unconstrained_value, s.unconstrained_rank));
    }
    row("criterion", a.criterion.clone());
}

/// Parses arguments, runs the command, writes the report and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Json => outcome.report.to_json(),
                Format::Table => render_table(&outcome.report),
            };
            if let ReportBody::Reproduce(r) = &outcome.report.body {
                if cli.format == Format::Json {
                    for a in &r.assertions {
                        eprintln!("{} {}", if a.pass { "PASS" } else { "FAIL" }, a.name);
                    }
                }
            }
            if let ReportBody::Verify(v) = &outcome.report.body {
                for x in &v.violations {
                    eprintln!("violation: trial {} {} gap {}", x.trial, x.check, fmt_opt(x.gap));
                }
            }
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

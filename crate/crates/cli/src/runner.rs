//! Parallel campaign execution.
//!
//! Trials own their random streams, so the merged result is identical to
//! [`isonear_core::oracle::verify`] for any number of workers.

use std::time::{Duration, Instant};

use isonear_core::oracle::{aggregate, run_trial, CampaignConfig, CampaignResult, Theorem};
use rayon::prelude::*;

use crate::error::CliError;

pub struct CampaignRun {
    pub result: CampaignResult,
    pub elapsed: Duration,
    pub jobs: usize,
}

/// Runs every trial of `theorem` on `jobs` workers (`None`: rayon's default).
pub fn run_campaign(theorem: Theorem, config: &CampaignConfig, jobs: Option<usize>) -> Result<CampaignRun, CliError> {
    config.validate()?;
    if jobs == Some(0) {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build().map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let records = pool.install(|| {
        (0..config.trials).into_par_iter().map(|trial| run_trial(theorem, config, trial)).collect::<Vec<_>>()
    });
    let result = aggregate(records);
    Ok(CampaignRun { result, elapsed: start.elapsed(), jobs: pool.current_num_threads() })
}

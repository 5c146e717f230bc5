//! Benchmark trials spread over a thread pool.

use rayon::prelude::*;
use selfsim_core::benchmark::{BenchmarkPlan, BenchmarkResult, TrialError};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Trial(#[from] TrialError),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Runs `plan` on `threads` workers (all cores when zero). The result, and
/// which error is reported when several trials fail, do not depend on the
/// thread count.
pub fn run_benchmark_parallel(plan: &BenchmarkPlan, threads: usize) -> Result<BenchmarkResult, RunError> {
    let prepared = plan.prepare().map_err(|source| TrialError {
        smoother: "scenario".into(),
        alpha: f64::NAN,
        seed: plan.seed_base,
        source,
    })?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let trials = plan.trials();
    let outcomes: Vec<_> =
        pool.install(|| trials.par_iter().map(|&t| plan.run_trial(&prepared, t)).collect());
    let mut records = Vec::new();
    for outcome in outcomes {
        records.extend(outcome?);
    }
    Ok(BenchmarkResult::from_records(records, &plan.smoothers))
}

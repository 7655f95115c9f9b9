//! Parallel execution of a scenario.

use leakmeter_core::{Scenario, ScenarioConfig, SimulationResult};
use rayon::prelude::*;

use crate::error::CliError;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "LEAKMETER_THREADS";

/// Worker count: `LEAKMETER_THREADS` when set, otherwise the available
/// parallelism.
pub fn worker_count() -> Result<usize, CliError> {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(available),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
    }
}

/// Runs every case on a pool of `threads` workers. Each case uses its own
/// random stream, so the result is identical for any worker count.
pub fn simulate(config: ScenarioConfig, threads: usize) -> Result<SimulationResult, CliError> {
    let scenario = Scenario::new(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()?;
    let cases = pool.install(|| {
        (0..scenario.config().n_cases)
            .into_par_iter()
            .map(|i| scenario.simulate_case(i))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(scenario.summarize(cases)?)
}

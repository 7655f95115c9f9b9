//! The three subcommands, returning what they print.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{ConfigFile, RunKind};
use crate::error::CliError;
use crate::model::{compute_utility, load_model, DecomposeReport};
use crate::output::{write_csvs, write_manifest, RunManifest, MANIFEST};
use crate::run::{simulate as run_cases, worker_count};

/// Command line overrides for a simulation.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub cases: Option<usize>,
    pub measurements: Option<usize>,
}

pub fn simulate(
    kind: RunKind,
    config_path: &Path,
    overrides: &Overrides,
) -> Result<String, CliError> {
    let started = Instant::now();
    let mut file = ConfigFile::load(config_path)?;
    if let Some(seed) = overrides.seed {
        file.scenario.seed = seed;
    }
    if let Some(n) = overrides.cases {
        file.scenario.cases = n;
    }
    if let Some(n) = overrides.measurements {
        file.scenario.measurements = n;
    }
    let out = overrides
        .out
        .clone()
        .or_else(|| file.output.dir.clone())
        .ok_or_else(|| {
            CliError::Usage("no output directory: pass --out or set dir under [output]".into())
        })?;
    file.output.dir = Some(out.clone());

    let config = file.scenario_config(kind);
    config
        .validate()
        .map_err(|e| CliError::config(config_path, e.to_string()))?;
    let threads = worker_count()?;
    let result = run_cases(config, threads)?;

    let mut outputs = write_csvs(&out, &result)?;
    outputs.push(MANIFEST.into());
    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        kind: kind.name(),
        master_seed: file.scenario.seed,
        config: file,
        threads,
        infinite_cases: result.infinite_cases,
        prior_entropy_bits: result.prior_entropy,
        class_initial_fault_bits: result.class_initial_fault,
        outputs,
        wall_seconds: started.elapsed().as_secs_f64(),
    };
    write_manifest(&out, &manifest)?;
    Ok(format!(
        "{} run: {} cases x {} measurements, {} with infinite learning; wrote {}\n",
        kind.name(),
        config.n_cases,
        config.n_measurements,
        result.infinite_cases,
        out.display()
    ))
}

/// Report text and whether every check passed.
pub fn decompose(model_path: &Path) -> Result<(String, bool), CliError> {
    let model = load_model(model_path)?;
    let report = DecomposeReport::compute(&model)?;
    let mut text = report.render();
    let identity = report.fault_identity_holds();
    text.push_str(&format!("fault identity            {}\n", pass(identity)));
    let mut ok = identity;
    if let Some(expected) = &model.expected {
        let bad = report.mismatches(expected);
        text.push_str(&format!(
            "reference values          {}",
            pass(bad.is_empty())
        ));
        if !bad.is_empty() {
            text.push_str(&format!(" ({})", bad.join(", ")));
        }
        text.push('\n');
        ok &= bad.is_empty();
    }
    Ok((text, ok))
}

pub fn utility(spec_path: &Path) -> Result<String, CliError> {
    Ok(compute_utility(spec_path)?.render())
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

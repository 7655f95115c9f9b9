//! CSV and manifest writers.
//!
//! Floats are written with 17 significant digits in exponent form (`{:.16e}`),
//! which round-trips every `f64` and does not depend on locale. Undefined
//! values are `NaN`; infinities are `inf` and `-inf`.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use leakmeter_core::{CaseMeasures, SimulationResult};
use serde::Serialize;

use crate::config::ConfigFile;
use crate::error::CliError;

pub const TRAJECTORIES: &str = "trajectories.csv";
pub const AGGREGATES: &str = "aggregates.csv";
pub const MANIFEST: &str = "manifest.json";

pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.16e}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".into(), fmt_float)
}

pub fn write_trajectories<W: Write>(mut w: W, cases: &[CaseMeasures]) -> io::Result<()> {
    writeln!(
        w,
        "case_id,step,kl_learning_bits,entropy_learning_bits,map_error,span30,infinite_flag"
    )?;
    for c in cases {
        for k in 0..c.steps() {
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                c.case_id,
                k + 1,
                fmt_float(c.kl_learning[k]),
                fmt_float(c.entropy_learning[k]),
                c.map_error[k],
                c.span30[k],
                u8::from(c.infinite[k]),
            )?;
        }
    }
    w.flush()
}

pub fn write_aggregates<W: Write>(mut w: W, result: &SimulationResult) -> io::Result<()> {
    writeln!(
        w,
        "step,mean_kl,median_kl,mean_entropy,median_entropy,mean_abs_map_error,mean_span30,\
         corr_kl_maperr,corr_entropy_maperr,corr_kl_span,corr_entropy_span"
    )?;
    let a = &result.aggregates;
    let c = &result.correlations;
    for k in 0..a.steps() {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            k + 1,
            fmt_opt(a.mean_kl[k]),
            fmt_opt(a.median_kl[k]),
            fmt_float(a.mean_entropy[k]),
            fmt_float(a.median_entropy[k]),
            fmt_float(a.mean_abs_map_error[k]),
            fmt_float(a.mean_span30[k]),
            fmt_opt(c.kl_map_error[k]),
            fmt_opt(c.entropy_map_error[k]),
            fmt_opt(c.kl_span[k]),
            fmt_opt(c.entropy_span[k]),
        )?;
    }
    w.flush()
}

/// Summary written next to the CSVs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub kind: &'static str,
    pub master_seed: u64,
    pub config: ConfigFile,
    pub threads: usize,
    pub infinite_cases: usize,
    pub prior_entropy_bits: f64,
    pub class_initial_fault_bits: f64,
    pub outputs: Vec<String>,
    pub wall_seconds: f64,
}

fn create(path: &Path) -> Result<io::BufWriter<std::fs::File>, CliError> {
    std::fs::File::create(path)
        .map(io::BufWriter::new)
        .map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        })
}

fn write_err(path: PathBuf) -> impl FnOnce(io::Error) -> CliError {
    move |source| CliError::Write { path, source }
}

/// Writes both CSVs into `dir`, creating it if needed, and returns their
/// file names.
pub fn write_csvs(dir: &Path, result: &SimulationResult) -> Result<Vec<String>, CliError> {
    std::fs::create_dir_all(dir).map_err(write_err(dir.to_path_buf()))?;
    let t = dir.join(TRAJECTORIES);
    write_trajectories(create(&t)?, &result.per_case).map_err(write_err(t))?;
    let a = dir.join(AGGREGATES);
    write_aggregates(create(&a)?, result).map_err(write_err(a))?;
    Ok(vec![TRAJECTORIES.into(), AGGREGATES.into()])
}

pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    let path = dir.join(MANIFEST);
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, manifest)
        .map_err(io::Error::from)
        .and_then(|()| writeln!(w))
        .and_then(|()| w.flush())
        .map_err(write_err(path))
}

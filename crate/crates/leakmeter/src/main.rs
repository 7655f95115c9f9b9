use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use leakmeter::commands::{self, Overrides};
use leakmeter::config::RunKind;

#[derive(Parser)]
#[command(
    name = "leakmeter",
    version,
    about = "KL-divergence learning measures and Monte Carlo runs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo scenario and write CSVs plus a manifest.
    Simulate {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        config: PathBuf,
        /// Output directory; falls back to `dir` under `[output]`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long)]
        measurements: Option<usize>,
    },
    /// Split a model's expected learning into its terms and check the fault
    /// identity.
    Decompose {
        #[arg(long)]
        model: PathBuf,
    },
    /// Weighted sum of per-property learning.
    Utility {
        #[arg(long)]
        spec: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Baseline,
    SecretKey,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Simulate {
            kind,
            config,
            out,
            seed,
            cases,
            measurements,
        } => {
            let kind = match kind {
                Kind::Baseline => RunKind::Baseline,
                Kind::SecretKey => RunKind::SecretKey,
            };
            let overrides = Overrides {
                out,
                seed,
                cases,
                measurements,
            };
            commands::simulate(kind, &config, &overrides).map(|text| (text, true))
        }
        Command::Decompose { model } => commands::decompose(&model),
        Command::Utility { spec } => commands::utility(&spec).map(|text| (text, true)),
    };
    match result {
        Ok((text, ok)) => {
            print!("{text}");
            ExitCode::from(if ok { 0 } else { 3 })
        }
        Err(e) => {
            eprintln!("leakmeter: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! `kerdock` command-line tool: build codebooks, analyze them, and run
//! Monte Carlo link simulations with reproducible CSV output.

mod analyze;
mod construct;
mod simulate;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "kerdock", version, about = "Kerdock / MUB precoding codebooks for limited-feedback MIMO")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a codebook and write it in the text codebook format.
    Construct(construct::Args),
    /// Print distance spectra, the Rankin bound and complexity figures.
    Analyze(analyze::Args),
    /// Run the experiment described by a key=value config file.
    Simulate(simulate::Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Chordal,
    #[value(alias = "proj2")]
    P2,
    #[value(alias = "fubini-study")]
    Fs,
}

impl From<MetricArg> for kerdock_core::metrics::Metric {
    fn from(m: MetricArg) -> Self {
        use kerdock_core::metrics::Metric;
        match m {
            MetricArg::Chordal => Metric::Chordal,
            MetricArg::P2 => Metric::Proj2Norm,
            MetricArg::Fs => Metric::FubiniStudy,
        }
    }
}

/// Writes `contents` to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &std::path::Path, contents: &[u8]) -> anyhow::Result<()> {
    use anyhow::Context;
    let mut tmp = PathBuf::from(path);
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    tmp.set_file_name(format!(".{}.tmp", name));
    std::fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(args) => construct::run(args),
        Command::Analyze(args) => analyze::run(args),
        Command::Simulate(args) => simulate::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {:#}", err);
            ExitCode::FAILURE
        }
    }
}

use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use kerdock_core::construct::*;
use kerdock_core::metrics::{spectrum, Metric};

use crate::MetricArg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Kerdock,
    Fourier,
    /// Two-antenna set generated by powers of a single matrix.
    KerdockPower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Bf,
    Sm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    All,
    Table1,
    Search,
}

#[derive(clap::Args)]
pub struct Args {
    kind: Kind,
    #[arg(long, default_value_t = 4)]
    mt: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Bf)]
    mode: ModeArg,
    /// Streams for `--mode sm`.
    #[arg(long, default_value_t = 2)]
    ms: usize,
    /// Column-subset rule for Kerdock precoding codebooks.
    #[arg(long, value_enum, default_value_t = Strategy::All)]
    strategy: Strategy,
    /// Leave out the identity basis.
    #[arg(long)]
    no_identity: bool,
    /// Codebook size for `fourier`, or family size for `--strategy search`.
    #[arg(long)]
    n: Option<usize>,
    /// Fourier generator exponents, comma separated. Searched when absent.
    #[arg(long, value_delimiter = ',')]
    u: Option<Vec<usize>>,
    /// Metric used by generator and subset searches.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u64,
    /// Output file; the codebook goes to stdout when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn mub_for(args: &Args) -> Result<MubSet> {
    let mub = match args.kind {
        Kind::KerdockPower if args.mt != 2 => bail!("kerdock-power is only defined for --mt 2"),
        Kind::KerdockPower => kerdock_mub_mt2_power()?,
        _ => kerdock_mub(args.mt)?,
    };
    Ok(if args.no_identity { mub.without_identity() } else { mub })
}

fn build(args: &Args) -> Result<Codebook> {
    let ms = match args.mode {
        ModeArg::Bf => 1,
        ModeArg::Sm => args.ms,
    };
    let default_metric = if ms == 1 { Metric::Chordal } else { Metric::Proj2Norm };
    let metric = args.metric.map(Metric::from).unwrap_or(default_metric);
    match args.kind {
        Kind::Fourier => {
            let n = args.n.context("fourier codebooks need --n")?;
            let u = match &args.u {
                Some(u) => u.clone(),
                None => {
                    let found = search_fourier_generator(args.mt, ms, n, metric, args.budget)?;
                    eprintln!("searched generator u = {:?} (min {} distance {:.6})", found.u, metric, found.min_distance);
                    found.u
                }
            };
            Ok(fourier_codebook(args.mt, ms, n, &u)?)
        }
        Kind::Kerdock | Kind::KerdockPower => {
            let mub = mub_for(args)?;
            if ms == 1 {
                return Ok(beamforming_codebook(&mub, true)?);
            }
            let strategy = match args.strategy {
                Strategy::All => SubsetStrategy::AllSubsets,
                Strategy::Table1 => SubsetStrategy::Table1,
                Strategy::Search => SubsetStrategy::MaxMinSearch(SubsetSearch {
                    metric,
                    size: args.n.unwrap_or(mub.len()),
                    budget: args.budget,
                }),
            };
            Ok(precoding_codebook(&mub, ms, strategy)?)
        }
    }
}

pub fn summary(cb: &Codebook) -> Vec<String> {
    let mut lines = vec![format!("N={} mt={} ms={} mode={}", cb.len(), cb.mt(), cb.ms(), cb.mode())];
    let metrics: &[Metric] = if cb.ms() == 1 { &[Metric::Chordal] } else { &[Metric::Proj2Norm, Metric::FubiniStudy] };
    for &m in metrics {
        match spectrum(cb, m) {
            Ok(s) => lines.push(format!(
                "{}: min {:.12}, distinct {}",
                m,
                s.min_offdiag,
                s.distinct_values.iter().map(|v| format!("{:.12}", v)).collect::<Vec<_>>().join(" ")
            )),
            Err(err) => lines.push(format!("{}: {}", m, err)),
        }
    }
    lines.push(format!("quaternary: {}", if cb.quaternary().is_some() { "yes" } else { "no" }));
    lines
}

pub fn run(args: Args) -> Result<()> {
    let cb = build(&args)?;
    let mut text = Vec::new();
    write_codebook(&cb, &mut text)?;
    match &args.out {
        Some(path) => {
            crate::write_atomic(path, &text)?;
            println!("wrote {}", path.display());
            for line in summary(&cb) {
                println!("{}", line);
            }
        }
        None => {
            std::io::stdout().write_all(&text)?;
            for line in summary(&cb) {
                eprintln!("{}", line);
            }
        }
    }
    Ok(())
}

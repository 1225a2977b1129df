use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use kerdock_core::sim::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Report {
    /// Horizontal VSER gaps to the reference curve at `--target`.
    SnrGap,
    /// Horizontal rate gaps to the reference curve at `--level`.
    RateGap,
}

pub const MANIFEST: &str = "manifest.txt";

#[derive(clap::Args)]
pub struct Args {
    /// Experiment config, or a manifest from an earlier run.
    config: PathBuf,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "KERDOCK_THREADS")]
    threads: Option<usize>,
    /// Overrides the seed in the config.
    #[arg(long, env = "KERDOCK_SEED")]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    report: Option<Report>,
    /// VSER level for `--report snr-gap`.
    #[arg(long, default_value_t = 1e-2)]
    target: f64,
    /// Rate level (bits per channel use) for `--report rate-gap`. Defaults to
    /// the midpoint of the reference curve's simulated rate range.
    #[arg(long)]
    level: Option<f64>,
}

/// Makes file curves absolute so the config snapshot works from any directory.
fn pin_paths(cfg: &mut ExperimentConfig, base: &Path) -> Result<()> {
    for curve in &mut cfg.curves {
        if let CurveSpec::File(p) = curve {
            let joined = if p.is_relative() { base.join(&*p) } else { p.clone() };
            *p = joined.canonicalize().with_context(|| format!("codebook file {}", joined.display()))?;
        }
    }
    Ok(())
}

fn reference_index(names: &[String]) -> usize {
    names.iter().position(|n| n == "perfect").unwrap_or(0)
}

fn snr_gap_report(names: &[String], results: &[SimResult], target: f64) -> String {
    let r = reference_index(names);
    let mut csv = String::from("curve,crossing_db,crossing_lo_db,crossing_hi_db,gap_db\n");
    let reference = vser_crossing(&results[r], target).ok();
    println!("SNR at VSER {:e} (reference {}):", target, names[r]);
    for (name, res) in names.iter().zip(results) {
        match (vser_crossing(res, target), vser_crossing_interval(res, target)) {
            (Ok(x), Ok((lo, hi))) => {
                let gap = reference.map(|x0| x - x0);
                let gap_text = gap.map(|g| format!("{:.3} dB", g)).unwrap_or_else(|| "n/a".into());
                println!("  {:<16} {:8.3} dB  [{:.3}, {:.3}]  gap {}", name, x, lo, hi, gap_text);
                let gap_csv = gap.map(|g| format!("{:?}", g)).unwrap_or_default();
                let _ = writeln!(csv, "{},{:?},{:?},{:?},{}", name, x, lo, hi, gap_csv);
            }
            (Err(err), _) | (_, Err(err)) => {
                println!("  {:<16} {}", name, err);
                let _ = writeln!(csv, "{},,,,", name);
            }
        }
    }
    csv
}

fn rate_gap_report(names: &[String], results: &[SimResult], level: Option<f64>) -> Result<String> {
    let r = reference_index(names);
    let reference = &results[r];
    let level = match level {
        Some(l) => l,
        None => {
            let first = reference.points.first().and_then(|p| p.rate_bpcu);
            let last = reference.points.last().and_then(|p| p.rate_bpcu);
            match (first, last) {
                (Some(a), Some(b)) => 0.5 * (a + b),
                _ => bail!("rate-gap report needs rate=true in the config"),
            }
        }
    };
    let x0 = rate_crossing(reference, level).ok();
    let mut csv = String::from("curve,crossing_db,gap_db\n");
    println!("SNR at {:.4} bits/channel use (reference {}):", level, names[r]);
    for (name, res) in names.iter().zip(results) {
        match rate_crossing(res, level) {
            Ok(x) => {
                let gap = x0.map(|a| x - a);
                println!(
                    "  {:<16} {:8.3} dB  gap {}",
                    name,
                    x,
                    gap.map(|g| format!("{:.3} dB", g)).unwrap_or_else(|| "n/a".into())
                );
                let _ = writeln!(csv, "{},{:?},{}", name, x, gap.map(|g| format!("{:?}", g)).unwrap_or_default());
            }
            Err(err) => {
                println!("  {:<16} {}", name, err);
                let _ = writeln!(csv, "{},,", name);
            }
        }
    }
    Ok(csv)
}

pub fn run(args: Args) -> Result<()> {
    let start = Instant::now();
    let text = std::fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let mut cfg = ExperimentConfig::parse(&text).with_context(|| format!("in {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let base = args.config.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    pin_paths(&mut cfg, base)?;
    let curves = cfg.build(None)?;
    let mut seen = HashSet::new();
    for (name, _) in &curves {
        if !seen.insert(name.as_str()) {
            bail!("two curves would both write {}.csv", name);
        }
    }
    if args.threads == Some(0) {
        bail!("--threads must be positive");
    }

    std::fs::create_dir_all(&args.out_dir).with_context(|| format!("creating {}", args.out_dir.display()))?;
    let mut outputs = Vec::new();
    let mut names = Vec::new();
    let mut results = Vec::new();
    for (name, sim) in &curves {
        let t = Instant::now();
        let result = run_with_threads(sim, args.threads)?;
        let file = format!("{}.csv", name);
        crate::write_atomic(&args.out_dir.join(&file), result.to_csv().as_bytes())?;
        println!("{}: {} points in {:.1} s -> {}", name, result.points.len(), t.elapsed().as_secs_f64(), file);
        outputs.push(file);
        names.push(name.clone());
        results.push(result);
    }

    match args.report {
        Some(Report::SnrGap) => {
            let csv = snr_gap_report(&names, &results, args.target);
            crate::write_atomic(&args.out_dir.join("snr_gap.csv"), csv.as_bytes())?;
            outputs.push("snr_gap.csv".into());
        }
        Some(Report::RateGap) => {
            let csv = rate_gap_report(&names, &results, args.level)?;
            crate::write_atomic(&args.out_dir.join("rate_gap.csv"), csv.as_bytes())?;
            outputs.push("rate_gap.csv".into());
        }
        None => {}
    }

    let command: Vec<String> = std::env::args().collect();
    let mut manifest = String::from("# kerdock run manifest; rerun with `kerdock simulate <this file>`\n");
    let _ = writeln!(manifest, "# command={}", command.join(" "));
    let _ = writeln!(manifest, "# seed={}", cfg.seed);
    let _ = writeln!(manifest, "# version={}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(manifest, "# outputs={}", outputs.join(","));
    let _ = writeln!(manifest, "# duration_s={:.3}", start.elapsed().as_secs_f64());
    manifest.push_str(&cfg.to_text());
    crate::write_atomic(&args.out_dir.join(MANIFEST), manifest.as_bytes())?;
    println!("manifest -> {}", args.out_dir.join(MANIFEST).display());
    Ok(())
}

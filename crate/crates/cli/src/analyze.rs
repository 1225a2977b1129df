use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::ValueEnum;
use kerdock_core::construct::{load_codebook, Codebook, Mode};
use kerdock_core::linalg::{Complex, ComplexMatrix};
use kerdock_core::metrics::*;
use kerdock_core::select::{self, OpCounter};

use crate::MetricArg;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Kerdock,
    Fourier,
    Grassmannian,
}

impl From<KindArg> for CodebookKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Kerdock => CodebookKind::Kerdock,
            KindArg::Fourier => CodebookKind::Fourier,
            KindArg::Grassmannian => CodebookKind::Grassmannian,
        }
    }
}

#[derive(clap::Args)]
pub struct Args {
    path: PathBuf,
    /// Distance for the spectrum. Defaults to chordal for one stream and
    /// Fubini-Study otherwise.
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    /// Write pairwise distances and summary rows as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Report search operation counts.
    #[arg(long)]
    ops: bool,
    /// Codebook family for `--ops`; defaults to kerdock for quaternary files.
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long, default_value_t = 4)]
    mr: usize,
    /// Report storage for the two-mode comparison scenario.
    #[arg(long)]
    storage: bool,
    /// Bits per real number.
    #[arg(long, default_value_t = 16)]
    nb: usize,
}

/// Deterministic channel; counted operations do not depend on its values.
fn probe_channel(mr: usize, mt: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(mr, mt, |i, j| Complex::new(1.0 + i as f64, 0.5 * j as f64 - 0.25 * i as f64))
}

fn live_counts(cb: &Codebook, mr: usize) -> Result<(&'static str, OpCounter)> {
    let h = probe_channel(mr, cb.mt());
    let (path, r) = match (cb.mode(), cb.quaternary().is_some()) {
        (Mode::Beamforming, true) => ("quaternary", select::select_beamformer_quaternary(&h, cb)?),
        (Mode::Beamforming, false) => ("generic", select::select_beamformer(&h, cb)?),
        (Mode::Precoding(_), true) => ("quaternary", select::select_precoder_msv_quaternary(&h, cb)?),
        (Mode::Precoding(_), false) => ("generic", select::select_precoder_msv(&h, cb)?),
    };
    Ok((path, r.counter))
}

pub fn run(args: Args) -> Result<()> {
    let cb = load_codebook(&args.path)?;
    let metric = args
        .metric
        .map(Metric::from)
        .unwrap_or(if cb.ms() == 1 { Metric::Chordal } else { Metric::FubiniStudy });
    println!("codebook {}: N={} mt={} ms={} mode={}", args.path.display(), cb.len(), cb.mt(), cb.ms(), cb.mode());

    let s = spectrum(&cb, metric)?;
    println!("{} min distance: {:.12}", metric, s.min_offdiag);
    println!(
        "{} distinct values: {}",
        metric,
        s.distinct_values.iter().map(|v| format!("{:.12}", v)).collect::<Vec<_>>().join(" ")
    );
    let rankin = if cb.ms() == 1 { Some(rankin_bound(cb.len(), cb.mt())?) } else { None };
    if let Some(r) = rankin {
        println!("rankin bound (chordal): {:.12}", r);
    }
    if cb.ms() == 1 {
        println!("average |w_k* w_l|^2: {:.15}", average_inner_product(&cb)?);
    }

    if let Some(path) = &args.csv {
        let mut out = String::from("metric,k,l,value\n");
        for k in 0..s.n {
            for l in (k + 1)..s.n {
                let _ = writeln!(out, "{},{},{},{:?}", metric, k, l, s.get(k, l));
            }
        }
        let _ = writeln!(out, "min_{},,,{:?}", metric, s.min_offdiag);
        for v in &s.distinct_values {
            let _ = writeln!(out, "distinct_{},,,{:?}", metric, v);
        }
        if let Some(r) = rankin {
            let _ = writeln!(out, "rankin_bound,,,{:?}", r);
        }
        crate::write_atomic(path, out.as_bytes())?;
        println!("wrote {}", path.display());
    }

    if args.ops {
        let kind = args
            .kind
            .map(CodebookKind::from)
            .unwrap_or(if cb.quaternary().is_some() { CodebookKind::Kerdock } else { CodebookKind::Grassmannian });
        let modes: Vec<SelectionMode> = match cb.mode() {
            Mode::Beamforming => vec![SelectionMode::Beamforming],
            Mode::Precoding(_) => vec![SelectionMode::SmProj2, SelectionMode::SmFubiniStudy],
        };
        for mode in modes {
            let ops = selection_ops(kind, mode, cb.len(), cb.mt(), args.mr, cb.ms())?;
            println!("ops {} {}: {} complex multiplies, {} complex additions", kind, mode, ops.multiplies, ops.additions);
        }
        let (path, c) = live_counts(&cb, args.mr)?;
        println!(
            "counted {} search (mr={}): {} multiplies, {} additions, {} sign/swap",
            path, args.mr, c.complex_multiplies, c.complex_additions, c.sign_or_swap_ops
        );
    }

    if args.storage {
        let (mt, modes) = table2_scenario();
        println!("storage, mt={} with modes {:?}, Nb={}:", mt, modes.iter().map(|m| (m.ms, m.n)).collect::<Vec<_>>(), args.nb);
        for kind in [CodebookKind::Kerdock, CodebookKind::Fourier, CodebookKind::Grassmannian] {
            println!("  {}: {} bits", kind, storage_bits_scenario(kind, mt, &modes, args.nb)?);
        }
        let kind = if cb.quaternary().is_some() { CodebookKind::Kerdock } else { CodebookKind::Grassmannian };
        match storage_bits(kind, cb.mt(), cb.ms(), cb.len(), args.nb) {
            Ok(bits) => println!("  this codebook as {}: {} bits", kind, bits),
            Err(err) => println!("  this codebook as {}: {}", kind, err),
        }
    }
    Ok(())
}

//! `key=value` experiment description.
//!
//! ```text
//! # Four-antenna beamforming, 64-QAM
//! mt=4
//! mr=4
//! ms=1
//! qam=64
//! snr_db=0:2:20
//! trials=100000
//! seed=1
//! curves=perfect,kerdock
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. `snr_db` takes
//! either a comma list or `start:step:stop` (stop included).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::{Precoder, Qam, SimConfig, SimError};
use crate::construct::{
    beamforming_codebook, fourier_codebook, kerdock_mub, load_codebook, precoding_codebook,
    search_fourier_generator, Codebook, SubsetStrategy, DEFAULT_SEARCH_BUDGET,
};
use crate::metrics::Metric;
use crate::select::SelectionRule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveSpec {
    Perfect,
    Kerdock,
    Fourier,
    /// Codebook file in the text codebook format, relative to the config.
    File(PathBuf),
}

impl CurveSpec {
    pub fn name(&self) -> String {
        match self {
            CurveSpec::Perfect => "perfect".into(),
            CurveSpec::Kerdock => "kerdock".into(),
            CurveSpec::Fourier => "fourier".into(),
            CurveSpec::File(p) => format!(
                "file-{}",
                p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
            ),
        }
    }

    fn token(&self) -> String {
        match self {
            CurveSpec::File(p) => format!("file:{}", p.display()),
            other => other.name(),
        }
    }

    fn parse(s: &str) -> Option<CurveSpec> {
        match s {
            "perfect" | "perfect-csit" => Some(CurveSpec::Perfect),
            "kerdock" => Some(CurveSpec::Kerdock),
            "fourier" => Some(CurveSpec::Fourier),
            _ => s.strip_prefix("file:").filter(|p| !p.is_empty()).map(|p| CurveSpec::File(PathBuf::from(p))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KerdockStrategy {
    AllSubsets,
    Table1,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mt: usize,
    pub mr: usize,
    pub ms: usize,
    pub qam: usize,
    pub snr_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// `None` picks the exact rule for the mode.
    pub selection: Option<SelectionRule>,
    pub rate: bool,
    pub curves: Vec<CurveSpec>,
    pub kerdock_identity: bool,
    pub kerdock_strategy: KerdockStrategy,
    pub fourier_n: Option<usize>,
    pub fourier_u: Option<Vec<usize>>,
    pub fourier_metric: Option<Metric>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mt: 4,
            mr: 4,
            ms: 1,
            qam: 4,
            snr_db: vec![0.0],
            trials: 100_000,
            seed: 1,
            selection: None,
            rate: false,
            curves: vec![CurveSpec::Perfect, CurveSpec::Kerdock],
            kerdock_identity: true,
            kerdock_strategy: KerdockStrategy::AllSubsets,
            fourier_n: None,
            fourier_u: None,
            fourier_metric: None,
        }
    }
}

fn parse_list<T: std::str::FromStr>(v: &str) -> Option<Vec<T>> {
    v.split(',').map(|t| t.trim().parse().ok()).collect()
}

fn parse_snr(v: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = v.split(':').collect();
    match parts.as_slice() {
        [single] => parse_list(single).ok_or_else(|| format!("invalid SNR list '{}'", single)),
        [start, step, stop] => {
            let (a, s, b) = match (start.trim().parse::<f64>(), step.trim().parse::<f64>(), stop.trim().parse::<f64>()) {
                (Ok(a), Ok(s), Ok(b)) => (a, s, b),
                _ => return Err(format!("invalid SNR range '{}'", v)),
            };
            if s.is_nan() || s <= 0.0 || b < a || ((b - a) / s) > 10_000.0 {
                return Err(format!("invalid SNR range '{}'", v));
            }
            let count = ((b - a) / s + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|k| a + k as f64 * s).collect())
        }
        _ => Err(format!("invalid SNR value '{}'", v)),
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

fn parse_selection(v: &str) -> Option<Option<SelectionRule>> {
    match v {
        "auto" => Some(None),
        "eff-snr" | "effsnr" | "effective-snr" => Some(Some(SelectionRule::EffectiveSnr)),
        "msv" | "msvsc" | "msv-sc" => Some(Some(SelectionRule::MinSingularValue)),
        "chordal" | "singular-vector" => Some(Some(SelectionRule::ChordalToSingularVector)),
        _ => None,
    }
}

fn selection_name(rule: Option<SelectionRule>) -> &'static str {
    match rule {
        None => "auto",
        Some(SelectionRule::EffectiveSnr) => "eff-snr",
        Some(SelectionRule::MinSingularValue) => "msv",
        Some(SelectionRule::ChordalToSingularVector) => "chordal",
    }
}

impl ExperimentConfig {
    /// Parses the text form. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<ExperimentConfig, SimError> {
        let mut cfg = ExperimentConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split_once('#').map_or(raw, |(before, _)| before).trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| SimError::Config { line: line_no, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err(format!("expected key=value, got '{}'", line)))?;
            let (key, value) = (key.trim(), value.trim());
            let int = |what: &str| match value.parse::<usize>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(err(format!("invalid {} '{}'", what, value))),
            };
            match key {
                "mt" => cfg.mt = int("mt")?,
                "mr" => cfg.mr = int("mr")?,
                "ms" => cfg.ms = int("ms")?,
                "qam" => {
                    cfg.qam = int("qam")?;
                    if !Qam::SUPPORTED.contains(&cfg.qam) {
                        return Err(err(format!("QAM order {} not in {:?}", cfg.qam, Qam::SUPPORTED)));
                    }
                }
                "snr_db" => cfg.snr_db = parse_snr(value).map_err(err)?,
                "trials" | "trials_per_point" => {
                    cfg.trials = value
                        .parse()
                        .ok()
                        .filter(|&t: &u64| t > 0)
                        .ok_or_else(|| err(format!("invalid trials '{}'", value)))?
                }
                "seed" => cfg.seed = value.parse().map_err(|_| err(format!("invalid seed '{}'", value)))?,
                "selection" => {
                    cfg.selection = parse_selection(value).ok_or_else(|| err(format!("unknown selection '{}'", value)))?
                }
                "rate" => cfg.rate = parse_bool(value).ok_or_else(|| err(format!("invalid boolean '{}'", value)))?,
                "curves" => {
                    cfg.curves = value
                        .split(',')
                        .map(|t| CurveSpec::parse(t.trim()).ok_or_else(|| err(format!("unknown curve '{}'", t.trim()))))
                        .collect::<Result<_, _>>()?
                }
                "kerdock_identity" => {
                    cfg.kerdock_identity =
                        parse_bool(value).ok_or_else(|| err(format!("invalid boolean '{}'", value)))?
                }
                "kerdock_strategy" => {
                    cfg.kerdock_strategy = match value {
                        "all" => KerdockStrategy::AllSubsets,
                        "table1" => KerdockStrategy::Table1,
                        _ => return Err(err(format!("unknown kerdock strategy '{}'", value))),
                    }
                }
                "fourier_n" => cfg.fourier_n = Some(int("fourier_n")?),
                "fourier_u" => {
                    cfg.fourier_u =
                        Some(parse_list(value).ok_or_else(|| err(format!("invalid exponent list '{}'", value)))?)
                }
                "fourier_metric" => {
                    cfg.fourier_metric = Some(value.parse().map_err(|_| err(format!("unknown metric '{}'", value)))?)
                }
                other => return Err(err(format!("unknown key '{}'", other))),
            }
        }
        if cfg.curves.is_empty() {
            return Err(SimError::Config { line: 0, message: "no curves requested".into() });
        }
        Ok(cfg)
    }

    /// Canonical text form; parsing it yields an equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mt={}\nmr={}\nms={}\nqam={}", self.mt, self.mr, self.ms, self.qam);
        let snr: Vec<String> = self.snr_db.iter().map(|s| format!("{:?}", s)).collect();
        let _ = writeln!(out, "snr_db={}", snr.join(","));
        let _ = writeln!(out, "trials={}\nseed={}", self.trials, self.seed);
        let _ = writeln!(out, "selection={}\nrate={}", selection_name(self.selection), self.rate);
        let curves: Vec<String> = self.curves.iter().map(CurveSpec::token).collect();
        let _ = writeln!(out, "curves={}", curves.join(","));
        let _ = writeln!(out, "kerdock_identity={}", self.kerdock_identity);
        let strategy = match self.kerdock_strategy {
            KerdockStrategy::AllSubsets => "all",
            KerdockStrategy::Table1 => "table1",
        };
        let _ = writeln!(out, "kerdock_strategy={}", strategy);
        if let Some(n) = self.fourier_n {
            let _ = writeln!(out, "fourier_n={}", n);
        }
        if let Some(u) = &self.fourier_u {
            let u: Vec<String> = u.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "fourier_u={}", u.join(","));
        }
        if let Some(m) = self.fourier_metric {
            let _ = writeln!(out, "fourier_metric={}", m);
        }
        out
    }

    fn kerdock(&self) -> Result<Codebook, SimError> {
        let mub = kerdock_mub(self.mt)?;
        let mub = if self.kerdock_identity { mub } else { mub.without_identity() };
        Ok(if self.ms == 1 {
            beamforming_codebook(&mub, true)?
        } else {
            let strategy = match self.kerdock_strategy {
                KerdockStrategy::AllSubsets => SubsetStrategy::AllSubsets,
                KerdockStrategy::Table1 => SubsetStrategy::Table1,
            };
            precoding_codebook(&mub, self.ms, strategy)?
        })
    }

    /// Fourier codebook; searches the generator when `fourier_u` is unset.
    pub fn fourier(&self) -> Result<Codebook, SimError> {
        let n = self
            .fourier_n
            .ok_or_else(|| SimError::InvalidConfig("fourier curve needs fourier_n".into()))?;
        let u = match &self.fourier_u {
            Some(u) => u.clone(),
            None => {
                let default_metric = if self.ms == 1 { Metric::Chordal } else { Metric::Proj2Norm };
                let metric = self.fourier_metric.unwrap_or(default_metric);
                search_fourier_generator(self.mt, self.ms, n, metric, DEFAULT_SEARCH_BUDGET)?.u
            }
        };
        Ok(fourier_codebook(self.mt, self.ms, n, &u)?)
    }

    /// One simulator configuration per curve, named as in [`CurveSpec::name`].
    /// File paths are resolved against `base_dir`.
    pub fn build(&self, base_dir: Option<&Path>) -> Result<Vec<(String, SimConfig)>, SimError> {
        let default_rule = if self.ms == 1 { SelectionRule::EffectiveSnr } else { SelectionRule::MinSingularValue };
        let mut out = Vec::with_capacity(self.curves.len());
        for curve in &self.curves {
            let precoder = match curve {
                CurveSpec::Perfect => Precoder::PerfectCsit,
                CurveSpec::Kerdock => Precoder::Codebook(Arc::new(self.kerdock()?)),
                CurveSpec::Fourier => Precoder::Codebook(Arc::new(self.fourier()?)),
                CurveSpec::File(p) => {
                    let path = match base_dir {
                        Some(dir) if p.is_relative() => dir.join(p),
                        _ => p.clone(),
                    };
                    Precoder::Codebook(Arc::new(load_codebook(&path)?))
                }
            };
            let cfg = SimConfig {
                mt: self.mt,
                mr: self.mr,
                ms: self.ms,
                qam_order: self.qam,
                precoder,
                snr_db: self.snr_db.clone(),
                trials_per_point: self.trials,
                seed: self.seed,
                selection: self.selection.unwrap_or(default_rule),
                measure_rate: self.rate,
            };
            cfg.validate()?;
            out.push((curve.name(), cfg));
        }
        Ok(out)
    }
}

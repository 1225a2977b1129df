use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::channel::{cn01, fill_channel};
use super::qam::Qam;
use super::SimError;
use crate::construct::{Codebook, Mode};
use crate::linalg::{self, Complex, ComplexMatrix, LinalgError};
use crate::select::{self, SelectionRule};

/// Trials per random substream. Fixed so that results do not depend on how
/// the work is scheduled.
pub const BLOCK_TRIALS: u64 = 4096;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone)]
pub enum Precoder {
    /// Dominant right singular subspace of each channel realisation.
    PerfectCsit,
    Codebook(Arc<Codebook>),
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub mt: usize,
    pub mr: usize,
    pub ms: usize,
    pub qam_order: usize,
    pub precoder: Precoder,
    /// `E_s/N₀` grid in dB, with `E_s = 1`.
    pub snr_db: Vec<f64>,
    pub trials_per_point: u64,
    pub seed: u64,
    pub selection: SelectionRule,
    /// Also average `log₂ det(I + ρ (HF)^*(HF))`.
    pub measure_rate: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::InvalidConfig(m));
        if self.mt == 0 || self.mr == 0 || self.mt > linalg::MAX_DIM || self.mr > linalg::MAX_DIM {
            return bad(format!("antenna counts mt={} mr={} outside 1..={}", self.mt, self.mr, linalg::MAX_DIM));
        }
        if self.ms == 0 || self.ms > self.mt.min(self.mr) {
            return bad(format!("ms={} must be in 1..=min(mt, mr)", self.ms));
        }
        if self.trials_per_point == 0 {
            return bad("trials_per_point must be at least 1".into());
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("snr_db must be a non-empty list of finite values".into());
        }
        if self.snr_db.len() as u64 >= 1 << 31 {
            return bad("too many SNR points".into());
        }
        Qam::new(self.qam_order)?;
        if let Precoder::Codebook(cb) = &self.precoder {
            if cb.mt() != self.mt || cb.ms() != self.ms {
                return bad(format!(
                    "codebook is {}x{} but the link is mt={} ms={}",
                    cb.mt(),
                    cb.ms(),
                    self.mt,
                    self.ms
                ));
            }
            let ok = match self.selection {
                SelectionRule::EffectiveSnr => cb.mode() == Mode::Beamforming,
                SelectionRule::MinSingularValue => matches!(cb.mode(), Mode::Precoding(_)),
                SelectionRule::ChordalToSingularVector => true,
            };
            if !ok {
                return bad(format!("selection rule {:?} does not apply to a {} codebook", self.selection, cb.mode()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimPoint {
    pub snr_db: f64,
    pub trials: u64,
    /// Vector symbol errors, erasures included.
    pub errors: u64,
    /// Trials where `HF` was numerically rank deficient.
    pub erasures: u64,
    pub vser: f64,
    /// 95% normal-approximation half-width of `vser`.
    pub ci_halfwidth: f64,
    pub rate_bpcu: Option<f64>,
}

impl SimPoint {
    fn from_counts(snr_db: f64, trials: u64, errors: u64, erasures: u64, rate_bpcu: Option<f64>) -> SimPoint {
        let vser = errors as f64 / trials as f64;
        let ci_halfwidth = Z95 * (vser * (1.0 - vser) / trials as f64).sqrt();
        SimPoint { snr_db, trials, errors, erasures, vser, ci_halfwidth, rate_bpcu }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimResult {
    pub points: Vec<SimPoint>,
}

impl SimResult {
    pub fn has_rate(&self) -> bool {
        self.points.iter().all(|p| p.rate_bpcu.is_some()) && !self.points.is_empty()
    }

    /// CSV with header `snr_db,trials,errors,vser,ci_halfwidth[,rate_bpcu]`.
    pub fn to_csv(&self) -> String {
        let rate = self.has_rate();
        let mut out = String::from("snr_db,trials,errors,vser,ci_halfwidth");
        if rate {
            out.push_str(",rate_bpcu");
        }
        out.push('\n');
        for p in &self.points {
            let _ = write!(out, "{},{},{},{:e},{:e}", p.snr_db, p.trials, p.errors, p.vser, p.ci_halfwidth);
            if let (true, Some(r)) = (rate, p.rate_bpcu) {
                let _ = write!(out, ",{}", r);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<SimResult, SimError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(SimError::Csv { line: 1, message: "empty input".into() })?;
        let cols: Vec<&str> = header.trim().split(',').collect();
        let base = ["snr_db", "trials", "errors", "vser", "ci_halfwidth"];
        let rate = match cols.as_slice() {
            c if c == base => false,
            [head @ .., "rate_bpcu"] if head == base => true,
            _ => return Err(SimError::Csv { line: 1, message: format!("unexpected header '{}'", header) }),
        };
        let mut points = Vec::new();
        for (i, line) in lines {
            let err = |message: String| SimError::Csv { line: i + 1, message };
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != cols.len() {
                return Err(err(format!("expected {} fields, found {}", cols.len(), fields.len())));
            }
            let f = |k: usize| fields[k].parse::<f64>().map_err(|_| err(format!("invalid number '{}'", fields[k])));
            let u = |k: usize| fields[k].parse::<u64>().map_err(|_| err(format!("invalid count '{}'", fields[k])));
            points.push(SimPoint {
                snr_db: f(0)?,
                trials: u(1)?,
                errors: u(2)?,
                erasures: 0,
                vser: f(3)?,
                ci_halfwidth: f(4)?,
                rate_bpcu: if rate { Some(f(5)?) } else { None },
            });
        }
        Ok(SimResult { points })
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct BlockStats {
    trials: u64,
    errors: u64,
    erasures: u64,
    rate_sum: f64,
}

/// Per-thread buffers reused across trials.
struct Workspace {
    h: ComplexMatrix,
    hf: ComplexMatrix,
    symbols: Vec<usize>,
    y: Vec<Complex>,
}

struct Link<'a> {
    cfg: &'a SimConfig,
    qam: Qam,
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    error: bool,
    erasure: bool,
    rate: f64,
}

impl Link<'_> {
    fn workspace(&self) -> Workspace {
        let cfg = self.cfg;
        Workspace {
            h: ComplexMatrix::zeros(cfg.mr, cfg.mt),
            hf: ComplexMatrix::zeros(cfg.mr, cfg.ms),
            symbols: vec![0; cfg.ms],
            y: vec![Complex::new(0.0, 0.0); cfg.mr],
        }
    }

    /// One channel use. Random draws happen in a fixed order (channel,
    /// symbols, noise) and never depend on the precoder, so curves run with
    /// the same seed see the same channels, symbols and noise.
    fn trial(&self, rng: &mut ChaCha8Rng, ws: &mut Workspace, n0: f64) -> Result<Outcome, SimError> {
        let cfg = self.cfg;
        let ms = cfg.ms;
        fill_channel(rng, &mut ws.h);
        match &cfg.precoder {
            Precoder::Codebook(cb) => {
                let r = select::select(&ws.h, cb, cfg.selection)?;
                ws.h.matmul_into(cb.codeword(r.index), &mut ws.hf)?;
            }
            Precoder::PerfectCsit => {
                let f = select::optimal_precoder(&ws.h, ms)?;
                ws.h.matmul_into(&f, &mut ws.hf)?;
            }
        }
        for s in ws.symbols.iter_mut() {
            *s = rng.random_range(0..self.qam.order());
        }
        let amp = (1.0 / ms as f64).sqrt();
        let sigma = n0.sqrt();
        for i in 0..cfg.mr {
            let mut acc = Complex::new(0.0, 0.0);
            for (s, &sym) in ws.symbols.iter().enumerate() {
                acc += ws.hf[(i, s)] * self.qam.symbol(sym);
            }
            ws.y[i] = acc * amp + cn01(rng) * sigma;
        }

        let rho = 1.0 / (ms as f64 * n0);
        let mut erasure = false;
        let mut error = false;
        let rate;
        if ms == 1 {
            // MRC: G = (Hf)^*
            let gain: f64 = (0..cfg.mr).map(|i| ws.hf[(i, 0)].norm_sqr()).sum();
            rate = if cfg.measure_rate { (1.0 + rho * gain).log2() } else { 0.0 };
            if gain > 0.0 {
                let z: Complex = (0..cfg.mr).map(|i| ws.hf[(i, 0)].conj() * ws.y[i]).sum::<Complex>() / (gain * amp);
                error = self.qam.slice(z) != ws.symbols[0];
            } else {
                erasure = true;
            }
        } else {
            rate = if cfg.measure_rate { log2_det_capacity(&ws.hf, rho)? } else { 0.0 };
            match linalg::pseudo_inverse(&ws.hf) {
                Ok(g) => {
                    for s in 0..ms {
                        let z: Complex = (0..cfg.mr).map(|i| g[(s, i)] * ws.y[i]).sum::<Complex>() / amp;
                        if self.qam.slice(z) != ws.symbols[s] {
                            error = true;
                        }
                    }
                }
                Err(LinalgError::RankDeficient { .. }) => erasure = true,
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Outcome { error: error || erasure, erasure, rate })
    }

    fn block(&self, point: usize, block: u64, n0: f64) -> Result<BlockStats, SimError> {
        let cfg = self.cfg;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(((point as u64) << 32) | block);
        let start = block * BLOCK_TRIALS;
        let trials = BLOCK_TRIALS.min(cfg.trials_per_point - start);
        let mut ws = self.workspace();
        let mut stats = BlockStats { trials, ..BlockStats::default() };
        for _ in 0..trials {
            let o = self.trial(&mut rng, &mut ws, n0)?;
            stats.errors += o.error as u64;
            stats.erasures += o.erasure as u64;
            stats.rate_sum += o.rate;
        }
        Ok(stats)
    }
}

/// `log₂ det(I + ρ M^* M)`.
pub fn log2_det_capacity(m: &ComplexMatrix, rho: f64) -> Result<f64, SimError> {
    let mut gram = m.hermitian_mul(m)?.scale(rho);
    for k in 0..gram.rows() {
        gram[(k, k)] += 1.0;
    }
    Ok(linalg::det(&gram)?.re.log2())
}

/// Runs every SNR point. Work is split into `(point, block)` items, each
/// with its own ChaCha8 stream `(point << 32) | block` under the master
/// seed; blocks are merged in index order, so the result is identical for
/// any thread count.
pub fn run(cfg: &SimConfig) -> Result<SimResult, SimError> {
    cfg.validate()?;
    let link = Link { cfg, qam: Qam::new(cfg.qam_order)? };
    let blocks = cfg.trials_per_point.div_ceil(BLOCK_TRIALS);
    let items: Vec<(usize, u64)> = (0..cfg.snr_db.len()).flat_map(|p| (0..blocks).map(move |b| (p, b))).collect();
    let stats: Vec<BlockStats> = items
        .par_iter()
        .map(|&(p, b)| link.block(p, b, 10f64.powf(-cfg.snr_db[p] / 10.0)))
        .collect::<Result<_, _>>()?;

    let points = stats
        .chunks(blocks as usize)
        .zip(&cfg.snr_db)
        .map(|(chunk, &snr)| {
            let mut total = BlockStats::default();
            for s in chunk {
                total.trials += s.trials;
                total.errors += s.errors;
                total.erasures += s.erasures;
                total.rate_sum += s.rate_sum;
            }
            let rate = cfg.measure_rate.then(|| total.rate_sum / total.trials as f64);
            SimPoint::from_counts(snr, total.trials, total.errors, total.erasures, rate)
        })
        .collect();
    Ok(SimResult { points })
}

/// [`run`] on a dedicated pool of `threads` workers (all cores for `None`).
pub fn run_with_threads(cfg: &SimConfig, threads: Option<usize>) -> Result<SimResult, SimError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| SimError::InvalidConfig(format!("thread pool: {}", e)))?;
    pool.install(|| run(cfg))
}

/// Single-stream link with an MRC receiver.
pub fn run_beamforming_vser(cfg: &SimConfig) -> Result<SimResult, SimError> {
    if cfg.ms != 1 {
        return Err(SimError::InvalidConfig(format!("beamforming needs ms=1, got {}", cfg.ms)));
    }
    run(cfg)
}

/// Multi-stream link with a zero-forcing receiver; a vector symbol error is
/// any stream detected wrongly.
pub fn run_sm_vser(cfg: &SimConfig) -> Result<SimResult, SimError> {
    if cfg.ms < 2 {
        return Err(SimError::InvalidConfig(format!("spatial multiplexing needs ms > 1, got {}", cfg.ms)));
    }
    run(cfg)
}

/// Mean `log₂ det(I + E_s/(M_s N₀)·F^*H^*HF)` per SNR point, alongside VSER.
pub fn achievable_rate(cfg: &SimConfig) -> Result<SimResult, SimError> {
    let cfg = SimConfig { measure_rate: true, ..cfg.clone() };
    run(&cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{beamforming_codebook, kerdock_mub_mt2};

    fn bf_config() -> SimConfig {
        SimConfig {
            mt: 2,
            mr: 2,
            ms: 1,
            qam_order: 4,
            precoder: Precoder::Codebook(Arc::new(beamforming_codebook(&kerdock_mub_mt2(), true).unwrap())),
            snr_db: vec![0.0, 10.0],
            trials_per_point: 5000,
            seed: 3,
            selection: SelectionRule::EffectiveSnr,
            measure_rate: false,
        }
    }

    #[test]
    fn validation() {
        let mut cfg = bf_config();
        cfg.ms = 2;
        assert!(cfg.validate().is_err());
        let mut cfg = bf_config();
        cfg.qam_order = 8;
        assert!(cfg.validate().is_err());
        let mut cfg = bf_config();
        cfg.trials_per_point = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = bf_config();
        cfg.selection = SelectionRule::MinSingularValue;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn csv_round_trip() {
        let r = achievable_rate(&bf_config()).unwrap();
        let back = SimResult::from_csv(&r.to_csv()).unwrap();
        assert_eq!(back.points.len(), 2);
        for (a, b) in r.points.iter().zip(&back.points) {
            assert_eq!(a.snr_db, b.snr_db);
            assert_eq!(a.errors, b.errors);
            assert_eq!(a.vser, b.vser);
            assert_eq!(a.ci_halfwidth, b.ci_halfwidth);
            assert_eq!(a.rate_bpcu, b.rate_bpcu);
        }
        assert!(SimResult::from_csv("a,b\n").is_err());
    }

    #[test]
    fn noiseless_link_is_error_free() {
        let mut cfg = bf_config();
        cfg.snr_db = vec![200.0];
        assert_eq!(run(&cfg).unwrap().points[0].errors, 0);
    }
}

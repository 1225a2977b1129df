//! Receiver-side codeword search.
//!
//! All searches are exhaustive; ties go to the lowest codeword index.

use thiserror::Error;

use crate::construct::{Codebook, Mode};
use crate::linalg::{self, Complex, ComplexMatrix, LinalgError};
use crate::quaternary::QuaternaryMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("codebook mode {found} does not fit this selection rule ({expected})")]
    WrongMode { expected: &'static str, found: String },
    #[error("codebook has no quaternary form")]
    NotQuaternary,
    #[error("codebook is empty")]
    Empty,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Operation tally for one search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCounter {
    pub complex_multiplies: u64,
    pub complex_additions: u64,
    /// Sign flips, real/imaginary swaps and the deferred real rescaling.
    pub sign_or_swap_ops: u64,
}

impl OpCounter {
    pub fn merge(&mut self, other: &OpCounter) {
        self.complex_multiplies += other.complex_multiplies;
        self.complex_additions += other.complex_additions;
        self.sign_or_swap_ops += other.sign_or_swap_ops;
    }

    pub fn reset(&mut self) {
        *self = OpCounter::default();
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionResult {
    /// Zero-based codeword index.
    pub index: usize,
    /// `‖Hw‖²` for beamforming, `σ_min(HW)` for precoding.
    pub score: f64,
    pub counter: OpCounter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionRule {
    /// Maximise `‖Hw‖²` (single stream).
    EffectiveSnr,
    /// Maximise `σ_min(HW)`.
    MinSingularValue,
    /// Pick the codeword closest to the dominant right singular subspace,
    /// scored by `σ_min(V_ms^* W)` (`|v^* w|` for one stream).
    ChordalToSingularVector,
}

impl SelectionRule {
    /// Exact rule for the codebook's mode.
    pub fn default_for(mode: Mode) -> SelectionRule {
        match mode {
            Mode::Beamforming => SelectionRule::EffectiveSnr,
            Mode::Precoding(_) => SelectionRule::MinSingularValue,
        }
    }
}

fn check_channel(h: &ComplexMatrix, cb: &Codebook) -> Result<(), SelectError> {
    if cb.is_empty() {
        return Err(SelectError::Empty);
    }
    if h.cols() != cb.mt() {
        return Err(SelectError::DimensionMismatch(format!(
            "channel has {} columns, codebook has mt={}",
            h.cols(),
            cb.mt()
        )));
    }
    Ok(())
}

fn require_beamforming(cb: &Codebook) -> Result<(), SelectError> {
    if cb.mode() != Mode::Beamforming {
        return Err(SelectError::WrongMode { expected: "beamforming", found: cb.mode().to_string() });
    }
    Ok(())
}

fn require_precoding(h: &ComplexMatrix, cb: &Codebook) -> Result<(), SelectError> {
    if !matches!(cb.mode(), Mode::Precoding(_)) {
        return Err(SelectError::WrongMode { expected: "precoding", found: cb.mode().to_string() });
    }
    if h.rows() < cb.ms() {
        return Err(SelectError::DimensionMismatch(format!("{} receive antennas for {} streams", h.rows(), cb.ms())));
    }
    Ok(())
}

/// `h * w` for a quaternary `w` with sign changes and swaps only. Each output
/// entry is `s · Σ_k q_kj(h_ik)` with the sum in ascending `k`, so for a
/// power-of-two scale the result is bit-identical to the generic product.
pub fn quaternary_apply(h: &ComplexMatrix, w: &QuaternaryMatrix, counter: &mut OpCounter) -> Result<ComplexMatrix, SelectError> {
    let mut out = ComplexMatrix::zeros(h.rows(), w.cols());
    quaternary_apply_into(h, w, &mut out, counter)?;
    Ok(out)
}

pub fn quaternary_apply_into(
    h: &ComplexMatrix,
    w: &QuaternaryMatrix,
    out: &mut ComplexMatrix,
    counter: &mut OpCounter,
) -> Result<(), SelectError> {
    if h.cols() != w.rows() || out.rows() != h.rows() || out.cols() != w.cols() {
        return Err(SelectError::DimensionMismatch(format!(
            "{}x{} * {}x{} into {}x{}",
            h.rows(),
            h.cols(),
            w.rows(),
            w.cols(),
            out.rows(),
            out.cols()
        )));
    }
    let s = w.scale().value();
    let inner = h.cols() as u64;
    let hs = h.as_slice();
    let cols = w.cols();
    let data = out.as_mut_slice();
    for i in 0..h.rows() {
        let row = &hs[i * h.cols()..(i + 1) * h.cols()];
        for j in 0..cols {
            let mut acc = w.code(0, j).apply(row[0]);
            for (k, &hk) in row.iter().enumerate().skip(1) {
                acc += w.code(k, j).apply(hk);
            }
            data[i * cols + j] = acc * s;
        }
    }
    let outputs = (h.rows() * cols) as u64;
    counter.complex_additions += outputs * (inner - 1);
    counter.sign_or_swap_ops += outputs * inner + outputs;
    Ok(())
}

#[inline]
fn column_gain(h: &ComplexMatrix, w: &[Complex]) -> f64 {
    let hs = h.as_slice();
    let mt = h.cols();
    let mut score = 0.0;
    for i in 0..h.rows() {
        let mut acc = Complex::new(0.0, 0.0);
        for k in 0..mt {
            acc += hs[i * mt + k] * w[k];
        }
        score += acc.norm_sqr();
    }
    score
}

/// Exhaustive effective-SNR search, `argmax ‖Hw‖²`, over decoded codewords.
pub fn select_beamformer(h: &ComplexMatrix, cb: &Codebook) -> Result<SelectionResult, SelectError> {
    check_channel(h, cb)?;
    require_beamforming(cb)?;
    let (mr, mt) = (h.rows() as u64, h.cols() as u64);
    let mut best = (0, f64::NEG_INFINITY);
    for (n, w) in cb.codewords().iter().enumerate() {
        let score = column_gain(h, w.as_slice());
        if score > best.1 {
            best = (n, score);
        }
    }
    let n = cb.len() as u64;
    let counter = OpCounter { complex_multiplies: n * mt * mr, complex_additions: n * mr * (mt - 1), sign_or_swap_ops: 0 };
    Ok(SelectionResult { index: best.0, score: best.1, counter })
}

/// Same search through [`quaternary_apply`]; no complex multiplies.
pub fn select_beamformer_quaternary(h: &ComplexMatrix, cb: &Codebook) -> Result<SelectionResult, SelectError> {
    check_channel(h, cb)?;
    require_beamforming(cb)?;
    let words = cb.quaternary().ok_or(SelectError::NotQuaternary)?;
    let mut counter = OpCounter::default();
    let mut y = ComplexMatrix::zeros(h.rows(), 1);
    let mut best = (0, f64::NEG_INFINITY);
    for (n, w) in words.iter().enumerate() {
        quaternary_apply_into(h, w, &mut y, &mut counter)?;
        let score: f64 = y.as_slice().iter().map(|z| z.norm_sqr()).sum();
        if score > best.1 {
            best = (n, score);
        }
    }
    Ok(SelectionResult { index: best.0, score: best.1, counter })
}

fn sigma_min(m: &ComplexMatrix) -> Result<f64, SelectError> {
    Ok(linalg::singular_values(m)?.last().copied().unwrap_or(0.0))
}

/// MSV-SC: `argmax σ_min(HW)`.
pub fn select_precoder_msv(h: &ComplexMatrix, cb: &Codebook) -> Result<SelectionResult, SelectError> {
    check_channel(h, cb)?;
    require_precoding(h, cb)?;
    let mut hw = ComplexMatrix::zeros(h.rows(), cb.ms());
    let mut best = (0, f64::NEG_INFINITY);
    for (n, w) in cb.codewords().iter().enumerate() {
        h.matmul_into(w, &mut hw)?;
        let score = sigma_min(&hw)?;
        if score > best.1 {
            best = (n, score);
        }
    }
    let (n, mr, mt, ms) = (cb.len() as u64, h.rows() as u64, h.cols() as u64, cb.ms() as u64);
    let counter = OpCounter {
        complex_multiplies: n * mr * mt * ms,
        complex_additions: n * mr * ms * (mt - 1),
        sign_or_swap_ops: 0,
    };
    Ok(SelectionResult { index: best.0, score: best.1, counter })
}

/// MSV-SC with `HW` formed through [`quaternary_apply`].
pub fn select_precoder_msv_quaternary(h: &ComplexMatrix, cb: &Codebook) -> Result<SelectionResult, SelectError> {
    check_channel(h, cb)?;
    require_precoding(h, cb)?;
    let words = cb.quaternary().ok_or(SelectError::NotQuaternary)?;
    let mut counter = OpCounter::default();
    let mut hw = ComplexMatrix::zeros(h.rows(), cb.ms());
    let mut best = (0, f64::NEG_INFINITY);
    for (n, w) in words.iter().enumerate() {
        quaternary_apply_into(h, w, &mut hw, &mut counter)?;
        let score = sigma_min(&hw)?;
        if score > best.1 {
            best = (n, score);
        }
    }
    Ok(SelectionResult { index: best.0, score: best.1, counter })
}

/// Unquantised precoder: the first `ms` right singular vectors of `h`.
pub fn optimal_precoder(h: &ComplexMatrix, ms: usize) -> Result<ComplexMatrix, SelectError> {
    if ms == 0 || ms > h.rows().min(h.cols()) {
        return Err(SelectError::DimensionMismatch(format!("{} streams for a {}x{} channel", ms, h.rows(), h.cols())));
    }
    let svd = linalg::svd(h)?;
    Ok(svd.v.select_columns(&(0..ms).collect::<Vec<_>>()))
}

fn select_by_singular_subspace(h: &ComplexMatrix, cb: &Codebook) -> Result<SelectionResult, SelectError> {
    check_channel(h, cb)?;
    let v = optimal_precoder(h, cb.ms())?;
    let mut best = (0, f64::NEG_INFINITY);
    for (n, w) in cb.codewords().iter().enumerate() {
        let score = sigma_min(&v.hermitian_mul(w)?)?;
        if score > best.1 {
            best = (n, score);
        }
    }
    Ok(SelectionResult { index: best.0, score: best.1, counter: OpCounter::default() })
}

/// Dispatches to the search implementing `rule`.
pub fn select(h: &ComplexMatrix, cb: &Codebook, rule: SelectionRule) -> Result<SelectionResult, SelectError> {
    match rule {
        SelectionRule::EffectiveSnr => select_beamformer(h, cb),
        SelectionRule::MinSingularValue => select_precoder_msv(h, cb),
        SelectionRule::ChordalToSingularVector => select_by_singular_subspace(h, cb),
    }
}

//! Monte Carlo link simulation over i.i.d. Rayleigh channels.
//!
//! Transmit vector `x = √(E_s/M_s)·F·s` with orthonormal-column `F` and
//! unit-energy QAM symbols; `E_s = 1` and the SNR axis is `E_s/N₀` in dB.

mod channel;
mod config;
mod gap;
mod qam;
mod run;

pub use channel::{cn01, draw_channel, fill_channel};
pub use config::{CurveSpec, ExperimentConfig, KerdockStrategy};
pub use gap::{rate_at, rate_crossing, rate_gap, snr_gap, vser_crossing, vser_crossing_interval};
pub use qam::Qam;
pub use run::{
    achievable_rate, log2_det_capacity, run, run_beamforming_vser, run_sm_vser, run_with_threads, Precoder,
    SimConfig, SimPoint, SimResult, BLOCK_TRIALS,
};

use thiserror::Error;

use crate::construct::ConstructError;
use crate::linalg::LinalgError;
use crate::select::SelectError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("not bracketed: {0}")]
    NotBracketed(String),
    #[error(transparent)]
    Select(#[from] SelectError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Metric(#[from] crate::metrics::MetricError),
}

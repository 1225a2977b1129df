//! Codebook construction: mutually unbiased bases with quaternary entries,
//! beamforming / spatial-multiplexing arrangements, Fourier comparison
//! codebooks and the codebook text format.

mod codebook;
mod fourier;
mod io;
mod mub;

pub use codebook::{beamforming_codebook, precoding_codebook, Codebook, Mode, SubsetSearch, SubsetStrategy, TABLE1_SUBSETS};
pub use fourier::{dft_matrix, fourier_codebook, search_fourier_generator, FourierSearch, DEFAULT_SEARCH_BUDGET};
pub use io::{load_codebook, parse_codebook, save_codebook, write_codebook, LOAD_ORTHONORMAL_TOLERANCE};
pub use mub::{
    kerdock_generator_mt4, kerdock_mub, kerdock_mub_mt2, kerdock_mub_mt2_power, kerdock_mub_mt4, power_generator_mt2,
    power_mub, sylvester_hadamard, MubSet,
};

use thiserror::Error;

use crate::linalg::LinalgError;
use crate::metrics::MetricError;
use crate::quaternary::QuaternaryError;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("antenna count {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("no Kerdock construction for {0} transmit antennas (supported: 2, 4)")]
    UnsupportedDimension(usize),
    #[error("generator is not unitary (D^* D != I)")]
    NotUnitary,
    #[error("generator power D^{count} is not the identity")]
    PowerNotIdentity { count: usize },
    #[error("bases S{a} and S{b} are not mutually unbiased (entry ({row},{col}) of S{a}^* S{b})")]
    NotMutuallyUnbiased { a: usize, b: usize, row: usize, col: usize },
    #[error("basis count must be at least 1")]
    EmptyMub,
    #[error("stream count {ms} invalid for {mt} transmit antennas")]
    InvalidStreams { ms: usize, mt: usize },
    #[error("the fixed two-stream table is defined only for mt=4, ms=2 with at least 4 non-identity bases (got mt={mt}, ms={ms})")]
    Table1Unsupported { mt: usize, ms: usize },
    #[error("Fourier exponent vector invalid: {0}")]
    InvalidExponent(String),
    #[error("search space {space} exceeds budget {budget}")]
    BudgetExceeded { space: u128, budget: u64 },
    #[error("codeword {index} does not have orthonormal columns (error {error:e})")]
    NotOrthonormal { index: usize, error: f64 },
    #[error("codebook is empty")]
    EmptyCodebook,
    #[error("codeword {index} has shape {rows}x{cols}, expected {mt}x{ms}")]
    Shape { index: usize, rows: usize, cols: usize, mt: usize, ms: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Quaternary(#[from] QuaternaryError),
}

//! Subspace distances, codebook distance spectra, MUB verification and
//! storage / search complexity estimates.

mod complexity;
mod distance;

pub use complexity::{
    complexity_report, selection_ops, storage_bits, storage_bits_scenario, table2_scenario, CodebookKind,
    ComplexityReport, ModeSpec, OpCount, SelectionMode,
};
pub use distance::{
    average_inner_product, chordal, fubini_study, proj_2norm, rankin_bound, spectrum, verify_bases, verify_mub,
    DistanceSpectrum, Metric, MubReport, MubViolation, DISTINCT_TOLERANCE,
};

use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("vector is not unit norm (norm {0})")]
    NotUnit(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("chordal distance needs single-column codewords, got {0} columns")]
    ChordalOnMultiStream(usize),
    #[error("operation needs at least {needed} codewords, got {got}")]
    TooFewCodewords { needed: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("Kerdock storage is only defined for 2 or 4 transmit antennas, got {0}")]
    UnsupportedKerdock(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

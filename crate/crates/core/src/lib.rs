//! Kerdock (mutually unbiased bases) codebooks for limited-feedback MIMO
//! precoding: construction, distance analysis, receiver-side codeword
//! selection and Monte Carlo link simulation.

pub mod construct;
pub mod linalg;
pub mod metrics;
pub mod quaternary;
pub mod select;
pub mod sim;

pub use construct::{Codebook, MubSet};
pub use linalg::{Complex, ComplexMatrix};

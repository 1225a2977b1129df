use std::fmt;
use std::str::FromStr;

use super::MetricError;
use crate::construct::{Codebook, MubSet};
use crate::linalg::{self, Complex, ComplexMatrix};

/// Values closer than this are reported as one distinct distance.
pub const DISTINCT_TOLERANCE: f64 = 1e-9;

const UNIT_TOLERANCE: f64 = 1e-9;

/// Subspace distance used to score codebooks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// `sqrt(1 - |f1^* f2|^2)` between unit vectors.
    Chordal,
    /// `sqrt(1 - σ_min(F1^* F2)^2)`, the operator norm of the projector difference.
    Proj2Norm,
    /// `arccos |det(F1^* F2)|`, in radians.
    FubiniStudy,
}

impl Metric {
    pub fn distance(self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64, MetricError> {
        match self {
            Metric::Chordal => {
                if a.cols() != 1 || b.cols() != 1 {
                    return Err(MetricError::ChordalOnMultiStream(a.cols().max(b.cols())));
                }
                chordal(a.as_slice(), b.as_slice())
            }
            Metric::Proj2Norm => proj_2norm(a, b),
            Metric::FubiniStudy => fubini_study(a, b),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Chordal => "chordal",
            Metric::Proj2Norm => "proj2",
            Metric::FubiniStudy => "fubini-study",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "chordal" | "ch" => Ok(Metric::Chordal),
            "proj2" | "p2" | "proj-2norm" | "projection" => Ok(Metric::Proj2Norm),
            "fs" | "fubini-study" | "fubini" => Ok(Metric::FubiniStudy),
            other => Err(MetricError::InvalidArgument(format!("unknown metric '{}'", other))),
        }
    }
}

fn inner(a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn check_unit(v: &[Complex]) -> Result<(), MetricError> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(MetricError::NotUnit(norm));
    }
    Ok(())
}

/// Chordal distance between two unit vectors.
pub fn chordal(f1: &[Complex], f2: &[Complex]) -> Result<f64, MetricError> {
    if f1.len() != f2.len() {
        return Err(MetricError::DimensionMismatch(format!("{} vs {}", f1.len(), f2.len())));
    }
    check_unit(f1)?;
    check_unit(f2)?;
    let c = inner(f1, f2).norm_sqr().min(1.0);
    Ok((1.0 - c).sqrt())
}

fn cross_gram(f1: &ComplexMatrix, f2: &ComplexMatrix) -> Result<ComplexMatrix, MetricError> {
    if f1.rows() != f2.rows() || f1.cols() != f2.cols() {
        return Err(MetricError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            f1.rows(),
            f1.cols(),
            f2.rows(),
            f2.cols()
        )));
    }
    Ok(f1.hermitian_mul(f2)?)
}

/// Projection 2-norm distance between orthonormal-column matrices.
pub fn proj_2norm(f1: &ComplexMatrix, f2: &ComplexMatrix) -> Result<f64, MetricError> {
    let m = cross_gram(f1, f2)?;
    let sv = linalg::singular_values(&m)?;
    let smin = sv.last().copied().unwrap_or(0.0).min(1.0);
    Ok((1.0 - smin * smin).max(0.0).sqrt())
}

/// Fubini-Study distance (radians).
pub fn fubini_study(f1: &ComplexMatrix, f2: &ComplexMatrix) -> Result<f64, MetricError> {
    let m = cross_gram(f1, f2)?;
    let d = linalg::det(&m)?.norm().clamp(0.0, 1.0);
    Ok(d.acos())
}

/// Pairwise distances of a whole codebook.
#[derive(Debug, Clone)]
pub struct DistanceSpectrum {
    pub metric: Metric,
    pub n: usize,
    /// Row-major `n x n` symmetric matrix with zero diagonal.
    pub pairwise: Vec<f64>,
    pub min_offdiag: f64,
    /// Sorted off-diagonal values merged within [`DISTINCT_TOLERANCE`];
    /// each entry is the smallest member of its cluster.
    pub distinct_values: Vec<f64>,
}

impl DistanceSpectrum {
    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.pairwise[k * self.n + l]
    }
}

pub fn spectrum(cb: &Codebook, metric: Metric) -> Result<DistanceSpectrum, MetricError> {
    let n = cb.len();
    if n < 2 {
        return Err(MetricError::TooFewCodewords { needed: 2, got: n });
    }
    if metric == Metric::Chordal && cb.ms() != 1 {
        return Err(MetricError::ChordalOnMultiStream(cb.ms()));
    }
    let words = cb.codewords();
    let mut pairwise = vec![0.0; n * n];
    let mut offdiag = Vec::with_capacity(n * (n - 1) / 2);
    for k in 0..n {
        for l in (k + 1)..n {
            let d = metric.distance(&words[k], &words[l])?;
            pairwise[k * n + l] = d;
            pairwise[l * n + k] = d;
            offdiag.push(d);
        }
    }
    offdiag.sort_by(|a, b| a.partial_cmp(b).expect("finite distance"));
    let min_offdiag = offdiag[0];
    let mut distinct_values: Vec<f64> = Vec::new();
    for d in offdiag {
        match distinct_values.last() {
            Some(&last) if d - last <= DISTINCT_TOLERANCE => {}
            _ => distinct_values.push(d),
        }
    }
    Ok(DistanceSpectrum { metric, n, pairwise, min_offdiag, distinct_values })
}

/// Rankin upper bound on the minimum chordal distance of `n` lines in `C^mt`.
pub fn rankin_bound(n: usize, mt: usize) -> Result<f64, MetricError> {
    if n < 2 || mt < 1 {
        return Err(MetricError::InvalidArgument(format!("rankin bound needs n > 1, mt >= 1 (n={}, mt={})", n, mt)));
    }
    let (n, mt) = (n as f64, mt as f64);
    Ok((n * (mt - 1.0) / (mt * (n - 1.0))).sqrt())
}

/// Mean of `|f_l^* f_l'|^2` over ordered pairs `l != l'`.
pub fn average_inner_product(cb: &Codebook) -> Result<f64, MetricError> {
    if cb.ms() != 1 {
        return Err(MetricError::ChordalOnMultiStream(cb.ms()));
    }
    let n = cb.len();
    if n < 2 {
        return Err(MetricError::TooFewCodewords { needed: 2, got: n });
    }
    let words = cb.codewords();
    let mut total = 0.0;
    for l in 0..n {
        for lp in 0..n {
            if l != lp {
                total += inner(words[l].as_slice(), words[lp].as_slice()).norm_sqr();
            }
        }
    }
    Ok(total / (n * (n - 1)) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub enum MubViolation {
    /// `‖S^*S − I‖_max` exceeded the tolerance.
    NotOrthonormal { basis: usize, error: f64 },
    /// Some cross-basis column pair has `| |<s, u>| − 1/√mt | > tol`.
    Biased { a: usize, b: usize, col_a: usize, col_b: usize, magnitude: f64 },
    Shape { basis: usize, rows: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MubReport {
    pub ok: bool,
    pub violations: Vec<MubViolation>,
}

pub fn verify_mub(set: &MubSet, tol: f64) -> MubReport {
    verify_bases(&set.decoded(), tol)
}

/// Checks orthonormality of every basis and the mutually unbiased property
/// of every cross-basis column pair.
pub fn verify_bases(bases: &[ComplexMatrix], tol: f64) -> MubReport {
    let mut violations = Vec::new();
    let mt = bases.first().map(|b| b.rows()).unwrap_or(0);
    for (i, b) in bases.iter().enumerate() {
        if b.rows() != mt || b.cols() != mt {
            violations.push(MubViolation::Shape { basis: i, rows: b.rows(), cols: b.cols() });
        }
    }
    if !violations.is_empty() {
        return MubReport { ok: false, violations };
    }
    for (i, b) in bases.iter().enumerate() {
        let error = b.orthonormality_error();
        if error > tol {
            violations.push(MubViolation::NotOrthonormal { basis: i, error });
        }
    }
    let target = 1.0 / (mt as f64).sqrt();
    for a in 0..bases.len() {
        for b in (a + 1)..bases.len() {
            let g = bases[a].hermitian_mul(&bases[b]).expect("square bases of equal size");
            for col_a in 0..mt {
                for col_b in 0..mt {
                    let magnitude = g[(col_a, col_b)].norm();
                    if (magnitude - target).abs() > tol {
                        violations.push(MubViolation::Biased { a, b, col_a, col_b, magnitude });
                    }
                }
            }
        }
    }
    MubReport { ok: violations.is_empty(), violations }
}

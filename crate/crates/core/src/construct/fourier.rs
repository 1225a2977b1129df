use std::f64::consts::PI;

use super::{Codebook, ConstructError};
use crate::linalg::{Complex, ComplexMatrix};
use crate::metrics::Metric;

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// Unit-norm `mt x mt` DFT matrix, entry `(k, l)` = `exp(2πj·kl/mt)/√mt`.
pub fn dft_matrix(mt: usize) -> ComplexMatrix {
    let s = 1.0 / (mt as f64).sqrt();
    ComplexMatrix::from_fn(mt, mt, |k, l| {
        let phase = 2.0 * PI * ((k * l) % mt) as f64 / mt as f64;
        Complex::from_polar(s, phase)
    })
}

fn check_dims(mt: usize, ms: usize, n: usize) -> Result<(), ConstructError> {
    if mt == 0 || ms == 0 || ms > mt {
        return Err(ConstructError::InvalidStreams { ms, mt });
    }
    if n == 0 {
        return Err(ConstructError::EmptyCodebook);
    }
    Ok(())
}

fn rotation_phases(u: &[usize], k: usize, n: usize) -> Vec<Complex> {
    u.iter()
        .map(|&ui| {
            let m = (ui * k) % n;
            Complex::from_polar(1.0, 2.0 * PI * m as f64 / n as f64)
        })
        .collect()
}

fn rotated(f0: &ComplexMatrix, phases: &[Complex]) -> ComplexMatrix {
    ComplexMatrix::from_fn(f0.rows(), f0.cols(), |i, j| phases[i] * f0[(i, j)])
}

/// Codebook `{Θ^k F₀ : k = 0..n}` with `Θ = diag(exp(2πj·u_i/n))` and `F₀`
/// the first `ms` DFT columns.
pub fn fourier_codebook(mt: usize, ms: usize, n: usize, u: &[usize]) -> Result<Codebook, ConstructError> {
    check_dims(mt, ms, n)?;
    if u.len() != mt {
        return Err(ConstructError::InvalidExponent(format!("expected {} exponents, got {}", mt, u.len())));
    }
    if let Some(&bad) = u.iter().find(|&&x| x >= n) {
        return Err(ConstructError::InvalidExponent(format!("exponent {} outside [0, {})", bad, n)));
    }
    let f0 = dft_matrix(mt).select_columns(&(0..ms).collect::<Vec<_>>());
    let mut words = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for k in 0..n {
        words.push(rotated(&f0, &rotation_phases(u, k, n)));
        labels.push(format!("theta^{}", k));
    }
    Codebook::new(words, labels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSearch {
    pub u: Vec<usize>,
    pub min_distance: f64,
}

/// Exhaustive search for the exponent vector maximising the minimum pairwise
/// distance. `u₀` is fixed to 0: a common phase on all antennas leaves every
/// subspace distance unchanged, so this loses no candidate distances. The
/// enumerated space is therefore `n^(mt-1)`.
pub fn search_fourier_generator(
    mt: usize,
    ms: usize,
    n: usize,
    metric: Metric,
    budget: u64,
) -> Result<FourierSearch, ConstructError> {
    check_dims(mt, ms, n)?;
    if metric == Metric::Chordal && ms != 1 {
        return Err(crate::metrics::MetricError::ChordalOnMultiStream(ms).into());
    }
    let space = (n as u128).pow(mt as u32 - 1);
    if space > budget as u128 {
        return Err(ConstructError::BudgetExceeded { space, budget });
    }
    let f0 = dft_matrix(mt).select_columns(&(0..ms).collect::<Vec<_>>());
    if n == 1 {
        return Ok(FourierSearch { u: vec![0; mt], min_distance: 0.0 });
    }

    // d(Θ^k F₀, Θ^l F₀) depends only on (l − k) mod n, and the differences
    // d and n − d give the same distance.
    let diffs: Vec<usize> = (1..=n / 2).collect();
    let mut u = vec![0usize; mt];
    let mut best: Option<FourierSearch> = None;
    loop {
        let mut min = f64::INFINITY;
        for &d in &diffs {
            let w = rotated(&f0, &rotation_phases(&u, d, n));
            let dist = metric.distance(&f0, &w)?;
            if dist < min {
                min = dist;
            }
            if let Some(b) = &best {
                if min <= b.min_distance + 1e-12 {
                    break;
                }
            }
        }
        if best.as_ref().is_none_or(|b| min > b.min_distance + 1e-12) {
            best = Some(FourierSearch { u: u.clone(), min_distance: min });
        }
        // Odometer over u[1..], last index fastest, giving lexicographic order.
        let mut pos = mt;
        loop {
            if pos == 1 {
                return Ok(best.expect("at least one candidate"));
            }
            pos -= 1;
            u[pos] += 1;
            if u[pos] < n {
                break;
            }
            u[pos] = 0;
        }
    }
}

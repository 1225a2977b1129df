use super::{SimError, SimResult};

/// SNR (dB) where a decreasing curve first falls below `target`, by linear
/// interpolation of `log10(value)` against dB. If the point after the
/// crossing has value 0 the interpolation falls back to linear values.
fn crossing_decreasing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target && y1 < target {
            if y1 > 0.0 {
                let (l0, l1, lt) = (y0.log10(), y1.log10(), target.log10());
                return Some(x0 + (lt - l0) / (l1 - l0) * (x1 - x0));
            }
            return Some(x0 + (y0 - target) / (y0 - y1) * (x1 - x0));
        }
    }
    None
}

/// SNR where an increasing curve first reaches `target`, linear in both axes.
fn crossing_increasing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    for w in points.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 <= target && y1 >= target {
            if y1 == y0 {
                return Some(x0);
            }
            return Some(x0 + (target - y0) / (y1 - y0) * (x1 - x0));
        }
    }
    None
}

fn not_bracketed(what: &str, target: f64) -> SimError {
    SimError::NotBracketed(format!("{} never crosses {:e} within the simulated range", what, target))
}

/// SNR at which the VSER curve crosses `target`.
pub fn vser_crossing(curve: &SimResult, target: f64) -> Result<f64, SimError> {
    if !(target > 0.0 && target < 1.0) {
        return Err(SimError::InvalidConfig(format!("target VSER {} outside (0, 1)", target)));
    }
    let pts: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.snr_db, p.vser)).collect();
    crossing_decreasing(&pts, target).ok_or_else(|| not_bracketed("VSER curve", target))
}

/// Crossings of the lower and upper 95% confidence curves, i.e. an interval
/// for [`vser_crossing`]. Returned as `(earliest, latest)`.
pub fn vser_crossing_interval(curve: &SimResult, target: f64) -> Result<(f64, f64), SimError> {
    let lower: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.snr_db, (p.vser - p.ci_halfwidth).max(0.0))).collect();
    let upper: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.snr_db, (p.vser + p.ci_halfwidth).min(1.0))).collect();
    let lo = crossing_decreasing(&lower, target).ok_or_else(|| not_bracketed("lower confidence curve", target))?;
    let hi = crossing_decreasing(&upper, target).ok_or_else(|| not_bracketed("upper confidence curve", target))?;
    Ok((lo, hi))
}

/// Extra SNR `other` needs over `reference` to reach `target_vser`.
pub fn snr_gap(reference: &SimResult, other: &SimResult, target_vser: f64) -> Result<f64, SimError> {
    Ok(vser_crossing(other, target_vser)? - vser_crossing(reference, target_vser)?)
}

fn rate_points(curve: &SimResult) -> Result<Vec<(f64, f64)>, SimError> {
    curve
        .points
        .iter()
        .map(|p| p.rate_bpcu.map(|r| (p.snr_db, r)))
        .collect::<Option<_>>()
        .ok_or_else(|| SimError::InvalidConfig("curve has no rate measurements".into()))
}

/// SNR at which the rate curve reaches `level` bits per channel use.
pub fn rate_crossing(curve: &SimResult, level: f64) -> Result<f64, SimError> {
    crossing_increasing(&rate_points(curve)?, level).ok_or_else(|| not_bracketed("rate curve", level))
}

/// Rate at `snr_db`, interpolated linearly between simulated points.
pub fn rate_at(curve: &SimResult, snr_db: f64) -> Result<f64, SimError> {
    let pts = rate_points(curve)?;
    for w in pts.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x0 <= snr_db && snr_db <= x1 {
            return Ok(y0 + (snr_db - x0) / (x1 - x0) * (y1 - y0));
        }
    }
    match pts.as_slice() {
        [(x, y)] if *x == snr_db => Ok(*y),
        _ => Err(SimError::NotBracketed(format!("{} dB outside the simulated range", snr_db))),
    }
}

/// Horizontal distance (dB) between two rate curves at `level`.
pub fn rate_gap(reference: &SimResult, other: &SimResult, level: f64) -> Result<f64, SimError> {
    Ok(rate_crossing(other, level)? - rate_crossing(reference, level)?)
}

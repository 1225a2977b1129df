use std::fmt;
use std::str::FromStr;

use super::MetricError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodebookKind {
    Kerdock,
    Fourier,
    Grassmannian,
}

impl fmt::Display for CodebookKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodebookKind::Kerdock => "kerdock",
            CodebookKind::Fourier => "fourier",
            CodebookKind::Grassmannian => "grassmannian",
        })
    }
}

impl FromStr for CodebookKind {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "kerdock" | "mub" => Ok(CodebookKind::Kerdock),
            "fourier" => Ok(CodebookKind::Fourier),
            "grassmannian" | "grassmann" => Ok(CodebookKind::Grassmannian),
            other => Err(MetricError::InvalidArgument(format!("unknown codebook kind '{}'", other))),
        }
    }
}

/// Row group of the search-complexity table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionMode {
    Beamforming,
    /// Spatial multiplexing scored by projection 2-norm.
    SmProj2,
    /// Spatial multiplexing scored by Fubini-Study distance.
    SmFubiniStudy,
}

impl SelectionMode {
    pub const ALL: [SelectionMode; 3] = [SelectionMode::Beamforming, SelectionMode::SmProj2, SelectionMode::SmFubiniStudy];
}

impl fmt::Display for SelectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMode::Beamforming => "beamforming",
            SelectionMode::SmProj2 => "sm-proj2",
            SelectionMode::SmFubiniStudy => "sm-fubini-study",
        })
    }
}

/// One transmission mode stored in a codebook family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeSpec {
    pub ms: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpCount {
    pub multiplies: u64,
    pub additions: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityReport {
    pub kind: CodebookKind,
    pub mode: SelectionMode,
    pub storage_bits: u64,
    pub multiplies: u64,
    pub additions: u64,
}

fn positive(values: &[(&str, usize)]) -> Result<(), MetricError> {
    for (name, v) in values {
        if *v == 0 {
            return Err(MetricError::InvalidArgument(format!("{} must be positive", name)));
        }
    }
    Ok(())
}

/// Bits needed to store one codebook of `n` codewords of size `mt x ms`
/// when a real number takes `nb` bits.
///
/// Kerdock codebooks store only the generator: an `mt`-entry quaternary
/// diagonal (2 bits per entry) plus the ±1 Sylvester-Hadamard pattern
/// (1 bit per entry of the `2x2` kernel), independent of `n` and `nb`.
pub fn storage_bits(kind: CodebookKind, mt: usize, ms: usize, n: usize, nb: usize) -> Result<u64, MetricError> {
    positive(&[("mt", mt), ("ms", ms), ("n", n), ("nb", nb)])?;
    let (mt, ms, n, nb) = (mt as u64, ms as u64, n as u64, nb as u64);
    Ok(match kind {
        CodebookKind::Grassmannian => 2 * nb * n * mt * ms,
        CodebookKind::Fourier => 2 * nb * (mt + mt * ms),
        CodebookKind::Kerdock => match mt {
            2 => 8,
            4 => 12,
            other => return Err(MetricError::UnsupportedKerdock(other as usize)),
        },
    })
}

/// Storage for a family of codebooks covering several modes. Grassmannian
/// and Fourier store one codebook per mode (a Fourier mode keeps its own
/// generator and the `mt x ms` DFT columns it uses); a Kerdock family shares
/// one generator across all modes.
pub fn storage_bits_scenario(kind: CodebookKind, mt: usize, modes: &[ModeSpec], nb: usize) -> Result<u64, MetricError> {
    if modes.is_empty() {
        return Err(MetricError::InvalidArgument("scenario needs at least one mode".into()));
    }
    match kind {
        CodebookKind::Kerdock => {
            for m in modes {
                positive(&[("ms", m.ms), ("n", m.n)])?;
            }
            storage_bits(kind, mt, 1, 1, nb.max(1))
        }
        _ => modes.iter().map(|m| storage_bits(kind, mt, m.ms, m.n, nb)).sum(),
    }
}

/// The comparison scenario with four transmit antennas, a 16-entry
/// beamforming codebook and an 8-entry two-stream precoding codebook.
pub fn table2_scenario() -> (usize, [ModeSpec; 2]) {
    (4, [ModeSpec { ms: 1, n: 16 }, ModeSpec { ms: 2, n: 8 }])
}

/// Complex multiplies and additions for an exhaustive codeword search.
/// Kerdock entries are `{0, ±1, ±j}` up to scale, so its multiply count is 0;
/// additions are the same as for a generic codebook.
pub fn selection_ops(
    kind: CodebookKind,
    mode: SelectionMode,
    n: usize,
    mt: usize,
    mr: usize,
    ms: usize,
) -> Result<OpCount, MetricError> {
    positive(&[("n", n), ("mt", mt), ("mr", mr), ("ms", ms)])?;
    let (n, mt, mr, ms) = (n as u64, mt as u64, mr as u64, ms as u64);
    let (multiplies, additions) = match mode {
        SelectionMode::Beamforming => (n * mt * mr, n * mr * (mt - 1)),
        SelectionMode::SmProj2 => (n * ms * mr * mr, n * mr * mr * (ms - 1)),
        SelectionMode::SmFubiniStudy => (n * ms * ms * mr, n * ms * ms * (mr - 1)),
    };
    let multiplies = if kind == CodebookKind::Kerdock { 0 } else { multiplies };
    Ok(OpCount { multiplies, additions })
}

pub fn complexity_report(
    kind: CodebookKind,
    mode: SelectionMode,
    n: usize,
    mt: usize,
    mr: usize,
    ms: usize,
    nb: usize,
) -> Result<ComplexityReport, MetricError> {
    let ops = selection_ops(kind, mode, n, mt, mr, ms)?;
    Ok(ComplexityReport {
        kind,
        mode,
        storage_bits: storage_bits(kind, mt, ms, n, nb)?,
        multiplies: ops.multiplies,
        additions: ops.additions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table2_values() {
        let (mt, modes) = table2_scenario();
        for nb in [1usize, 8, 16] {
            assert_eq!(storage_bits_scenario(CodebookKind::Kerdock, mt, &modes, nb).unwrap(), 12);
            assert_eq!(storage_bits_scenario(CodebookKind::Fourier, mt, &modes, nb).unwrap(), 40 * nb as u64);
            assert_eq!(storage_bits_scenario(CodebookKind::Grassmannian, mt, &modes, nb).unwrap(), 256 * nb as u64);
        }
        assert_eq!(storage_bits(CodebookKind::Kerdock, 2, 1, 6, 16).unwrap(), 8);
        assert!(matches!(
            storage_bits(CodebookKind::Kerdock, 8, 1, 6, 16),
            Err(MetricError::UnsupportedKerdock(8))
        ));
    }

    #[test]
    fn table3_rows() {
        let g = selection_ops(CodebookKind::Grassmannian, SelectionMode::Beamforming, 16, 4, 4, 1).unwrap();
        assert_eq!(g, OpCount { multiplies: 256, additions: 192 });
        for mode in SelectionMode::ALL {
            let k = selection_ops(CodebookKind::Kerdock, mode, 16, 4, 4, 2).unwrap();
            let f = selection_ops(CodebookKind::Fourier, mode, 16, 4, 4, 2).unwrap();
            assert_eq!(k.multiplies, 0);
            assert_eq!(k.additions, f.additions);
        }
        let p2 = selection_ops(CodebookKind::Fourier, SelectionMode::SmProj2, 8, 4, 4, 2).unwrap();
        assert_eq!(p2, OpCount { multiplies: 8 * 2 * 16, additions: 8 * 16 });
        let fs = selection_ops(CodebookKind::Fourier, SelectionMode::SmFubiniStudy, 8, 4, 4, 2).unwrap();
        assert_eq!(fs, OpCount { multiplies: 8 * 4 * 4, additions: 8 * 4 * 3 });
    }

    #[test]
    fn zero_parameters_rejected() {
        assert!(selection_ops(CodebookKind::Fourier, SelectionMode::Beamforming, 0, 4, 4, 1).is_err());
        assert!(storage_bits(CodebookKind::Grassmannian, 4, 1, 16, 0).is_err());
    }
}

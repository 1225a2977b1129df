//! Plain-text codebook format:
//!
//! ```text
//! codebook v1 mt=4 ms=1 n=20
//! # 0 S0[1]
//! <re> <im>
//! ...
//! ```
//!
//! Each codeword is a `# <index> <label>` line followed by `mt` rows of `ms`
//! `<re> <im>` pairs. Blank lines are ignored.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Codebook, ConstructError};
use crate::linalg::{Complex, ComplexMatrix};

/// Orthonormality slack allowed for codebooks read from text.
pub const LOAD_ORTHONORMAL_TOLERANCE: f64 = 1e-6;

/// Writes `cb`. Floats use the shortest representation that parses back to
/// the same value, so a save/load round trip is bit-exact.
pub fn write_codebook<W: Write>(cb: &Codebook, mut out: W) -> std::io::Result<()> {
    writeln!(out, "codebook v1 mt={} ms={} n={}", cb.mt(), cb.ms(), cb.len())?;
    for (i, w) in cb.codewords().iter().enumerate() {
        writeln!(out, "# {} {}", i, cb.label(i))?;
        for r in 0..w.rows() {
            let row: Vec<String> = (0..w.cols())
                .map(|c| {
                    let z = w[(r, c)];
                    format!("{:?} {:?}", z.re, z.im)
                })
                .collect();
            writeln!(out, "{}", row.join("  "))?;
        }
    }
    Ok(())
}

pub fn save_codebook(cb: &Codebook, path: impl AsRef<Path>) -> Result<(), ConstructError> {
    let mut buf = Vec::new();
    write_codebook(cb, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load_codebook(path: impl AsRef<Path>) -> Result<Codebook, ConstructError> {
    parse_codebook(&fs::read_to_string(path)?)
}

fn parse_err(line: usize, message: impl Into<String>) -> ConstructError {
    ConstructError::Parse { line, message: message.into() }
}

fn header_field(token: Option<&str>, key: &str, line: usize) -> Result<usize, ConstructError> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing {}=", key)))?;
    let value = token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected {}=<int>, got '{}'", key, token)))?;
    value.parse().map_err(|_| parse_err(line, format!("invalid {} value '{}'", key, value)))
}

pub fn parse_codebook(text: &str) -> Result<Codebook, ConstructError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("codebook") || tokens.next() != Some("v1") {
        return Err(parse_err(hline, "expected header 'codebook v1 mt=<int> ms=<int> n=<int>'"));
    }
    let mt = header_field(tokens.next(), "mt", hline)?;
    let ms = header_field(tokens.next(), "ms", hline)?;
    let n = header_field(tokens.next(), "n", hline)?;
    if let Some(extra) = tokens.next() {
        return Err(parse_err(hline, format!("unexpected header token '{}'", extra)));
    }
    if mt == 0 || ms == 0 || ms > mt {
        return Err(parse_err(hline, format!("invalid dimensions mt={} ms={}", mt, ms)));
    }
    if n == 0 {
        return Err(parse_err(hline, "n must be positive"));
    }

    let mut words = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for k in 0..n {
        let (lno, line) = lines.next().ok_or_else(|| parse_err(hline, format!("expected {} codewords, found {}", n, k)))?;
        let rest = line
            .strip_prefix('#')
            .ok_or_else(|| parse_err(lno, format!("expected '# <index> <label>' for codeword {}", k)))?
            .trim();
        let (index, label) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
        let index: usize = index.parse().map_err(|_| parse_err(lno, format!("invalid codeword index '{}'", index)))?;
        if index != k {
            return Err(parse_err(lno, format!("codeword index {} out of order, expected {}", index, k)));
        }
        labels.push(label.trim().to_string());

        let mut data = Vec::with_capacity(mt * ms);
        for _ in 0..mt {
            let (rno, row) = lines.next().ok_or_else(|| parse_err(lno, format!("codeword {} is truncated", k)))?;
            let values: Vec<f64> = row
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| parse_err(rno, format!("invalid number '{}'", t))))
                .collect::<Result<_, _>>()?;
            if values.len() != 2 * ms {
                return Err(parse_err(rno, format!("expected {} numbers, found {}", 2 * ms, values.len())));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(parse_err(rno, "non-finite value"));
            }
            data.extend(values.chunks(2).map(|p| Complex::new(p[0], p[1])));
        }
        words.push(ComplexMatrix::from_vec(mt, ms, data)?);
    }
    if let Some((lno, _)) = lines.next() {
        return Err(parse_err(lno, format!("trailing content after {} codewords", n)));
    }

    let mut cb = Codebook::with_tolerance(words, labels, LOAD_ORTHONORMAL_TOLERANCE)?;
    cb.recognize_quaternary(1e-12);
    Ok(cb)
}

//! Exact finite-alphabet matrices.
//!
//! [`GaussianMatrix`] holds Gaussian-integer entries with a global scale of
//! `2^(-e/2)`, which is closed under multiplication and therefore lets basis
//! powers be computed without rounding. [`QuaternaryMatrix`] is the stricter
//! storage form whose entries are drawn from `{0, +1, -1, +j, -j}`.

use std::fmt;

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::{self, ComplexMatrix};

/// Gaussian integer `a + bj`.
pub type GaussianInt = Complex<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuaternaryError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("entry ({row},{col}) = {value} is not in the quaternary alphabet after normalisation")]
    NotQuaternary { row: usize, col: usize, value: String },
    #[error("matrix must be square")]
    NotSquare,
    #[error("{0}")]
    Shape(String),
}

/// One 3-bit codeword symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quaternary {
    Zero,
    P1,
    M1,
    PJ,
    MJ,
}

impl Quaternary {
    pub fn from_gaussian(z: GaussianInt) -> Option<Quaternary> {
        match (z.re, z.im) {
            (0, 0) => Some(Quaternary::Zero),
            (1, 0) => Some(Quaternary::P1),
            (-1, 0) => Some(Quaternary::M1),
            (0, 1) => Some(Quaternary::PJ),
            (0, -1) => Some(Quaternary::MJ),
            _ => None,
        }
    }

    pub fn to_gaussian(self) -> GaussianInt {
        match self {
            Quaternary::Zero => Complex::new(0, 0),
            Quaternary::P1 => Complex::new(1, 0),
            Quaternary::M1 => Complex::new(-1, 0),
            Quaternary::PJ => Complex::new(0, 1),
            Quaternary::MJ => Complex::new(0, -1),
        }
    }

    pub fn to_complex(self) -> linalg::Complex {
        let g = self.to_gaussian();
        linalg::Complex::new(g.re as f64, g.im as f64)
    }

    /// `h * self` using only sign changes and real/imaginary swaps.
    #[inline]
    pub fn apply(self, h: linalg::Complex) -> linalg::Complex {
        match self {
            Quaternary::Zero => linalg::Complex::new(0.0, 0.0),
            Quaternary::P1 => h,
            Quaternary::M1 => -h,
            Quaternary::PJ => linalg::Complex::new(-h.im, h.re),
            Quaternary::MJ => linalg::Complex::new(h.im, -h.re),
        }
    }

    /// Two-bit phase code plus a zero flag, packed into the low 3 bits.
    pub fn bits(self) -> u8 {
        match self {
            Quaternary::Zero => 0b100,
            Quaternary::P1 => 0b000,
            Quaternary::PJ => 0b001,
            Quaternary::M1 => 0b010,
            Quaternary::MJ => 0b011,
        }
    }
}

/// Global scale `2^(-exp/2)`: 0 → 1, 1 → 1/√2, 2 → 1/2, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct HalfPowerScale(pub u32);

impl HalfPowerScale {
    pub fn value(self) -> f64 {
        0.5f64.powf(self.0 as f64 / 2.0)
    }

    /// Scale `1/√mt` for a power-of-two `mt`.
    pub fn inv_sqrt(mt: usize) -> Option<Self> {
        if mt.is_power_of_two() {
            Some(HalfPowerScale(mt.trailing_zeros()))
        } else {
            None
        }
    }
}

/// Matrix of Gaussian integers times `2^(-exp/2)`; kept normalised so that
/// the integer entries share no common factor of 2 unless `exp < 2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianInt>,
    scale: HalfPowerScale,
}

impl GaussianMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<GaussianInt>, scale: HalfPowerScale) -> Result<Self, QuaternaryError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(QuaternaryError::Shape(format!("{} entries for {}x{}", entries.len(), rows, cols)));
        }
        let mut m = GaussianMatrix { rows, cols, entries, scale };
        m.normalize();
        Ok(m)
    }

    /// Parses rows of `(re, im)` integer pairs.
    pub fn from_int_rows<R: AsRef<[(i64, i64)]>>(rows: &[R], scale: HalfPowerScale) -> Result<Self, QuaternaryError> {
        let r = rows.len();
        let c = rows.first().map(|x| x.as_ref().len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(QuaternaryError::Shape("ragged rows".into()));
            }
            entries.extend(row.iter().map(|&(a, b)| Complex::new(a, b)));
        }
        Self::new(r, c, entries, scale)
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { Complex::new(1, 0) } else { Complex::new(0, 0) })
            .collect();
        GaussianMatrix { rows: n, cols: n, entries, scale: HalfPowerScale(0) }
    }

    pub fn diag(values: &[GaussianInt], scale: HalfPowerScale) -> Self {
        let n = values.len();
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { values[k / n] } else { Complex::new(0, 0) })
            .collect();
        let mut m = GaussianMatrix { rows: n, cols: n, entries, scale };
        m.normalize();
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scale(&self) -> HalfPowerScale {
        self.scale
    }

    pub fn entry(&self, i: usize, j: usize) -> GaussianInt {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[GaussianInt] {
        &self.entries
    }

    fn normalize(&mut self) {
        while self.scale.0 >= 2 && self.entries.iter().all(|z| z.re % 2 == 0 && z.im % 2 == 0) {
            for z in &mut self.entries {
                *z = Complex::new(z.re / 2, z.im / 2);
            }
            self.scale.0 -= 2;
        }
    }

    pub fn matmul(&self, rhs: &GaussianMatrix) -> Result<GaussianMatrix, QuaternaryError> {
        if self.cols != rhs.rows {
            return Err(QuaternaryError::DimensionMismatch(self.rows, self.cols, rhs.rows, rhs.cols));
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex::new(0i64, 0i64);
                for k in 0..self.cols {
                    acc += self.entry(i, k) * rhs.entry(k, j);
                }
                entries.push(acc);
            }
        }
        GaussianMatrix::new(self.rows, rhs.cols, entries, HalfPowerScale(self.scale.0 + rhs.scale.0))
    }

    pub fn hermitian(&self) -> GaussianMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entry(i, j).conj());
            }
        }
        GaussianMatrix { rows: self.cols, cols: self.rows, entries, scale: self.scale }
    }

    /// `self^k` for `k >= 1`.
    pub fn pow(&self, k: u32) -> Result<GaussianMatrix, QuaternaryError> {
        if self.rows != self.cols {
            return Err(QuaternaryError::NotSquare);
        }
        let mut acc = GaussianMatrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == GaussianMatrix::identity(self.rows)
    }

    pub fn select_columns(&self, cols: &[usize]) -> GaussianMatrix {
        let mut entries = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                entries.push(self.entry(i, j));
            }
        }
        GaussianMatrix::new(self.rows, cols.len(), entries, self.scale).expect("non-empty selection")
    }

    /// Squared modulus of entry `(i, j)` as the exact pair
    /// `(|z|², e)` meaning `|z|² · 2^(-e)`.
    pub fn entry_norm_sqr(&self, i: usize, j: usize) -> (i64, u32) {
        (self.entry(i, j).norm_sqr(), self.scale.0)
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        let s = self.scale.value();
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let z = self.entry(i, j);
            linalg::Complex::new(z.re as f64 * s, z.im as f64 * s)
        })
    }

    /// True when every entry lies in `{0, ±1, ±j}` (before scaling).
    pub fn is_quaternary(&self) -> bool {
        self.entries.iter().all(|&z| Quaternary::from_gaussian(z).is_some())
    }
}

impl fmt::Debug for GaussianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GaussianMatrix {}x{} * 2^(-{}/2) [", self.rows, self.cols, self.scale.0)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self.entry(i, j);
                write!(f, " {:+}{:+}j", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Matrix with entries in `{0, ±1, ±j}` and one global scale.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuaternaryMatrix {
    rows: usize,
    cols: usize,
    codes: Vec<Quaternary>,
    scale: HalfPowerScale,
}

impl QuaternaryMatrix {
    pub fn new(rows: usize, cols: usize, codes: Vec<Quaternary>, scale: HalfPowerScale) -> Result<Self, QuaternaryError> {
        if rows == 0 || cols == 0 || codes.len() != rows * cols {
            return Err(QuaternaryError::Shape(format!("{} codes for {}x{}", codes.len(), rows, cols)));
        }
        Ok(QuaternaryMatrix { rows, cols, codes, scale })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn code(&self, i: usize, j: usize) -> Quaternary {
        self.codes[i * self.cols + j]
    }

    pub fn codes(&self) -> &[Quaternary] {
        &self.codes
    }

    pub fn scale(&self) -> HalfPowerScale {
        self.scale
    }

    pub fn decode(&self) -> ComplexMatrix {
        let s = self.scale.value();
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| self.code(i, j).to_complex() * s)
    }

    pub fn to_gaussian(&self) -> GaussianMatrix {
        GaussianMatrix::new(self.rows, self.cols, self.codes.iter().map(|q| q.to_gaussian()).collect(), self.scale)
            .expect("shape already validated")
    }

    pub fn select_columns(&self, cols: &[usize]) -> QuaternaryMatrix {
        let mut codes = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                codes.push(self.code(i, j));
            }
        }
        QuaternaryMatrix { rows: self.rows, cols: cols.len(), codes, scale: self.scale }
    }

    /// Recovers the quaternary form of a decoded matrix when every entry is
    /// within `tol` of `{0, ±s, ±js}` for `s ∈ {1, 1/√2, 1/2, ...}`.
    pub fn recognize(m: &ComplexMatrix, tol: f64) -> Option<QuaternaryMatrix> {
        let magnitude = m.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let exp = (0..=16u32).find(|&e| (HalfPowerScale(e).value() - magnitude).abs() <= tol)?;
        let scale = HalfPowerScale(exp);
        let s = scale.value();
        let mut codes = Vec::with_capacity(m.rows() * m.cols());
        for z in m.as_slice() {
            let candidates = [Quaternary::Zero, Quaternary::P1, Quaternary::M1, Quaternary::PJ, Quaternary::MJ];
            let q = candidates.into_iter().find(|q| (q.to_complex() * s - z).norm() <= tol)?;
            codes.push(q);
        }
        Some(QuaternaryMatrix { rows: m.rows(), cols: m.cols(), codes, scale })
    }
}

impl TryFrom<&GaussianMatrix> for QuaternaryMatrix {
    type Error = QuaternaryError;

    fn try_from(g: &GaussianMatrix) -> Result<Self, Self::Error> {
        let mut codes = Vec::with_capacity(g.rows * g.cols);
        for i in 0..g.rows {
            for j in 0..g.cols {
                let z = g.entry(i, j);
                let q = Quaternary::from_gaussian(z).ok_or_else(|| QuaternaryError::NotQuaternary {
                    row: i,
                    col: j,
                    value: format!("{}{:+}j", z.re, z.im),
                })?;
                codes.push(q);
            }
        }
        Ok(QuaternaryMatrix { rows: g.rows, cols: g.cols, codes, scale: g.scale })
    }
}

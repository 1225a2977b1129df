//! Small-dimension dense complex linear algebra.
//!
//! Everything here targets matrices of at most [`MAX_DIM`] rows and columns:
//! channel matrices, precoders and the products between them. The SVD is a
//! one-sided (Hestenes) Jacobi iteration with complex rotations, which at
//! these sizes converges in a handful of sweeps and is accurate to a few ulps.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

/// Largest supported row or column count.
pub const MAX_DIM: usize = 8;

/// Numerical tolerances shared by the linear-algebra routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Jacobi sweeps stop once every column pair satisfies
    /// `|a_p^* a_q| <= jacobi_offdiag * ‖a_p‖‖a_q‖`.
    pub jacobi_offdiag: f64,
    /// Upper bound on Jacobi sweeps.
    pub jacobi_max_sweeps: usize,
    /// A matrix is treated as rank deficient when
    /// `σ_min <= rank_relative * σ_max`.
    pub rank_relative: f64,
    /// Orthonormality tolerance used when validating constructed bases.
    pub unitary: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        jacobi_offdiag: 1e-15,
        jacobi_max_sweeps: 60,
        rank_relative: 1e-10,
        unitary: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension {rows}x{cols} exceeds the supported maximum of {MAX_DIM}")]
    TooLarge { rows: usize, cols: usize },
    #[error("matrix has an empty dimension")]
    Empty,
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is rank deficient (smallest singular value {sigma_min:e}, largest {sigma_max:e})")]
    RankDeficient { sigma_min: f64, sigma_max: f64 },
}

fn mismatch(a: &ComplexMatrix, b: &ComplexMatrix) -> LinalgError {
    LinalgError::DimensionMismatch {
        left: format!("{}x{}", a.rows, a.cols),
        right: format!("{}x{}", b.rows, b.cols),
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    /// All-zero matrix. Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                left: format!("{}x{}", rows, cols),
                right: format!("{} entries", data.len()),
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<R: AsRef<[Complex]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map(|row| row.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch {
                    left: format!("row of length {}", c),
                    right: format!("row of length {}", row.len()),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_vec(r, c, data)
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Square diagonal matrix.
    pub fn diag(values: &[Complex]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { Complex::new(0.0, 0.0) })
    }

    /// Column vector.
    pub fn column_vector(values: &[Complex]) -> Self {
        Self::from_vec(values.len(), 1, values.to_vec()).expect("non-empty column vector")
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
    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex] {
        &mut self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        self.matmul_into(rhs, &mut out)?;
        Ok(out)
    }

    /// `out = self * rhs` without allocating. Accumulation runs over the
    /// inner index in ascending order starting from zero.
    pub fn matmul_into(&self, rhs: &ComplexMatrix, out: &mut ComplexMatrix) -> Result<(), LinalgError> {
        if self.cols != rhs.rows {
            return Err(mismatch(self, rhs));
        }
        if out.rows != self.rows || out.cols != rhs.cols {
            return Err(mismatch(out, &ComplexMatrix::zeros(self.rows, rhs.cols)));
        }
        for i in 0..self.rows {
            let a_row = &self.data[i * self.cols..(i + 1) * self.cols];
            for j in 0..rhs.cols {
                let mut acc = Complex::new(0.0, 0.0);
                for (k, a) in a_row.iter().enumerate() {
                    acc += a * rhs.data[k * rhs.cols + j];
                }
                out.data[i * out.cols + j] = acc;
            }
        }
        Ok(())
    }

    /// `self^* * rhs`.
    pub fn hermitian_mul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        if self.rows != rhs.rows {
            return Err(mismatch(self, rhs));
        }
        Ok(Self::from_fn(self.cols, rhs.cols, |i, j| {
            (0..self.rows).fold(Complex::new(0.0, 0.0), |acc, k| acc + self[(k, i)].conj() * rhs[(k, j)])
        }))
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &ComplexMatrix, f: impl Fn(Complex, Complex) -> Complex) -> Result<ComplexMatrix, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(mismatch(self, rhs));
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Largest entrywise modulus of `self - rhs`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        match self.sub(rhs) {
            Ok(d) => d.data.iter().map(|z| z.norm()).fold(0.0, f64::max),
            Err(_) => f64::INFINITY,
        }
    }

    /// `‖A^*A − I‖_max`, i.e. how far the columns are from orthonormal.
    pub fn orthonormality_error(&self) -> f64 {
        let gram = self.hermitian_mul(self).expect("A^*A always conforms");
        gram.max_abs_diff(&ComplexMatrix::identity(self.cols))
    }

    fn check_size(&self) -> Result<(), LinalgError> {
        if self.rows > MAX_DIM || self.cols > MAX_DIM {
            return Err(LinalgError::TooLarge { rows: self.rows, cols: self.cols });
        }
        if !self.is_finite() {
            return Err(LinalgError::NonFinite);
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}j  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Thin singular value decomposition `A = U diag(σ) V^*`.
///
/// For an `m x n` input with `k = min(m, n)`, `u` is `m x k`, `v` is `n x k`
/// and `singular_values` has length `k`, sorted in nonincreasing order.
/// Equal singular values keep the column order in which Jacobi produced them.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SvdResult {
    /// `U diag(σ) V^*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let k = self.singular_values.len();
        let us = ComplexMatrix::from_fn(self.u.rows, k, |i, j| self.u[(i, j)] * self.singular_values[j]);
        us.matmul(&self.v.hermitian()).expect("svd factors conform")
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn sigma_min(&self) -> f64 {
        *self.singular_values.last().expect("k >= 1")
    }
}

/// Orthogonalises the columns of `w` (rows >= cols) in place by complex
/// Jacobi rotations, applying the same rotations to `v` when present.
fn jacobi_orthogonalize(w: &mut ComplexMatrix, mut v: Option<&mut ComplexMatrix>, tol: &Tolerances) {
    let m = w.rows;
    let n = w.cols;
    for _ in 0..tol.jacobi_max_sweeps {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex::new(0.0, 0.0);
                for i in 0..m {
                    let a = w.data[i * n + p];
                    let b = w.data[i * n + q];
                    alpha += a.norm_sqr();
                    beta += b.norm_sqr();
                    gamma += a.conj() * b;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= tol.jacobi_offdiag * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column q by e^{-iφ} so the pair's inner product is real,
                // then apply the real symmetric Schur rotation.
                let phase_conj = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let rotate = |data: &mut [Complex], rows: usize, cols: usize| {
                    for i in 0..rows {
                        let xp = data[i * cols + p];
                        let xq = data[i * cols + q] * phase_conj;
                        data[i * cols + p] = xp * c - xq * s;
                        data[i * cols + q] = xp * s + xq * c;
                    }
                };
                rotate(&mut w.data, m, n);
                if let Some(v) = v.as_deref_mut() {
                    let (vr, vc) = (v.rows, v.cols);
                    rotate(&mut v.data, vr, vc);
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

fn column_norms(w: &ComplexMatrix) -> Vec<f64> {
    (0..w.cols)
        .map(|j| (0..w.rows).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect()
}

/// Indices sorted by nonincreasing value; stable for ties.
fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).expect("finite singular values"));
    order
}

fn svd_tall(a: &ComplexMatrix, tol: &Tolerances) -> SvdResult {
    let (m, n) = (a.rows, a.cols);
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    jacobi_orthogonalize(&mut w, Some(&mut v), tol);

    let norms = column_norms(&w);
    let order = descending_order(&norms);
    let sigma_max = norms[order[0]];
    let negligible = sigma_max * f64::EPSILON * (m as f64);

    let mut u = ComplexMatrix::zeros(m, n);
    let mut v_sorted = ComplexMatrix::zeros(n, n);
    let mut singular_values = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (dst, &src) in order.iter().enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        for i in 0..n {
            v_sorted[(i, dst)] = v[(i, src)];
        }
        if sigma > negligible && sigma > 0.0 {
            for i in 0..m {
                u[(i, dst)] = w[(i, src)] / sigma;
            }
        } else {
            missing.push(dst);
        }
    }
    complete_orthonormal_columns(&mut u, &missing);
    SvdResult { u, singular_values, v: v_sorted }
}

/// Fills the listed (zero) columns of `u` with unit vectors orthogonal to
/// every other column by Gram-Schmidt over the standard basis.
fn complete_orthonormal_columns(u: &mut ComplexMatrix, missing: &[usize]) {
    let m = u.rows;
    let mut filled: Vec<usize> = (0..u.cols).filter(|j| !missing.contains(j)).collect();
    let mut candidate = 0;
    for &col in missing {
        loop {
            assert!(candidate < m, "cannot complete orthonormal basis");
            let mut x = vec![Complex::new(0.0, 0.0); m];
            x[candidate] = Complex::new(1.0, 0.0);
            candidate += 1;
            // two passes of classical Gram-Schmidt
            for _ in 0..2 {
                for &j in &filled {
                    let proj: Complex = (0..m).map(|i| u[(i, j)].conj() * x[i]).sum();
                    for (i, xi) in x.iter_mut().enumerate() {
                        *xi -= u[(i, j)] * proj;
                    }
                }
            }
            let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                for (i, xi) in x.iter().enumerate() {
                    u[(i, col)] = xi / norm;
                }
                filled.push(col);
                break;
            }
        }
    }
}

/// Thin SVD with the default tolerances.
pub fn svd(a: &ComplexMatrix) -> Result<SvdResult, LinalgError> {
    svd_with(a, &Tolerances::DEFAULT)
}

pub fn svd_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<SvdResult, LinalgError> {
    a.check_size()?;
    if a.rows >= a.cols {
        Ok(svd_tall(a, tol))
    } else {
        // A^* = U' Σ V'^*  =>  A = V' Σ U'^*
        let t = svd_tall(&a.hermitian(), tol);
        Ok(SvdResult { u: t.v, singular_values: t.singular_values, v: t.u })
    }
}

/// Singular values only (nonincreasing), skipping the accumulation of the
/// singular vectors.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    a.check_size()?;
    let mut w = if a.rows >= a.cols { a.clone() } else { a.hermitian() };
    jacobi_orthogonalize(&mut w, None, &Tolerances::DEFAULT);
    let mut norms = column_norms(&w);
    norms.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(norms)
}

/// Moore-Penrose pseudo-inverse of a full-column-rank matrix.
///
/// Fails with [`LinalgError::RankDeficient`] when the matrix is wide or its
/// smallest singular value is at most `1e-10` times the largest.
pub fn pseudo_inverse(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    pseudo_inverse_with(a, &Tolerances::DEFAULT)
}

pub fn pseudo_inverse_with(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, LinalgError> {
    let f = svd_with(a, tol)?;
    let sigma_max = f.sigma_max();
    let sigma_min = f.sigma_min();
    if a.rows < a.cols || sigma_max == 0.0 || sigma_min <= tol.rank_relative * sigma_max {
        return Err(LinalgError::RankDeficient { sigma_min, sigma_max });
    }
    // V Σ^{-1} U^*
    let k = f.singular_values.len();
    let v_scaled = ComplexMatrix::from_fn(f.v.rows, k, |i, j| f.v[(i, j)] / f.singular_values[j]);
    v_scaled.matmul(&f.u.hermitian())
}

/// Determinant by LU factorisation with partial pivoting.
pub fn det(a: &ComplexMatrix) -> Result<Complex, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NotSquare { rows: a.rows, cols: a.cols });
    }
    a.check_size()?;
    let n = a.rows;
    let mut lu = a.data.clone();
    let mut det = Complex::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&x, &y| lu[x * n + k].norm().partial_cmp(&lu[y * n + k].norm()).expect("finite"))
            .expect("non-empty range");
        let p = lu[pivot * n + k];
        if p.norm() == 0.0 {
            return Ok(Complex::new(0.0, 0.0));
        }
        if pivot != k {
            for j in 0..n {
                lu.swap(k * n + j, pivot * n + j);
            }
            det = -det;
        }
        det *= p;
        for i in (k + 1)..n {
            let factor = lu[i * n + k] / p;
            for j in (k + 1)..n {
                let t = lu[k * n + j];
                lu[i * n + j] -= factor * t;
            }
        }
    }
    Ok(det)
}

#![allow(dead_code)]

use kerdock_core::linalg::{Complex, ComplexMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    kerdock_core::sim::draw_channel(rng, rows, cols)
}

/// Random `n x k` matrix with orthonormal columns (Gram-Schmidt on Gaussians).
pub fn random_orthonormal<R: Rng>(rng: &mut R, n: usize, k: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, k);
    let mut cols: Vec<Vec<Complex>> = Vec::new();
    for j in 0..k {
        let mut v = g.column(j);
        for q in &cols {
            let p: Complex = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= p * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, k, |i, j| cols[j][i])
}

pub fn to_nalgebra(a: &ComplexMatrix) -> nalgebra::DMatrix<Complex> {
    nalgebra::DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// Singular values from nalgebra, nonincreasing.
pub fn oracle_singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_nalgebra(a).singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    s
}

/// Determinant from nalgebra's LU.
pub fn oracle_det(a: &ComplexMatrix) -> Complex {
    to_nalgebra(a).determinant()
}

/// Operator 2-norm of `F1 F1^* - F2 F2^*`.
pub fn projector_distance(f1: &ComplexMatrix, f2: &ComplexMatrix) -> f64 {
    let p1 = f1.matmul(&f1.hermitian()).unwrap();
    let p2 = f2.matmul(&f2.hermitian()).unwrap();
    oracle_singular_values(&p1.sub(&p2).unwrap())[0]
}

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

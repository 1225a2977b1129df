use num_complex::Complex;

use super::ConstructError;
use crate::linalg::ComplexMatrix;
use crate::quaternary::{GaussianInt, GaussianMatrix, HalfPowerScale, QuaternaryMatrix};

/// Ordered set of `mt x mt` unitary bases held in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct MubSet {
    mt: usize,
    bases: Vec<GaussianMatrix>,
}

impl MubSet {
    /// Wraps bases without checking the mutually unbiased property; use
    /// [`crate::metrics::verify_mub`] for that.
    pub fn from_bases(mt: usize, bases: Vec<GaussianMatrix>) -> Result<Self, ConstructError> {
        if bases.is_empty() {
            return Err(ConstructError::EmptyMub);
        }
        if let Some(b) = bases.iter().find(|b| b.rows() != mt || b.cols() != mt) {
            return Err(ConstructError::Invalid(format!("basis of shape {}x{} in an mt={} set", b.rows(), b.cols(), mt)));
        }
        Ok(MubSet { mt, bases })
    }

    pub fn mt(&self) -> usize {
        self.mt
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[GaussianMatrix] {
        &self.bases
    }

    pub fn basis(&self, n: usize) -> &GaussianMatrix {
        &self.bases[n]
    }

    pub fn decoded(&self) -> Vec<ComplexMatrix> {
        self.bases.iter().map(GaussianMatrix::to_complex).collect()
    }

    /// Strict `{0, ±1, ±j}` form of every basis, if all of them have it.
    pub fn quaternary_bases(&self) -> Option<Vec<QuaternaryMatrix>> {
        self.bases.iter().map(|b| QuaternaryMatrix::try_from(b).ok()).collect()
    }

    pub fn identity_position(&self) -> Option<usize> {
        self.bases.iter().position(GaussianMatrix::is_identity)
    }

    /// The same set with the identity basis (antenna selection) removed.
    pub fn without_identity(&self) -> MubSet {
        MubSet {
            mt: self.mt,
            bases: self.bases.iter().filter(|b| !b.is_identity()).cloned().collect(),
        }
    }
}

/// `mt x mt` Sylvester-Hadamard matrix (entries ±1, unscaled).
pub fn sylvester_hadamard(mt: usize) -> Result<GaussianMatrix, ConstructError> {
    if mt < 2 || !mt.is_power_of_two() {
        return Err(ConstructError::NotPowerOfTwo(mt));
    }
    let mut h: Vec<Vec<i64>> = vec![vec![1]];
    while h.len() < mt {
        let n = h.len();
        let mut next = vec![vec![0i64; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = h[i][j];
                next[i][j + n] = h[i][j];
                next[i + n][j] = h[i][j];
                next[i + n][j + n] = -h[i][j];
            }
        }
        h = next;
    }
    let entries = h.into_iter().flatten().map(|x| Complex::new(x, 0)).collect();
    Ok(GaussianMatrix::new(mt, mt, entries, HalfPowerScale(0))?)
}

fn g(re: i64, im: i64) -> GaussianInt {
    Complex::new(re, im)
}

/// Two-antenna Kerdock set `{H/√2, diag(1, j) H/√2, I}`.
pub fn kerdock_mub_mt2() -> MubSet {
    let h = sylvester_hadamard(2).expect("2 is a power of two");
    let scale = HalfPowerScale::inv_sqrt(2).expect("power of two");
    let rotations = [[g(1, 0), g(1, 0)], [g(1, 0), g(0, 1)]];
    let mut bases: Vec<GaussianMatrix> = rotations
        .iter()
        .map(|d| GaussianMatrix::diag(d, scale).matmul(&h).expect("2x2 conformant"))
        .collect();
    bases.push(GaussianMatrix::identity(2));
    MubSet { mt: 2, bases }
}

/// Two-antenna power-construction generator, `(1/2)[[-1-j, -1+j], [1+j, -1+j]]`.
pub fn power_generator_mt2() -> GaussianMatrix {
    GaussianMatrix::from_int_rows(&[[(-1, -1), (-1, 1)], [(1, 1), (-1, 1)]], HalfPowerScale(2)).expect("2x2")
}

/// Two-antenna set from the powers of [`power_generator_mt2`]. Its entries
/// are `(±1 ± j)/2`, so it has a finite alphabet but is not strictly quaternary.
pub fn kerdock_mub_mt2_power() -> Result<MubSet, ConstructError> {
    power_mub(&power_generator_mt2(), 3)
}

/// Four-antenna generator `D = (1/2) diag(-j, 1, -j, -1) (H2 ⊗ H2)`.
pub fn kerdock_generator_mt4() -> GaussianMatrix {
    let h4 = sylvester_hadamard(4).expect("4 is a power of two");
    let d = GaussianMatrix::diag(&[g(0, -1), g(1, 0), g(0, -1), g(-1, 0)], HalfPowerScale(2));
    d.matmul(&h4).expect("4x4 conformant")
}

/// Bases `S_n = D^(n+1)` for `n = 0..count`, the last one being `I`.
///
/// Every hypothesis is checked exactly in the Gaussian-integer domain:
/// `D` unitary, `D^count = I`, and every entry of `S_a^* S_b` (a != b) has
/// squared modulus exactly `1/mt`.
pub fn power_mub(d: &GaussianMatrix, count: usize) -> Result<MubSet, ConstructError> {
    if count == 0 {
        return Err(ConstructError::EmptyMub);
    }
    if d.rows() != d.cols() {
        return Err(ConstructError::Invalid(format!("generator must be square, got {}x{}", d.rows(), d.cols())));
    }
    let mt = d.rows();
    if !d.hermitian().matmul(d)?.is_identity() {
        return Err(ConstructError::NotUnitary);
    }
    let mut bases = Vec::with_capacity(count);
    let mut power = d.clone();
    for _ in 0..count {
        bases.push(power.clone());
        power = power.matmul(d)?;
    }
    if !bases[count - 1].is_identity() {
        return Err(ConstructError::PowerNotIdentity { count });
    }
    for a in 0..count {
        for b in (a + 1)..count {
            let cross = bases[a].hermitian().matmul(&bases[b])?;
            let e = cross.scale().0;
            for row in 0..mt {
                for col in 0..mt {
                    let (norm_sqr, _) = cross.entry_norm_sqr(row, col);
                    // |z|^2 * 2^-e == 1/mt  <=>  |z|^2 * mt == 2^e
                    let lhs = norm_sqr as i128 * mt as i128;
                    if e >= 127 || lhs != 1i128 << e {
                        return Err(ConstructError::NotMutuallyUnbiased { a, b, row, col });
                    }
                }
            }
        }
    }
    Ok(MubSet { mt, bases })
}

/// Four-antenna Kerdock set: five bases, the last one `I4`.
pub fn kerdock_mub_mt4() -> Result<MubSet, ConstructError> {
    power_mub(&kerdock_generator_mt4(), 5)
}

/// Kerdock set for the supported antenna counts (Sylvester-Hadamard for 2,
/// power construction for 4).
pub fn kerdock_mub(mt: usize) -> Result<MubSet, ConstructError> {
    match mt {
        2 => Ok(kerdock_mub_mt2()),
        4 => kerdock_mub_mt4(),
        other => Err(ConstructError::UnsupportedDimension(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Complex as C64;

    #[test]
    fn hadamard_small() {
        let h2 = sylvester_hadamard(2).unwrap();
        assert_eq!(h2.entries(), &[g(1, 0), g(1, 0), g(1, 0), g(-1, 0)]);
        let h4 = sylvester_hadamard(4).unwrap();
        let gram = h4.hermitian().matmul(&h4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { g(4, 0) } else { g(0, 0) };
                assert_eq!(gram.entry(i, j), expect);
            }
        }
        assert!(matches!(sylvester_hadamard(3), Err(ConstructError::NotPowerOfTwo(3))));
        assert!(matches!(sylvester_hadamard(1), Err(ConstructError::NotPowerOfTwo(1))));
    }

    #[test]
    fn mt2_sylvester_set() {
        let set = kerdock_mub_mt2();
        assert_eq!(set.len(), 3);
        let s1 = set.basis(1).to_complex();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s1[(0, 0)] - C64::new(r, 0.0)).norm() < 1e-15);
        assert!((s1[(1, 0)] - C64::new(0.0, r)).norm() < 1e-15);
        assert!(set.basis(2).is_identity());
        assert!(set.quaternary_bases().is_some());
    }

    #[test]
    fn mt2_power_set_matches_printed_powers() {
        let set = kerdock_mub_mt2_power().unwrap();
        assert_eq!(set.len(), 3);
        let expected = GaussianMatrix::from_int_rows(&[[(-1, 1), (1, -1)], [(-1, -1), (-1, -1)]], HalfPowerScale(2)).unwrap();
        assert_eq!(set.basis(1), &expected);
        assert!(set.basis(2).is_identity());
        assert!(set.quaternary_bases().is_none());
    }

    #[test]
    fn mt4_generator_entry_and_order() {
        let d = kerdock_generator_mt4();
        assert_eq!(d.scale(), HalfPowerScale(2));
        assert_eq!(d.entry(0, 0), g(0, -1));
        assert!(d.pow(5).unwrap().is_identity());
        assert!(!d.pow(4).unwrap().is_identity());
        let set = kerdock_mub_mt4().unwrap();
        assert_eq!(set.basis(1).entry(0, 0), g(-1, 0));
        assert_eq!(set.identity_position(), Some(4));
        assert_eq!(set.without_identity().len(), 4);
    }

    #[test]
    fn power_mub_degenerate_and_failures() {
        let one = power_mub(&GaussianMatrix::identity(3), 1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.basis(0).is_identity());

        let not_unitary = GaussianMatrix::from_int_rows(&[[(1, 0), (1, 0)], [(0, 0), (1, 0)]], HalfPowerScale(0)).unwrap();
        assert!(matches!(power_mub(&not_unitary, 2), Err(ConstructError::NotUnitary)));

        let h = sylvester_hadamard(2).unwrap();
        let h_scaled = GaussianMatrix::new(2, 2, h.entries().to_vec(), HalfPowerScale(1)).unwrap();
        // H/√2 squares to I, so three powers end in H/√2 again.
        assert!(matches!(power_mub(&h_scaled, 3), Err(ConstructError::PowerNotIdentity { count: 3 })));

        let swap = GaussianMatrix::from_int_rows(&[[(0, 0), (1, 0)], [(1, 0), (0, 0)]], HalfPowerScale(0)).unwrap();
        assert!(matches!(power_mub(&swap, 2), Err(ConstructError::NotMutuallyUnbiased { .. })));
    }

    #[test]
    fn unsupported_dimension() {
        assert!(matches!(kerdock_mub(8), Err(ConstructError::UnsupportedDimension(8))));
    }
}

use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{Complex, ComplexMatrix};

/// One `CN(0, 1)` sample: independent real and imaginary parts of variance 1/2.
#[inline]
pub fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Overwrites `h` with i.i.d. `CN(0, 1)` entries in row-major order.
pub fn fill_channel<R: Rng + ?Sized>(rng: &mut R, h: &mut ComplexMatrix) {
    for z in h.as_mut_slice() {
        *z = cn01(rng);
    }
}

/// Fresh `mr x mt` Rayleigh channel.
pub fn draw_channel<R: Rng + ?Sized>(rng: &mut R, mr: usize, mt: usize) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(mr, mt);
    fill_channel(rng, &mut h);
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn same_seed_same_channel() {
        let a = draw_channel(&mut ChaCha8Rng::seed_from_u64(9), 4, 4);
        let b = draw_channel(&mut ChaCha8Rng::seed_from_u64(9), 4, 4);
        assert_eq!(a, b);
    }
}

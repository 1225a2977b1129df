use super::SimError;
use crate::linalg::Complex;

/// Square Gray-mapped QAM with unit average symbol energy.
///
/// A symbol index holds `log2(M)` bits, MSB first. The first half selects
/// the in-phase level, the second half the quadrature level. On each axis
/// the Gray label `g` maps to level `i = gray⁻¹(g)` with amplitude
/// `(L − 1 − 2i) / √(2(M − 1)/3)`, `L = √M`. For QPSK the pair `00` is
/// therefore `(1 + j)/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Qam {
    order: usize,
    side: usize,
    axis_bits: u32,
    norm: f64,
    /// Amplitude for each per-axis Gray label.
    label_amplitude: Vec<f64>,
}

fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn gray_inverse(mut g: usize) -> usize {
    let mut i = g;
    while g > 1 {
        g >>= 1;
        i ^= g;
    }
    i
}

impl Qam {
    pub const SUPPORTED: [usize; 3] = [4, 16, 64];

    pub fn new(order: usize) -> Result<Qam, SimError> {
        if !Self::SUPPORTED.contains(&order) {
            return Err(SimError::InvalidConfig(format!("QAM order {} not in {{4, 16, 64}}", order)));
        }
        let side = (order as f64).sqrt().round() as usize;
        let norm = (2.0 * (order as f64 - 1.0) / 3.0).sqrt();
        let label_amplitude = (0..side)
            .map(|g| (side as f64 - 1.0 - 2.0 * gray_inverse(g) as f64) / norm)
            .collect();
        Ok(Qam { order, side, axis_bits: side.trailing_zeros(), norm, label_amplitude })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> u32 {
        2 * self.axis_bits
    }

    /// Constellation point for a symbol index in `0..order`.
    #[inline]
    pub fn symbol(&self, index: usize) -> Complex {
        let gi = index >> self.axis_bits;
        let gq = index & (self.side - 1);
        Complex::new(self.label_amplitude[gi], self.label_amplitude[gq])
    }

    #[inline]
    fn slice_axis(&self, x: f64) -> usize {
        let level = ((self.side as f64 - 1.0 - x * self.norm) / 2.0).round();
        let level = level.clamp(0.0, self.side as f64 - 1.0) as usize;
        gray(level)
    }

    /// Minimum-distance decision, returned as a symbol index.
    #[inline]
    pub fn slice(&self, z: Complex) -> usize {
        (self.slice_axis(z.re) << self.axis_bits) | self.slice_axis(z.im)
    }

    /// Maps bits (each 0 or 1) to symbols.
    pub fn modulate(&self, bits: &[u8]) -> Result<Vec<Complex>, SimError> {
        let k = self.bits_per_symbol() as usize;
        if !bits.len().is_multiple_of(k) {
            return Err(SimError::InvalidConfig(format!("{} bits is not a multiple of {}", bits.len(), k)));
        }
        bits.chunks(k)
            .map(|chunk| {
                let mut index = 0usize;
                for &b in chunk {
                    if b > 1 {
                        return Err(SimError::InvalidConfig(format!("bit value {}", b)));
                    }
                    index = (index << 1) | b as usize;
                }
                Ok(self.symbol(index))
            })
            .collect()
    }

    pub fn demodulate(&self, symbols: &[Complex]) -> Vec<u8> {
        let k = self.bits_per_symbol();
        let mut bits = Vec::with_capacity(symbols.len() * k as usize);
        for &z in symbols {
            let index = self.slice(z);
            bits.extend((0..k).rev().map(|b| ((index >> b) & 1) as u8));
        }
        bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gray_round_trip() {
        for i in 0..64 {
            assert_eq!(gray_inverse(gray(i)), i);
        }
    }

    #[test]
    fn qpsk_mapping() {
        let q = Qam::new(4).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let close = |bits: [u8; 2], want: Complex| (q.modulate(&bits).unwrap()[0] - want).norm() < 1e-15;
        assert!(close([0, 0], Complex::new(r, r)));
        assert!(close([1, 0], Complex::new(-r, r)));
        assert!(close([1, 1], Complex::new(-r, -r)));
    }

    #[test]
    fn neighbours_differ_in_one_bit() {
        let q = Qam::new(16).unwrap();
        for a in 0..16 {
            for b in 0..16 {
                let d = (q.symbol(a) - q.symbol(b)).norm() * q.norm;
                if (d - 2.0).abs() < 1e-9 {
                    assert_eq!((a ^ b).count_ones(), 1, "{} vs {}", a, b);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Qam::new(8).is_err());
        assert!(Qam::new(16).unwrap().modulate(&[0, 1, 1]).is_err());
    }
}

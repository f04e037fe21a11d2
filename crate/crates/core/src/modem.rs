//! Gray-coded QPSK with a π/4 phase offset, and unipolar/bipolar conversion.
//!
//! The first bit of each pair (`b1`) selects the sign of the imaginary part
//! and the second (`b0`) the sign of the real part, so `00 → e^{iπ/4}`,
//! `01 → e^{i3π/4}`, `11 → e^{i5π/4}`, `10 → e^{i7π/4}`.

use num_complex::Complex;

use crate::error::invalid;
use crate::{BitBlock, Result, Scalar};

fn level<T: Scalar>(bit: u8) -> T {
    if bit & 1 == 0 {
        T::FRAC_1_SQRT_2()
    } else {
        -T::FRAC_1_SQRT_2()
    }
}

/// Maps bit pairs onto unit-energy constellation points.
pub fn qpsk_modulate<T: Scalar>(bits: &[u8]) -> Result<Vec<Complex<T>>> {
    if bits.len() % 2 != 0 {
        return Err(invalid(format!("odd bit count {}", bits.len())));
    }
    Ok(bits
        .chunks_exact(2)
        .map(|p| Complex::new(level(p[1]), level(p[0])))
        .collect())
}

/// Quadrant decision; points on a boundary resolve to the bit value 0.
pub fn qpsk_demodulate_hard<T: Scalar>(symbols: &[Complex<T>]) -> BitBlock {
    symbols
        .iter()
        .flat_map(|s| [u8::from(s.im < T::zero()), u8::from(s.re < T::zero())])
        .collect()
}

/// Per-bit soft values rescaled to unit bipolar amplitude (positive favours 1).
///
/// Noise on these values has twice the per-dimension variance of the symbols.
pub fn qpsk_demodulate_soft<T: Scalar>(symbols: &[Complex<T>]) -> Vec<T> {
    symbols
        .iter()
        .flat_map(|s| [-s.im * T::SQRT_2(), -s.re * T::SQRT_2()])
        .collect()
}

/// `0 → -1`, `1 → +1`.
pub fn to_bipolar<T: Scalar>(bits: &[u8]) -> Vec<T> {
    bits.iter()
        .map(|&b| if b & 1 == 1 { T::one() } else { -T::one() })
        .collect()
}

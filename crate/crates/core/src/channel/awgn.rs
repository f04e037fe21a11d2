use num_complex::Complex;

use crate::rng::RngStream;
use crate::signal::ComplexFrame;
use crate::Scalar;

/// Parameters fixing the per-dimension noise variance for a target Eb/N0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnConfig {
    pub ebn0_db: f64,
    /// log2 of the constellation size (2 for QPSK).
    pub bits_per_symbol: u32,
    pub code_rate: f64,
    pub symbol_energy: f64,
}

impl AwgnConfig {
    pub fn qpsk(ebn0_db: f64, code_rate: f64) -> Self {
        Self {
            ebn0_db,
            bits_per_symbol: 2,
            code_rate,
            symbol_energy: 1.0,
        }
    }
}

/// `σ² = Es / (2 · Rm · Rc · Eb/N0)`, the variance of each real dimension.
pub fn noise_variance(config: &AwgnConfig) -> f64 {
    let ebn0 = 10f64.powf(config.ebn0_db / 10.0);
    config.symbol_energy / (2.0 * config.bits_per_symbol as f64 * config.code_rate * ebn0)
}

/// Adds complex white Gaussian noise with variance `sigma2` per dimension.
pub fn add_awgn<T: Scalar>(
    signal: &ComplexFrame<T>,
    sigma2: f64,
    rng: &mut RngStream,
) -> ComplexFrame<T> {
    let mut out = signal.clone();
    add_awgn_in_place(&mut out.samples, sigma2, rng);
    out
}

pub(crate) fn add_awgn_in_place<T: Scalar>(
    samples: &mut [Complex<T>],
    sigma2: f64,
    rng: &mut RngStream,
) {
    if sigma2 <= 0.0 {
        return;
    }
    let sigma = sigma2.sqrt();
    for s in samples.iter_mut() {
        let (a, b) = rng.gaussian_pair();
        *s += Complex::new(T::of(sigma * a), T::of(sigma * b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variance_examples() {
        let mut cfg = AwgnConfig::qpsk(0.0, 1.0 / 3.0);
        assert!((noise_variance(&cfg) - 0.75).abs() < 1e-12);
        cfg.code_rate = 0.25;
        assert!((noise_variance(&cfg) - 1.0).abs() < 1e-12);
        cfg.ebn0_db = 300.0;
        assert!(noise_variance(&cfg) < 1e-29);
        assert!(noise_variance(&AwgnConfig::qpsk(f64::INFINITY, 0.25)) == 0.0);
    }

    #[test]
    fn zero_variance_is_identity() {
        let x = ComplexFrame::time(vec![Complex::new(0.5f64, -1.0); 16]);
        assert_eq!(add_awgn(&x, 0.0, &mut RngStream::new(0, 0)), x);
    }

    #[test]
    fn noise_moments() {
        let n = 1_000_000;
        let x = ComplexFrame::time(vec![Complex::new(1.0f64, 2.0); n]);
        let sigma2 = 0.3;
        let y = add_awgn(&x, sigma2, &mut RngStream::new(4, 0));
        let d: Vec<Complex<f64>> = y.samples.iter().zip(&x.samples).map(|(a, b)| a - b).collect();
        let mean: Complex<f64> = d.iter().sum::<Complex<f64>>() / n as f64;
        let var_re = d.iter().map(|v| v.re * v.re).sum::<f64>() / n as f64;
        let var_im = d.iter().map(|v| v.im * v.im).sum::<f64>() / n as f64;
        let bound = 3.0 * (sigma2 / n as f64).sqrt();
        assert!(mean.re.abs() < bound && mean.im.abs() < bound);
        assert!((var_re / sigma2 - 1.0).abs() < 0.01);
        assert!((var_im / sigma2 - 1.0).abs() < 0.01);
    }
}

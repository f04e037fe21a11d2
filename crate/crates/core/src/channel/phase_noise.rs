use num_complex::Complex;

use crate::error::invalid;
use crate::rng::RngStream;
use crate::signal::{ComplexFrame, Fft};
use crate::{Error, Result, Scalar};

/// Oscillator phase-noise specification.
///
/// An ideal oscillator output `V0·sin(2πft)` becomes `V0·sin(2πft + φ(t))`
/// with a random phase `φ`. The level is the single-sideband noise power in a
/// 1 Hz band at `offset_hz` relative to the carrier (dBc/Hz), and the phase
/// spectrum falls as 1/f across the whole simulated band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseConfig {
    pub level_dbc_hz: f64,
    pub offset_hz: f64,
    pub sample_rate_hz: f64,
}

impl PhaseNoiseConfig {
    /// −50 dBc/Hz at a 100 Hz offset.
    pub fn reference(sample_rate_hz: f64) -> Self {
        Self {
            level_dbc_hz: -50.0,
            offset_hz: 100.0,
            sample_rate_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz > 0.0) {
            return Err(invalid("phase-noise sample rate must be positive"));
        }
        if !(self.offset_hz > 0.0 && self.offset_hz < self.sample_rate_hz / 2.0) {
            return Err(invalid(format!(
                "offset {} Hz must lie in (0, fs/2 = {} Hz)",
                self.offset_hz,
                self.sample_rate_hz / 2.0
            )));
        }
        Ok(())
    }

    /// Variance of the white driving sequence that places the generator's
    /// spectrum at `level_dbc_hz` for `offset_hz`.
    ///
    /// The 1/f filter has `|H(f)|² = 1 / (2·sin(π f / fs))`, so the two-sided
    /// phase PSD (equal to the SSB level for small phase) is
    /// `σw² / fs / (2·sin(π f / fs))`.
    pub fn driving_variance(&self) -> f64 {
        let level = 10f64.powf(self.level_dbc_hz / 10.0);
        let x = std::f64::consts::PI * self.offset_hz / self.sample_rate_hz;
        level * 2.0 * x.sin() * self.sample_rate_hz
    }
}

/// Impulse response of the fractional integrator `(1 - z⁻¹)^{-α/2}`.
pub fn power_law_coefficients(alpha: f64, len: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(len);
    let mut prev = 1.0;
    for k in 0..len {
        if k > 0 {
            prev *= (alpha / 2.0 + k as f64 - 1.0) / k as f64;
        }
        h.push(prev);
    }
    h
}

/// A 1/f phase trajectory of `n` samples in radians.
///
/// White Gaussian noise is filtered through the truncated power-law response
/// (linear convolution via FFT).
pub fn phase_noise_sequence(
    n: usize,
    config: &PhaseNoiseConfig,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(invalid("phase-noise length must be >= 2"));
    }
    config.validate()?;
    let sigma = config.driving_variance().sqrt();
    let size = (2 * n).next_power_of_two();
    let fft = Fft::<f64>::new(size)?;

    let mut h: Vec<Complex<f64>> = power_law_coefficients(1.0, n)
        .into_iter()
        .map(|v| Complex::new(v, 0.0))
        .collect();
    h.resize(size, Complex::new(0.0, 0.0));
    let mut w: Vec<Complex<f64>> = (0..n).map(|_| Complex::new(sigma * rng.gaussian(), 0.0)).collect();
    w.resize(size, Complex::new(0.0, 0.0));

    fft.process(&mut h, false)?;
    fft.process(&mut w, false)?;
    for (a, b) in w.iter_mut().zip(&h) {
        *a *= b;
    }
    fft.process(&mut w, true)?;
    Ok(w.into_iter().take(n).map(|v| v.re).collect())
}

/// Rotates each sample by its phase: `y_k = x_k · e^{iφ_k}`.
pub fn apply_phase_noise<T: Scalar>(
    signal: &ComplexFrame<T>,
    phase: &[f64],
) -> Result<ComplexFrame<T>> {
    if phase.len() < signal.len() {
        return Err(Error::LengthMismatch {
            expected: signal.len(),
            actual: phase.len(),
        });
    }
    let samples = signal
        .samples
        .iter()
        .zip(phase)
        .map(|(&x, &p)| x * Complex::from_polar(T::one(), T::of(p)))
        .collect();
    Ok(ComplexFrame::new(samples, signal.domain))
}

/// Hann-windowed periodogram averaged over `realizations`, evaluated as the
/// mean of the bins within `±halfwidth` bins of `freq_hz`. Returns dBc/Hz
/// (two-sided phase PSD).
pub fn estimate_level_dbc_hz(realizations: &[Vec<f64>], sample_rate_hz: f64, freq_hz: f64, halfwidth: usize) -> f64 {
    let n = realizations[0].len();
    let size = n.next_power_of_two();
    let fft = Fft::<f64>::new(size).expect("power of two");
    let window: Vec<f64> = (0..n)
        .map(|k| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos())
        .collect();
    let wpow: f64 = window.iter().map(|w| w * w).sum();
    let centre = (freq_hz * size as f64 / sample_rate_hz).round() as usize;
    let bins = centre.saturating_sub(halfwidth)..=centre + halfwidth;
    let mut acc = 0.0;
    for r in realizations {
        let mean = r.iter().sum::<f64>() / n as f64;
        let mut buf: Vec<Complex<f64>> = r
            .iter()
            .zip(&window)
            .map(|(v, w)| Complex::new((v - mean) * w, 0.0))
            .collect();
        buf.resize(size, Complex::new(0.0, 0.0));
        fft.process(&mut buf, false).expect("planned length");
        for b in bins.clone() {
            acc += buf[b].norm_sqr() / (sample_rate_hz * wpow);
        }
    }
    let avg = acc / (realizations.len() * (2 * halfwidth + 1)) as f64;
    10.0 * avg.log10()
}

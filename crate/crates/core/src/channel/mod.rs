//! Composite channel: multipath fading with perfect phase recovery, phase
//! noise and additive white Gaussian noise, applied in that order.

mod awgn;
mod fading;
mod phase_noise;

pub use awgn::{add_awgn, noise_variance, AwgnConfig};
pub use fading::{
    coherence_time, doppler_spread, generate_tap_gains, multipath_apply, perfect_phase_recovery,
    static_phase_rayleigh, ChannelState, FadingConfig, Tap, DEFAULT_SAMPLE_RATE_HZ, PEDESTRIAN_A,
};
pub use phase_noise::{
    apply_phase_noise, estimate_level_dbc_hz, phase_noise_sequence, power_law_coefficients,
    PhaseNoiseConfig,
};

use crate::rng::RngStream;
use crate::signal::ComplexFrame;
use crate::{Result, Scalar};

/// How the fading stage acts on the signal.
#[derive(Debug, Clone, PartialEq)]
pub enum FadingStage {
    /// Tapped delay line followed by perfect phase recovery.
    Multipath(FadingConfig),
    /// Flat fading with perfect phase recovery, then a fixed rotation.
    PhaseShift { fading: FadingConfig, angle_rad: f64 },
}

/// Every impairment of one scenario; `None` disables a stage.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Impairments {
    pub fading: Option<FadingStage>,
    pub phase_noise: Option<PhaseNoiseConfig>,
    /// Per-dimension AWGN variance in the time domain.
    pub awgn_variance: f64,
}

impl Impairments {
    pub fn validate(&self) -> Result<()> {
        match &self.fading {
            Some(FadingStage::Multipath(cfg)) => cfg.validate()?,
            Some(FadingStage::PhaseShift { fading, .. }) => {
                fading.validate()?;
                if fading.profile.len() != 1 {
                    return Err(crate::error::invalid("phase-shift fading must be single-tap"));
                }
            }
            None => {}
        }
        if let Some(pn) = &self.phase_noise {
            pn.validate()?;
        }
        if !(self.awgn_variance >= 0.0) {
            return Err(crate::error::invalid("AWGN variance must be >= 0"));
        }
        Ok(())
    }

    /// Passes `signal` through the channel. Draw order from `rng` is fixed:
    /// fading taps, phase trajectory, then noise.
    pub fn apply<T: Scalar>(
        &self,
        signal: &ComplexFrame<T>,
        rng: &mut RngStream,
    ) -> Result<ComplexFrame<T>> {
        let n = signal.len();
        let mut out = match &self.fading {
            Some(FadingStage::Multipath(cfg)) => {
                let state = generate_tap_gains(cfg, n.max(2), rng)?;
                let faded = multipath_apply(signal, &state)?;
                perfect_phase_recovery(&faded, signal)?
            }
            Some(FadingStage::PhaseShift { fading, angle_rad }) => {
                let state: ChannelState<T> = generate_tap_gains(fading, n.max(2), rng)?;
                static_phase_rayleigh(signal, *angle_rad, &state.amplitude_only())?
            }
            None => signal.clone(),
        };
        if let Some(pn) = &self.phase_noise {
            let phase = phase_noise_sequence(n.max(2), pn, rng)?;
            out = apply_phase_noise(&out, &phase)?;
        }
        awgn::add_awgn_in_place(&mut out.samples, self.awgn_variance, rng);
        Ok(out)
    }
}

//! Turbo-coded OFDM link simulator.
//!
//! The transmit chain is a rate-1/4 three-branch PCCC built from (7,5) RSC
//! constituents, Gray QPSK with a π/4 offset, and a zero-padded, centre-nulled
//! OFDM modulator with cyclic prefix. The channel composes multipath
//! Rayleigh/Rician fading with a flat Doppler spectrum, perfect phase
//! recovery, 1/f phase noise and AWGN. The receiver mirrors the transmitter and
//! decodes with an iterative log-MAP turbo decoder.
//!
//! Numerical kernels are generic over [`Scalar`] (`f32` or `f64`); the
//! Monte Carlo harness runs in [`Real`] precision.

pub mod channel;
pub mod decoder;
pub mod encoder;
mod error;
pub mod modem;
pub mod ofdm;
pub mod rng;
mod scalar;
pub mod signal;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Precision used by the simulation harness.
pub type Real = f64;

/// Complex baseband sample in harness precision.
pub type Cplx = num_complex::Complex<Real>;

/// A frame of samples in harness precision.
pub type Frame = signal::ComplexFrame<Real>;

/// Information or coded bits, one bit (0 or 1) per byte.
pub type BitBlock = Vec<u8>;

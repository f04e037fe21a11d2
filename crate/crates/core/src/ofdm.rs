//! OFDM framing: centre-nulled carrier mapping, transform and cyclic prefix.

use num_complex::Complex;

use crate::error::{ensure_len, invalid};
use crate::signal::{ComplexFrame, Domain, Fft};
use crate::{Error, Result, Scalar};

/// Carrier allocation of one OFDM symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OfdmGeometry {
    pub fft_length: usize,
    pub data_carriers: usize,
    pub pad_carriers: usize,
    pub cp_length: usize,
}

impl OfdmGeometry {
    /// 75 % data carriers, 25 % null carriers and a 25 % cyclic prefix.
    pub fn new(fft_length: usize) -> Result<Self> {
        if fft_length < 8 || !fft_length.is_power_of_two() {
            return Err(Error::TransformSize(fft_length));
        }
        let quarter = fft_length / 4;
        Self::custom(fft_length, fft_length - quarter, quarter)
    }

    pub fn custom(fft_length: usize, data_carriers: usize, cp_length: usize) -> Result<Self> {
        if fft_length < 2 || !fft_length.is_power_of_two() {
            return Err(Error::TransformSize(fft_length));
        }
        if data_carriers == 0 || data_carriers >= fft_length || data_carriers % 2 != 0 {
            return Err(invalid(format!(
                "data carriers {data_carriers} must be even and in (0, {fft_length})"
            )));
        }
        if cp_length == 0 || cp_length > fft_length {
            return Err(invalid(format!("cyclic prefix {cp_length} out of range")));
        }
        Ok(Self {
            fft_length,
            data_carriers,
            pad_carriers: fft_length - data_carriers,
            cp_length,
        })
    }

    /// Samples per transmitted symbol including the prefix.
    pub fn symbol_length(&self) -> usize {
        self.fft_length + self.cp_length
    }
}

impl Default for OfdmGeometry {
    fn default() -> Self {
        Self::new(2048).expect("2048 is a valid transform size")
    }
}

/// Places the first half of the data below the null block and the second half
/// above it, so the zeros occupy the centre (Nyquist) carriers.
pub fn frame_transform<T: Scalar>(
    data: &ComplexFrame<T>,
    geometry: &OfdmGeometry,
) -> Result<ComplexFrame<T>> {
    ensure_len(geometry.data_carriers, data.len())?;
    let half = geometry.data_carriers / 2;
    let mut out = Vec::with_capacity(geometry.fft_length);
    out.extend_from_slice(&data.samples[..half]);
    out.resize(half + geometry.pad_carriers, Complex::new(T::zero(), T::zero()));
    out.extend_from_slice(&data.samples[half..]);
    Ok(ComplexFrame::frequency(out))
}

pub fn inverse_frame_transform<T: Scalar>(
    frame: &ComplexFrame<T>,
    geometry: &OfdmGeometry,
) -> Result<ComplexFrame<T>> {
    ensure_len(geometry.fft_length, frame.len())?;
    let half = geometry.data_carriers / 2;
    let mut out = Vec::with_capacity(geometry.data_carriers);
    out.extend_from_slice(&frame.samples[..half]);
    out.extend_from_slice(&frame.samples[half + geometry.pad_carriers..]);
    Ok(ComplexFrame::frequency(out))
}

pub fn add_cyclic_prefix<T: Scalar>(
    time: &ComplexFrame<T>,
    geometry: &OfdmGeometry,
) -> Result<ComplexFrame<T>> {
    ensure_len(geometry.fft_length, time.len())?;
    let mut out = Vec::with_capacity(geometry.symbol_length());
    out.extend_from_slice(&time.samples[geometry.fft_length - geometry.cp_length..]);
    out.extend_from_slice(&time.samples);
    Ok(ComplexFrame::time(out))
}

pub fn remove_cyclic_prefix<T: Scalar>(
    time: &ComplexFrame<T>,
    geometry: &OfdmGeometry,
) -> Result<ComplexFrame<T>> {
    ensure_len(geometry.symbol_length(), time.len())?;
    Ok(ComplexFrame::time(time.samples[geometry.cp_length..].to_vec()))
}

/// OFDM modulator/demodulator holding the transform plan for one geometry.
#[derive(Debug, Clone)]
pub struct OfdmModem<T> {
    geometry: OfdmGeometry,
    fft: Fft<T>,
}

impl<T: Scalar> OfdmModem<T> {
    pub fn new(geometry: OfdmGeometry) -> Result<Self> {
        Ok(Self {
            fft: Fft::new(geometry.fft_length)?,
            geometry,
        })
    }

    pub fn geometry(&self) -> &OfdmGeometry {
        &self.geometry
    }

    /// Frame transform, inverse DFT (scaled by 1/N) and cyclic prefix.
    pub fn modulate(&self, data: &ComplexFrame<T>) -> Result<ComplexFrame<T>> {
        let mut frame = frame_transform(data, &self.geometry)?;
        self.fft.process(&mut frame.samples, true)?;
        frame.domain = Domain::Time;
        add_cyclic_prefix(&frame, &self.geometry)
    }

    /// Prefix removal, forward DFT and removal of the null carriers.
    pub fn demodulate(&self, time: &ComplexFrame<T>) -> Result<ComplexFrame<T>> {
        let mut frame = remove_cyclic_prefix(time, &self.geometry)?;
        self.fft.process(&mut frame.samples, false)?;
        frame.domain = Domain::Frequency;
        inverse_frame_transform(&frame, &self.geometry)
    }
}

pub fn ofdm_modulate<T: Scalar>(
    data: &ComplexFrame<T>,
    geometry: &OfdmGeometry,
) -> Result<ComplexFrame<T>> {
    OfdmModem::new(*geometry)?.modulate(data)
}

pub fn ofdm_demodulate<T: Scalar>(
    time: &ComplexFrame<T>,
    geometry: &OfdmGeometry,
) -> Result<ComplexFrame<T>> {
    OfdmModem::new(*geometry)?.demodulate(time)
}

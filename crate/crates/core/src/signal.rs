//! Complex sample frames and the radix-2 discrete Fourier transform.

use num_complex::Complex;

use crate::{Error, Result, Scalar};

/// Which side of the transform a frame lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Frequency,
    Time,
}

/// A sequence of complex baseband samples tagged with its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFrame<T> {
    pub samples: Vec<Complex<T>>,
    pub domain: Domain,
}

impl<T: Scalar> ComplexFrame<T> {
    pub fn new(samples: Vec<Complex<T>>, domain: Domain) -> Self {
        Self { samples, domain }
    }

    pub fn time(samples: Vec<Complex<T>>) -> Self {
        Self::new(samples, Domain::Time)
    }

    pub fn frequency(samples: Vec<Complex<T>>) -> Self {
        Self::new(samples, Domain::Frequency)
    }

    pub fn zeros(len: usize, domain: Domain) -> Self {
        Self::new(vec![Complex::new(T::zero(), T::zero()); len], domain)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sum of squared magnitudes.
    pub fn energy(&self) -> T {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    pub fn mean_power(&self) -> T {
        if self.samples.is_empty() {
            T::zero()
        } else {
            self.energy() / T::of(self.samples.len() as f64)
        }
    }
}

/// Precomputed twiddles and bit-reversal table for one power-of-two length.
///
/// Forward transforms are unscaled; inverse transforms divide by the length.
#[derive(Debug, Clone)]
pub struct Fft<T> {
    len: usize,
    twiddles: Vec<Complex<T>>,
    bitrev: Vec<usize>,
}

impl<T: Scalar> Fft<T> {
    pub fn new(len: usize) -> Result<Self> {
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::TransformSize(len));
        }
        let bits = len.trailing_zeros();
        let bitrev = (0..len)
            .map(|i| i.reverse_bits() >> (usize::BITS - bits))
            .collect();
        // e^{-2πik/N}, k < N/2; angles computed in f64 then narrowed.
        let twiddles = (0..len / 2)
            .map(|k| {
                let a = -2.0 * std::f64::consts::PI * k as f64 / len as f64;
                Complex::new(T::of(a.cos()), T::of(a.sin()))
            })
            .collect();
        Ok(Self {
            len,
            twiddles,
            bitrev,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// In-place transform of `buf`, whose length must equal the planned length.
    pub fn process(&self, buf: &mut [Complex<T>], inverse: bool) -> Result<()> {
        if buf.len() != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: buf.len(),
            });
        }
        for i in 0..self.len {
            let j = self.bitrev[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for start in (0..self.len).step_by(2 * half) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
        if inverse {
            let scale = T::one() / T::of(self.len as f64);
            for s in buf.iter_mut() {
                *s = *s * scale;
            }
        }
        Ok(())
    }
}

/// Discrete Fourier transform of a power-of-two frame.
///
/// The forward direction is unscaled and yields a frequency-domain frame; the
/// inverse direction divides by `N` and yields a time-domain frame.
pub fn dft<T: Scalar>(frame: &ComplexFrame<T>, inverse: bool) -> Result<ComplexFrame<T>> {
    let plan = Fft::new(frame.len())?;
    let mut samples = frame.samples.clone();
    plan.process(&mut samples, inverse)?;
    let domain = if inverse {
        Domain::Time
    } else {
        Domain::Frequency
    };
    Ok(ComplexFrame::new(samples, domain))
}

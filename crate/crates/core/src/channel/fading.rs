use num_complex::Complex;

use crate::error::{ensure_len, invalid};
use crate::rng::RngStream;
use crate::signal::{ComplexFrame, Fft};
use crate::{Error, Result, Scalar};

/// One path of a tapped-delay-line profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub delay_ns: f64,
    pub power_db: f64,
}

/// ITU Pedestrian-A relative delays and powers.
pub const PEDESTRIAN_A: [Tap; 4] = [
    Tap { delay_ns: 0.0, power_db: 0.0 },
    Tap { delay_ns: 110.0, power_db: -9.7 },
    Tap { delay_ns: 190.0, power_db: -19.2 },
    Tap { delay_ns: 410.0, power_db: -22.8 },
];

/// Default baseband sample rate used to quantise tap delays.
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 3.84e6;

/// Fading channel description.
///
/// The diffuse part of every tap is a zero-mean complex Gaussian process, so
/// its amplitude follows the Rayleigh density `a/σ² · exp(-a²/2σ²)`. The first
/// tap may add a fixed line-of-sight term of amplitude `ρ`, which turns its
/// amplitude density into the Rice law
/// `a/σ² · exp(-(a² + ρ²)/2σ²) · I0(aρ/σ²)`. The K-factor `ρ²/2σ²` is the
/// line-of-sight to diffuse power ratio: zero gives Rayleigh fading, and the
/// channel approaches a non-fading one as K grows.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingConfig {
    pub k_factor: f64,
    pub max_doppler_hz: f64,
    pub profile: Vec<Tap>,
    pub sample_rate_hz: f64,
    /// Phase of the line-of-sight component.
    pub static_phase_rad: f64,
}

impl FadingConfig {
    /// Single-tap fading.
    pub fn flat(k_factor: f64, max_doppler_hz: f64, sample_rate_hz: f64) -> Self {
        Self {
            k_factor,
            max_doppler_hz,
            profile: vec![Tap { delay_ns: 0.0, power_db: 0.0 }],
            sample_rate_hz,
            static_phase_rad: 0.0,
        }
    }

    pub fn pedestrian_a(k_factor: f64, max_doppler_hz: f64, sample_rate_hz: f64) -> Self {
        Self {
            profile: PEDESTRIAN_A.to_vec(),
            ..Self::flat(k_factor, max_doppler_hz, sample_rate_hz)
        }
    }

    pub fn is_rayleigh(&self) -> bool {
        self.k_factor == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.profile.is_empty() {
            return Err(invalid("empty tap profile"));
        }
        if !(self.k_factor >= 0.0 && self.k_factor.is_finite()) {
            return Err(invalid(format!("K-factor {} must be finite and >= 0", self.k_factor)));
        }
        if !(self.sample_rate_hz > 0.0) {
            return Err(invalid("sample rate must be positive"));
        }
        if !(self.max_doppler_hz >= 0.0 && self.max_doppler_hz < self.sample_rate_hz / 2.0) {
            return Err(invalid(format!(
                "Doppler {} Hz must lie in [0, fs/2 = {} Hz)",
                self.max_doppler_hz,
                self.sample_rate_hz / 2.0
            )));
        }
        if self.profile.iter().any(|t| t.delay_ns < 0.0 || !t.power_db.is_finite()) {
            return Err(invalid("tap delays must be >= 0 with finite powers"));
        }
        Ok(())
    }

    /// Tap delays rounded to the nearest sample.
    pub fn delays_in_samples(&self) -> Vec<usize> {
        self.profile
            .iter()
            .map(|t| (t.delay_ns * 1e-9 * self.sample_rate_hz).round() as usize)
            .collect()
    }

    /// Linear tap powers normalised to unit total.
    pub fn normalized_powers(&self) -> Vec<f64> {
        let lin: Vec<f64> = self.profile.iter().map(|t| 10f64.powf(t.power_db / 10.0)).collect();
        let total: f64 = lin.iter().sum();
        lin.into_iter().map(|p| p / total).collect()
    }
}

/// Sampled tap gains of one channel realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState<T> {
    /// `tap_gains[p][k]` multiplies the input delayed by `tap_delays[p]` at output sample `k`.
    pub tap_gains: Vec<Vec<Complex<T>>>,
    pub tap_delays: Vec<usize>,
    /// Line-of-sight part of each tap (zero except on the first tap when K > 0).
    pub los: Vec<Complex<T>>,
    /// Phase-noise trajectory in radians, empty when phase noise is off.
    pub phase_trajectory: Vec<T>,
}

impl<T: Scalar> ChannelState<T> {
    /// Unit-gain, zero-delay channel of length `n`.
    pub fn identity(n: usize) -> Self {
        Self {
            tap_gains: vec![vec![Complex::new(T::one(), T::zero()); n]],
            tap_delays: vec![0],
            los: vec![Complex::new(T::zero(), T::zero())],
            phase_trajectory: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.tap_gains.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Diffuse part of tap `p`.
    pub fn diffuse(&self, p: usize) -> Vec<Complex<T>> {
        self.tap_gains[p].iter().map(|g| g - self.los[p]).collect()
    }

    /// The same channel with every gain replaced by its modulus.
    pub fn amplitude_only(&self) -> Self {
        Self {
            tap_gains: self
                .tap_gains
                .iter()
                .map(|tap| tap.iter().map(|g| Complex::new(g.norm(), T::zero())).collect())
                .collect(),
            ..self.clone()
        }
    }
}

/// Maximum Doppler shift `f0 · u / c` in Hz for carrier `carrier_hz` and speed
/// `speed_kmh`; with `c` in km/h the constant is 1080 MHz·(km/h).
pub fn doppler_spread(carrier_hz: f64, speed_kmh: f64) -> f64 {
    carrier_hz / 1.08e9 * speed_kmh
}

/// Time over which the channel stays correlated: the reciprocal Doppler spread.
pub fn coherence_time(doppler_hz: f64) -> Result<f64> {
    if !(doppler_hz > 0.0) {
        return Err(invalid("coherence time is unbounded for zero Doppler"));
    }
    Ok(1.0 / doppler_hz)
}

/// Oversampling of the slow grid relative to the Doppler spread.
const SLOW_GRID_OVERSAMPLING: f64 = 32.0;
/// Minimum number of spectral lines per side of the Doppler band.
const MIN_DOPPLER_LINES: f64 = 64.0;

/// Unit-power complex Gaussian process with a flat Doppler spectrum
/// `S(f) = 1/(2 f_d)` on `|f| <= f_d`, sampled at `fs` for `n` samples.
///
/// Lines inside the band of a periodic slow grid get i.i.d. complex Gaussian
/// amplitudes; the grid is inverse-transformed and linearly interpolated to
/// the signal rate.
fn flat_doppler_process(n: usize, fd: f64, fs: f64, rng: &mut RngStream) -> Result<Vec<Complex<f64>>> {
    if fd == 0.0 {
        let (a, b) = rng.gaussian_pair();
        let g = Complex::new(a, b) * std::f64::consts::FRAC_1_SQRT_2;
        return Ok(vec![g; n]);
    }
    let duration = n as f64 / fs;
    let slow_rate_target = (SLOW_GRID_OVERSAMPLING * fd).min(fs);
    let resolution = (fd / MIN_DOPPLER_LINES).min(1.0 / (2.0 * duration));
    let size = ((slow_rate_target / resolution).ceil() as usize).next_power_of_two().max(4);
    // keep the resolution, let the slow rate absorb the power-of-two rounding
    let slow_rate = (size as f64 * resolution).min(fs);
    let df = slow_rate / size as f64;

    let active: Vec<usize> = (0..size)
        .filter(|&j| {
            let f = if j < size / 2 { j as f64 } else { j as f64 - size as f64 } * df;
            f.abs() <= fd
        })
        .collect();
    let amp = (1.0 / (2.0 * active.len() as f64)).sqrt() * size as f64;
    let mut grid = vec![Complex::new(0.0, 0.0); size];
    for &j in &active {
        let (a, b) = rng.gaussian_pair();
        grid[j] = Complex::new(a, b) * amp;
    }
    Fft::<f64>::new(size)?.process(&mut grid, true)?;

    let step = slow_rate / fs;
    Ok((0..n)
        .map(|k| {
            let pos = k as f64 * step;
            let i = pos.floor();
            let frac = pos - i;
            let i = i as usize % size;
            grid[i] * (1.0 - frac) + grid[(i + 1) % size] * frac
        })
        .collect())
}

/// Draws one realization of every tap for `n` output samples.
pub fn generate_tap_gains<T: Scalar>(
    config: &FadingConfig,
    n: usize,
    rng: &mut RngStream,
) -> Result<ChannelState<T>> {
    config.validate()?;
    if n < 2 {
        return Err(invalid("fading length must be >= 2"));
    }
    let powers = config.normalized_powers();
    let k = config.k_factor;
    let mut tap_gains = Vec::with_capacity(powers.len());
    let mut los = Vec::with_capacity(powers.len());
    for (p, &g) in powers.iter().enumerate() {
        let (diffuse_power, los_term) = if p == 0 {
            let l = Complex::from_polar((g * k / (k + 1.0)).sqrt(), config.static_phase_rad);
            (g / (k + 1.0), l)
        } else {
            (g, Complex::new(0.0, 0.0))
        };
        let scale = diffuse_power.sqrt();
        let process = flat_doppler_process(n, config.max_doppler_hz, config.sample_rate_hz, rng)?;
        tap_gains.push(
            process
                .into_iter()
                .map(|v| {
                    let z = v * scale + los_term;
                    Complex::new(T::of(z.re), T::of(z.im))
                })
                .collect(),
        );
        los.push(Complex::new(T::of(los_term.re), T::of(los_term.im)));
    }
    Ok(ChannelState {
        tap_gains,
        tap_delays: config.delays_in_samples(),
        los,
        phase_trajectory: Vec::new(),
    })
}

/// Time-varying tapped delay line: `y_k = Σ_p g_{p,k} · x_{k - d_p}`.
pub fn multipath_apply<T: Scalar>(
    signal: &ComplexFrame<T>,
    state: &ChannelState<T>,
) -> Result<ComplexFrame<T>> {
    let n = signal.len();
    if state.len() < n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: state.len(),
        });
    }
    let mut out = vec![Complex::new(T::zero(), T::zero()); n];
    for (gains, &d) in state.tap_gains.iter().zip(&state.tap_delays) {
        for k in d..n {
            out[k] += gains[k] * signal.samples[k - d];
        }
    }
    Ok(ComplexFrame::new(out, signal.domain))
}

/// Keeps the faded magnitude and restores the transmitted angle.
///
/// A zero transmitted sample has no angle; the result is then real and
/// non-negative.
pub fn perfect_phase_recovery<T: Scalar>(
    faded: &ComplexFrame<T>,
    original: &ComplexFrame<T>,
) -> Result<ComplexFrame<T>> {
    ensure_len(original.len(), faded.len())?;
    let samples = faded
        .samples
        .iter()
        .zip(&original.samples)
        .map(|(f, o)| {
            let angle = if o.re == T::zero() && o.im == T::zero() {
                T::zero()
            } else {
                o.arg()
            };
            Complex::from_polar(f.norm(), angle)
        })
        .collect();
    Ok(ComplexFrame::new(samples, faded.domain))
}

/// Flat fading followed by a fixed rotation: `y_k = g_k · x_k · e^{iθ}`.
pub fn static_phase_rayleigh<T: Scalar>(
    signal: &ComplexFrame<T>,
    angle_rad: f64,
    state: &ChannelState<T>,
) -> Result<ComplexFrame<T>> {
    if state.tap_gains.len() != 1 || state.tap_delays[0] != 0 {
        return Err(invalid("static phase shift needs a single zero-delay tap"));
    }
    if state.len() < signal.len() {
        return Err(Error::LengthMismatch {
            expected: signal.len(),
            actual: state.len(),
        });
    }
    let rot = Complex::from_polar(T::one(), T::of(angle_rad));
    let samples = signal
        .samples
        .iter()
        .zip(&state.tap_gains[0])
        .map(|(x, g)| g * x * rot)
        .collect();
    Ok(ComplexFrame::new(samples, signal.domain))
}

use num_complex::Complex;
use rayon::prelude::*;

use super::config::{Demapping, ScenarioConfig, ScenarioKind};
use crate::channel::{
    noise_variance, AwgnConfig, FadingConfig, FadingStage, Impairments, PhaseNoiseConfig,
};
use crate::decoder::{scale_received, turbo_decode_trace_with, DecoderInput};
use crate::encoder::TurboCode;
use crate::error::invalid;
use crate::modem::{qpsk_demodulate_hard, qpsk_demodulate_soft, qpsk_modulate, to_bipolar};
use crate::ofdm::{OfdmGeometry, OfdmModem};
use crate::rng::{stream_key, RngStream};
use crate::signal::ComplexFrame;
use crate::{Cplx, Error, Real, Result};

/// One measured BER point.
#[derive(Debug, Clone, PartialEq)]
pub struct BerRecord {
    pub scenario: String,
    pub ebn0_db: f64,
    /// Decoder iterations; 0 for the uncoded reference.
    pub iterations: usize,
    pub block_size: usize,
    pub bits_simulated: u64,
    pub bit_errors: u64,
    pub ber: f64,
}

impl BerRecord {
    pub fn new(
        scenario: String,
        ebn0_db: f64,
        iterations: usize,
        block_size: usize,
        bits_simulated: u64,
        bit_errors: u64,
    ) -> Self {
        let ber = if bits_simulated == 0 {
            0.0
        } else {
            bit_errors as f64 / bits_simulated as f64
        };
        Self {
            scenario,
            ebn0_db,
            iterations,
            block_size,
            bits_simulated,
            bit_errors,
            ber,
        }
    }
}

/// Hamming distance between `reference[i]` and `decoded[i + delay]` over
/// their overlap. Returns `(errors, bits compared)`.
pub fn ber_count(reference: &[u8], decoded: &[u8], delay: usize) -> Result<(u64, u64)> {
    let overlap = decoded.len().saturating_sub(delay).min(reference.len());
    if overlap == 0 {
        return Err(Error::NoOverlap(delay));
    }
    let errors = reference[..overlap]
        .iter()
        .zip(&decoded[delay..delay + overlap])
        .filter(|(a, b)| (*a ^ *b) & 1 == 1)
        .count();
    Ok((errors as u64, overlap as u64))
}

/// Error tally of one burst or one point: bit count and errors after each
/// decoder iteration (a single entry when uncoded).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Tally {
    pub bits: u64,
    pub errors: Vec<u64>,
}

impl Tally {
    fn absorb(&mut self, other: &Tally) {
        if self.errors.is_empty() {
            self.errors = vec![0; other.errors.len()];
        }
        self.bits += other.bits;
        for (a, b) in self.errors.iter_mut().zip(&other.errors) {
            *a += b;
        }
    }

    fn final_errors(&self) -> u64 {
        self.errors.last().copied().unwrap_or(0)
    }
}

/// Transmitted and received data-carrier symbols of one burst.
#[derive(Debug, Clone)]
pub struct BurstSymbols {
    pub source_bits: Vec<u8>,
    pub transmitted: Vec<Cplx>,
    pub received: Vec<Cplx>,
}

const STREAM_CODE: u8 = 0;
const STREAM_BURST: u8 = 1;

/// Stream index derived from the Eb/N0 value, so a point's randomness does
/// not depend on its position in the sweep.
fn point_key(ebn0_db: f64) -> u32 {
    (((ebn0_db * 1000.0).round() as i64 + (1 << 23)) & 0xff_ffff) as u32
}

/// The full transmit/channel/receive chain for one scenario.
#[derive(Debug, Clone)]
pub struct Link {
    config: ScenarioConfig,
    code: Option<TurboCode>,
    modem: OfdmModem<Real>,
    codewords_per_burst: usize,
    frames_per_burst: usize,
}

impl Link {
    pub fn new(config: &ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let geometry = OfdmGeometry::new(config.fft_length)?;
        let code = if config.uncoded {
            None
        } else {
            let mut rng = RngStream::new(config.seed, stream_key(STREAM_CODE, 0, 0));
            Some(TurboCode::random(config.block_size, &mut rng)?)
        };
        let mut link = Self {
            config: config.clone(),
            code,
            modem: OfdmModem::new(geometry)?,
            codewords_per_burst: 1,
            frames_per_burst: 1,
        };
        let s = link.symbols_per_codeword();
        let d = geometry.data_carriers;
        let per_burst = lcm(s, d) / s;
        link.codewords_per_burst = if per_burst <= 8 { per_burst } else { d.div_ceil(s) };
        link.frames_per_burst = (link.codewords_per_burst * s).div_ceil(d);
        Ok(link)
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn geometry(&self) -> &OfdmGeometry {
        self.modem.geometry()
    }

    pub fn code(&self) -> Option<&TurboCode> {
        self.code.as_ref()
    }

    pub fn coded_bits_per_codeword(&self) -> usize {
        if self.config.uncoded {
            self.config.block_size
        } else {
            4 * self.config.block_size
        }
    }

    pub fn symbols_per_codeword(&self) -> usize {
        self.coded_bits_per_codeword() / 2
    }

    pub fn codewords_per_burst(&self) -> usize {
        self.codewords_per_burst
    }

    pub fn frames_per_burst(&self) -> usize {
        self.frames_per_burst
    }

    /// Offset between source and decoded streams, in bits. Bursts are framed
    /// on whole OFDM symbols and whole codewords, so the receiver output lines
    /// up with the source.
    pub fn pipeline_delay(&self) -> usize {
        0
    }

    /// Per-dimension noise variance on the data carriers (unit-energy symbols).
    pub fn carrier_noise_variance(&self, ebn0_db: f64) -> f64 {
        let rate = self.config.calibration_rate.unwrap_or(self.config.code_rate());
        noise_variance(&AwgnConfig::qpsk(ebn0_db, rate))
    }

    /// The channel for one Eb/N0 point. Noise is injected in the time domain
    /// with per-sample energy `1/N`, which after the unscaled forward
    /// transform leaves [`Self::carrier_noise_variance`] on every carrier.
    pub fn impairments(&self, ebn0_db: f64) -> Impairments {
        let cfg = &self.config;
        let fs = cfg.sample_rate_hz;
        let fd = cfg.doppler_hz();
        let fading = match cfg.scenario {
            ScenarioKind::Awgn | ScenarioKind::AwgnPhaseNoise => None,
            ScenarioKind::RayleighShift { angle_deg } => Some(FadingStage::PhaseShift {
                fading: FadingConfig::flat(0.0, fd, fs),
                angle_rad: angle_deg.to_radians(),
            }),
            ScenarioKind::RayleighPa3 => {
                Some(FadingStage::Multipath(FadingConfig::pedestrian_a(0.0, fd, fs)))
            }
            ScenarioKind::RicianPa3 { k_factor } | ScenarioKind::RicianPa3PhaseNoise { k_factor } => {
                Some(FadingStage::Multipath(FadingConfig::pedestrian_a(k_factor, fd, fs)))
            }
        };
        let phase_noise = cfg
            .scenario
            .has_phase_noise()
            .then(|| PhaseNoiseConfig::reference(fs));
        let rate = cfg.calibration_rate.unwrap_or(cfg.code_rate());
        let mut awgn = AwgnConfig::qpsk(ebn0_db, rate);
        awgn.symbol_energy = 1.0 / cfg.fft_length as f64;
        Impairments {
            fading,
            phase_noise,
            awgn_variance: noise_variance(&awgn),
        }
    }

    fn burst_rng(&self, ebn0_db: f64, burst: u32) -> RngStream {
        RngStream::new(
            self.config.seed,
            stream_key(STREAM_BURST, point_key(ebn0_db), burst),
        )
    }

    /// Source bits through encoder, mapper, OFDM, channel and OFDM receiver.
    pub fn transmit_burst(&self, ebn0_db: f64, rng: &mut RngStream) -> Result<BurstSymbols> {
        let k = self.config.block_size;
        let source_bits = rng.bits(k * self.codewords_per_burst);
        let mut coded = Vec::with_capacity(self.coded_bits_per_codeword() * self.codewords_per_burst);
        match &self.code {
            Some(code) => {
                for block in source_bits.chunks_exact(k) {
                    coded.extend(code.encode(block)?.multiplexed);
                }
            }
            None => coded.extend_from_slice(&source_bits),
        }
        let mut transmitted: Vec<Cplx> = qpsk_modulate(&coded)?;
        let used = transmitted.len();
        let d = self.geometry().data_carriers;
        let filler = rng.bits(2 * (self.frames_per_burst * d - used));
        transmitted.extend(qpsk_modulate::<Real>(&filler)?);

        let symbol_len = self.geometry().symbol_length();
        let mut time = Vec::with_capacity(self.frames_per_burst * symbol_len);
        for frame in transmitted.chunks_exact(d) {
            time.extend(self.modem.modulate(&ComplexFrame::frequency(frame.to_vec()))?.samples);
        }
        let rx_time = self.impairments(ebn0_db).apply(&ComplexFrame::time(time), rng)?;

        let mut received = Vec::with_capacity(transmitted.len());
        for chunk in rx_time.samples.chunks_exact(symbol_len) {
            received.extend(self.modem.demodulate(&ComplexFrame::time(chunk.to_vec()))?.samples);
        }
        transmitted.truncate(used);
        received.truncate(used);
        Ok(BurstSymbols {
            source_bits,
            transmitted,
            received,
        })
    }

    /// Decoder LLRs (positive favours 1) for received data symbols.
    pub fn demap(&self, received: &[Cplx], ebn0_db: f64) -> Result<Vec<Real>> {
        let sigma2 = self.carrier_noise_variance(ebn0_db);
        match self.config.demapping {
            Demapping::Hard => {
                let bipolar: Vec<Real> = to_bipolar(&qpsk_demodulate_hard(received));
                scale_received(&bipolar, sigma2)
            }
            Demapping::Soft => scale_received(&qpsk_demodulate_soft(received), 2.0 * sigma2),
        }
    }

    /// Runs one burst and counts errors after every iteration.
    pub fn run_burst(&self, ebn0_db: f64, rng: &mut RngStream) -> Result<Tally> {
        let burst = self.transmit_burst(ebn0_db, rng)?;
        let k = self.config.block_size;
        let delay = self.pipeline_delay();
        let Some(code) = &self.code else {
            let decided = qpsk_demodulate_hard(&burst.received);
            let (errors, bits) = ber_count(&burst.source_bits, &decided, delay)?;
            return Ok(Tally {
                bits,
                errors: vec![errors],
            });
        };
        let llrs = self.demap(&burst.received, ebn0_db)?;
        let mut tally = Tally {
            bits: 0,
            errors: vec![0; self.config.iterations],
        };
        for (src, block_llrs) in burst
            .source_bits
            .chunks_exact(k)
            .zip(llrs.chunks_exact(4 * k))
        {
            let input = DecoderInput::from_multiplexed(block_llrs, &code.il1, &code.il2)?;
            let trace = turbo_decode_trace_with(
                &input,
                self.config.iterations,
                &code.trellis,
                self.config.schedule,
            )?;
            for (slot, decided) in tally.errors.iter_mut().zip(&trace) {
                *slot += ber_count(src, decided, delay)?.0;
            }
            tally.bits += k as u64;
        }
        Ok(tally)
    }

    /// Accumulates bursts until the stop rule fires. Bursts run in parallel
    /// batches but are absorbed in index order, so the result does not depend
    /// on the thread count.
    pub fn simulate_point(&self, ebn0_db: f64) -> Result<Tally> {
        if !ebn0_db.is_finite() {
            return Err(invalid("Eb/N0 must be finite"));
        }
        let rule = self.config.stop_rule;
        let batch = (2 * rayon::current_num_threads()).max(4) as u32;
        let mut total = Tally::default();
        let mut next = 0u32;
        loop {
            let results: Vec<Result<Tally>> = (next..next + batch)
                .into_par_iter()
                .map(|b| self.run_burst(ebn0_db, &mut self.burst_rng(ebn0_db, b)))
                .collect();
            for r in results {
                total.absorb(&r?);
                if total.final_errors() >= rule.min_errors || total.bits >= rule.max_bits {
                    return Ok(total);
                }
            }
            next += batch;
        }
    }

    fn records(&self, ebn0_db: f64, tally: &Tally) -> Vec<BerRecord> {
        let label = self.config.scenario.to_string();
        let k = self.config.block_size;
        if self.config.uncoded {
            return vec![BerRecord::new(label, ebn0_db, 0, k, tally.bits, tally.errors[0])];
        }
        tally
            .errors
            .iter()
            .enumerate()
            .map(|(i, &e)| BerRecord::new(label.clone(), ebn0_db, i + 1, k, tally.bits, e))
            .collect()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Simulates one Eb/N0 point at the configured iteration count.
pub fn run_point(config: &ScenarioConfig, ebn0_db: f64) -> Result<BerRecord> {
    let link = Link::new(config)?;
    let tally = link.simulate_point(ebn0_db)?;
    Ok(link.records(ebn0_db, &tally).pop().expect("one record per iteration"))
}

/// Simulates every configured point; each point yields one record per
/// iteration count `1..=iterations` (one record when uncoded).
pub fn run_sweep(config: &ScenarioConfig) -> Result<Vec<BerRecord>> {
    let link = Link::new(config)?;
    let mut out = Vec::new();
    for &ebn0 in &config.ebn0_points_db {
        let tally = link.simulate_point(ebn0)?;
        out.extend(link.records(ebn0, &tally));
    }
    Ok(out)
}

/// Mean symbol SNR of a burst, `E|x|² / E|y - x|²`.
pub fn measured_snr(burst: &BurstSymbols) -> f64 {
    let signal: f64 = burst.transmitted.iter().map(Complex::norm_sqr).sum();
    let noise: f64 = burst
        .transmitted
        .iter()
        .zip(&burst.received)
        .map(|(x, y)| (y - x).norm_sqr())
        .sum();
    signal / noise
}

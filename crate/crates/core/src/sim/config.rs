use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::channel::{doppler_spread, DEFAULT_SAMPLE_RATE_HZ};
use crate::decoder::Schedule;
use crate::error::invalid;
use crate::{Error, Result};

/// The simulated impairment combinations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioKind {
    Awgn,
    AwgnPhaseNoise,
    /// Flat Rayleigh fading followed by a fixed rotation (degrees).
    RayleighShift { angle_deg: f64 },
    RayleighPa3,
    RicianPa3 { k_factor: f64 },
    RicianPa3PhaseNoise { k_factor: f64 },
}

impl ScenarioKind {
    /// Every case of the reference study, in presentation order.
    pub fn catalogue() -> Vec<ScenarioKind> {
        use ScenarioKind::*;
        vec![
            Awgn,
            AwgnPhaseNoise,
            RayleighShift { angle_deg: 30.0 },
            RayleighShift { angle_deg: 40.0 },
            RayleighPa3,
            RicianPa3 { k_factor: 1.0 },
            RicianPa3PhaseNoise { k_factor: 1.0 },
            RicianPa3 { k_factor: 2.0 },
            RicianPa3PhaseNoise { k_factor: 2.0 },
        ]
    }

    pub fn is_fading(&self) -> bool {
        !matches!(self, ScenarioKind::Awgn | ScenarioKind::AwgnPhaseNoise)
    }

    pub fn has_phase_noise(&self) -> bool {
        matches!(
            self,
            ScenarioKind::AwgnPhaseNoise | ScenarioKind::RicianPa3PhaseNoise { .. }
        )
    }

    /// Base name without parameters, as accepted on the command line.
    pub fn base_name(&self) -> &'static str {
        match self {
            ScenarioKind::Awgn => "awgn",
            ScenarioKind::AwgnPhaseNoise => "awgn+pn",
            ScenarioKind::RayleighShift { .. } => "awgn+rayleigh_shift",
            ScenarioKind::RayleighPa3 => "awgn+rayleigh_pa3",
            ScenarioKind::RicianPa3 { .. } => "awgn+rician_pa3",
            ScenarioKind::RicianPa3PhaseNoise { .. } => "awgn+rician_pa3+pn",
        }
    }

    pub fn k_factor(&self) -> Option<f64> {
        match self {
            ScenarioKind::RicianPa3 { k_factor } | ScenarioKind::RicianPa3PhaseNoise { k_factor } => Some(*k_factor),
            _ => None,
        }
    }

    pub fn angle_deg(&self) -> Option<f64> {
        match self {
            ScenarioKind::RayleighShift { angle_deg } => Some(*angle_deg),
            _ => None,
        }
    }

    /// Parses a base name, taking the K-factor and angle from separate settings.
    pub fn from_parts(name: &str, k_factor: f64, angle_deg: f64) -> Result<Self> {
        Ok(match name {
            "awgn" => ScenarioKind::Awgn,
            "awgn+pn" => ScenarioKind::AwgnPhaseNoise,
            "awgn+rayleigh_shift" => ScenarioKind::RayleighShift { angle_deg },
            "awgn+rayleigh_pa3" => ScenarioKind::RayleighPa3,
            "awgn+rician_pa3" => ScenarioKind::RicianPa3 { k_factor },
            "awgn+rician_pa3+pn" => ScenarioKind::RicianPa3PhaseNoise { k_factor },
            other => return Err(invalid(format!("unknown scenario '{other}'"))),
        })
    }
}

/// Labels carry the parameter in parentheses, e.g. `awgn+rician_pa3(1)`.
impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioKind::RayleighShift { angle_deg } => write!(f, "{}({})", self.base_name(), angle_deg),
            ScenarioKind::RicianPa3 { k_factor } | ScenarioKind::RicianPa3PhaseNoise { k_factor } => {
                write!(f, "{}({})", self.base_name(), k_factor)
            }
            _ => f.write_str(self.base_name()),
        }
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match (s.find('('), s.find(')')) {
            (Some(open), Some(close)) if open < close => {
                let param: f64 = s[open + 1..close]
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("bad scenario parameter in '{s}'")))?;
                let name = format!("{}{}", &s[..open], &s[close + 1..]);
                Self::from_parts(&name, param, param)
            }
            (None, None) => Self::from_parts(s, 1.0, 30.0),
            _ => Err(invalid(format!("unbalanced parentheses in '{s}'"))),
        }
    }
}

/// How received symbols become decoder LLRs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Demapping {
    /// Quadrant decision, bipolar conversion, then `2/σ²` scaling.
    Hard,
    /// Per-dimension soft values scaled by their noise variance.
    Soft,
}

impl FromStr for Demapping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "hard" => Ok(Demapping::Hard),
            "soft" => Ok(Demapping::Soft),
            other => Err(invalid(format!("unknown demapping '{other}'"))),
        }
    }
}

impl fmt::Display for Demapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Demapping::Hard => "hard",
            Demapping::Soft => "soft",
        })
    }
}

/// Per-point Monte Carlo stopping rule: stop at `min_errors` or `max_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self {
            min_errors: 100,
            max_bits: 10_000_000,
        }
    }
}

/// Everything one sweep needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub block_size: usize,
    /// Largest iteration count; records are produced for `1..=iterations`.
    pub iterations: usize,
    pub fft_length: usize,
    pub ebn0_points_db: Vec<f64>,
    pub seed: u64,
    pub stop_rule: StopRule,
    pub sample_rate_hz: f64,
    pub carrier_hz: f64,
    pub speed_kmh: f64,
    /// Skip the turbo code and map information bits straight onto QPSK.
    pub uncoded: bool,
    pub demapping: Demapping,
    pub schedule: Schedule,
    /// Code rate used to convert Eb/N0 into a noise variance. Defaults to the
    /// true rate (1/4); 1/3 reproduces the alternative calibration.
    pub calibration_rate: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::Awgn,
            block_size: 512,
            iterations: 5,
            fft_length: 2048,
            ebn0_points_db: vec![0.0, 0.5, 1.0, 1.5, 2.0],
            seed: 1,
            stop_rule: StopRule::default(),
            sample_rate_hz: DEFAULT_SAMPLE_RATE_HZ,
            carrier_hz: 2e9,
            speed_kmh: 3.0,
            uncoded: false,
            demapping: Demapping::Hard,
            schedule: Schedule::Ring,
            calibration_rate: None,
        }
    }
}

/// Parses `start:stop:step`, a comma list, or a single value (dB).
pub fn parse_ebn0_points(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| -> Result<f64> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| invalid(format!("bad Eb/N0 value '{s}'")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, h) = (num(start)?, num(stop)?, num(step)?);
            if !(h > 0.0) || b < a {
                return Err(invalid(format!("bad Eb/N0 range '{text}'")));
            }
            let count = ((b - a) / h + 1e-9).floor() as usize + 1;
            // round to micro-dB so 0.1 steps print cleanly
            Ok((0..count)
                .map(|i| ((a + i as f64 * h) * 1e6).round() / 1e6)
                .collect())
        }
        [single] => single.split(',').map(num).collect(),
        _ => Err(invalid(format!("bad Eb/N0 specification '{text}'"))),
    }
}

impl ScenarioConfig {
    pub fn doppler_hz(&self) -> f64 {
        doppler_spread(self.carrier_hz, self.speed_kmh)
    }

    /// Information bits per coded bit actually transmitted.
    pub fn code_rate(&self) -> f64 {
        if self.uncoded {
            1.0
        } else {
            0.25
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size < 2 || self.block_size % 2 != 0 {
            return Err(invalid(format!("block size {} must be even and >= 2", self.block_size)));
        }
        if !(1..=64).contains(&self.iterations) {
            return Err(invalid(format!("iterations {} out of 1..=64", self.iterations)));
        }
        if self.fft_length < 8 || !self.fft_length.is_power_of_two() {
            return Err(Error::TransformSize(self.fft_length));
        }
        if self.ebn0_points_db.is_empty() {
            return Err(invalid("empty Eb/N0 sweep"));
        }
        if self.ebn0_points_db.iter().any(|v| !v.is_finite()) {
            return Err(invalid("Eb/N0 points must be finite"));
        }
        if self.stop_rule.max_bits == 0 {
            return Err(invalid("max bits must be positive"));
        }
        if !(self.sample_rate_hz > 0.0) || !(self.carrier_hz >= 0.0) || !(self.speed_kmh >= 0.0) {
            return Err(invalid("sample rate, carrier and speed must be non-negative (rate positive)"));
        }
        if let Some(r) = self.calibration_rate {
            if !(r > 0.0 && r <= 1.0) {
                return Err(invalid(format!("calibration rate {r} out of (0, 1]")));
            }
        }
        match self.scenario {
            ScenarioKind::RicianPa3 { k_factor } | ScenarioKind::RicianPa3PhaseNoise { k_factor }
                if !(k_factor >= 0.0 && k_factor.is_finite()) =>
            {
                return Err(invalid(format!("K-factor {k_factor} must be >= 0")));
            }
            ScenarioKind::RayleighShift { angle_deg } if !angle_deg.is_finite() => {
                return Err(invalid("phase angle must be finite"));
            }
            _ => {}
        }
        if self.scenario.is_fading() && self.doppler_hz() >= self.sample_rate_hz / 2.0 {
            return Err(invalid("Doppler spread must be below half the sample rate"));
        }
        if self.scenario.has_phase_noise() && self.sample_rate_hz <= 200.0 {
            return Err(invalid("phase noise needs a sample rate above 200 Hz"));
        }
        Ok(())
    }

}

/// Settings recognised in config files and as long command-line flags.
pub const SETTING_KEYS: &[&str] = &[
    "scenario",
    "k-factor",
    "phase-angle-deg",
    "ebn0",
    "iterations",
    "block-size",
    "fft",
    "seed",
    "min-errors",
    "max-bits",
    "sample-rate-hz",
    "carrier-hz",
    "speed-kmh",
    "uncoded",
    "demapping",
    "schedule",
    "calibration-rate",
];

/// Collects `key=value` settings from files and flags; later settings win.
#[derive(Debug, Clone, Default)]
pub struct ConfigBuilder {
    settings: BTreeMap<String, String>,
}

impl ConfigBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<&mut Self> {
        let key = key.trim();
        if !SETTING_KEYS.contains(&key) {
            return Err(invalid(format!("unknown setting '{key}'")));
        }
        self.settings.insert(key.to_string(), value.into().trim().to_string());
        Ok(self)
    }

    /// Reads a flat `key=value` file; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<&mut Self> {
        let text = std::fs::read_to_string(path)?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<&mut Self> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| invalid(format!("line {}: expected key=value", lineno + 1)))?;
            self.set(k, v)?;
        }
        Ok(self)
    }

    pub fn build(&self) -> Result<ScenarioConfig> {
        fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| invalid(format!("bad value '{v}' for {key}")))
        }
        let get = |k: &str| self.settings.get(k).map(String::as_str);
        let mut cfg = ScenarioConfig::default();

        let k_factor = get("k-factor").map(|v| parse("k-factor", v)).transpose()?;
        let angle = get("phase-angle-deg")
            .map(|v| parse("phase-angle-deg", v))
            .transpose()?;
        if let Some(name) = get("scenario") {
            cfg.scenario = if name.contains('(') {
                let parsed: ScenarioKind = name.parse()?;
                // explicit flags still override the inline parameter
                ScenarioKind::from_parts(
                    parsed.base_name(),
                    k_factor.unwrap_or(parsed.k_factor().unwrap_or(1.0)),
                    angle.unwrap_or(parsed.angle_deg().unwrap_or(30.0)),
                )?
            } else {
                ScenarioKind::from_parts(name, k_factor.unwrap_or(1.0), angle.unwrap_or(30.0))?
            };
        }
        if let Some(v) = get("ebn0") {
            cfg.ebn0_points_db = parse_ebn0_points(v)?;
        }
        if let Some(v) = get("iterations") {
            cfg.iterations = parse("iterations", v)?;
        }
        if let Some(v) = get("block-size") {
            cfg.block_size = parse("block-size", v)?;
        }
        if let Some(v) = get("fft") {
            cfg.fft_length = parse("fft", v)?;
        }
        if let Some(v) = get("seed") {
            cfg.seed = parse("seed", v)?;
        }
        if let Some(v) = get("min-errors") {
            cfg.stop_rule.min_errors = parse("min-errors", v)?;
        }
        if let Some(v) = get("max-bits") {
            cfg.stop_rule.max_bits = parse::<f64>("max-bits", v)? as u64;
        }
        if let Some(v) = get("sample-rate-hz") {
            cfg.sample_rate_hz = parse("sample-rate-hz", v)?;
        }
        if let Some(v) = get("carrier-hz") {
            cfg.carrier_hz = parse("carrier-hz", v)?;
        }
        if let Some(v) = get("speed-kmh") {
            cfg.speed_kmh = parse("speed-kmh", v)?;
        }
        if let Some(v) = get("uncoded") {
            cfg.uncoded = parse_bool(v)?;
        }
        if let Some(v) = get("demapping") {
            cfg.demapping = v.parse()?;
        }
        if let Some(v) = get("schedule") {
            cfg.schedule = v.parse()?;
        }
        if let Some(v) = get("calibration-rate") {
            cfg.calibration_rate = Some(parse_rate(v)?);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "" | "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        other => Err(invalid(format!("bad boolean '{other}'"))),
    }
}

/// Accepts `0.25` or `1/4`.
fn parse_rate(v: &str) -> Result<f64> {
    let bad = || invalid(format!("bad rate '{v}'"));
    match v.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            Ok(n / d)
        }
        None => v.parse().map_err(|_| bad()),
    }
}

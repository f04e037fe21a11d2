use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Parser;
use tcofdm::sim::{emit_results, run_sweep, ConfigBuilder, ScenarioKind};

/// Monte Carlo BER sweeps of a turbo-coded OFDM link.
///
/// Settings come from `--config` (flat `key=value` lines, keys named like the
/// long flags) and are overridden by flags given on the command line.
#[derive(Debug, Parser)]
#[command(name = "tcofdm", version)]
struct Args {
    /// Settings file with `key=value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario name, optionally with its parameter, e.g. `awgn+rician_pa3(2)`.
    #[arg(long)]
    scenario: Option<String>,
    /// Rician K-factor for the rician scenarios.
    #[arg(long)]
    k_factor: Option<String>,
    /// Rotation in degrees for the rayleigh_shift scenario.
    #[arg(long)]
    phase_angle_deg: Option<String>,
    /// Eb/N0 points in dB: `start:stop:step`, `a,b,c` or a single value.
    #[arg(long, allow_hyphen_values = true)]
    ebn0: Option<String>,
    #[arg(long)]
    iterations: Option<String>,
    #[arg(long)]
    block_size: Option<String>,
    /// Transform length (power of two).
    #[arg(long)]
    fft: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Stop a point after this many bit errors at the final iteration.
    #[arg(long)]
    min_errors: Option<String>,
    /// Stop a point after this many information bits.
    #[arg(long)]
    max_bits: Option<String>,
    #[arg(long)]
    sample_rate_hz: Option<String>,
    #[arg(long)]
    carrier_hz: Option<String>,
    #[arg(long)]
    speed_kmh: Option<String>,
    /// Bypass the turbo code.
    #[arg(long)]
    uncoded: bool,
    /// `hard` or `soft`.
    #[arg(long)]
    demapping: Option<String>,
    /// Decoder wiring: `ring` or `shared`.
    #[arg(long)]
    schedule: Option<String>,
    /// Code rate used for the Eb/N0 to noise conversion, e.g. `1/3`.
    #[arg(long)]
    calibration_rate: Option<String>,
    /// CSV output path; plot scripts are written next to it.
    #[arg(long, default_value = "ber.csv")]
    out: PathBuf,
    /// List the scenario catalogue and exit.
    #[arg(long)]
    list_scenarios: bool,
}

impl Args {
    fn flag_settings(&self) -> Vec<(&'static str, String)> {
        let pairs = [
            ("scenario", &self.scenario),
            ("k-factor", &self.k_factor),
            ("phase-angle-deg", &self.phase_angle_deg),
            ("ebn0", &self.ebn0),
            ("iterations", &self.iterations),
            ("block-size", &self.block_size),
            ("fft", &self.fft),
            ("seed", &self.seed),
            ("min-errors", &self.min_errors),
            ("max-bits", &self.max_bits),
            ("sample-rate-hz", &self.sample_rate_hz),
            ("carrier-hz", &self.carrier_hz),
            ("speed-kmh", &self.speed_kmh),
            ("demapping", &self.demapping),
            ("schedule", &self.schedule),
            ("calibration-rate", &self.calibration_rate),
        ];
        let mut out: Vec<_> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect();
        if self.uncoded {
            out.push(("uncoded", "true".into()));
        }
        out
    }
}

fn main() -> Result<()> {
    let args = Args::parse();
    if args.list_scenarios {
        for kind in ScenarioKind::catalogue() {
            println!("{kind}");
        }
        return Ok(());
    }

    let mut builder = ConfigBuilder::default();
    if let Some(path) = &args.config {
        builder
            .apply_file(path)
            .with_context(|| format!("reading {}", path.display()))?;
    }
    for (key, value) in args.flag_settings() {
        builder.set(key, value)?;
    }
    let config = builder.build()?;

    eprintln!(
        "{}: {} point(s), block {}, {} iteration(s), seed {}",
        config.scenario,
        config.ebn0_points_db.len(),
        config.block_size,
        config.iterations,
        config.seed
    );
    let records = run_sweep(&config)?;
    let written = emit_results(&records, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;

    let last = if config.uncoded { 0 } else { config.iterations };
    println!("{:>8} {:>12} {:>10} {:>12}", "Eb/N0", "bits", "errors", "BER");
    for r in records.iter().filter(|r| r.iterations == last) {
        println!(
            "{:>8.2} {:>12} {:>10} {:>12.4e}",
            r.ebn0_db, r.bits_simulated, r.bit_errors, r.ber
        );
    }
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

//! Scenario configuration, Monte Carlo BER sweeps and result emission.

mod config;
mod output;
mod run;

pub use config::{
    parse_ebn0_points, ConfigBuilder, Demapping, ScenarioConfig, ScenarioKind, StopRule,
    SETTING_KEYS,
};
pub use output::{csv_string, emit_results, plot_script, CSV_HEADER};
pub use run::{
    ber_count, measured_snr, run_point, run_sweep, BerRecord, BurstSymbols, Link, Tally,
};

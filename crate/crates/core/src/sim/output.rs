use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::run::BerRecord;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "scenario,ebn0_db,iterations,block_size,bits,errors,ber";

fn sorted(records: &[BerRecord]) -> Vec<&BerRecord> {
    let mut rows: Vec<&BerRecord> = records.iter().collect();
    rows.sort_by(|a, b| {
        a.scenario
            .cmp(&b.scenario)
            .then(a.iterations.cmp(&b.iterations))
            .then(a.ebn0_db.total_cmp(&b.ebn0_db))
    });
    rows
}

/// Renders records as CSV, sorted by scenario, iterations, then Eb/N0.
pub fn csv_string(records: &[BerRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in sorted(records) {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{:.5e}",
            r.scenario, r.ebn0_db, r.iterations, r.block_size, r.bits_simulated, r.bit_errors, r.ber
        );
    }
    s
}

/// A gnuplot script plotting BER against Eb/N0 from `csv_name`, one curve
/// per iteration count found for `scenario`.
pub fn plot_script(records: &[BerRecord], scenario: &str, csv_name: &str) -> String {
    let mut iterations: Vec<usize> = records
        .iter()
        .filter(|r| r.scenario == scenario)
        .map(|r| r.iterations)
        .collect();
    iterations.sort_unstable();
    iterations.dedup();
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set logscale y");
    let _ = writeln!(s, "set format y '10^{{%L}}'");
    let _ = writeln!(s, "set xlabel 'Eb/N0 (dB)'");
    let _ = writeln!(s, "set ylabel 'BER'");
    let _ = writeln!(s, "set grid");
    let _ = writeln!(s, "set title '{scenario}'");
    let curves: Vec<String> = iterations
        .iter()
        .map(|it| {
            let title = if *it == 0 {
                "uncoded".to_string()
            } else {
                format!("{it} it")
            };
            format!(
                "'{csv_name}' using (strcol(1) eq '{scenario}' && $3 == {it} ? $2 : 1/0):7 \
                 skip 1 with linespoints title '{title}'"
            )
        })
        .collect();
    let _ = writeln!(s, "plot {}", curves.join(", \\\n     "));
    s
}

fn file_stem(scenario: &str) -> String {
    scenario
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Writes the CSV to `path` and one `.gp` script per scenario beside it.
/// Returns every file written, CSV first.
pub fn emit_results(records: &[BerRecord], path: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::Empty);
    }
    fs::write(path, csv_string(records))?;
    let mut written = vec![path.to_path_buf()];
    let csv_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let base = path.with_extension("");
    let mut scenarios: BTreeMap<&str, ()> = BTreeMap::new();
    for r in records {
        scenarios.insert(&r.scenario, ());
    }
    for scenario in scenarios.keys() {
        let gp = PathBuf::from(format!(
            "{}_{}.gp",
            base.display(),
            file_stem(scenario)
        ));
        fs::write(&gp, plot_script(records, scenario, &csv_name))?;
        written.push(gp);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(s: &str, e: f64, it: usize) -> BerRecord {
        BerRecord::new(s.into(), e, it, 512, 1000, 7)
    }

    #[test]
    fn csv_sorted_and_formatted() {
        let rows = [rec("b", 1.0, 1), rec("a", 2.0, 2), rec("a", 1.0, 2), rec("a", 3.0, 1)];
        let csv = csv_string(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "a,3,1,512,1000,7,7.00000e-3");
        assert_eq!(lines[2], "a,1,2,512,1000,7,7.00000e-3");
        assert_eq!(lines[3], "a,2,2,512,1000,7,7.00000e-3");
        assert!(lines[4].starts_with("b,1,1,"));
    }

    #[test]
    fn plot_has_one_curve_per_iteration() {
        let rows = [rec("a", 1.0, 1), rec("a", 1.0, 2), rec("a", 2.0, 2), rec("b", 1.0, 5)];
        let gp = plot_script(&rows, "a", "r.csv");
        assert_eq!(gp.matches("with linespoints").count(), 2);
        assert!(gp.contains("set logscale y"));
    }
}

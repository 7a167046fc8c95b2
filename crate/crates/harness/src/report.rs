//! Result emission: the results CSV, per-curve plot-data files, model
//! snapshots and the run log, plus the text renderer behind the `report`
//! subcommand.

use std::fmt::Write as _;
use std::path::Path;

use mimolab_core::{Error, Result};

use crate::experiment::ResultsBundle;

/// Exact header of the results CSV.
pub const CSV_HEADER: &str =
    "experiment,detector,axis_name,axis_value,snr_db,ber,bit_count,error_count,ci_halfwidth,seed";

/// Render the results CSV, one row per curve point.
pub fn results_csv(bundle: &ResultsBundle) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for curve in &bundle.curves {
        for p in &curve.points {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                bundle.experiment,
                curve.detector,
                curve.axis_name,
                p.axis_value,
                p.snr_db,
                p.ber,
                p.bit_count,
                p.error_count,
                p.ci_halfwidth,
                bundle.seed,
            )
            .expect("string write cannot fail");
        }
    }
    out
}

/// Two-column plot data (axis value, BER) for one curve.
fn plot_data(points: &[(f64, f64)]) -> String {
    let mut out = String::new();
    for (x, y) in points {
        writeln!(out, "{x} {y}").expect("string write cannot fail");
    }
    out
}

/// Write results.csv, plotdata/, models/ and run_log.txt under `dir`.
pub fn write_outputs(bundle: &ResultsBundle, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("results.csv"), results_csv(bundle))?;

    let plot_dir = dir.join("plotdata");
    std::fs::create_dir_all(&plot_dir)?;
    for curve in &bundle.curves {
        let points: Vec<(f64, f64)> = curve.points.iter().map(|p| (p.axis_value, p.ber)).collect();
        let name = format!("{}__{}.dat", bundle.experiment, curve.detector);
        std::fs::write(plot_dir.join(name), plot_data(&points))?;
    }

    if !bundle.snapshots.is_empty() {
        let model_dir = dir.join("models");
        std::fs::create_dir_all(&model_dir)?;
        for (stem, text) in &bundle.snapshots {
            std::fs::write(model_dir.join(format!("{stem}.json")), text)?;
        }
    }

    let mut log = String::new();
    for line in &bundle.logs {
        log.push_str(line);
        log.push('\n');
    }
    std::fs::write(dir.join("run_log.txt"), log)?;
    Ok(())
}

/// Human-readable summary of a results CSV.
pub fn render_report(csv_text: &str) -> Result<String> {
    let mut lines = csv_text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty results file".into()))?;
    if header != CSV_HEADER {
        return Err(Error::Format(format!("unexpected CSV header: {header}")));
    }
    let mut out = String::new();
    writeln!(
        out,
        "{:<18} {:<9} {:<12} {:>10} {:>8} {:>12} {:>12} {:>12}",
        "experiment", "detector", "axis", "value", "snr_db", "ber", "errors/bits", "ci"
    )
    .expect("string write cannot fail");
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(Error::Format(format!("bad CSV row {}: {line}", i + 2)));
        }
        let ber: f64 = f[5]
            .parse()
            .map_err(|_| Error::Format(format!("bad ber: {}", f[5])))?;
        let ci: f64 = f[8]
            .parse()
            .map_err(|_| Error::Format(format!("bad ci: {}", f[8])))?;
        writeln!(
            out,
            "{:<18} {:<9} {:<12} {:>10} {:>8} {:>12.3e} {:>12} {:>12.2e}",
            f[0],
            f[1],
            f[2],
            f[3],
            f[4],
            ber,
            format!("{}/{}", f[7], f[6]),
            ci
        )
        .expect("string write cannot fail");
    }
    Ok(out)
}

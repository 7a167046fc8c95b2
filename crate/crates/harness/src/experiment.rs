//! The seeded Monte-Carlo experiment runner.
//!
//! Every SNR point evaluates all detectors on one shared trial stream
//! (paired trials), stopping once each detector has reached the bit-error
//! target or the trial cap. Learned detectors are trained per point from
//! that point's training stream. All evaluation parallelism reduces
//! integer error counts, so results are bit-identical across reruns and
//! thread counts.

use std::path::Path;

use rayon::prelude::*;

use mimolab_core::metrics::count_bit_errors;
use mimolab_core::Result;

use crate::config::{DetectorConfig, ExperimentConfig, SweepAxis};
use crate::dataset::Scenario;
use crate::detectors::{build_detector, detector_from_snapshot, RuntimeDetector};

/// One evaluated grid point of one detector.
#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub axis_value: f64,
    pub snr_db: f64,
    pub ber: f64,
    pub bit_count: u64,
    pub error_count: u64,
    pub ci_halfwidth: f64,
    /// Whether the bit-error target was reached before the trial cap.
    pub hit_error_target: bool,
}

impl BerPoint {
    fn new(axis_value: f64, snr_db: f64, errors: u64, bits: u64, min_bit_errors: u64) -> BerPoint {
        let ber = errors as f64 / bits as f64;
        BerPoint {
            axis_value,
            snr_db,
            ber,
            bit_count: bits,
            error_count: errors,
            ci_halfwidth: 1.96 * (ber * (1.0 - ber) / bits as f64).sqrt(),
            hit_error_target: errors >= min_bit_errors,
        }
    }
}

/// All evaluated points of one detector along one axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub detector: String,
    pub axis_name: String,
    pub points: Vec<BerPoint>,
}

/// Everything one run produces.
#[derive(Debug, Clone)]
pub struct ResultsBundle {
    pub experiment: String,
    pub seed: u64,
    pub curves: Vec<BerCurve>,
    /// Training accounts and stop-condition notes, in run order.
    pub logs: Vec<String>,
    /// Learned-model snapshots as `(file_stem, json)`.
    pub snapshots: Vec<(String, String)>,
}

/// Paired evaluation of all detectors at one scenario point.
///
/// Returns `(errors, bits)` per detector, in order. A detector failure on
/// a trial (for example a ZF conditioning guard) counts every bit of that
/// trial as wrong.
fn evaluate_point(
    scenario: &Scenario,
    detectors: &[RuntimeDetector],
    test_size: usize,
    max_trials: usize,
    min_bit_errors: u64,
) -> Result<Vec<(u64, u64)>> {
    const BLOCK: usize = 2048;
    let bits_per_trial = 2 * scenario.d_t as u64;
    let mut errors = vec![0u64; detectors.len()];
    let mut trials_done = 0usize;

    while trials_done < max_trials {
        let end = (trials_done + BLOCK).min(max_trials);
        let trials = (trials_done..end)
            .into_par_iter()
            .map(|t| scenario.sample_trial(t as u64))
            .collect::<Result<Vec<_>>>()?;
        for (det, err_acc) in detectors.iter().zip(errors.iter_mut()) {
            let errs: u64 = trials
                .par_iter()
                .map(|trial| match det.decide(trial, scenario) {
                    Ok(decided) => {
                        count_bit_errors(&decided, &trial.s).expect("equal lengths") as u64
                    }
                    Err(_) => bits_per_trial,
                })
                .sum();
            *err_acc += errs;
        }
        trials_done = end;
        if trials_done >= test_size && errors.iter().all(|&e| e >= min_bit_errors) {
            break;
        }
    }

    let bits = trials_done as u64 * bits_per_trial;
    Ok(errors.into_iter().map(|e| (e, bits)).collect())
}

/// Run the configured experiment over its SNR grid, training learned
/// detectors per point.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultsBundle> {
    run_experiment_with_models(cfg, None)
}

/// Like [`run_experiment`], but learned detectors whose snapshot file
/// exists under `models_dir` are loaded instead of retrained.
pub fn run_experiment_with_models(
    cfg: &ExperimentConfig,
    models_dir: Option<&Path>,
) -> Result<ResultsBundle> {
    cfg.validate()?;
    let mut curves: Vec<BerCurve> = cfg
        .detectors
        .iter()
        .map(|d| BerCurve {
            detector: d.name(),
            axis_name: "snr_db".into(),
            points: Vec::new(),
        })
        .collect();
    let mut logs = Vec::new();
    let mut snapshots = Vec::new();

    for (snr_idx, &snr_db) in cfg.snr_grid_db.iter().enumerate() {
        let scenario = Scenario::build(cfg, snr_db, snr_idx as u64)?;
        let detectors = build_point_detectors(
            cfg,
            &scenario,
            &[snr_idx as u64],
            &mut logs,
            &mut snapshots,
            snr_db,
            models_dir,
        )?;
        let counts = evaluate_point(
            &scenario,
            &detectors,
            cfg.test.test_size,
            cfg.test.max_trials,
            cfg.test.min_bit_errors,
        )?;
        record_point(
            &mut curves,
            &counts,
            snr_db,
            snr_db,
            cfg.test.min_bit_errors,
            &cfg.name,
            &mut logs,
        );
    }

    Ok(ResultsBundle {
        experiment: cfg.name.clone(),
        seed: cfg.seed,
        curves,
        logs,
        snapshots,
    })
}

/// Run the configured sweep: one training per grid value of the swept
/// detector parameter, all evaluated on the same trial stream.
pub fn sweep(cfg: &ExperimentConfig) -> Result<ResultsBundle> {
    cfg.validate()?;
    let sweep_cfg = cfg.sweep.as_ref().ok_or_else(|| {
        mimolab_core::Error::InvalidParameter("config has no sweep section".into())
    })?;
    let snr_db = cfg.snr_grid_db[0];
    let axis = sweep_cfg.axis;

    let mut curves: Vec<BerCurve> = cfg
        .detectors
        .iter()
        .map(|d| BerCurve {
            detector: d.name(),
            axis_name: axis.name().into(),
            points: Vec::new(),
        })
        .collect();
    let mut logs = Vec::new();
    let mut snapshots = Vec::new();

    for (grid_idx, &grid_value) in sweep_cfg.grid.iter().enumerate() {
        let point_cfg = apply_axis(cfg, axis, grid_value);
        // domain 0 everywhere: every grid point reuses the same trial
        // stream, so curves are paired along the grid axis as well
        let scenario = Scenario::build(&point_cfg, snr_db, 0)?;
        let detectors = build_point_detectors(
            &point_cfg,
            &scenario,
            &sweep_base_context(grid_idx, grid_value),
            &mut logs,
            &mut snapshots,
            grid_value as f64,
            None,
        )?;
        let counts = evaluate_point(
            &scenario,
            &detectors,
            point_cfg.test.test_size,
            point_cfg.test.max_trials,
            point_cfg.test.min_bit_errors,
        )?;
        record_point(
            &mut curves,
            &counts,
            grid_value as f64,
            snr_db,
            point_cfg.test.min_bit_errors,
            &point_cfg.name,
            &mut logs,
        );
    }

    Ok(ResultsBundle {
        experiment: cfg.name.clone(),
        seed: cfg.seed,
        curves,
        logs,
        snapshots,
    })
}

fn sweep_base_context(grid_idx: usize, grid_value: usize) -> Vec<u64> {
    vec![grid_idx as u64, grid_value as u64]
}

/// Training-stream context used for detector `det_idx` at sweep grid
/// point `grid_idx` with value `grid_value`; lets callers rebuild the
/// exact model a sweep trained.
pub fn sweep_context(grid_idx: usize, grid_value: usize, det_idx: usize) -> Vec<u64> {
    let mut ctx = sweep_base_context(grid_idx, grid_value);
    ctx.push(det_idx as u64);
    ctx
}

/// Rewire the swept parameter into every dl detector.
pub fn apply_axis(cfg: &ExperimentConfig, axis: SweepAxis, grid_value: usize) -> ExperimentConfig {
    let mut out = cfg.clone();
    for det in out.detectors.iter_mut() {
        if let DetectorConfig::Dl {
            width, train_size, ..
        } = det
        {
            match axis {
                SweepAxis::Width => *width = grid_value,
                SweepAxis::SampleSize => *train_size = grid_value,
            }
        }
    }
    out
}

fn build_point_detectors(
    cfg: &ExperimentConfig,
    scenario: &Scenario,
    context: &[u64],
    logs: &mut Vec<String>,
    snapshots: &mut Vec<(String, String)>,
    point_label: f64,
    models_dir: Option<&Path>,
) -> Result<Vec<RuntimeDetector>> {
    let mut detectors = Vec::with_capacity(cfg.detectors.len());
    for (det_idx, det) in cfg.detectors.iter().enumerate() {
        let stem = format!("{}__{}__{}", cfg.name, det.name(), point_label);
        let loadable = models_dir
            .filter(|_| det.is_learned())
            .map(|dir| dir.join(format!("{stem}.json")))
            .filter(|path| path.is_file());
        let runtime = match loadable {
            Some(path) => {
                let text = std::fs::read_to_string(&path)?;
                logs.push(format!(
                    "[{} @ {}] {}: loaded snapshot {}",
                    cfg.name,
                    point_label,
                    det.name(),
                    path.display()
                ));
                detector_from_snapshot(det, &text)?
            }
            None => {
                let mut ctx = context.to_vec();
                ctx.push(det_idx as u64);
                let mut log = Vec::new();
                let runtime = build_detector(det, scenario, cfg.seed, &ctx, &mut log)?;
                for line in log {
                    logs.push(format!("[{} @ {}] {}", cfg.name, point_label, line));
                }
                runtime
            }
        };
        if let Some(text) = runtime.snapshot() {
            snapshots.push((stem.clone(), text));
        }
        detectors.push(runtime);
    }
    Ok(detectors)
}

fn record_point(
    curves: &mut [BerCurve],
    counts: &[(u64, u64)],
    axis_value: f64,
    snr_db: f64,
    min_bit_errors: u64,
    experiment: &str,
    logs: &mut Vec<String>,
) {
    for (curve, &(errors, bits)) in curves.iter_mut().zip(counts) {
        let point = BerPoint::new(axis_value, snr_db, errors, bits, min_bit_errors);
        logs.push(format!(
            "[{experiment} @ {axis_value}] {}: ber {} ({}/{} bits), stopped by {}",
            curve.detector,
            point.ber,
            point.error_count,
            point.bit_count,
            if point.hit_error_target {
                "error target"
            } else {
                "trial cap"
            },
        ));
        curve.points.push(point);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::test_support::minimal;
    use crate::config::TestConfig;

    #[test]
    fn paired_runner_orders_map_before_zf() {
        let mut cfg = minimal();
        cfg.test = TestConfig {
            test_size: 4000,
            max_trials: 20_000,
            min_bit_errors: 100,
        };
        let bundle = run_experiment(&cfg).unwrap();
        assert_eq!(bundle.curves.len(), 2);
        let map = &bundle.curves[0];
        let zf = &bundle.curves[1];
        assert_eq!(map.detector, "map");
        assert_eq!(zf.detector, "zf");
        assert_eq!(map.points.len(), 1);
        // Bayes optimality on the shared stream, up to paired MC noise
        assert!(
            map.points[0].ber
                <= zf.points[0].ber
                    + 2.0 * (map.points[0].ci_halfwidth + zf.points[0].ci_halfwidth),
            "map {} vs zf {}",
            map.points[0].ber,
            zf.points[0].ber
        );
        assert!(map.points[0].ber < 0.5);
        assert!(map.points[0].hit_error_target);
    }

    #[test]
    fn reruns_are_identical() {
        let mut cfg = minimal();
        cfg.test = TestConfig {
            test_size: 2000,
            max_trials: 8000,
            min_bit_errors: 50,
        };
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.curves, b.curves);
    }

    #[test]
    fn ci_halfwidth_formula() {
        let p = BerPoint::new(8.0, 8.0, 100, 10_000, 100);
        let expect = 1.96 * (0.01f64 * 0.99 / 10_000.0).sqrt();
        assert!((p.ci_halfwidth - expect).abs() < 1e-15);
        assert!(p.hit_error_target);
        let q = BerPoint::new(8.0, 8.0, 99, 10_000, 100);
        assert!(!q.hit_error_target);
    }
}

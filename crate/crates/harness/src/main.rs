//! Command-line front end.
//!
//! Subcommands: `train`, `evaluate`, `sweep`, `bounds`, `report`.
//! Exit codes: 0 on success, 2 on usage/config errors, 3 on numerical
//! failures during a run.

use std::path::PathBuf;
use std::process::ExitCode;

use mimolab::config::{DetectorConfig, ExperimentConfig};
use mimolab::dataset::{purpose, Scenario};
use mimolab::detectors::build_detector;
use mimolab::experiment::{run_experiment_with_models, sweep};
use mimolab::report::{render_report, write_outputs};
use mimolab_core::bounds::{
    covering_bound, generalization_tail_bound, input_moments, modeldriven_tail_bound,
    nu_from_samples, TheoryBoundInputs,
};
use mimolab_core::mlp::NetworkShape;
use mimolab_core::rng::stream;

const USAGE: &str = "\
mimolab: MIMO detection laboratory

USAGE:
  mimolab <SUBCOMMAND> [FLAGS]

SUBCOMMANDS:
  evaluate   Run the configured experiment over its SNR grid and write
             results.csv, plotdata/, models/ and run_log.txt.
  train      Train the learned detectors only; write model snapshots and
             the training log.
  sweep      Run the sweep section of the config (width or sample_size
             grid) at a single SNR point.
  bounds     Evaluate the covering-number and tail-bound calculators for
             the configured network and scenario.
  report     Pretty-print a previously written results.csv.

FLAGS:
  --config FILE   Experiment config (JSON). Required except for report.
  --out DIR       Output directory. Required for evaluate/train/sweep/report.
  --models DIR    evaluate: load learned-detector snapshots from DIR
                  (written earlier by train) instead of retraining.
  --seed N        Override the config seed.
  --epsilon X     bounds: accuracy parameter (default 0.5)
  --z N           bounds: sample count |Z| (default 100000)
  --delta X       bounds: envelope radius delta (default sqrt(2 mu))
  --ln-cu X       bounds: log covering number of the unfolded class
  --delta-u X     bounds: loss envelope of the unfolded class (default 1)
  --omega N       bounds: sample count |Omega| (default 5000)
  --p-omega X     bounds: envelope violation probability (default 0)

EXAMPLES:
  mimolab evaluate --config exp.json --out runs/exp
  mimolab sweep --config sweep.json --out runs/sweep --seed 11
  mimolab bounds --config exp.json --epsilon 0.25 --z 400000
  mimolab report --out runs/exp
";

#[derive(Debug, Default)]
struct Args {
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    models: Option<PathBuf>,
    seed: Option<u64>,
    epsilon: f64,
    z_size: usize,
    delta: Option<f64>,
    ln_cu: Option<f64>,
    delta_u: f64,
    omega: usize,
    p_omega: f64,
}

fn parse_args(mut argv: impl Iterator<Item = String>) -> Result<(String, Args), String> {
    let sub = argv.next().ok_or("missing subcommand")?;
    if sub == "--help" || sub == "-h" {
        return Ok(("help".into(), Args::default()));
    }
    let mut args = Args {
        epsilon: 0.5,
        z_size: 100_000,
        delta_u: 1.0,
        omega: 5000,
        ..Args::default()
    };
    while let Some(flag) = argv.next() {
        let mut take = || argv.next().ok_or(format!("missing value for {flag}"));
        match flag.as_str() {
            "--config" => args.config = Some(PathBuf::from(take()?)),
            "--out" => args.out = Some(PathBuf::from(take()?)),
            "--models" => args.models = Some(PathBuf::from(take()?)),
            "--seed" => args.seed = Some(take()?.parse().map_err(|_| "invalid --seed")?),
            "--epsilon" => args.epsilon = take()?.parse().map_err(|_| "invalid --epsilon")?,
            "--z" => args.z_size = take()?.parse().map_err(|_| "invalid --z")?,
            "--delta" => args.delta = Some(take()?.parse().map_err(|_| "invalid --delta")?),
            "--ln-cu" => args.ln_cu = Some(take()?.parse().map_err(|_| "invalid --ln-cu")?),
            "--delta-u" => args.delta_u = take()?.parse().map_err(|_| "invalid --delta-u")?,
            "--omega" => args.omega = take()?.parse().map_err(|_| "invalid --omega")?,
            "--p-omega" => args.p_omega = take()?.parse().map_err(|_| "invalid --p-omega")?,
            "--help" | "-h" => return Ok(("help".into(), args)),
            other => return Err(format!("unknown flag {other}")),
        }
    }
    Ok((sub, args))
}

fn load_config(args: &Args) -> Result<ExperimentConfig, String> {
    let path = args.config.as_ref().ok_or("--config is required")?;
    let mut cfg = ExperimentConfig::load(path).map_err(|e| format!("config error: {e}"))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn require_out(args: &Args) -> Result<&PathBuf, String> {
    args.out.as_ref().ok_or_else(|| "--out is required".into())
}

fn cmd_evaluate(args: &Args) -> Result<(), MainError> {
    let cfg = load_config(args).map_err(MainError::Usage)?;
    let out = require_out(args).map_err(MainError::Usage)?;
    let bundle =
        run_experiment_with_models(&cfg, args.models.as_deref()).map_err(MainError::numerical)?;
    write_outputs(&bundle, out).map_err(MainError::numerical)?;
    println!("wrote {}", out.join("results.csv").display());
    Ok(())
}

fn cmd_sweep(args: &Args) -> Result<(), MainError> {
    let cfg = load_config(args).map_err(MainError::Usage)?;
    if cfg.sweep.is_none() {
        return Err(MainError::Usage("config has no sweep section".into()));
    }
    let out = require_out(args).map_err(MainError::Usage)?;
    let bundle = sweep(&cfg).map_err(MainError::numerical)?;
    write_outputs(&bundle, out).map_err(MainError::numerical)?;
    println!("wrote {}", out.join("results.csv").display());
    Ok(())
}

fn cmd_train(args: &Args) -> Result<(), MainError> {
    let cfg = load_config(args).map_err(MainError::Usage)?;
    let out = require_out(args).map_err(MainError::Usage)?;
    if !cfg.detectors.iter().any(|d| d.is_learned()) {
        return Err(MainError::Usage(
            "config has no learned detectors to train".into(),
        ));
    }
    let mut logs = Vec::new();
    let mut snapshots = Vec::new();
    for (snr_idx, &snr_db) in cfg.snr_grid_db.iter().enumerate() {
        let scenario =
            Scenario::build(&cfg, snr_db, snr_idx as u64).map_err(MainError::numerical)?;
        for (det_idx, det) in cfg.detectors.iter().enumerate() {
            if !det.is_learned() {
                continue;
            }
            let mut log = Vec::new();
            let runtime = build_detector(
                det,
                &scenario,
                cfg.seed,
                &[snr_idx as u64, det_idx as u64],
                &mut log,
            )
            .map_err(MainError::numerical)?;
            for line in log {
                logs.push(format!("[{} @ {}] {}", cfg.name, snr_db, line));
            }
            if let Some(text) = runtime.snapshot() {
                snapshots.push((format!("{}__{}__{}", cfg.name, det.name(), snr_db), text));
            }
        }
    }
    let model_dir = out.join("models");
    std::fs::create_dir_all(&model_dir).map_err(|e| MainError::Numerical(e.to_string()))?;
    for (stem, text) in &snapshots {
        std::fs::write(model_dir.join(format!("{stem}.json")), text)
            .map_err(|e| MainError::Numerical(e.to_string()))?;
    }
    std::fs::create_dir_all(out).map_err(|e| MainError::Numerical(e.to_string()))?;
    std::fs::write(out.join("train_log.txt"), logs.join("\n") + "\n")
        .map_err(|e| MainError::Numerical(e.to_string()))?;
    println!(
        "wrote {} model snapshot(s) under {}",
        snapshots.len(),
        model_dir.display()
    );
    Ok(())
}

fn cmd_bounds(args: &Args) -> Result<(), MainError> {
    let cfg = load_config(args).map_err(MainError::Usage)?;
    let dl = cfg
        .detectors
        .iter()
        .find_map(|d| match d {
            DetectorConfig::Dl {
                csi,
                hidden_layers,
                width,
                clamp_bound,
                ..
            } => Some((*csi, *hidden_layers, *width, *clamp_bound)),
            _ => None,
        })
        .ok_or_else(|| MainError::Usage("bounds needs a dl detector in the config".into()))?;
    let (csi, hidden_layers, width, clamp_bound) = dl;

    let snr_db = cfg.snr_grid_db[0];
    let scenario = Scenario::build(&cfg, snr_db, 0).map_err(MainError::numerical)?;
    let shape = NetworkShape::uniform(
        scenario.dl_input_dim(csi),
        hidden_layers,
        width,
        scenario.class_count(),
    )
    .map_err(MainError::numerical)?;

    // input moments over an auxiliary stream of network inputs
    let n_mc = 20_000;
    let mut xs = Vec::with_capacity(n_mc);
    for i in 0..n_mc {
        let trial = scenario
            .sample_trial(i as u64)
            .map_err(MainError::numerical)?;
        let mut input = trial.x.clone();
        if csi {
            input.extend(trial.h.vec_column_major());
        }
        xs.push(input);
    }
    // burn one draw so the aux stream stays distinct from trials
    let _ = stream(cfg.seed, purpose::AUX, 0);
    let (mu, sigma_sq) = input_moments(&xs);
    let delta = args.delta.unwrap_or((2.0 * mu).sqrt());

    let alpha = clamp_bound * shape.max_width() as f64;
    let beta = alpha / (alpha - 1.0);
    let nu = nu_from_samples(shape.output_dim(), alpha, beta, shape.depth(), &xs);
    let inputs = TheoryBoundInputs::from_shape(&shape, clamp_bound, mu, sigma_sq, nu, delta)
        .map_err(MainError::numerical)?;

    println!(
        "network: widths {:?}, d_s = {}",
        shape.widths(),
        shape.param_count()
    );
    println!(
        "inputs: mu = {mu:.6}, sigma_sq = {sigma_sq:.6}, nu = {nu:.6e}, delta = {delta:.6}, alpha = {alpha:.3}, beta = {beta:.6}"
    );
    let cover = covering_bound(&inputs, args.epsilon).map_err(MainError::numerical)?;
    println!("ln C({}, Theta_R) <= {cover:.6e}", args.epsilon);
    let tail = generalization_tail_bound(&inputs, args.z_size, args.epsilon)
        .map_err(MainError::numerical)?;
    println!(
        "P(generalization gap > {}) <= {:.6e} (raw {:.6e}), preconditions met: {} (need |Z| >= {:.3e} and {:.3e})",
        args.epsilon, tail.clipped, tail.raw, tail.preconditions_met, tail.min_z_moment, tail.min_z_covering
    );
    if let Some(ln_cu) = args.ln_cu {
        let md =
            modeldriven_tail_bound(ln_cu, args.omega, args.epsilon, args.delta_u, args.p_omega)
                .map_err(MainError::numerical)?;
        println!(
            "model-driven: P(gap > {}) <= {md:.6e} at |Omega| = {}, ln C_u = {ln_cu}, delta_u = {}, P_Omega = {}",
            args.epsilon, args.omega, args.delta_u, args.p_omega
        );
    }

    if let Some(out) = &args.out {
        std::fs::create_dir_all(out).map_err(|e| MainError::Numerical(e.to_string()))?;
        let json = serde_json::json!({
            "widths": shape.widths(),
            "d_s": shape.param_count(),
            "mu": mu,
            "sigma_sq": sigma_sq,
            "nu": nu,
            "delta": delta,
            "epsilon": args.epsilon,
            "covering_bound": cover,
            "tail_bound_raw": tail.raw,
            "tail_bound": tail.clipped,
            "preconditions_met": tail.preconditions_met,
        });
        std::fs::write(
            out.join("bounds.json"),
            serde_json::to_string_pretty(&json).unwrap(),
        )
        .map_err(|e| MainError::Numerical(e.to_string()))?;
        println!("wrote {}", out.join("bounds.json").display());
    }
    Ok(())
}

fn cmd_report(args: &Args) -> Result<(), MainError> {
    let out = require_out(args).map_err(MainError::Usage)?;
    let csv = std::fs::read_to_string(out.join("results.csv"))
        .map_err(|e| MainError::Usage(format!("cannot read results.csv: {e}")))?;
    let rendered = render_report(&csv).map_err(|e| MainError::Usage(e.to_string()))?;
    print!("{rendered}");
    Ok(())
}

enum MainError {
    Usage(String),
    Numerical(String),
}

impl MainError {
    fn numerical(e: impl std::fmt::Display) -> Self {
        MainError::Numerical(e.to_string())
    }
}

fn main() -> ExitCode {
    let (sub, args) = match parse_args(std::env::args().skip(1)) {
        Ok(parsed) => parsed,
        Err(e) => {
            eprintln!("error: {e}\n\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    let result = match sub.as_str() {
        "help" => {
            println!("{USAGE}");
            Ok(())
        }
        "evaluate" => cmd_evaluate(&args),
        "train" => cmd_train(&args),
        "sweep" => cmd_sweep(&args),
        "bounds" => cmd_bounds(&args),
        "report" => cmd_report(&args),
        other => Err(MainError::Usage(format!("unknown subcommand {other}"))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(MainError::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(MainError::Numerical(e)) => {
            eprintln!("numerical failure: {e}");
            ExitCode::from(3)
        }
    }
}

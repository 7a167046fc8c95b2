//! Runtime detector instances: classical detectors dispatched straight to
//! the core, learned detectors trained here from scenario streams.

use mimolab_core::detect::{
    amp_detect, hard_decide, map_detect, sic_detect, zf_detect, ChannelKind,
};
use mimolab_core::mlp::{init_mlp, train, MlpParameters, NetworkShape, TrainingConfig};
use mimolab_core::rng::{mix, seeded};
use mimolab_core::sicnet::{
    init_sicnet, sicnet_detect, sicnet_train, SicNetParameters, UnfoldedLoss,
    UnfoldedTrainingConfig,
};
use mimolab_core::{Error, Result};

use crate::config::{DetectorConfig, SicNetLossConfig};
use crate::dataset::{generate_omega, generate_z, Scenario, Transmission, Trial};

/// A detector ready to decide trials of one scenario.
#[derive(Debug, Clone)]
pub enum RuntimeDetector {
    Map,
    Zf,
    Amp { iters: usize },
    Sic { iters: usize },
    SicNet { params: SicNetParameters },
    Dl { params: MlpParameters, csi: bool },
}

impl RuntimeDetector {
    pub fn name(&self) -> String {
        match self {
            RuntimeDetector::Map => "map".into(),
            RuntimeDetector::Zf => "zf".into(),
            RuntimeDetector::Amp { .. } => "amp".into(),
            RuntimeDetector::Sic { .. } => "sic".into(),
            RuntimeDetector::SicNet { .. } => "sicnet".into(),
            RuntimeDetector::Dl { csi, .. } => {
                if *csi {
                    "dl_csi".into()
                } else {
                    "dl".into()
                }
            }
        }
    }

    /// Hard symbol decision for one trial. Channel-consuming detectors see
    /// `trial.h_eval`; the transmitted `trial.s` is never touched.
    pub fn decide(&self, trial: &Trial, scenario: &Scenario) -> Result<Vec<f64>> {
        let c = &scenario.constellation;
        match self {
            RuntimeDetector::Map => {
                let kind = match &scenario.transmission {
                    Transmission::Quantized(q) => ChannelKind::Quantized(q),
                    _ => ChannelKind::Linear,
                };
                Ok(map_detect(&trial.h_eval, &trial.x, &scenario.noise, c, kind)?.hard_symbols)
            }
            RuntimeDetector::Zf => {
                let soft = zf_detect(&trial.h_eval, &trial.x)?;
                Ok(hard_decide(&soft, c))
            }
            RuntimeDetector::Amp { iters } => {
                Ok(amp_detect(&trial.h_eval, &trial.x, &scenario.noise, c, *iters)?.hard_symbols)
            }
            RuntimeDetector::Sic { iters } => {
                Ok(
                    sic_detect(&trial.h_eval, &trial.x, &scenario.noise, c, *iters)?
                        .result
                        .hard_symbols,
                )
            }
            RuntimeDetector::SicNet { params } => {
                Ok(
                    sicnet_detect(params, &trial.h_eval, &trial.x, &scenario.noise, c)?
                        .hard_symbols,
                )
            }
            RuntimeDetector::Dl { params, csi } => {
                let h = if *csi { Some(&trial.h_eval) } else { None };
                Ok(params.detect(&trial.x, h, c, scenario.d_t)?.hard_symbols)
            }
        }
    }

    /// Snapshot text for learned detectors.
    pub fn snapshot(&self) -> Option<String> {
        match self {
            RuntimeDetector::SicNet { params } => Some(params.to_json()),
            RuntimeDetector::Dl { params, .. } => Some(params.to_json()),
            _ => None,
        }
    }
}

/// Build one runtime detector, training it when it is a learned one.
///
/// `context` feeds the derived training seed so each (detector, SNR
/// point, grid point) trains with its own stream; `log` collects a
/// human-readable account of the run.
pub fn build_detector(
    det: &DetectorConfig,
    scenario: &Scenario,
    master_seed: u64,
    context: &[u64],
    log: &mut Vec<String>,
) -> Result<RuntimeDetector> {
    match det {
        DetectorConfig::Map => Ok(RuntimeDetector::Map),
        DetectorConfig::Zf => Ok(RuntimeDetector::Zf),
        DetectorConfig::Amp { iters } => Ok(RuntimeDetector::Amp { iters: *iters }),
        DetectorConfig::Sic { iters } => Ok(RuntimeDetector::Sic { iters: *iters }),
        DetectorConfig::SicNet {
            iters,
            train_size,
            loss,
            batch_size,
            step_size,
            train_iterations,
        } => {
            let omega = generate_omega(scenario, *train_size)?;
            let cfg = UnfoldedTrainingConfig {
                loss: match loss {
                    SicNetLossConfig::Mse => UnfoldedLoss::Mse,
                    SicNetLossConfig::Kl => UnfoldedLoss::Kl,
                },
                batch_size: *batch_size,
                step_size: *step_size,
                iterations: *train_iterations,
                seed: mix(master_seed, context),
            };
            let (params, report) = sicnet_train(
                init_sicnet(*iters)?,
                &omega,
                &scenario.noise,
                &scenario.constellation,
                &cfg,
            )?;
            log.push(format!(
                "sicnet: trained {} layers on {} samples, loss {} -> {}{}",
                iters,
                train_size,
                report.initial_loss,
                report.final_loss,
                if report.worsened {
                    " (warning: worse than identity start)"
                } else {
                    ""
                },
            ));
            Ok(RuntimeDetector::SicNet { params })
        }
        DetectorConfig::Dl {
            csi,
            hidden_layers,
            width,
            train_size,
            batch_size,
            step_size,
            decay_every,
            train_iterations,
            clamp_bound,
        } => {
            let data = generate_z(scenario, *train_size, *csi)?;
            let shape = NetworkShape::uniform(
                scenario.dl_input_dim(*csi),
                *hidden_layers,
                *width,
                scenario.class_count(),
            )?;
            let train_seed = mix(master_seed, context);
            let init = init_mlp(shape, *clamp_bound, &mut seeded(mix(train_seed, &[1])))?;
            let cfg = TrainingConfig {
                batch_size: *batch_size,
                step_size: *step_size,
                decay_every: *decay_every,
                decay_factor: 0.5,
                iterations: *train_iterations,
                clamp_bound: *clamp_bound,
                seed: mix(train_seed, &[2]),
            };
            let (params, report) = train(init, &data, &cfg)?;
            log.push(format!(
                "{}: trained {}x{} on {} samples for {} iterations, epoch losses [{}]",
                det.name(),
                hidden_layers,
                width,
                train_size,
                train_iterations,
                report
                    .epoch_losses
                    .iter()
                    .map(|l| format!("{l:.4}"))
                    .collect::<Vec<_>>()
                    .join(", "),
            ));
            Ok(RuntimeDetector::Dl { params, csi: *csi })
        }
    }
}

/// Load a learned detector from snapshot text instead of training.
pub fn detector_from_snapshot(det: &DetectorConfig, text: &str) -> Result<RuntimeDetector> {
    match det {
        DetectorConfig::SicNet { .. } => Ok(RuntimeDetector::SicNet {
            params: SicNetParameters::from_json(text)?,
        }),
        DetectorConfig::Dl { csi, .. } => Ok(RuntimeDetector::Dl {
            params: MlpParameters::from_json(text)?,
            csi: *csi,
        }),
        _ => Err(Error::InvalidParameter(format!(
            "detector {} has no snapshot form",
            det.name()
        ))),
    }
}

//! Scenario resolution and dataset generation.
//!
//! A [`Scenario`] pins everything random about one experiment point: the
//! channel regime (with its frozen realization when time-invariant), the
//! transmission model and the noise level. Trials and training samples
//! are drawn from counter-addressed RNG streams, so sample `i` is the
//! same no matter how many workers draw in parallel and reruns reproduce
//! every byte.

use rand::Rng;

use mimolab_core::channel::{
    quantize, quantizer_thresholds, ChannelModel, ChannelRegime, QuantizerSpec, TxNonlinearity,
};
use mimolab_core::linalg::Mat;
use mimolab_core::mlp::ClassificationSet;
use mimolab_core::rng::{stream, ChaCha8Rng};
use mimolab_core::sicnet::OmegaSample;
use mimolab_core::signal::{draw_noise, one_hot_encode, NoiseSpec, RealConstellation};
use mimolab_core::Result;
use rand_distr::StandardNormal;

use crate::config::{
    ChannelConfig, CsiConfig, ExperimentConfig, NonlinearityConfig, RegimeConfig,
    TransmissionConfig,
};

/// RNG stream purposes.
pub mod purpose {
    /// Frozen channel draw of a time-invariant regime.
    pub const FREEZE: u64 = 1;
    /// Evaluation trials.
    pub const TRIAL: u64 = 2;
    /// Training samples.
    pub const TRAIN: u64 = 3;
    /// Channel-estimate perturbation at evaluation time.
    pub const CSI_ERROR: u64 = 4;
    /// Auxiliary draws (moment estimation for bounds).
    pub const AUX: u64 = 5;
}

/// Resolved transmission model.
#[derive(Debug, Clone)]
pub enum Transmission {
    Linear,
    Quantized(QuantizerSpec),
    TxNonlinear(TxNonlinearity),
}

impl Transmission {
    pub fn quantizer(&self) -> Option<&QuantizerSpec> {
        match self {
            Transmission::Quantized(q) => Some(q),
            _ => None,
        }
    }
}

/// One fully resolved experiment point (fixed SNR).
#[derive(Debug, Clone)]
pub struct Scenario {
    pub constellation: RealConstellation,
    pub regime: ChannelRegime,
    pub transmission: Transmission,
    pub noise: NoiseSpec,
    pub d_r: usize,
    pub d_t: usize,
    /// Evaluation-time channel-estimate error, when configured.
    pub csi_sigma_e: Option<f64>,
    seed: u64,
    /// Disambiguates streams across SNR points and sweep grid points.
    domain: u64,
}

/// One evaluation trial. `h_eval` is what channel-consuming detectors
/// see: the true matrix, or its perturbed version under imperfect CSI.
#[derive(Debug, Clone)]
pub struct Trial {
    pub h: Mat,
    pub h_eval: Mat,
    pub s: Vec<f64>,
    pub x: Vec<f64>,
}

impl Scenario {
    /// Resolve `cfg` at one SNR point. `domain` must be unique per
    /// (SNR index, grid index) so that parallel points use disjoint
    /// streams; the frozen channel is shared across all of them.
    pub fn build(cfg: &ExperimentConfig, snr_db: f64, domain: u64) -> Result<Scenario> {
        let model = match cfg.channel {
            ChannelConfig::Gaussian => ChannelModel::Gaussian,
            ChannelConfig::Correlated { rho } => ChannelModel::Correlated { rho },
        };
        let regime = match cfg.regime {
            RegimeConfig::TimeInvariant => {
                let mut rng = stream(cfg.seed, purpose::FREEZE, 0);
                ChannelRegime::time_invariant(model, cfg.d_r, cfg.d_t, &mut rng)?
            }
            RegimeConfig::TimeVarying => ChannelRegime::time_varying(model, cfg.d_r, cfg.d_t),
        };
        let transmission = match cfg.transmission {
            TransmissionConfig::Linear => Transmission::Linear,
            TransmissionConfig::Quantized { bits } => {
                Transmission::Quantized(quantizer_thresholds(bits)?)
            }
            TransmissionConfig::TxNonlinear { nonlinearity } => {
                Transmission::TxNonlinear(match nonlinearity {
                    NonlinearityConfig::Identity => TxNonlinearity::Identity,
                    NonlinearityConfig::Clip { level } => TxNonlinearity::Clip { level },
                    NonlinearityConfig::Tanh => TxNonlinearity::Tanh,
                })
            }
        };
        let csi_sigma_e = match cfg.csi {
            CsiConfig::Imperfect { sigma_e } => Some(sigma_e),
            _ => None,
        };
        Ok(Scenario {
            constellation: cfg.constellation(),
            regime,
            transmission,
            noise: cfg.noise_for_snr(snr_db),
            d_r: cfg.d_r,
            d_t: cfg.d_t,
            csi_sigma_e,
            seed: cfg.seed,
            domain,
        })
    }

    fn stream_at(&self, purpose_tag: u64, index: u64) -> ChaCha8Rng {
        stream(self.seed, purpose_tag, (self.domain << 32) | index)
    }

    /// Transmit one symbol vector through the configured model.
    fn transmit(&self, h: &Mat, s: &[f64], rng: &mut impl Rng) -> Vec<f64> {
        let mut clean = match &self.transmission {
            Transmission::TxNonlinear(f) => {
                let distorted: Vec<f64> = s.iter().map(|&v| f.apply(v)).collect();
                h.matvec(&distorted)
            }
            _ => h.matvec(s),
        };
        let n = draw_noise(&self.noise, h.rows(), rng);
        for (xi, ni) in clean.iter_mut().zip(&n) {
            *xi += ni;
        }
        match &self.transmission {
            Transmission::Quantized(q) => quantize(&clean, q),
            _ => clean,
        }
    }

    /// Evaluation trial `t`, identical for every detector.
    pub fn sample_trial(&self, t: u64) -> Result<Trial> {
        let mut rng = self.stream_at(purpose::TRIAL, t);
        let ch = self.regime.realization(&mut rng)?;
        let s = self.constellation.draw_symbols(2 * self.d_t, &mut rng);
        let x = self.transmit(ch.h(), &s, &mut rng);
        let h = ch.h().clone();
        let h_eval = match self.csi_sigma_e {
            Some(sigma_e) => {
                let mut err_rng = self.stream_at(purpose::CSI_ERROR, t);
                perturb_csi(&h, sigma_e, &mut err_rng)
            }
            None => h.clone(),
        };
        Ok(Trial { h, h_eval, s, x })
    }

    /// Training sample `i` as a raw `(x, H, s)` triple. Training always
    /// sees the true channel.
    pub fn sample_train_triple(&self, i: u64) -> Result<OmegaSample> {
        let mut rng = self.stream_at(purpose::TRAIN, i);
        let ch = self.regime.realization(&mut rng)?;
        let s = self.constellation.draw_symbols(2 * self.d_t, &mut rng);
        let x = self.transmit(ch.h(), &s, &mut rng);
        Ok(OmegaSample {
            x,
            h: ch.h().clone(),
            s,
        })
    }

    /// Input dimension of a detector network under this scenario.
    pub fn dl_input_dim(&self, csi: bool) -> usize {
        let base = 2 * self.d_r;
        if csi {
            base + 4 * self.d_r * self.d_t
        } else {
            base
        }
    }

    /// Output class count `|S|^(2 d_t)`.
    pub fn class_count(&self) -> usize {
        self.constellation.size().pow(2 * self.d_t as u32)
    }
}

/// Additive Gaussian perturbation of a channel estimate.
pub fn perturb_csi(h: &Mat, sigma_e: f64, rng: &mut impl Rng) -> Mat {
    assert!(sigma_e >= 0.0);
    if sigma_e == 0.0 {
        return h.clone();
    }
    let mut out = h.clone();
    for v in out.data_mut() {
        let e: f64 = rng.sample(StandardNormal);
        *v += sigma_e * e;
    }
    out
}

/// Labeled `(x, u)` training set for the data-driven detector; inputs are
/// `x` alone or `x` with the flattened true channel appended.
pub fn generate_z(scenario: &Scenario, size: usize, csi: bool) -> Result<ClassificationSet> {
    assert!(size >= 1);
    let mut set = ClassificationSet::new(scenario.dl_input_dim(csi));
    for i in 0..size {
        let triple = scenario.sample_train_triple(i as u64)?;
        let target = one_hot_encode(&triple.s, &scenario.constellation)?;
        if csi {
            let mut input = triple.x.clone();
            input.extend(triple.h.vec_column_major());
            set.push(&input, target.class() as u32);
        } else {
            set.push(&triple.x, target.class() as u32);
        }
    }
    Ok(set)
}

/// `(x, H, s)` training set for the unfolded detector.
pub fn generate_omega(scenario: &Scenario, size: usize) -> Result<Vec<OmegaSample>> {
    assert!(size >= 1);
    (0..size)
        .map(|i| scenario.sample_train_triple(i as u64))
        .collect()
}

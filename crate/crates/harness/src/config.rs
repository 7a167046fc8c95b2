//! Experiment configuration: a JSON config file maps field-for-field onto
//! [`ExperimentConfig`].

use serde::{Deserialize, Serialize};

use mimolab_core::signal::{make_constellation, ModulationKind, NoiseSpec, RealConstellation};
use mimolab_core::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment name; first column of every result row.
    pub name: String,
    pub d_r: usize,
    pub d_t: usize,
    #[serde(default)]
    pub modulation: ModulationConfig,
    pub channel: ChannelConfig,
    pub regime: RegimeConfig,
    #[serde(default)]
    pub transmission: TransmissionConfig,
    pub snr_grid_db: Vec<f64>,
    #[serde(default)]
    pub csi: CsiConfig,
    pub detectors: Vec<DetectorConfig>,
    pub test: TestConfig,
    pub seed: u64,
    /// Present only for the `sweep` subcommand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModulationConfig {
    #[default]
    Qpsk,
    Bpsk,
}

impl ModulationConfig {
    pub fn kind(&self) -> ModulationKind {
        match self {
            ModulationConfig::Qpsk => ModulationKind::Qpsk,
            ModulationConfig::Bpsk => ModulationKind::Bpsk,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelConfig {
    Gaussian,
    Correlated { rho: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeConfig {
    TimeInvariant,
    TimeVarying,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransmissionConfig {
    #[default]
    Linear,
    Quantized {
        bits: u32,
    },
    TxNonlinear {
        nonlinearity: NonlinearityConfig,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonlinearityConfig {
    Identity,
    Clip { level: f64 },
    Tanh,
}

/// How receivers see the channel matrix at evaluation time. `none`
/// forbids channel-input detectors; `imperfect` hands every
/// channel-consuming detector the same additively perturbed matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CsiConfig {
    None,
    #[default]
    Perfect,
    Imperfect {
        sigma_e: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetectorConfig {
    Map,
    Zf,
    Amp {
        #[serde(default = "default_amp_iters")]
        iters: usize,
    },
    Sic {
        #[serde(default = "default_sic_iters")]
        iters: usize,
    },
    #[serde(rename = "sicnet")]
    SicNet {
        #[serde(default = "default_sic_iters")]
        iters: usize,
        train_size: usize,
        #[serde(default)]
        loss: SicNetLossConfig,
        #[serde(default = "default_sicnet_batch")]
        batch_size: usize,
        #[serde(default = "default_sicnet_step")]
        step_size: f64,
        #[serde(default = "default_sicnet_iterations")]
        train_iterations: usize,
    },
    Dl {
        csi: bool,
        #[serde(default = "default_hidden_layers")]
        hidden_layers: usize,
        #[serde(default = "default_width")]
        width: usize,
        train_size: usize,
        #[serde(default = "default_dl_batch")]
        batch_size: usize,
        #[serde(default = "default_dl_step")]
        step_size: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        decay_every: Option<usize>,
        train_iterations: usize,
        #[serde(default = "default_clamp_bound")]
        clamp_bound: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SicNetLossConfig {
    #[default]
    Mse,
    Kl,
}

fn default_amp_iters() -> usize {
    10
}
fn default_sic_iters() -> usize {
    5
}
fn default_sicnet_batch() -> usize {
    200
}
fn default_sicnet_step() -> f64 {
    0.05
}
fn default_sicnet_iterations() -> usize {
    500
}
fn default_hidden_layers() -> usize {
    4
}
fn default_width() -> usize {
    100
}
fn default_dl_batch() -> usize {
    500
}
fn default_dl_step() -> f64 {
    0.05
}
fn default_clamp_bound() -> f64 {
    10.0
}

impl DetectorConfig {
    /// Stable name used in result rows and file names.
    pub fn name(&self) -> String {
        match self {
            DetectorConfig::Map => "map".into(),
            DetectorConfig::Zf => "zf".into(),
            DetectorConfig::Amp { .. } => "amp".into(),
            DetectorConfig::Sic { .. } => "sic".into(),
            DetectorConfig::SicNet { .. } => "sicnet".into(),
            DetectorConfig::Dl { csi, .. } => {
                if *csi {
                    "dl_csi".into()
                } else {
                    "dl".into()
                }
            }
        }
    }

    pub fn is_learned(&self) -> bool {
        matches!(
            self,
            DetectorConfig::SicNet { .. } | DetectorConfig::Dl { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TestConfig {
    /// Minimum trials evaluated per point.
    pub test_size: usize,
    /// Hard cap on trials per point.
    pub max_trials: usize,
    /// Error target: evaluation continues past `test_size` until every
    /// detector has this many bit errors or the cap is hit.
    #[serde(default = "default_min_bit_errors")]
    pub min_bit_errors: u64,
}

fn default_min_bit_errors() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub grid: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Width,
    SampleSize,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::Width => "width",
            SweepAxis::SampleSize => "sample_size",
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn constellation(&self) -> RealConstellation {
        make_constellation(self.modulation.kind()).expect("supported modulation")
    }

    /// Noise variance realizing `snr_db` under the ensemble power identity
    /// `E||Hs||^2 / E||n||^2 = d_t E{|s_c|^2} / sigma_n^2` for unit-variance
    /// channel entries.
    pub fn noise_for_snr(&self, snr_db: f64) -> NoiseSpec {
        let es_complex = 2.0 * self.constellation().symbol_energy();
        let snr_lin = 10f64.powf(snr_db / 10.0);
        NoiseSpec::new(self.d_t as f64 * es_complex / snr_lin).expect("positive noise variance")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParameter(msg));
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            return fail("name must be nonempty and [A-Za-z0-9_-]".into());
        }
        if self.d_r == 0 || self.d_t == 0 {
            return fail("antenna counts must be >= 1".into());
        }
        if self.snr_grid_db.is_empty() {
            return fail("snr_grid_db must be nonempty".into());
        }
        if self.snr_grid_db.windows(2).any(|w| w[1] <= w[0]) {
            return fail("snr_grid_db must be strictly increasing".into());
        }
        if let ChannelConfig::Correlated { rho } = self.channel {
            if !(0.0..1.0).contains(&rho) {
                return fail(format!("correlation rho must lie in [0,1), got {rho}"));
            }
        }
        if let TransmissionConfig::Quantized { bits } = self.transmission {
            if !(1..=16).contains(&bits) {
                return fail(format!("quantizer bits must be in 1..=16, got {bits}"));
            }
        }
        if let CsiConfig::Imperfect { sigma_e } = self.csi {
            if sigma_e < 0.0 {
                return fail(format!("sigma_e must be >= 0, got {sigma_e}"));
            }
        }
        if self.test.test_size < 1000 {
            return fail(format!(
                "test_size must be >= 1000, got {}",
                self.test.test_size
            ));
        }
        if self.test.max_trials < self.test.test_size {
            return fail("max_trials must be >= test_size".into());
        }
        if self.detectors.is_empty() {
            return fail("at least one detector required".into());
        }
        let linear = matches!(self.transmission, TransmissionConfig::Linear);
        for det in &self.detectors {
            match det {
                DetectorConfig::Amp { iters } | DetectorConfig::Sic { iters } => {
                    if *iters == 0 {
                        return fail("iterative detectors need iters >= 1".into());
                    }
                    if !linear {
                        return fail(format!(
                            "detector {} supports only linear transmission",
                            det.name()
                        ));
                    }
                }
                DetectorConfig::SicNet {
                    iters, train_size, ..
                } => {
                    if *iters == 0 || *train_size == 0 {
                        return fail("sicnet needs iters >= 1 and train_size >= 1".into());
                    }
                    if !linear {
                        return fail("sicnet supports only linear transmission".into());
                    }
                }
                DetectorConfig::Dl {
                    csi,
                    width,
                    hidden_layers,
                    train_size,
                    ..
                } => {
                    if *width == 0 || *hidden_layers == 0 || *train_size == 0 {
                        return fail("dl needs positive width, depth and train_size".into());
                    }
                    if *csi && matches!(self.csi, CsiConfig::None) {
                        return fail("dl with csi input conflicts with csi mode none".into());
                    }
                }
                DetectorConfig::Map | DetectorConfig::Zf => {}
            }
        }
        let mut names: Vec<String> = self.detectors.iter().map(|d| d.name()).collect();
        names.sort();
        names.dedup();
        if names.len() != self.detectors.len() {
            return fail("detector names must be unique within one experiment".into());
        }
        if let Some(sweep) = &self.sweep {
            if sweep.grid.is_empty() {
                return fail("sweep grid must be nonempty".into());
            }
            if sweep.grid.contains(&0) {
                return fail("sweep grid values must be positive".into());
            }
            if sweep.grid.windows(2).any(|w| w[1] <= w[0]) {
                return fail("sweep grid must be strictly increasing".into());
            }
            if self.snr_grid_db.len() != 1 {
                return fail("sweeps run at a single SNR point".into());
            }
            if !self
                .detectors
                .iter()
                .any(|d| matches!(d, DetectorConfig::Dl { .. }))
            {
                return fail("sweep needs a dl detector to vary".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub mod test_support {
    use super::*;

    /// Small valid config shared by harness unit tests.
    pub fn minimal() -> ExperimentConfig {
        ExperimentConfig::from_json(
            r#"{
                "name": "demo",
                "d_r": 2,
                "d_t": 2,
                "channel": {"kind": "gaussian"},
                "regime": "time_varying",
                "snr_grid_db": [8.0],
                "detectors": [
                    {"kind": "map"},
                    {"kind": "zf"}
                ],
                "test": {"test_size": 1000, "max_trials": 10000},
                "seed": 7
            }"#,
        )
        .unwrap()
    }
}

//! Classical detectors.

pub mod amp;
pub mod map;
pub mod sic;
pub mod zf;

pub use amp::amp_detect;
pub use map::{map_detect, true_posterior, ChannelKind, PosteriorTable};
pub use sic::{sic_detect, SicOutput};
pub use zf::{hard_decide, zf_detect};

/// A detector's decision for one received vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    /// Hard-decided symbol vector in `S^(2 d_t)`.
    pub hard_symbols: Vec<f64>,
    /// Posterior over all symbol combinations, when the detector computes
    /// one (indexed by one-hot index minus one).
    pub posterior: Option<Vec<f64>>,
    /// Detector name.
    pub detector: &'static str,
    /// Iterations actually used.
    pub iterations: usize,
}

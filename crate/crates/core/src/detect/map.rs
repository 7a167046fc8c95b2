//! Exact posterior computation and the MAP detector.
//!
//! Both operate by exhaustive enumeration of all `|S|^(2 d_t)` symbol
//! combinations, guarded to stay at desk scale. The linear channel uses
//! the Gaussian likelihood; the quantized channel integrates the Gaussian
//! over each output's quantization bin.

use crate::channel::QuantizerSpec;
use crate::detect::DetectionResult;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::signal::{symbol_vector_for_index, NoiseSpec, RealConstellation};
use crate::stats::{log_sum_exp, normal_interval_prob};

/// Candidate count above which enumeration refuses to run.
pub const ENUMERATION_GUARD: usize = 1 << 20;

/// Transmission model the posterior conditions on.
#[derive(Debug, Clone, Copy)]
pub enum ChannelKind<'a> {
    Linear,
    Quantized(&'a QuantizerSpec),
}

impl ChannelKind<'_> {
    fn tag(&self) -> &'static str {
        match self {
            ChannelKind::Linear => "linear",
            ChannelKind::Quantized(_) => "quantized",
        }
    }
}

/// Posterior probabilities of every symbol combination given one received
/// vector, with the conditioning it was computed under.
#[derive(Debug, Clone)]
pub struct PosteriorTable {
    probs: Vec<f64>,
    h: Mat,
    x: Vec<f64>,
    sigma_n_sq: f64,
    kind: &'static str,
}

impl PosteriorTable {
    /// Probabilities indexed by one-hot index minus one; they sum to one.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn h(&self) -> &Mat {
        &self.h
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn sigma_n_sq(&self) -> f64 {
        self.sigma_n_sq
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }

    /// 1-based index of the most probable combination; ties resolve to the
    /// lowest index.
    pub fn argmax_index(&self) -> usize {
        let mut best = 0usize;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best + 1
    }
}

/// Log-likelihoods of all candidates, in one-hot enumeration order.
fn candidate_logliks(
    h: &Mat,
    x: &[f64],
    noise: &NoiseSpec,
    c: &RealConstellation,
    kind: ChannelKind<'_>,
) -> Result<Vec<f64>> {
    if x.len() != h.rows() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            got: x.len(),
        });
    }
    let d_t = h.cols() / 2;
    let total = c.size().pow(2 * d_t as u32);
    if total > ENUMERATION_GUARD {
        return Err(Error::EnumerationTooLarge {
            size: total,
            limit: ENUMERATION_GUARD,
        });
    }
    let sigma_sq = noise.per_real_variance();

    let mut logliks = Vec::with_capacity(total);
    match kind {
        ChannelKind::Linear => {
            for idx in 1..=total {
                let s = symbol_vector_for_index(idx, c, d_t);
                let m = h.matvec(&s);
                let dist: f64 = x.iter().zip(&m).map(|(a, b)| (a - b) * (a - b)).sum();
                logliks.push(-dist / (2.0 * sigma_sq));
            }
        }
        ChannelKind::Quantized(q) => {
            let sigma = sigma_sq.sqrt();
            let bounds: Result<Vec<(f64, f64)>> =
                x.iter().map(|&xi| q.bin_bounds_for_output(xi)).collect();
            let bounds = bounds?;
            for idx in 1..=total {
                let s = symbol_vector_for_index(idx, c, d_t);
                let m = h.matvec(&s);
                let mut ll = 0.0;
                for (mi, &(lo, hi)) in m.iter().zip(&bounds) {
                    ll += normal_interval_prob(lo, hi, *mi, sigma).ln();
                }
                logliks.push(ll);
            }
        }
    }
    Ok(logliks)
}

/// Exact posterior over all symbol combinations under a uniform prior.
pub fn true_posterior(
    h: &Mat,
    x: &[f64],
    noise: &NoiseSpec,
    c: &RealConstellation,
    kind: ChannelKind<'_>,
) -> Result<PosteriorTable> {
    let logliks = candidate_logliks(h, x, noise, c, kind)?;
    let norm = log_sum_exp(&logliks);
    if norm == f64::NEG_INFINITY {
        return Err(Error::ProbabilityUnderflow);
    }
    let probs: Vec<f64> = logliks.iter().map(|ll| (ll - norm).exp()).collect();
    Ok(PosteriorTable {
        probs,
        h: h.clone(),
        x: x.to_vec(),
        sigma_n_sq: noise.sigma_n_sq(),
        kind: kind.tag(),
    })
}

/// Bayes-optimal symbol decision: argmax of the exact posterior.
pub fn map_detect(
    h: &Mat,
    x: &[f64],
    noise: &NoiseSpec,
    c: &RealConstellation,
    kind: ChannelKind<'_>,
) -> Result<DetectionResult> {
    let table = true_posterior(h, x, noise, c, kind)?;
    let d_t = h.cols() / 2;
    let hard = symbol_vector_for_index(table.argmax_index(), c, d_t);
    Ok(DetectionResult {
        hard_symbols: hard,
        posterior: Some(table.probs.clone()),
        detector: "map",
        iterations: 1,
    })
}

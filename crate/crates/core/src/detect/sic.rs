//! Parallel soft interference cancellation.
//!
//! Each iteration subtracts the expected interference of the other
//! transmit antennas and forms exact per-antenna posteriors over the 2-D
//! complex symbol under a Gaussian residual approximation with the true
//! noise variance. Soft symbols are posterior means; the final decision is
//! the per-antenna argmax.

use crate::detect::DetectionResult;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::signal::{NoiseSpec, RealConstellation};

/// Soft outputs of a SIC run.
#[derive(Debug, Clone, PartialEq)]
pub struct SicOutput {
    /// Final hard decision.
    pub result: DetectionResult,
    /// Final soft symbols, length `2 d_t` (real parts then imaginary).
    pub soft: Vec<f64>,
    /// Final per-antenna probability vectors over the 2-D alphabet,
    /// `d_t x |S|^2`.
    pub probs: Vec<Vec<f64>>,
}

/// One probability stage: per-antenna residual, exact pairwise posterior
/// and posterior-mean soft symbol, all from the previous soft estimate.
///
/// Writes the per-antenna probabilities into `probs` and returns the
/// posterior-mean soft symbols in the same layout as `prev_soft`.
pub(crate) fn probability_stage(
    h: &Mat,
    x: &[f64],
    prev_soft: &[f64],
    sigma_sq: f64,
    pairs: &[(f64, f64)],
    d_t: usize,
    probs: &mut [Vec<f64>],
    residuals: Option<&mut Vec<Vec<f64>>>,
) -> Vec<f64> {
    let rows = h.rows();
    let total = h.matvec(prev_soft);
    let mut mean_soft = vec![0.0; 2 * d_t];
    let mut residual_store = residuals;

    for i in 0..d_t {
        // y_i = x - H s_prev + H_i s_prev_i  (add back own contribution)
        let (re_prev, im_prev) = (prev_soft[i], prev_soft[d_t + i]);
        let mut y = vec![0.0; rows];
        for r in 0..rows {
            y[r] = x[r] - total[r] + h.get(r, i) * re_prev + h.get(r, d_t + i) * im_prev;
        }

        // log-likelihood of each candidate pair
        let mut logw = Vec::with_capacity(pairs.len());
        let mut max_lw = f64::NEG_INFINITY;
        for &(re, im) in pairs {
            let mut dist = 0.0;
            for r in 0..rows {
                let d = y[r] - h.get(r, i) * re - h.get(r, d_t + i) * im;
                dist += d * d;
            }
            let lw = -dist / (2.0 * sigma_sq);
            logw.push(lw);
            if lw > max_lw {
                max_lw = lw;
            }
        }
        let mut wsum = 0.0;
        for (pk, &lw) in probs[i].iter_mut().zip(&logw) {
            let w = (lw - max_lw).exp();
            *pk = w;
            wsum += w;
        }
        let mut mean_re = 0.0;
        let mut mean_im = 0.0;
        for (pk, &(re, im)) in probs[i].iter_mut().zip(pairs) {
            *pk /= wsum;
            mean_re += *pk * re;
            mean_im += *pk * im;
        }
        mean_soft[i] = mean_re;
        mean_soft[d_t + i] = mean_im;

        if let Some(store) = residual_store.as_deref_mut() {
            store.push(y);
        }
    }
    mean_soft
}

/// Per-antenna argmax decision from probability vectors; ties resolve to
/// the lowest pair index.
pub(crate) fn argmax_decision(probs: &[Vec<f64>], pairs: &[(f64, f64)], d_t: usize) -> Vec<f64> {
    let mut hard = vec![0.0; 2 * d_t];
    for i in 0..d_t {
        let mut best = 0usize;
        for (k, &p) in probs[i].iter().enumerate() {
            if p > probs[i][best] {
                best = k;
            }
        }
        hard[i] = pairs[best].0;
        hard[d_t + i] = pairs[best].1;
    }
    hard
}

/// Soft interference cancellation with `q_iters` parallel iterations,
/// initialized at zero soft symbols.
pub fn sic_detect(
    h: &Mat,
    x: &[f64],
    noise: &NoiseSpec,
    c: &RealConstellation,
    q_iters: usize,
) -> Result<SicOutput> {
    assert!(q_iters >= 1);
    if x.len() != h.rows() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            got: x.len(),
        });
    }
    let d_t = h.cols() / 2;
    let pairs = c.symbol_pairs();
    let sigma_sq = noise.per_real_variance();

    let mut soft = vec![0.0; 2 * d_t];
    let mut probs = vec![vec![0.0; pairs.len()]; d_t];
    for _ in 0..q_iters {
        soft = probability_stage(h, x, &soft, sigma_sq, &pairs, d_t, &mut probs, None);
    }
    let hard = argmax_decision(&probs, &pairs, d_t);
    Ok(SicOutput {
        result: DetectionResult {
            hard_symbols: hard,
            posterior: None,
            detector: "sic",
            iterations: q_iters,
        },
        soft,
        probs,
    })
}

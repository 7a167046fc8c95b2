//! Approximate message passing with a discrete-prior posterior-mean
//! denoiser and Onsager correction.
//!
//! Per iteration, with column-normalized matched filtering:
//!
//! ```text
//! z^t = x - H s^t + (2 d_t / 2 d_r) <eta'> z^(t-1)
//! r_i^t = s_i^t + h_i^T z^t / ||h_i||^2
//! s^(t+1)_i = E[s | r_i^t, tau_t^2],   tau_t^2 = ||z^t||^2 / (2 d_r)
//! ```
//!
//! where the conditional expectation is over the uniform alphabet prior at
//! effective noise variance `tau_t^2`.

use crate::detect::DetectionResult;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::signal::{NoiseSpec, RealConstellation};

/// Posterior mean and variance of a uniform-prior alphabet symbol observed
/// in Gaussian noise of variance `tau_sq`.
fn denoise(r: f64, tau_sq: f64, points: &[f64]) -> (f64, f64) {
    let mut max_e = f64::NEG_INFINITY;
    let mut logw = Vec::with_capacity(points.len());
    for &a in points {
        let e = -(r - a) * (r - a) / (2.0 * tau_sq);
        logw.push(e);
        if e > max_e {
            max_e = e;
        }
    }
    let mut wsum = 0.0;
    let mut mean = 0.0;
    let mut second = 0.0;
    for (&a, &lw) in points.iter().zip(&logw) {
        let w = (lw - max_e).exp();
        wsum += w;
        mean += w * a;
        second += w * a * a;
    }
    mean /= wsum;
    second /= wsum;
    (mean, (second - mean * mean).max(0.0))
}

/// Damping factor on the soft-symbol update; stabilizes the recursion on
/// small antenna arrays where the large-system assumptions behind AMP do
/// not hold.
const DAMPING: f64 = 0.45;

/// AMP detection over the real linear model.
pub fn amp_detect(
    h: &Mat,
    x: &[f64],
    _noise: &NoiseSpec,
    c: &RealConstellation,
    n_iters: usize,
) -> Result<DetectionResult> {
    assert!(n_iters >= 1);
    if x.len() != h.rows() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            got: x.len(),
        });
    }
    let rows = h.rows();
    let cols = h.cols();
    let col_norm_sq: Vec<f64> = (0..cols)
        .map(|j| {
            (0..rows)
                .map(|i| h.get(i, j) * h.get(i, j))
                .sum::<f64>()
                .max(1e-30)
        })
        .collect();

    let mut s_hat = vec![0.0; cols];
    let mut z = x.to_vec();
    let mut onsager_gain = 0.0; // <eta'> from the previous iteration
    let mut z_prev = vec![0.0; rows];
    let ratio = cols as f64 / rows as f64;

    for t in 0..n_iters {
        // residual with Onsager correction
        let hs = h.matvec(&s_hat);
        for i in 0..rows {
            z[i] = x[i] - hs[i]
                + if t > 0 {
                    ratio * onsager_gain * z_prev[i]
                } else {
                    0.0
                };
        }
        let tau_sq = (z.iter().map(|v| v * v).sum::<f64>() / rows as f64).max(1e-30);

        // column-normalized matched filter; the normalization scales the
        // residual noise seen by coordinate j down to tau^2 / ||h_j||^2
        let ht_z = h.matvec_t(&z);
        let mut gain_sum = 0.0;
        let damp = if t == 0 { 1.0 } else { DAMPING };
        for j in 0..cols {
            let r = s_hat[j] + ht_z[j] / col_norm_sq[j];
            let tau_j_sq = tau_sq / col_norm_sq[j];
            let (mean, var) = denoise(r, tau_j_sq, c.points());
            s_hat[j] = (1.0 - damp) * s_hat[j] + damp * mean;
            gain_sum += var / tau_j_sq;
        }
        onsager_gain = gain_sum / cols as f64;
        z_prev.copy_from_slice(&z);

        if s_hat.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged(format!(
                "amp produced non-finite estimate at iteration {t}"
            )));
        }
    }

    let hard: Vec<f64> = s_hat.iter().map(|&v| c.nearest(v)).collect();
    Ok(DetectionResult {
        hard_symbols: hard,
        posterior: None,
        detector: "amp",
        iterations: n_iters,
    })
}

//! SIC-Net: soft interference cancellation unfolded into layers with two
//! trainable scalars per layer.
//!
//! Layer `q` reuses the base SIC probability stage on the previous soft
//! symbols and then blends the posterior mean with the previous estimate:
//!
//! ```text
//! s_i^(q) = tau_q (sum_k s_k p_hat_{i,k}^(q) + xi_q s_i^(q-1))
//! ```
//!
//! With `tau = 1, xi = 0` the network reproduces the base SIC algorithm
//! step for step. Training minimizes MSE against the transmitted symbols
//! (or a per-antenna log-loss) by exact backpropagation through the
//! unrolled layers.

use serde::{Deserialize, Serialize};

use crate::detect::sic::{argmax_decision, probability_stage};
use crate::detect::DetectionResult;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rng::seeded;
use crate::signal::{NoiseSpec, RealConstellation};

/// Snapshot format version written by [`SicNetParameters::to_json`].
pub const SNAPSHOT_VERSION: u32 = 1;

/// Per-layer trainable scalars `tau_q`, `xi_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct SicNetParameters {
    tau: Vec<f64>,
    xi: Vec<f64>,
}

/// Identity initialization: `tau = 1`, `xi = 0`, reducing the network to
/// the base SIC algorithm.
pub fn init_sicnet(layers: usize) -> Result<SicNetParameters> {
    if layers == 0 {
        return Err(Error::InvalidParameter("layer count must be >= 1".into()));
    }
    Ok(SicNetParameters {
        tau: vec![1.0; layers],
        xi: vec![0.0; layers],
    })
}

impl SicNetParameters {
    pub fn from_scalars(tau: Vec<f64>, xi: Vec<f64>) -> Result<Self> {
        if tau.is_empty() || tau.len() != xi.len() {
            return Err(Error::InvalidParameter(
                "tau and xi must have equal nonzero length".into(),
            ));
        }
        if tau.iter().chain(xi.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite scalar".into()));
        }
        Ok(Self { tau, xi })
    }

    /// Layer count `Q`.
    pub fn layers(&self) -> usize {
        self.tau.len()
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Mutable scalars, for perturbation studies.
    pub fn tau_mut(&mut self) -> &mut [f64] {
        &mut self.tau
    }

    pub fn xi_mut(&mut self) -> &mut [f64] {
        &mut self.xi
    }

    pub fn to_json(&self) -> String {
        let snap = SicNetSnapshot {
            format_version: SNAPSHOT_VERSION,
            q: self.tau.len(),
            tau: self.tau.clone(),
            xi: self.xi.clone(),
        };
        serde_json::to_string_pretty(&snap).expect("snapshot serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let snap: SicNetSnapshot =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        if snap.format_version != SNAPSHOT_VERSION {
            return Err(Error::SnapshotVersion {
                expected: SNAPSHOT_VERSION,
                got: snap.format_version,
            });
        }
        if snap.tau.len() != snap.q || snap.xi.len() != snap.q {
            return Err(Error::Format(
                "scalar lengths do not match layer count".into(),
            ));
        }
        Self::from_scalars(snap.tau, snap.xi)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Serialize, Deserialize)]
struct SicNetSnapshot {
    format_version: u32,
    q: usize,
    tau: Vec<f64>,
    xi: Vec<f64>,
}

/// Final-layer outputs of one forward pass.
#[derive(Debug, Clone)]
pub struct SicNetOutput {
    /// Soft symbols after layer `Q`, real parts then imaginary.
    pub soft: Vec<f64>,
    /// Per-antenna probability vectors of layer `Q`.
    pub probs: Vec<Vec<f64>>,
}

struct LayerTrace {
    s_prev: Vec<f64>,
    probs: Vec<Vec<f64>>,
    mean: Vec<f64>,
    residuals: Vec<Vec<f64>>,
}

fn forward_traced(
    params: &SicNetParameters,
    h: &Mat,
    x: &[f64],
    noise: &NoiseSpec,
    c: &RealConstellation,
    keep_trace: bool,
) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<LayerTrace>)> {
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
    let mut traces = Vec::new();

    for q in 0..params.layers() {
        let mut residuals = Vec::new();
        let mean = probability_stage(
            h,
            x,
            &soft,
            sigma_sq,
            &pairs,
            d_t,
            &mut probs,
            if keep_trace {
                Some(&mut residuals)
            } else {
                None
            },
        );
        let tau = params.tau[q];
        let xi = params.xi[q];
        let mut next = vec![0.0; 2 * d_t];
        for k in 0..2 * d_t {
            next[k] = tau * (mean[k] + xi * soft[k]);
        }
        if keep_trace {
            traces.push(LayerTrace {
                s_prev: soft.clone(),
                probs: probs.clone(),
                mean,
                residuals,
            });
        }
        soft = next;
    }
    Ok((soft, probs, traces))
}

/// Run the unfolded network and return the final-layer outputs.
pub fn sicnet_forward(
    params: &SicNetParameters,
    h: &Mat,
    x: &[f64],
    noise: &NoiseSpec,
    c: &RealConstellation,
) -> Result<SicNetOutput> {
    let (soft, probs, _) = forward_traced(params, h, x, noise, c, false)?;
    Ok(SicNetOutput { soft, probs })
}

/// Hard decision: per-antenna argmax of the final-layer probabilities.
pub fn sicnet_detect(
    params: &SicNetParameters,
    h: &Mat,
    x: &[f64],
    noise: &NoiseSpec,
    c: &RealConstellation,
) -> Result<DetectionResult> {
    let out = sicnet_forward(params, h, x, noise, c)?;
    let d_t = h.cols() / 2;
    let pairs = c.symbol_pairs();
    Ok(DetectionResult {
        hard_symbols: argmax_decision(&out.probs, &pairs, d_t),
        posterior: None,
        detector: "sicnet",
        iterations: params.layers(),
    })
}

/// Training loss for the unfolded network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnfoldedLoss {
    /// `||s_hat - s||^2 / (2 d_t)`.
    Mse,
    /// `-sum_i ln p_hat_{i, k*(i)}` with `k*` the transmitted pair index.
    Kl,
}

/// One supervised triple: received vector, channel, transmitted symbols.
#[derive(Debug, Clone)]
pub struct OmegaSample {
    pub x: Vec<f64>,
    pub h: Mat,
    pub s: Vec<f64>,
}

/// True pair index per antenna for the loss and its gradient.
fn true_pair_indices(s: &[f64], c: &RealConstellation, d_t: usize) -> Result<Vec<usize>> {
    (0..d_t)
        .map(|i| {
            let j_re = c.index_of(s[i])?;
            let j_im = c.index_of(s[d_t + i])?;
            Ok(j_im * c.size() + j_re)
        })
        .collect()
}

/// Loss of one sample and its gradient with respect to `(tau, xi)`,
/// computed by backpropagation through the unrolled layers.
pub fn sicnet_loss_and_grad(
    params: &SicNetParameters,
    sample: &OmegaSample,
    noise: &NoiseSpec,
    c: &RealConstellation,
    loss_kind: UnfoldedLoss,
) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let h = &sample.h;
    let d_t = h.cols() / 2;
    let pairs = c.symbol_pairs();
    let sigma_sq = noise.per_real_variance();
    let q_layers = params.layers();

    let (soft, probs, traces) = forward_traced(params, h, x_of(sample), noise, c, true)?;

    // loss and top-layer cotangents
    let mut ds = vec![0.0; 2 * d_t];
    let mut dp = vec![vec![0.0; pairs.len()]; d_t];
    let loss = match loss_kind {
        UnfoldedLoss::Mse => {
            let mut acc = 0.0;
            for k in 0..2 * d_t {
                let diff = soft[k] - sample.s[k];
                acc += diff * diff;
                ds[k] = diff / d_t as f64;
            }
            acc / (2.0 * d_t as f64)
        }
        UnfoldedLoss::Kl => {
            let truth = true_pair_indices(&sample.s, c, d_t)?;
            let mut acc = 0.0;
            for (i, &k_star) in truth.iter().enumerate() {
                let p = probs[i][k_star];
                if p < 1e-300 {
                    return Err(Error::ProbabilityUnderflow);
                }
                acc -= p.ln();
                dp[i][k_star] = -1.0 / p;
            }
            acc
        }
    };

    let mut grad_tau = vec![0.0; q_layers];
    let mut grad_xi = vec![0.0; q_layers];
    let rows = h.rows();

    for q in (0..q_layers).rev() {
        let trace = &traces[q];
        let tau = params.tau[q];
        let xi = params.xi[q];

        // s^(q) = tau (m + xi s_prev)
        let mut dm = vec![0.0; 2 * d_t];
        let mut ds_prev = vec![0.0; 2 * d_t];
        for k in 0..2 * d_t {
            grad_tau[q] += ds[k] * (trace.mean[k] + xi * trace.s_prev[k]);
            grad_xi[q] += ds[k] * tau * trace.s_prev[k];
            dm[k] = tau * ds[k];
            ds_prev[k] = tau * xi * ds[k];
        }

        // m_i = sum_k s_k p_{i,k}: fold dm into dp
        for i in 0..d_t {
            for (k, &(re, im)) in pairs.iter().enumerate() {
                dp[i][k] += re * dm[i] + im * dm[d_t + i];
            }
        }

        // softmax and likelihood backward, accumulating into ds_prev
        let mut dys = Vec::with_capacity(d_t);
        for i in 0..d_t {
            let p = &trace.probs[i];
            let inner: f64 = p.iter().zip(&dp[i]).map(|(pk, dpk)| pk * dpk).sum();
            let dg: Vec<f64> = p
                .iter()
                .zip(&dp[i])
                .map(|(pk, dpk)| pk * (dpk - inner))
                .collect();

            // g_k = -||y - H_i s_k||^2 / (2 sigma^2)
            // dy = -(1/sigma^2) (sum_k dg_k) y + (1/sigma^2) H_i (sum_k dg_k s_k)
            let sum_dg: f64 = dg.iter().sum();
            let mut proj_re = 0.0;
            let mut proj_im = 0.0;
            for (k, &(re, im)) in pairs.iter().enumerate() {
                proj_re += dg[k] * re;
                proj_im += dg[k] * im;
            }
            let y = &trace.residuals[i];
            let mut dy = vec![0.0; rows];
            for r in 0..rows {
                let hs = h.get(r, i) * proj_re + h.get(r, d_t + i) * proj_im;
                dy[r] = (-sum_dg * y[r] + hs) / sigma_sq;
            }
            dys.push(dy);
        }

        // y_i = x - H s_prev + H_i s_prev_i, so ds_prev_j gets -H_j^T (total_dy - dy_j)
        let mut total_dy = vec![0.0; rows];
        for dy in &dys {
            for (t, d) in total_dy.iter_mut().zip(dy) {
                *t += d;
            }
        }
        for j in 0..d_t {
            let mut acc_re = 0.0;
            let mut acc_im = 0.0;
            for r in 0..rows {
                let other = total_dy[r] - dys[j][r];
                acc_re += h.get(r, j) * other;
                acc_im += h.get(r, d_t + j) * other;
            }
            ds_prev[j] -= acc_re;
            ds_prev[d_t + j] -= acc_im;
        }

        ds = ds_prev;
        for row in dp.iter_mut() {
            for v in row.iter_mut() {
                *v = 0.0;
            }
        }
    }

    Ok((loss, grad_tau, grad_xi))
}

fn x_of(sample: &OmegaSample) -> &[f64] {
    &sample.x
}

/// Mean loss of `params` over a full sample set.
pub fn sicnet_empirical_loss(
    params: &SicNetParameters,
    omega: &[OmegaSample],
    noise: &NoiseSpec,
    c: &RealConstellation,
    loss_kind: UnfoldedLoss,
) -> Result<f64> {
    assert!(!omega.is_empty());
    let mut acc = 0.0;
    for sample in omega {
        let (l, _, _) = sicnet_loss_and_grad(params, sample, noise, c, loss_kind)?;
        acc += l;
    }
    Ok(acc / omega.len() as f64)
}

/// SGD settings for the unfolded network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnfoldedTrainingConfig {
    pub loss: UnfoldedLoss,
    pub batch_size: usize,
    pub step_size: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for UnfoldedTrainingConfig {
    fn default() -> Self {
        Self {
            loss: UnfoldedLoss::Mse,
            batch_size: 200,
            step_size: 0.05,
            iterations: 500,
            seed: 0,
        }
    }
}

/// Outcome of a training run, with the loss audit against the identity
/// start.
#[derive(Debug, Clone)]
pub struct UnfoldedTrainReport {
    /// Mean loss of the starting parameters over the training set.
    pub initial_loss: f64,
    /// Mean loss of the returned parameters over the training set.
    pub final_loss: f64,
    /// Set when training ended worse than it started (beyond 1e-6).
    pub worsened: bool,
}

/// Mini-batch SGD over `(x, H, s)` triples.
pub fn sicnet_train(
    params: SicNetParameters,
    omega: &[OmegaSample],
    noise: &NoiseSpec,
    c: &RealConstellation,
    cfg: &UnfoldedTrainingConfig,
) -> Result<(SicNetParameters, UnfoldedTrainReport)> {
    if omega.is_empty() {
        return Err(Error::InvalidParameter("training set is empty".into()));
    }
    if cfg.batch_size == 0 || cfg.step_size < 0.0 {
        return Err(Error::InvalidParameter(
            "training config out of range".into(),
        ));
    }
    let n = omega.len();
    let batch = cfg.batch_size.min(n);
    let q_layers = params.layers();
    let mut rng = seeded(cfg.seed);

    let initial_loss = sicnet_empirical_loss(&params, omega, noise, c, cfg.loss)?;

    let mut current = params;
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut cursor = n;
    for it in 0..cfg.iterations {
        if cursor + batch > n {
            for i in (1..n).rev() {
                use rand::Rng;
                let j = rng.random_range(0..=i);
                order.swap(i, j);
            }
            cursor = 0;
        }
        let mut g_tau = vec![0.0; q_layers];
        let mut g_xi = vec![0.0; q_layers];
        let mut batch_loss = 0.0;
        for &idx in &order[cursor..cursor + batch] {
            let (l, dt, dx) =
                sicnet_loss_and_grad(&current, &omega[idx as usize], noise, c, cfg.loss)?;
            batch_loss += l;
            for q in 0..q_layers {
                g_tau[q] += dt[q];
                g_xi[q] += dx[q];
            }
        }
        cursor += batch;
        if !batch_loss.is_finite() {
            return Err(Error::Diverged(format!(
                "sicnet training loss became non-finite at iteration {it}"
            )));
        }
        let scale = cfg.step_size / batch as f64;
        let mut tau = current.tau.clone();
        let mut xi = current.xi.clone();
        for q in 0..q_layers {
            tau[q] -= scale * g_tau[q];
            xi[q] -= scale * g_xi[q];
        }
        if tau.iter().chain(xi.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Diverged(format!(
                "sicnet parameters became non-finite at iteration {it}"
            )));
        }
        current = SicNetParameters { tau, xi };
    }

    let final_loss = sicnet_empirical_loss(&current, omega, noise, c, cfg.loss)?;
    let worsened = final_loss > initial_loss + 1e-6;
    Ok((
        current,
        UnfoldedTrainReport {
            initial_loss,
            final_loss,
            worsened,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_gaussian_channel, transmit_linear};
    use crate::detect::map::{map_detect, ChannelKind};
    use crate::detect::sic::sic_detect;
    use crate::rng::seeded;
    use crate::signal::{make_constellation, ModulationKind};
    use rand::Rng;

    fn qpsk() -> RealConstellation {
        make_constellation(ModulationKind::Qpsk).unwrap()
    }

    fn random_sample(d_r: usize, d_t: usize, noise: &NoiseSpec, rng: &mut impl Rng) -> OmegaSample {
        let c = qpsk();
        let ch = sample_gaussian_channel(d_r, d_t, rng);
        let s = c.draw_symbols(2 * d_t, rng);
        let x = transmit_linear(&ch, &s, noise, rng).unwrap();
        OmegaSample {
            x,
            h: ch.h().clone(),
            s,
        }
    }

    #[test]
    fn layer_count_and_identity_init() {
        let p = init_sicnet(1).unwrap();
        assert_eq!(p.tau().len() + p.xi().len(), 2);
        assert!(init_sicnet(0).is_err());
    }

    #[test]
    fn identity_parameters_reproduce_base_sic() {
        let c = qpsk();
        let noise = NoiseSpec::new(0.4).unwrap();
        let mut rng = seeded(3);
        for _ in 0..50 {
            let sample = random_sample(2, 2, &noise, &mut rng);
            let p = init_sicnet(4).unwrap();
            let net = sicnet_forward(&p, &sample.h, &sample.x, &noise, &c).unwrap();
            let base = sic_detect(&sample.h, &sample.x, &noise, &c, 4).unwrap();
            for (a, b) in net.soft.iter().zip(&base.soft) {
                assert!(a == b, "soft symbols diverge: {a} vs {b}");
            }
            for (pa, pb) in net.probs.iter().zip(&base.probs) {
                for (a, b) in pa.iter().zip(pb) {
                    assert!(a == b);
                }
            }
            let dec = sicnet_detect(&p, &sample.h, &sample.x, &noise, &c).unwrap();
            assert_eq!(dec.hard_symbols, base.result.hard_symbols);
        }

        // decisions alone, over a large instance sweep
        let p = init_sicnet(3).unwrap();
        for _ in 0..10_000 {
            let sample = random_sample(2, 2, &noise, &mut rng);
            let net = sicnet_detect(&p, &sample.h, &sample.x, &noise, &c).unwrap();
            let base = sic_detect(&sample.h, &sample.x, &noise, &c, 3).unwrap();
            assert_eq!(net.hard_symbols, base.result.hard_symbols);
        }
    }

    #[test]
    fn zero_tau_annihilates() {
        let c = qpsk();
        let noise = NoiseSpec::new(0.4).unwrap();
        let mut rng = seeded(5);
        let sample = random_sample(2, 2, &noise, &mut rng);
        let p = SicNetParameters::from_scalars(vec![0.0; 3], vec![0.3; 3]).unwrap();
        let out = sicnet_forward(&p, &sample.h, &sample.x, &noise, &c).unwrap();
        assert!(out.soft.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn probabilities_normalize_per_layer() {
        let c = qpsk();
        let noise = NoiseSpec::new(0.3).unwrap();
        let mut rng = seeded(7);
        let sample = random_sample(3, 3, &noise, &mut rng);
        let p =
            SicNetParameters::from_scalars(vec![1.1, 0.9, 1.05], vec![0.1, -0.05, 0.2]).unwrap();
        for q in 1..=3 {
            let sub = SicNetParameters::from_scalars(p.tau()[..q].to_vec(), p.xi()[..q].to_vec())
                .unwrap();
            let out = sicnet_forward(&sub, &sample.h, &sample.x, &noise, &c).unwrap();
            for pv in &out.probs {
                assert!((pv.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let c = qpsk();
        let noise = NoiseSpec::new(0.5).unwrap();
        let mut rng = seeded(11);
        for loss_kind in [UnfoldedLoss::Mse, UnfoldedLoss::Kl] {
            for _ in 0..10 {
                let sample = random_sample(2, 2, &noise, &mut rng);
                let q = 3;
                let tau: Vec<f64> = (0..q).map(|_| 0.8 + 0.4 * rng.random::<f64>()).collect();
                let xi: Vec<f64> = (0..q).map(|_| 0.4 * rng.random::<f64>() - 0.2).collect();
                let p = SicNetParameters::from_scalars(tau, xi).unwrap();
                let (_, g_tau, g_xi) =
                    sicnet_loss_and_grad(&p, &sample, &noise, &c, loss_kind).unwrap();

                let eps = 1e-6;
                for k in 0..q {
                    for (is_tau, analytic) in [(true, g_tau[k]), (false, g_xi[k])] {
                        let mut plus = p.clone();
                        let mut minus = p.clone();
                        if is_tau {
                            plus.tau[k] += eps;
                            minus.tau[k] -= eps;
                        } else {
                            plus.xi[k] += eps;
                            minus.xi[k] -= eps;
                        }
                        let (lp, _, _) =
                            sicnet_loss_and_grad(&plus, &sample, &noise, &c, loss_kind).unwrap();
                        let (lm, _, _) =
                            sicnet_loss_and_grad(&minus, &sample, &noise, &c, loss_kind).unwrap();
                        let fd = (lp - lm) / (2.0 * eps);
                        let denom = fd.abs().max(analytic.abs()).max(1e-8);
                        let rel = (fd - analytic).abs() / denom;
                        assert!(
                            rel < 1e-5,
                            "{loss_kind:?} layer {k} tau={is_tau}: fd {fd} vs analytic {analytic}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn zero_step_size_is_a_no_op() {
        let c = qpsk();
        let noise = NoiseSpec::new(0.4).unwrap();
        let mut rng = seeded(13);
        let omega: Vec<OmegaSample> = (0..20)
            .map(|_| random_sample(2, 2, &noise, &mut rng))
            .collect();
        let p = init_sicnet(3).unwrap();
        let cfg = UnfoldedTrainingConfig {
            step_size: 0.0,
            iterations: 5,
            batch_size: 10,
            ..UnfoldedTrainingConfig::default()
        };
        let (trained, report) = sicnet_train(p.clone(), &omega, &noise, &c, &cfg).unwrap();
        assert_eq!(trained, p);
        assert_eq!(report.initial_loss, report.final_loss);
    }

    #[test]
    fn training_does_not_worsen_loss_and_is_deterministic() {
        let c = qpsk();
        // 10 dB at 4x4
        let noise = NoiseSpec::new(0.4).unwrap();
        let mut rng = seeded(17);
        let omega: Vec<OmegaSample> = (0..300)
            .map(|_| random_sample(4, 4, &noise, &mut rng))
            .collect();
        let cfg = UnfoldedTrainingConfig {
            loss: UnfoldedLoss::Mse,
            batch_size: 50,
            step_size: 0.02,
            iterations: 60,
            seed: 2,
        };
        let (a, report) = sicnet_train(init_sicnet(5).unwrap(), &omega, &noise, &c, &cfg).unwrap();
        assert!(
            !report.worsened,
            "loss went from {} to {}",
            report.initial_loss, report.final_loss
        );
        assert!(report.final_loss <= report.initial_loss + 1e-6);
        let (b, _) = sicnet_train(init_sicnet(5).unwrap(), &omega, &noise, &c, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_antenna_identity_matches_map() {
        let c = qpsk();
        let noise = NoiseSpec::new(0.5).unwrap();
        let mut rng = seeded(19);
        for _ in 0..100 {
            let sample = random_sample(2, 1, &noise, &mut rng);
            let p = init_sicnet(1).unwrap();
            let net = sicnet_detect(&p, &sample.h, &sample.x, &noise, &c).unwrap();
            let map = map_detect(&sample.h, &sample.x, &noise, &c, ChannelKind::Linear).unwrap();
            assert_eq!(net.hard_symbols, map.hard_symbols);
        }
    }

    #[test]
    fn snapshot_round_trip() {
        let p =
            SicNetParameters::from_scalars(vec![1.0625, 0.93, 1.001], vec![0.125, -0.0625, 0.25])
                .unwrap();
        let q = SicNetParameters::from_json(&p.to_json()).unwrap();
        assert_eq!(p, q);

        let bad = p
            .to_json()
            .replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(matches!(
            SicNetParameters::from_json(&bad),
            Err(Error::SnapshotVersion { .. })
        ));
    }
}

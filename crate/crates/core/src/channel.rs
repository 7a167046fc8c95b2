//! Channel generation and transmission models.
//!
//! Channels are drawn as complex matrices and carried together with their
//! real-valued block expansion. The correlated generator is a Kronecker
//! model with exponential correlation `(R)_{jk} = rho^{|j-k|}` on both
//! sides, standing in for geometry-based correlated models.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{cmat_mul_real, real_mul_cmat, sym_sqrt_psd, CMat, Mat};
use crate::signal::{complex_to_real_channel, draw_noise, NoiseSpec};

/// A channel draw: complex parent, real block expansion and generation
/// metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    hc: CMat,
    h: Mat,
    model_tag: &'static str,
    correlation_rho: Option<f64>,
}

impl ChannelRealization {
    fn new(hc: CMat, model_tag: &'static str, correlation_rho: Option<f64>) -> Self {
        let h = complex_to_real_channel(&hc);
        Self {
            hc,
            h,
            model_tag,
            correlation_rho,
        }
    }

    /// Real-valued `2 d_r x 2 d_t` channel matrix.
    pub fn h(&self) -> &Mat {
        &self.h
    }

    /// Complex `d_r x d_t` parent.
    pub fn hc(&self) -> &CMat {
        &self.hc
    }

    pub fn model_tag(&self) -> &'static str {
        self.model_tag
    }

    pub fn correlation_rho(&self) -> Option<f64> {
        self.correlation_rho
    }

    pub fn d_r(&self) -> usize {
        self.hc.rows()
    }

    pub fn d_t(&self) -> usize {
        self.hc.cols()
    }
}

fn draw_iid_complex(d_r: usize, d_t: usize, rng: &mut impl Rng) -> CMat {
    // circularly symmetric, unit variance per complex entry
    let sd = (0.5_f64).sqrt();
    let mut data = Vec::with_capacity(d_r * d_t);
    for _ in 0..d_r * d_t {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        data.push(Complex64::new(sd * re, sd * im));
    }
    CMat::from_vec(d_r, d_t, data)
}

/// I.i.d. circularly symmetric complex Gaussian channel, unit entry
/// variance.
pub fn sample_gaussian_channel(d_r: usize, d_t: usize, rng: &mut impl Rng) -> ChannelRealization {
    assert!(d_r >= 1 && d_t >= 1);
    ChannelRealization::new(draw_iid_complex(d_r, d_t, rng), "gaussian", None)
}

/// Exponential correlation matrix `(R)_{jk} = rho^|j-k|`.
pub fn exponential_correlation(n: usize, rho: f64) -> Mat {
    let mut r = Mat::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            r.set(j, k, rho.powi((j as i32 - k as i32).abs()));
        }
    }
    r
}

/// Kronecker-correlated channel `Hc = R_r^(1/2) G R_t^(1/2)` with
/// exponential correlation on both sides.
pub fn sample_correlated_channel(
    d_r: usize,
    d_t: usize,
    rho: f64,
    rng: &mut impl Rng,
) -> Result<ChannelRealization> {
    assert!(d_r >= 1 && d_t >= 1);
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidParameter(format!(
            "correlation rho must lie in [0, 1), got {rho}"
        )));
    }
    let g = draw_iid_complex(d_r, d_t, rng);
    let rr_sqrt = sym_sqrt_psd(&exponential_correlation(d_r, rho));
    let rt_sqrt = sym_sqrt_psd(&exponential_correlation(d_t, rho));
    let hc = cmat_mul_real(&real_mul_cmat(&rr_sqrt, &g), &rt_sqrt);
    Ok(ChannelRealization::new(hc, "correlated", Some(rho)))
}

/// Which generator to draw from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    Gaussian,
    Correlated { rho: f64 },
}

impl ChannelModel {
    pub fn sample(&self, d_r: usize, d_t: usize, rng: &mut impl Rng) -> Result<ChannelRealization> {
        match *self {
            ChannelModel::Gaussian => Ok(sample_gaussian_channel(d_r, d_t, rng)),
            ChannelModel::Correlated { rho } => sample_correlated_channel(d_r, d_t, rho, rng),
        }
    }
}

/// Time-invariant channels freeze one realization for every sample;
/// time-varying channels draw fresh per sample.
#[derive(Debug, Clone)]
pub struct ChannelRegime {
    model: ChannelModel,
    d_r: usize,
    d_t: usize,
    frozen: Option<ChannelRealization>,
}

impl ChannelRegime {
    /// Freeze a single draw made with `rng`.
    pub fn time_invariant(
        model: ChannelModel,
        d_r: usize,
        d_t: usize,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let frozen = Some(model.sample(d_r, d_t, rng)?);
        Ok(Self {
            model,
            d_r,
            d_t,
            frozen,
        })
    }

    pub fn time_varying(model: ChannelModel, d_r: usize, d_t: usize) -> Self {
        Self {
            model,
            d_r,
            d_t,
            frozen: None,
        }
    }

    pub fn is_time_invariant(&self) -> bool {
        self.frozen.is_some()
    }

    /// The frozen realization, when time-invariant.
    pub fn frozen(&self) -> Option<&ChannelRealization> {
        self.frozen.as_ref()
    }

    /// Channel for the next sample: the frozen draw or a fresh one.
    pub fn realization(&self, rng: &mut impl Rng) -> Result<ChannelRealization> {
        match &self.frozen {
            Some(ch) => Ok(ch.clone()),
            None => self.model.sample(self.d_r, self.d_t, rng),
        }
    }
}

/// Uniform B-bit quantizer: thresholds `r_b = sqrt(B) (-2^(B-1) + b) 2^-B`
/// and step `sqrt(B) 2^-B`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizerSpec {
    bits: u32,
    thresholds: Vec<f64>,
    step: f64,
}

impl QuantizerSpec {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// The `2^B - 1` strictly increasing thresholds.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Map one input to the midpoint of its bin. Bins are left-open
    /// right-closed, `(r_{b-1}, r_b]`; inputs above the top threshold
    /// saturate to the top midpoint `r_max + step/2`.
    pub fn quantize_value(&self, v: f64) -> f64 {
        let idx = self.thresholds.partition_point(|&t| t < v);
        if idx == self.thresholds.len() {
            self.thresholds[idx - 1] + self.step / 2.0
        } else {
            self.thresholds[idx] - self.step / 2.0
        }
    }

    /// All `2^B` output levels in increasing order.
    pub fn output_levels(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .thresholds
            .iter()
            .map(|&r| r - self.step / 2.0)
            .collect();
        out.push(self.thresholds[self.thresholds.len() - 1] + self.step / 2.0);
        out
    }

    /// Bin bounds `(lo, hi]` whose midpoint produced `out`; `lo` is `-inf`
    /// for the bottom bin and `hi` is `+inf` for the top bin.
    pub fn bin_bounds_for_output(&self, out: f64) -> Result<(f64, f64)> {
        let levels = self.output_levels();
        let b = levels
            .iter()
            .position(|&l| (l - out).abs() <= 1e-9)
            .ok_or(Error::InvalidQuantizerOutput(out))?;
        let lo = if b == 0 {
            f64::NEG_INFINITY
        } else {
            self.thresholds[b - 1]
        };
        let hi = if b == levels.len() - 1 {
            f64::INFINITY
        } else {
            self.thresholds[b]
        };
        Ok((lo, hi))
    }
}

/// Build the quantizer for `1 <= B <= 16` bits.
pub fn quantizer_thresholds(bits: u32) -> Result<QuantizerSpec> {
    if !(1..=16).contains(&bits) {
        return Err(Error::InvalidParameter(format!(
            "quantizer bits must be in 1..=16, got {bits}"
        )));
    }
    let b_f = bits as f64;
    let step = b_f.sqrt() * (2.0_f64).powi(-(bits as i32));
    let count = (1usize << bits) - 1;
    let thresholds: Vec<f64> = (1..=count)
        .map(|b| {
            b_f.sqrt()
                * (-(2.0_f64).powi(bits as i32 - 1) + b as f64)
                * (2.0_f64).powi(-(bits as i32))
        })
        .collect();
    Ok(QuantizerSpec {
        bits,
        thresholds,
        step,
    })
}

/// Entry-wise quantization.
pub fn quantize(v: &[f64], q: &QuantizerSpec) -> Vec<f64> {
    v.iter().map(|&x| q.quantize_value(x)).collect()
}

/// `x = H s + n`.
pub fn transmit_linear(
    ch: &ChannelRealization,
    s: &[f64],
    noise: &NoiseSpec,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    let h = ch.h();
    if s.len() != h.cols() {
        return Err(Error::DimensionMismatch {
            expected: h.cols(),
            got: s.len(),
        });
    }
    let mut x = h.matvec(s);
    let n = draw_noise(noise, h.rows(), rng);
    for (xi, ni) in x.iter_mut().zip(&n) {
        *xi += ni;
    }
    Ok(x)
}

/// `x = Q(H s + n)` with an entry-wise uniform quantizer.
pub fn transmit_quantized(
    ch: &ChannelRealization,
    s: &[f64],
    noise: &NoiseSpec,
    q: &QuantizerSpec,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    Ok(quantize(&transmit_linear(ch, s, noise, rng)?, q))
}

/// Transmit-side per-entry distortion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TxNonlinearity {
    Identity,
    /// Clamp each symbol to `[-level, level]`.
    Clip {
        level: f64,
    },
    Tanh,
}

impl TxNonlinearity {
    pub fn apply(&self, v: f64) -> f64 {
        match *self {
            TxNonlinearity::Identity => v,
            TxNonlinearity::Clip { level } => v.clamp(-level, level),
            TxNonlinearity::Tanh => v.tanh(),
        }
    }
}

/// `x = H f(s) + n` with a transmit-side distortion `f`.
pub fn transmit_tx_nonlinear(
    ch: &ChannelRealization,
    f: &TxNonlinearity,
    s: &[f64],
    noise: &NoiseSpec,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    let distorted: Vec<f64> = s.iter().map(|&v| f.apply(v)).collect();
    transmit_linear(ch, &distorted, noise, rng)
}

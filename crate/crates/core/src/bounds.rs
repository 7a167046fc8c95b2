//! Covering-number and tail-bound calculators for the trained detector
//! classes.
//!
//! All quantities derive from a small set of primitive inputs; the derived
//! constants (`alpha`, `beta`, `delta_1`, `delta_2`) are recomputed on
//! demand so they can never go stale against the primitives.

use crate::error::{Error, Result};
use crate::mlp::NetworkShape;

/// Primitive inputs of the covering and tail bounds.
///
/// `mu = E||x||^2`, `sigma_sq = Var(||x||^2)`, `nu` the second moment of
/// the log-likelihood envelope, and `delta` any value with
/// `delta^2 >= mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryBoundInputs {
    r: f64,
    max_width: usize,
    depth_l: usize,
    d_out: usize,
    d_s: usize,
    mu: f64,
    sigma_sq: f64,
    nu: f64,
    delta: f64,
}

impl TheoryBoundInputs {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        r: f64,
        max_width: usize,
        depth_l: usize,
        d_out: usize,
        d_s: usize,
        mu: f64,
        sigma_sq: f64,
        nu: f64,
        delta: f64,
    ) -> Result<Self> {
        let inputs = Self {
            r,
            max_width,
            depth_l,
            d_out,
            d_s,
            mu,
            sigma_sq,
            nu,
            delta,
        };
        if inputs.alpha() <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "alpha = R * max_width = {} must exceed 1",
                inputs.alpha()
            )));
        }
        if delta * delta < mu {
            return Err(Error::InvalidParameter(format!(
                "delta^2 = {} must dominate mu = {mu}",
                delta * delta
            )));
        }
        if mu < 0.0 || sigma_sq < 0.0 || nu < 0.0 || d_out < 2 {
            return Err(Error::InvalidParameter("bound inputs out of range".into()));
        }
        Ok(inputs)
    }

    /// Derive the structural constants from a network shape.
    pub fn from_shape(
        shape: &NetworkShape,
        r: f64,
        mu: f64,
        sigma_sq: f64,
        nu: f64,
        delta: f64,
    ) -> Result<Self> {
        Self::new(
            r,
            shape.max_width(),
            shape.depth(),
            shape.output_dim(),
            shape.param_count(),
            mu,
            sigma_sq,
            nu,
            delta,
        )
    }

    /// `alpha = R ||d||_inf`.
    pub fn alpha(&self) -> f64 {
        self.r * self.max_width as f64
    }

    /// `beta = alpha / (alpha - 1)`.
    pub fn beta(&self) -> f64 {
        let a = self.alpha();
        a / (a - 1.0)
    }

    /// `delta_1 = [(ln d_out + 1)(alpha^(l+1) delta + beta) - beta]^2`.
    pub fn delta1(&self) -> f64 {
        let a = self.alpha();
        let b = self.beta();
        let inner = ((self.d_out as f64).ln() + 1.0)
            * (a.powi(self.depth_l as i32 + 1) * self.delta + b)
            - b;
        inner * inner
    }

    /// `delta_2 = 3^(l+1) * 2^6 * alpha^l * (delta + beta)`.
    pub fn delta2(&self) -> f64 {
        3.0f64.powi(self.depth_l as i32 + 1)
            * 64.0
            * self.alpha().powi(self.depth_l as i32)
            * (self.delta + self.beta())
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn depth_l(&self) -> usize {
        self.depth_l
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma_sq(&self) -> f64 {
        self.sigma_sq
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Upper bound on the log covering number:
/// `ln C(eps) <= d_s ln[3^(l+1) 4 ||d||_inf alpha^l (delta + beta) / eps]`.
pub fn covering_bound(inputs: &TheoryBoundInputs, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let a = inputs.alpha();
    let arg = 3.0f64.powi(inputs.depth_l as i32 + 1)
        * 4.0
        * inputs.max_width as f64
        * a.powi(inputs.depth_l as i32)
        * (inputs.delta + inputs.beta())
        / eps;
    Ok(inputs.d_s as f64 * arg.ln())
}

/// Two-term tail bound on the generalization gap, raw and clipped, plus
/// whether the stated sample-size preconditions hold at this `|Z|`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailBound {
    pub raw: f64,
    pub clipped: f64,
    pub preconditions_met: bool,
    /// Smallest `|Z|` satisfying `|Z| >= 16 nu / eps^2`.
    pub min_z_moment: f64,
    /// Smallest `|Z|` satisfying `|Z| >= 1024 delta_1 d_s ln(delta_2/eps) / eps^2`.
    pub min_z_covering: f64,
}

/// `P(gap > eps) <= 8 exp(-|Z| eps^2 / (1024 delta_1)) + 4 sigma^2 / (|Z| (delta^2 - mu)^2)`.
pub fn generalization_tail_bound(
    inputs: &TheoryBoundInputs,
    z_size: usize,
    eps: f64,
) -> Result<TailBound> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if z_size == 0 {
        return Err(Error::InvalidParameter("|Z| must be positive".into()));
    }
    let gap = inputs.delta * inputs.delta - inputs.mu;
    if gap <= 0.0 {
        return Err(Error::InvalidParameter(
            "delta^2 must strictly exceed mu".into(),
        ));
    }
    let z = z_size as f64;
    let d1 = inputs.delta1();
    let exp_term = 8.0 * (-(z * eps * eps) / (1024.0 * d1)).exp();
    let cheb_term = 4.0 * inputs.sigma_sq / (z * gap * gap);
    let raw = exp_term + cheb_term;

    let min_z_moment = 16.0 * inputs.nu / (eps * eps);
    let min_z_covering =
        1024.0 * d1 * inputs.d_s as f64 * (inputs.delta2() / eps).ln() / (eps * eps);
    let preconditions_met = z >= min_z_moment && z >= min_z_covering;

    Ok(TailBound {
        raw,
        clipped: raw.clamp(0.0, 1.0),
        preconditions_met,
        min_z_moment,
        min_z_covering,
    })
}

/// Model-driven tail bound `8 exp(ln C_u - |Omega| eps^2 / (512 delta_u)) + P_Omega`.
pub fn modeldriven_tail_bound(
    ln_cu: f64,
    omega_size: usize,
    eps: f64,
    delta_u: f64,
    p_omega: f64,
) -> Result<f64> {
    if eps <= 0.0 || delta_u <= 0.0 {
        return Err(Error::InvalidParameter(
            "eps and delta_u must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&p_omega) {
        return Err(Error::InvalidParameter(format!(
            "P_Omega must lie in [0,1], got {p_omega}"
        )));
    }
    if omega_size == 0 {
        return Err(Error::InvalidParameter("|Omega| must be positive".into()));
    }
    Ok(8.0 * (ln_cu - omega_size as f64 * eps * eps / (512.0 * delta_u)).exp() + p_omega)
}

/// Envelope second moment `nu = E{[(ln d_out + 1)(alpha^(l+1)(||x|| + beta) - beta)]^2}`
/// estimated from input samples.
pub fn nu_from_samples(
    d_out: usize,
    alpha: f64,
    beta: f64,
    depth_l: usize,
    xs: &[Vec<f64>],
) -> f64 {
    assert!(!xs.is_empty());
    let log_term = (d_out as f64).ln() + 1.0;
    let a_pow = alpha.powi(depth_l as i32 + 1);
    let mean: f64 = xs
        .iter()
        .map(|x| {
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let env = log_term * (a_pow * (norm + beta) - beta);
            env * env
        })
        .sum::<f64>()
        / xs.len() as f64;
    mean
}

/// Mean and variance of `||x||^2` over input samples (`mu`, `sigma_sq`).
pub fn input_moments(xs: &[Vec<f64>]) -> (f64, f64) {
    assert!(xs.len() >= 2);
    let sq: Vec<f64> = xs.iter().map(|x| x.iter().map(|v| v * v).sum()).collect();
    (crate::stats::mean(&sq), crate::stats::variance(&sq))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs() -> TheoryBoundInputs {
        TheoryBoundInputs::new(2.0, 4, 1, 10, 10, 1.5, 2.0, 50.0, 2.0).unwrap()
    }

    #[test]
    fn construction_validates() {
        // alpha <= 1
        assert!(TheoryBoundInputs::new(0.2, 4, 1, 10, 10, 1.0, 1.0, 1.0, 2.0).is_err());
        // delta^2 < mu
        assert!(TheoryBoundInputs::new(2.0, 4, 1, 10, 10, 5.0, 1.0, 1.0, 2.0).is_err());
        assert!(inputs().alpha() > 1.0);
    }

    #[test]
    fn covering_bound_matches_arithmetic_recomputation() {
        let inp = inputs();
        let eps = 0.25;
        let got = covering_bound(&inp, eps).unwrap();
        // spreadsheet-style independent evaluation
        let alpha = 2.0 * 4.0;
        let beta = alpha / (alpha - 1.0);
        let expect = 10.0 * (9.0 * 4.0 * 4.0 * alpha * (2.0 + beta) / eps).ln();
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
    }

    #[test]
    fn covering_bound_eps_doubling_identity() {
        let inp = inputs();
        let a = covering_bound(&inp, 0.1).unwrap();
        let b = covering_bound(&inp, 0.2).unwrap();
        assert!((a - b - inp.d_s() as f64 * (2.0f64).ln()).abs() < 1e-10);
    }

    #[test]
    fn covering_bound_monotone_in_ds() {
        let small = TheoryBoundInputs::new(2.0, 4, 1, 10, 10, 1.5, 2.0, 50.0, 2.0).unwrap();
        let large = TheoryBoundInputs::new(2.0, 4, 1, 10, 20, 1.5, 2.0, 50.0, 2.0).unwrap();
        assert!(covering_bound(&large, 0.25).unwrap() > covering_bound(&small, 0.25).unwrap());
    }

    #[test]
    fn tail_bound_matches_arithmetic_recomputation() {
        let inp = inputs();
        let eps = 0.5;
        let z = 100_000usize;
        let got = generalization_tail_bound(&inp, z, eps).unwrap();
        let alpha = 8.0f64;
        let beta = alpha / (alpha - 1.0);
        let d1 = {
            let inner = ((10.0f64).ln() + 1.0) * (alpha * alpha * 2.0 + beta) - beta;
            inner * inner
        };
        let expect = 8.0 * (-(z as f64) * eps * eps / (1024.0 * d1)).exp()
            + 4.0 * 2.0 / (z as f64 * (4.0 - 1.5) * (4.0 - 1.5));
        assert!((got.raw - expect).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_nonincreasing_in_z() {
        let inp = inputs();
        let mut last = f64::INFINITY;
        for z in [10usize, 100, 10_000, 1_000_000] {
            let b = generalization_tail_bound(&inp, z, 0.5).unwrap();
            assert!(b.raw <= last);
            last = b.raw;
        }
    }

    #[test]
    fn tail_bound_vanishes_for_huge_z() {
        let inp = inputs();
        let b = generalization_tail_bound(&inp, 1_000_000_000_000, 0.5).unwrap();
        assert!(b.raw < 1e-6, "bound {}", b.raw);
        assert!(b.preconditions_met);
    }

    #[test]
    fn tail_bound_can_exceed_one_when_small() {
        let inp = inputs();
        let b = generalization_tail_bound(&inp, 10, 0.5).unwrap();
        assert!(b.raw > 1.0);
        assert_eq!(b.clipped, 1.0);
        assert!(!b.preconditions_met);
    }

    #[test]
    fn modeldriven_bound_formula() {
        // solve 8 exp(-t) = 1 -> t = ln 8; with ln_cu = 0, P = 0 the bound is 1
        let eps = 0.5;
        let delta_u = 1.0;
        let omega = (512.0 * delta_u * (8.0f64).ln() / (eps * eps)).round() as usize;
        let b = modeldriven_tail_bound(0.0, omega, eps, delta_u, 0.0).unwrap();
        assert!((b - 1.0).abs() < 1e-3, "bound {b}");

        // nonincreasing in |Omega|
        assert!(
            modeldriven_tail_bound(0.0, 2 * omega, eps, delta_u, 0.0).unwrap()
                < modeldriven_tail_bound(0.0, omega, eps, delta_u, 0.0).unwrap()
        );

        // additive in P_Omega
        let p0 = modeldriven_tail_bound(1.0, 1000, eps, delta_u, 0.0).unwrap();
        let p1 = modeldriven_tail_bound(1.0, 1000, eps, delta_u, 0.25).unwrap();
        assert!((p1 - p0 - 0.25).abs() < 1e-12);
    }

    #[test]
    fn nu_and_moments_from_samples() {
        let xs = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![1.0, 1.0]];
        let (mu, var) = input_moments(&xs);
        // ||x||^2 = 1, 4, 2
        assert!((mu - 7.0 / 3.0).abs() < 1e-12);
        let expect_var = ((1.0f64 - 7.0 / 3.0).powi(2)
            + (4.0f64 - 7.0 / 3.0).powi(2)
            + (2.0f64 - 7.0 / 3.0).powi(2))
            / 2.0;
        assert!((var - expect_var).abs() < 1e-12);

        let nu = nu_from_samples(16, 8.0, 8.0 / 7.0, 1, &xs);
        // independent recomputation for the first sample only
        let log_term = (16.0f64).ln() + 1.0;
        let env0 = log_term * (64.0 * (1.0 + 8.0 / 7.0) - 8.0 / 7.0);
        assert!(nu > env0 * env0 / 3.0);
    }
}

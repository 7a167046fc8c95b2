//! Gaussian CDF helpers and simple moment estimators.

use std::f64::consts::SQRT_2;

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// `P(lo < X <= hi)` for `X ~ N(mean, sigma^2)`, stable in both tails.
///
/// `lo` may be `-inf` and `hi` may be `+inf`.
pub fn normal_interval_prob(lo: f64, hi: f64, mean: f64, sigma: f64) -> f64 {
    debug_assert!(sigma > 0.0);
    debug_assert!(lo <= hi);
    let a = if lo == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        (lo - mean) / sigma
    };
    let b = if hi == f64::INFINITY {
        f64::INFINITY
    } else {
        (hi - mean) / sigma
    };
    if a == f64::NEG_INFINITY && b == f64::INFINITY {
        return 1.0;
    }
    // erfc is accurate in the right tail; mirror the left tail onto it.
    if a >= 0.0 {
        let ea = if a == f64::INFINITY {
            0.0
        } else {
            libm::erfc(a / SQRT_2)
        };
        let eb = if b == f64::INFINITY {
            0.0
        } else {
            libm::erfc(b / SQRT_2)
        };
        (0.5 * (ea - eb)).max(0.0)
    } else if b <= 0.0 {
        let ea = if a == f64::NEG_INFINITY {
            0.0
        } else {
            libm::erfc(-a / SQRT_2)
        };
        let eb = libm::erfc(-b / SQRT_2);
        (0.5 * (eb - ea)).max(0.0)
    } else {
        let ca = if a == f64::NEG_INFINITY {
            0.0
        } else {
            0.5 * libm::erfc(-a / SQRT_2)
        };
        let cb = if b == f64::INFINITY {
            1.0
        } else {
            1.0 - 0.5 * libm::erfc(b / SQRT_2)
        };
        (cb - ca).max(0.0)
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty());
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    assert!(xs.len() >= 2);
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Standard error of the sample mean.
pub fn std_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Log of `sum(exp(xs))` with max-subtraction.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|x| (x - m).exp()).sum();
    m + s.ln()
}

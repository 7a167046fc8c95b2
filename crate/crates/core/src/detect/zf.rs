//! Zero-forcing detection: least-squares channel inversion plus a nearest
//! point hard decision.

use crate::error::{Error, Result};
use crate::linalg::{solve, sym_psd_condition, Mat};
use crate::signal::RealConstellation;

/// Condition-number guard on `H^T H`.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Least-squares soft estimate `(H^T H)^-1 H^T x`.
pub fn zf_detect(h: &Mat, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != h.rows() {
        return Err(Error::DimensionMismatch {
            expected: h.rows(),
            got: x.len(),
        });
    }
    let gram = h.gram();
    let cond = sym_psd_condition(&gram);
    if !cond.is_finite() || cond > CONDITION_LIMIT {
        return Err(Error::IllConditioned(cond));
    }
    solve(&gram, &h.matvec_t(x))
}

/// Per-coordinate nearest alphabet point; exact midpoints resolve to the
/// smaller point.
pub fn hard_decide(soft: &[f64], c: &RealConstellation) -> Vec<f64> {
    soft.iter().map(|&v| c.nearest(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_gaussian_channel;
    use crate::rng::seeded;
    use crate::signal::{make_constellation, ModulationKind};

    #[test]
    fn identity_channel_passes_through() {
        let h = Mat::identity(4);
        let x = vec![0.1, -0.2, 0.3, -0.4];
        let soft = zf_detect(&h, &x).unwrap();
        for (a, b) in soft.iter().zip(&x) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn noiseless_recovery() {
        let c = make_constellation(ModulationKind::Qpsk).unwrap();
        let mut rng = seeded(3);
        let ch = sample_gaussian_channel(3, 2, &mut rng);
        let s = c.draw_symbols(4, &mut rng);
        let x = ch.h().matvec(&s);
        let soft = zf_detect(ch.h(), &x).unwrap();
        for (a, b) in soft.iter().zip(&s) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn matches_normal_equations_oracle() {
        let mut rng = seeded(8);
        let ch = sample_gaussian_channel(4, 2, &mut rng);
        let h = ch.h();
        let x: Vec<f64> = (0..8).map(|i| (i as f64 * 0.37).sin()).collect();
        let soft = zf_detect(h, &x).unwrap();
        // independent check: H^T (H soft) == H^T x
        let lhs = h.matvec_t(&h.matvec(&soft));
        let rhs = h.matvec_t(&x);
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn singular_channel_is_rejected() {
        let h = Mat::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]);
        assert!(matches!(
            zf_detect(&h, &[1.0, 1.0]),
            Err(Error::IllConditioned(_))
        ));
    }

    #[test]
    fn hard_decision_tie_goes_to_smaller_point() {
        let c = make_constellation(ModulationKind::Qpsk).unwrap();
        let dec = hard_decide(&[0.0, 0.5, -0.5], &c);
        assert_eq!(dec[0], c.points()[0]);
        assert_eq!(dec[1], c.points()[1]);
        assert_eq!(dec[2], c.points()[0]);
    }
}

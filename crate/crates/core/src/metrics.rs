//! Detection and statistical metrics: BER, empirical log-likelihood, KL
//! and Hellinger discrepancies, and the approximation/generalization
//! error split of a trained posterior model.
//!
//! Posterior models enter as closures mapping an input to a full
//! distribution over the one-hot classes, so the exact enumeration oracle
//! and any trained network evaluate through the same interface.

use crate::error::{Error, Result};
use crate::signal::{OneHotTarget, RealConstellation};
use crate::stats::std_error;

/// Probability floor: anything below is treated as underflow and flagged,
/// never silently clamped into results.
pub const PROB_FLOOR: f64 = 1e-300;

/// Count sign-bit errors between decided and transmitted symbol vectors.
///
/// Each real symbol of a 2-point alphabet carries one bit in its sign.
pub fn count_bit_errors(decided: &[f64], truth: &[f64]) -> Result<usize> {
    if decided.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: decided.len(),
        });
    }
    Ok(decided
        .iter()
        .zip(truth)
        .filter(|(a, b)| (**a > 0.0) != (**b > 0.0))
        .count())
}

/// Fraction of mismatched bits under the sign mapping.
pub fn ber(decided: &[f64], truth: &[f64], c: &RealConstellation) -> Result<f64> {
    if c.size() != 2 {
        return Err(Error::UnsupportedModulation(format!(
            "sign-bit mapping needs a 2-point alphabet, got {}",
            c.label()
        )));
    }
    if truth.is_empty() {
        return Err(Error::InvalidParameter("empty symbol vectors".into()));
    }
    Ok(count_bit_errors(decided, truth)? as f64 / truth.len() as f64)
}

/// Mean `ln p(u|x)` of a posterior model over a labeled test set.
///
/// Fails with an underflow flag if any evaluated probability drops below
/// [`PROB_FLOOR`].
pub fn empirical_loglik<F>(model: F, set: &[(Vec<f64>, OneHotTarget)]) -> Result<f64>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if set.is_empty() {
        return Err(Error::InvalidParameter("empty test set".into()));
    }
    let mut acc = 0.0;
    for (x, u) in set {
        let probs = model(x);
        let p = probs[u.class()];
        if p < PROB_FLOOR {
            return Err(Error::ProbabilityUnderflow);
        }
        acc += p.ln();
    }
    Ok(acc / set.len() as f64)
}

/// Monte-Carlo KL estimate `E_x sum_u p_o(u|x) ln(p_o/p_model)`, exact
/// over the finite alphabet and averaged over the test inputs.
///
/// Each per-input term is clamped at zero against numerical noise; a
/// model probability below [`PROB_FLOOR`] where the oracle has mass is an
/// underflow error.
pub fn empirical_kl<O, M>(oracle: O, model: M, inputs: &[Vec<f64>]) -> Result<f64>
where
    O: Fn(&[f64]) -> Vec<f64>,
    M: Fn(&[f64]) -> Vec<f64>,
{
    Ok(per_input_kl(oracle, model, inputs)?.0)
}

/// KL estimate together with the standard error of its input average.
pub fn empirical_kl_with_se<O, M>(oracle: O, model: M, inputs: &[Vec<f64>]) -> Result<(f64, f64)>
where
    O: Fn(&[f64]) -> Vec<f64>,
    M: Fn(&[f64]) -> Vec<f64>,
{
    let (mean, terms) = per_input_kl(oracle, model, inputs)?;
    let se = if terms.len() >= 2 {
        std_error(&terms)
    } else {
        0.0
    };
    Ok((mean, se))
}

fn per_input_kl<O, M>(oracle: O, model: M, inputs: &[Vec<f64>]) -> Result<(f64, Vec<f64>)>
where
    O: Fn(&[f64]) -> Vec<f64>,
    M: Fn(&[f64]) -> Vec<f64>,
{
    if inputs.is_empty() {
        return Err(Error::InvalidParameter("empty input set".into()));
    }
    let mut terms = Vec::with_capacity(inputs.len());
    for x in inputs {
        let p = oracle(x);
        let q = model(x);
        if p.len() != q.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                got: q.len(),
            });
        }
        let mut term = 0.0;
        for (pi, qi) in p.iter().zip(&q) {
            if *pi == 0.0 {
                continue;
            }
            if *qi < PROB_FLOOR {
                return Err(Error::ProbabilityUnderflow);
            }
            term += pi * (pi / qi).ln();
        }
        terms.push(term.max(0.0));
    }
    let mean = terms.iter().sum::<f64>() / terms.len() as f64;
    Ok((mean, terms))
}

/// KL divergence between two plain distributions.
pub fn discrete_kl(p: &[f64], q: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    check_distribution(q)?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let mut acc = 0.0;
    for (pi, qi) in p.iter().zip(q) {
        if *pi == 0.0 {
            continue;
        }
        if *qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += pi * (pi / qi).ln();
    }
    Ok(acc.max(0.0))
}

/// Hellinger metric `sqrt(1/2 sum (sqrt(p) - sqrt(q))^2)`.
pub fn hellinger(p: &[f64], q: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    check_distribution(q)?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    let acc: f64 = p
        .iter()
        .zip(q)
        .map(|(pi, qi)| {
            let d = pi.sqrt() - qi.sqrt();
            d * d
        })
        .sum();
    Ok((0.5 * acc).sqrt())
}

/// Slack of the bound `gamma^2 <= D_KL / 2`; nonnegative up to float
/// noise for every distribution pair.
pub fn check_hellinger_bound(p: &[f64], q: &[f64]) -> Result<f64> {
    let gamma = hellinger(p, q)?;
    let kl = discrete_kl(p, q)?;
    Ok(0.5 * kl - gamma * gamma)
}

fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidParameter("empty distribution".into()));
    }
    if p.iter().any(|&v| v < 0.0) {
        return Err(Error::InvalidParameter("negative probability".into()));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "distribution sums to {sum}"
        )));
    }
    Ok(())
}

/// The split of a trained model's log-likelihood gap against the oracle
/// into a capacity part and a data part, both in per-sample nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorDecomposition {
    /// `J(oracle) - J(reference)`: how far the best-effort reference model
    /// of this architecture falls short of the oracle.
    pub approximation: f64,
    /// `J(reference) - J(trained)`: how much the finite training run loses
    /// against the reference.
    pub generalization: f64,
}

impl ErrorDecomposition {
    pub fn total(&self) -> f64 {
        self.approximation + self.generalization
    }
}

/// Compute the decomposition on a shared labeled test set.
pub fn error_decomposition<O, R, T>(
    oracle: O,
    reference: R,
    trained: T,
    set: &[(Vec<f64>, OneHotTarget)],
) -> Result<ErrorDecomposition>
where
    O: Fn(&[f64]) -> Vec<f64>,
    R: Fn(&[f64]) -> Vec<f64>,
    T: Fn(&[f64]) -> Vec<f64>,
{
    let j_oracle = empirical_loglik(&oracle, set)?;
    let j_ref = empirical_loglik(&reference, set)?;
    let j_trained = empirical_loglik(&trained, set)?;
    Ok(ErrorDecomposition {
        approximation: j_oracle - j_ref,
        generalization: j_ref - j_trained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::signal::{make_constellation, ModulationKind};
    use rand::Rng;

    fn qpsk() -> RealConstellation {
        make_constellation(ModulationKind::Qpsk).unwrap()
    }

    #[test]
    fn ber_counting() {
        let c = qpsk();
        let a = c.points()[1];
        let b = c.points()[0];
        assert_eq!(ber(&[a, a, b, b], &[a, a, b, b], &c).unwrap(), 0.0);
        assert_eq!(ber(&[b, b, a, a], &[a, a, b, b], &c).unwrap(), 1.0);
        assert_eq!(ber(&[a, a, b, a], &[a, a, b, b], &c).unwrap(), 0.25);
        assert!(ber(&[a], &[a, b], &c).is_err());
    }

    #[test]
    fn loglik_of_uniform_model() {
        let set: Vec<(Vec<f64>, OneHotTarget)> = (0..10)
            .map(|i| (vec![i as f64], OneHotTarget::new(1 + (i % 16), 16).unwrap()))
            .collect();
        let uniform = |_: &[f64]| vec![1.0 / 16.0; 16];
        let j = empirical_loglik(uniform, &set).unwrap();
        assert!((j - (1.0f64 / 16.0).ln()).abs() < 1e-12);

        // duplicated test set leaves the mean unchanged
        let doubled: Vec<_> = set.iter().chain(set.iter()).cloned().collect();
        assert_eq!(j, empirical_loglik(uniform, &doubled).unwrap());
    }

    #[test]
    fn loglik_flags_underflow() {
        let mut probs = vec![0.0; 4];
        probs[0] = 1.0;
        let set = vec![(vec![0.0], OneHotTarget::new(2, 4).unwrap())];
        let model = move |_: &[f64]| probs.clone();
        assert!(matches!(
            empirical_loglik(model, &set),
            Err(Error::ProbabilityUnderflow)
        ));
    }

    #[test]
    fn oracle_wins_gibbs_inequality_in_expectation() {
        // oracle posterior evaluated on its own samples beats a perturbed
        // model on average over resamples
        let mut rng = seeded(31);
        let oracle_dist = vec![0.55, 0.25, 0.15, 0.05];
        let model_dist = vec![0.25, 0.25, 0.25, 0.25];
        let mut oracle_total = 0.0;
        let mut model_total = 0.0;
        for _ in 0..20 {
            let set: Vec<(Vec<f64>, OneHotTarget)> = (0..400)
                .map(|_| {
                    let r: f64 = rng.random();
                    let mut cum = 0.0;
                    let mut cls = 3;
                    for (k, &p) in oracle_dist.iter().enumerate() {
                        cum += p;
                        if r < cum {
                            cls = k;
                            break;
                        }
                    }
                    (vec![0.0], OneHotTarget::new(cls + 1, 4).unwrap())
                })
                .collect();
            let od = oracle_dist.clone();
            let md = model_dist.clone();
            oracle_total += empirical_loglik(move |_| od.clone(), &set).unwrap();
            model_total += empirical_loglik(move |_| md.clone(), &set).unwrap();
        }
        assert!(oracle_total > model_total);
    }

    #[test]
    fn kl_of_model_against_itself_is_zero() {
        let dist = vec![0.4, 0.3, 0.2, 0.1];
        let d = dist.clone();
        let d2 = dist.clone();
        let kl = empirical_kl(
            move |_: &[f64]| d.clone(),
            move |_: &[f64]| d2.clone(),
            &[vec![0.0], vec![1.0]],
        )
        .unwrap();
        assert!(kl.abs() < 1e-10);
    }

    #[test]
    fn kl_uniform_model_closed_form() {
        // oracle concentrated, model uniform: KL = ln K - H(oracle)
        let oracle_dist: Vec<f64> = vec![0.7, 0.2, 0.08, 0.02];
        let entropy: f64 = -oracle_dist.iter().map(|p| p * p.ln()).sum::<f64>();
        let od = oracle_dist.clone();
        let kl = empirical_kl(
            move |_: &[f64]| od.clone(),
            |_: &[f64]| vec![0.25; 4],
            &[vec![0.0]],
        )
        .unwrap();
        assert!((kl - ((4.0f64).ln() - entropy)).abs() < 1e-12);
    }

    #[test]
    fn kl_is_nonnegative_on_random_pairs() {
        let mut rng = seeded(37);
        for _ in 0..200 {
            let k = rng.random_range(2..8);
            let p = dirichlet(k, &mut rng);
            let q = dirichlet(k, &mut rng);
            let pp = p.clone();
            let qq = q.clone();
            let kl = empirical_kl(
                move |_: &[f64]| pp.clone(),
                move |_: &[f64]| qq.clone(),
                &[vec![0.0]],
            )
            .unwrap();
            assert!(kl >= 0.0);
        }
    }

    fn dirichlet(k: usize, rng: &mut impl Rng) -> Vec<f64> {
        // unit-parameter Dirichlet via normalized exponentials
        let draws: Vec<f64> = (0..k)
            .map(|_| -rng.random::<f64>().max(1e-12).ln())
            .collect();
        let sum: f64 = draws.iter().sum();
        draws.into_iter().map(|d| d / sum).collect()
    }

    #[test]
    fn hellinger_extremes() {
        let p = vec![0.5, 0.5];
        assert!(hellinger(&p, &p).unwrap().abs() < 1e-15);
        assert!((hellinger(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(check_hellinger_bound(&p, &p).unwrap().abs() < 1e-15);
        assert!(hellinger(&[0.5, 0.4], &p).is_err());
    }

    #[test]
    fn hellinger_bound_fuzz() {
        let mut rng = seeded(41);
        for _ in 0..10_000 {
            let k = rng.random_range(2..=16);
            let p = dirichlet(k, &mut rng);
            let q = dirichlet(k, &mut rng);
            let slack = check_hellinger_bound(&p, &q).unwrap();
            assert!(slack >= -1e-12, "slack {slack}");
        }
    }

    #[test]
    fn decomposition_degenerate_cases() {
        let set: Vec<(Vec<f64>, OneHotTarget)> = (0..50)
            .map(|i| (vec![i as f64], OneHotTarget::new(1 + (i % 4), 4).unwrap()))
            .collect();
        let m = |_: &[f64]| vec![0.25; 4];

        // trained == reference: generalization part is exactly zero
        let d = error_decomposition(m, m, m, &set).unwrap();
        assert_eq!(d.generalization, 0.0);
        assert_eq!(d.approximation, 0.0);
        assert_eq!(d.total(), 0.0);
    }
}

//! Constellations, complex/real reparameterization, one-hot targets and
//! noise/SNR bookkeeping.
//!
//! The complex model `xc = Hc sc + nc` is rewritten as the real model
//! `x = H s + n` by stacking real and imaginary parts; all detectors in
//! this crate operate on the real model. Symbols are equiprobable and the
//! default QPSK alphabet is normalized to unit complex symbol energy, so
//! the real alphabet is `{-1/sqrt(2), +1/sqrt(2)}`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{CMat, Mat};

/// Supported modulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulationKind {
    Qpsk,
    Bpsk,
}

/// The real alphabet `S` with its per-symbol energy.
#[derive(Debug, Clone, PartialEq)]
pub struct RealConstellation {
    points: Vec<f64>,
    symbol_energy: f64,
    label: &'static str,
}

impl RealConstellation {
    /// Points in strictly increasing order.
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Mean square of a uniformly drawn real symbol, `E{s^2}`.
    pub fn symbol_energy(&self) -> f64 {
        self.symbol_energy
    }

    pub fn label(&self) -> &'static str {
        self.label
    }

    /// Nearest alphabet point; exact midpoints resolve to the smaller value.
    pub fn nearest(&self, v: f64) -> f64 {
        let mut best = self.points[0];
        let mut best_d = (v - best).abs();
        for &p in &self.points[1..] {
            let d = (v - p).abs();
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
        best
    }

    /// Position of `v` in the alphabet (tolerance 1e-12).
    pub fn index_of(&self, v: f64) -> Result<usize> {
        self.points
            .iter()
            .position(|&p| (p - v).abs() <= 1e-12)
            .ok_or(Error::SymbolNotInAlphabet(v))
    }

    /// Uniformly drawn symbols.
    pub fn draw_symbols(&self, n: usize, rng: &mut impl Rng) -> Vec<f64> {
        (0..n)
            .map(|_| self.points[rng.random_range(0..self.points.len())])
            .collect()
    }

    /// All 2-D symbol pairs `(re, im)` in one-hot sub-index order
    /// (imaginary digit major).
    pub fn symbol_pairs(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.points.len() * self.points.len());
        for &im in &self.points {
            for &re in &self.points {
                out.push((re, im));
            }
        }
        out
    }
}

/// Build a normalized alphabet for `kind`.
pub fn make_constellation(kind: ModulationKind) -> Result<RealConstellation> {
    match kind {
        ModulationKind::Qpsk => {
            let a = 1.0 / 2.0_f64.sqrt();
            Ok(RealConstellation {
                points: vec![-a, a],
                symbol_energy: a * a,
                label: "qpsk",
            })
        }
        ModulationKind::Bpsk => Ok(RealConstellation {
            points: vec![-1.0, 1.0],
            symbol_energy: 1.0,
            label: "bpsk",
        }),
    }
}

/// One-hot target: 1-based position of the transmitted symbol combination
/// in the enumeration of `S^(2 d_t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneHotTarget {
    index: usize,
    length: usize,
}

impl OneHotTarget {
    pub fn new(index: usize, length: usize) -> Result<Self> {
        if index == 0 || index > length {
            return Err(Error::IndexOutOfRange {
                index,
                limit: length,
            });
        }
        Ok(Self { index, length })
    }

    /// 1-based index of the nonzero entry.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// 0-based class position, for array indexing.
    pub fn class(&self) -> usize {
        self.index - 1
    }
}

/// Fold per-coordinate alphabet digits `j` into the 1-based one-hot index:
/// `sum_i (j[d_t+i]*|S| + j[i]) * |S|^(2i) + 1`.
pub fn one_hot_index(j: &[usize], alphabet_size: usize, d_t: usize) -> Result<usize> {
    assert_eq!(j.len(), 2 * d_t, "digit vector must have length 2*d_t");
    for &jk in j {
        if jk >= alphabet_size {
            return Err(Error::IndexOutOfRange {
                index: jk,
                limit: alphabet_size - 1,
            });
        }
    }
    let mut index = 0usize;
    let mut base = 1usize;
    for i in 0..d_t {
        index += (j[d_t + i] * alphabet_size + j[i]) * base;
        base *= alphabet_size * alphabet_size;
    }
    Ok(index + 1)
}

/// Inverse of [`one_hot_index`]: digits of a 1-based index.
pub fn index_to_digits(index: usize, alphabet_size: usize, d_t: usize) -> Vec<usize> {
    let mut j = vec![0usize; 2 * d_t];
    let mut m = index - 1;
    let sq = alphabet_size * alphabet_size;
    for i in 0..d_t {
        let r = m % sq;
        j[i] = r % alphabet_size;
        j[d_t + i] = r / alphabet_size;
        m /= sq;
    }
    j
}

/// Encode a symbol vector as its one-hot target.
pub fn one_hot_encode(s: &[f64], c: &RealConstellation) -> Result<OneHotTarget> {
    assert!(
        s.len().is_multiple_of(2),
        "symbol vector must have even length"
    );
    let d_t = s.len() / 2;
    let mut j = Vec::with_capacity(s.len());
    for &v in s {
        j.push(c.index_of(v)?);
    }
    let index = one_hot_index(&j, c.size(), d_t)?;
    let length = c.size().pow(2 * d_t as u32);
    OneHotTarget::new(index, length)
}

/// Decode a one-hot target back to its symbol vector.
pub fn one_hot_decode(t: &OneHotTarget, c: &RealConstellation, d_t: usize) -> Result<Vec<f64>> {
    let expected = c.size().pow(2 * d_t as u32);
    if t.length() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: t.length(),
        });
    }
    let j = index_to_digits(t.index(), c.size(), d_t);
    Ok(j.into_iter().map(|ji| c.points()[ji]).collect())
}

/// Symbol vector for a raw 1-based index (enumeration order of the one-hot
/// map).
pub fn symbol_vector_for_index(index: usize, c: &RealConstellation, d_t: usize) -> Vec<f64> {
    index_to_digits(index, c.size(), d_t)
        .into_iter()
        .map(|ji| c.points()[ji])
        .collect()
}

/// Complex-noise variance per complex entry; the real model splits it
/// evenly over the two real dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    sigma_n_sq: f64,
}

impl NoiseSpec {
    pub fn new(sigma_n_sq: f64) -> Result<Self> {
        if sigma_n_sq <= 0.0 || sigma_n_sq.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "noise variance must be positive, got {sigma_n_sq}"
            )));
        }
        Ok(Self { sigma_n_sq })
    }

    pub fn sigma_n_sq(&self) -> f64 {
        self.sigma_n_sq
    }

    /// Variance of each real-model noise entry.
    pub fn per_real_variance(&self) -> f64 {
        self.sigma_n_sq / 2.0
    }
}

/// Stack `[Re(v); Im(v)]`.
pub fn complex_to_real_vector(v: &[Complex64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len());
    out.extend(v.iter().map(|z| z.re));
    out.extend(v.iter().map(|z| z.im));
    out
}

/// Block expansion `[Re(H), -Im(H); Im(H), Re(H)]`.
pub fn complex_to_real_channel(hc: &CMat) -> Mat {
    let (dr, dt) = (hc.rows(), hc.cols());
    let mut h = Mat::zeros(2 * dr, 2 * dt);
    for r in 0..dr {
        for c in 0..dt {
            let z = hc.get(r, c);
            h.set(r, c, z.re);
            h.set(r, dt + c, -z.im);
            h.set(dr + r, c, z.im);
            h.set(dr + r, dt + c, z.re);
        }
    }
    h
}

/// I.i.d. real-model noise, `N(0, sigma_n_sq/2)` per entry.
pub fn draw_noise(noise: &NoiseSpec, dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    assert!(dim >= 1);
    let sd = noise.per_real_variance().sqrt();
    (0..dim)
        .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Monte-Carlo estimate of `10 log10(E||Hs||^2 / E||n||^2)`.
pub fn estimate_snr_db(
    h: &Mat,
    c: &RealConstellation,
    noise: &NoiseSpec,
    n_mc: usize,
    rng: &mut impl Rng,
) -> f64 {
    assert!(n_mc >= 1);
    let mut signal = 0.0;
    let mut noise_pow = 0.0;
    for _ in 0..n_mc {
        let s = c.draw_symbols(h.cols(), rng);
        let hs = h.matvec(&s);
        signal += hs.iter().map(|v| v * v).sum::<f64>();
        let n = draw_noise(noise, h.rows(), rng);
        noise_pow += n.iter().map(|v| v * v).sum::<f64>();
    }
    10.0 * (signal / noise_pow).log10()
}

/// Closed-form SNR for i.i.d. symbols: `tr(H^T H) E{s^2} / (rows * sigma_n^2/2)`.
pub fn snr_db_closed_form(h: &Mat, c: &RealConstellation, noise: &NoiseSpec) -> f64 {
    let mut trace = 0.0;
    for r in 0..h.rows() {
        for col in 0..h.cols() {
            let v = h.get(r, col);
            trace += v * v;
        }
    }
    let signal = trace * c.symbol_energy();
    let noise_pow = h.rows() as f64 * noise.per_real_variance();
    10.0 * (signal / noise_pow).log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn qpsk() -> RealConstellation {
        make_constellation(ModulationKind::Qpsk).unwrap()
    }

    #[test]
    #[allow(clippy::approx_constant)] // the decimal alphabet values are frozen on purpose
    fn qpsk_alphabet_is_unit_energy() {
        let c = qpsk();
        assert_eq!(c.size(), 2);
        assert!((c.points()[0] + 0.7071067811865476).abs() < 1e-15);
        assert!((c.points()[1] - 0.7071067811865476).abs() < 1e-15);
        // induced complex symbol energy
        assert!((2.0 * c.symbol_energy() - 1.0).abs() < 1e-15);
        // |S|^(2 d_t) for d_t = 2
        assert_eq!(c.size().pow(4), 16);
    }

    #[test]
    fn bpsk_alphabet() {
        let c = make_constellation(ModulationKind::Bpsk).unwrap();
        assert_eq!(c.points(), &[-1.0, 1.0]);
        assert_eq!(c.symbol_energy(), 1.0);
    }

    #[test]
    fn complex_to_real_vector_stacks() {
        assert_eq!(
            complex_to_real_vector(&[Complex64::new(1.0, 2.0)]),
            vec![1.0, 2.0]
        );
        assert_eq!(
            complex_to_real_vector(&[Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]),
            vec![0.0, 0.0, 0.0, 0.0]
        );
        // hand evaluation of the stacking rule
        assert_eq!(
            complex_to_real_vector(&[Complex64::new(3.0, -1.0), Complex64::new(-2.0, 4.0)]),
            vec![3.0, -2.0, -1.0, 4.0]
        );
    }

    #[test]
    fn complex_to_real_channel_blocks() {
        let hc = CMat::from_vec(1, 1, vec![Complex64::new(1.0, 0.0)]);
        let h = complex_to_real_channel(&hc);
        assert_eq!(h, Mat::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]));

        let hc = CMat::from_vec(1, 1, vec![Complex64::new(0.0, 1.0)]);
        let h = complex_to_real_channel(&hc);
        assert_eq!(h, Mat::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]));
    }

    #[test]
    fn complex_and_real_models_agree() {
        let mut rng = seeded(11);
        for _ in 0..20 {
            let mut data = Vec::new();
            for _ in 0..4 {
                data.push(Complex64::new(
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                ));
            }
            let hc = CMat::from_vec(2, 2, data);
            let h = complex_to_real_channel(&hc);
            let c = qpsk();
            let s_re = c.draw_symbols(2, &mut rng);
            let s_im = c.draw_symbols(2, &mut rng);
            let sc: Vec<Complex64> = (0..2).map(|i| Complex64::new(s_re[i], s_im[i])).collect();
            let s: Vec<f64> = s_re.iter().chain(&s_im).cloned().collect();

            let xc = complex_to_real_vector(&hc.matvec(&sc));
            let x = h.matvec(&s);
            for (a, b) in xc.iter().zip(&x) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_hot_index_examples() {
        assert_eq!(one_hot_index(&[0, 0], 2, 1).unwrap(), 1);
        assert_eq!(one_hot_index(&[1, 0], 2, 1).unwrap(), 2);
        assert_eq!(one_hot_index(&[1, 1, 1, 1], 2, 2).unwrap(), 16);
        assert!(one_hot_index(&[2, 0], 2, 1).is_err());
    }

    #[test]
    fn one_hot_index_is_bijective() {
        // exhaustive enumeration oracle for d_t up to 3
        let size = 2usize;
        for d_t in 1..=3usize {
            let total = size.pow(2 * d_t as u32);
            let mut seen = vec![false; total];
            let mut j = vec![0usize; 2 * d_t];
            loop {
                let idx = one_hot_index(&j, size, d_t).unwrap();
                assert!((1..=total).contains(&idx));
                assert!(!seen[idx - 1], "index {idx} hit twice");
                seen[idx - 1] = true;
                // odometer increment
                let mut k = 0;
                loop {
                    if k == 2 * d_t {
                        break;
                    }
                    j[k] += 1;
                    if j[k] < size {
                        break;
                    }
                    j[k] = 0;
                    k += 1;
                }
                if k == 2 * d_t {
                    break;
                }
            }
            assert!(seen.into_iter().all(|b| b));
        }
    }

    #[test]
    fn one_hot_round_trip() {
        let c = qpsk();
        let a = c.points()[0];
        let t = one_hot_encode(&[a, a], &c).unwrap();
        assert_eq!(t.index(), 1);
        assert_eq!(one_hot_decode(&t, &c, 1).unwrap(), vec![a, a]);

        // all 16 vectors for d_t = 2 round-trip distinctly
        let mut seen = std::collections::HashSet::new();
        for idx in 1..=16 {
            let t = OneHotTarget::new(idx, 16).unwrap();
            let s = one_hot_decode(&t, &c, 2).unwrap();
            let back = one_hot_encode(&s, &c).unwrap();
            assert_eq!(back.index(), idx);
            assert!(seen.insert(format!("{s:?}")));
        }
    }

    #[test]
    fn encode_rejects_foreign_symbol() {
        let c = qpsk();
        assert!(matches!(
            one_hot_encode(&[0.5, 0.5], &c),
            Err(Error::SymbolNotInAlphabet(_))
        ));
    }

    #[test]
    fn noise_moments_converge() {
        let noise = NoiseSpec::new(2.0).unwrap();
        let mut rng = seeded(3);
        let draws = draw_noise(&noise, 1_000_000, &mut rng);
        let m = crate::stats::mean(&draws);
        let v = crate::stats::variance(&draws);
        assert!(m.abs() < 0.005, "sample mean {m}");
        assert!((v - 1.0).abs() < 0.01, "per-real variance {v}");
    }

    #[test]
    fn noise_is_reproducible() {
        let noise = NoiseSpec::new(1.0).unwrap();
        let a = draw_noise(&noise, 8, &mut seeded(5));
        let b = draw_noise(&noise, 8, &mut seeded(5));
        assert_eq!(a, b);
    }

    #[test]
    fn snr_identity_channel() {
        let c = qpsk();
        let noise = NoiseSpec::new(1.0).unwrap();
        let h = Mat::identity(2);
        assert!(snr_db_closed_form(&h, &c, &noise).abs() < 1e-12);

        let mut rng = seeded(9);
        let est = estimate_snr_db(&h, &c, &noise, 100_000, &mut rng);
        assert!(est.abs() < 0.1, "MC estimate {est}");
    }

    #[test]
    fn snr_scales_with_gain_and_noise() {
        let c = qpsk();
        let noise = NoiseSpec::new(1.0).unwrap();
        let mut h = Mat::identity(2);
        for i in 0..2 {
            h.set(i, i, 2.0);
        }
        let db = snr_db_closed_form(&h, &c, &noise);
        assert!((db - 10.0 * 4.0_f64.log10()).abs() < 1e-12);
        let mut rng = seeded(13);
        let est = estimate_snr_db(&h, &c, &noise, 100_000, &mut rng);
        assert!((est - 6.0206).abs() < 0.1, "MC estimate {est}");

        let noisier = NoiseSpec::new(4.0).unwrap();
        let drop = snr_db_closed_form(&h, &c, &noise) - snr_db_closed_form(&h, &c, &noisier);
        assert!((drop - 6.020599913279624).abs() < 1e-9);
    }
}

//! Binary-input memoryless symmetric channels in multiplicative-noise form
//! (`Y = (-1)^X * Z`), their capacities, and two exact decoders: affine
//! erasure bit-MAP for the BEC and exhaustive bit/block-MAP for tiny codes.
//!
//! Output alphabet: the BEC emits `{-1, 0, +1}` with 0 marking an erasure,
//! the BSC emits `{-1, +1}`, and the Gaussian channel emits reals.

use crate::gf2::{solve_affine, BitWord, Gf2Matrix};
use crate::math::integrate;
use crate::rm::RmCode;
use crate::{Error, Result};
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelModel {
    /// Erasure probability in [0, 1].
    Bec(f64),
    /// Crossover probability in [0, 1].
    Bsc(f64),
    /// Noise standard deviation (> 0); Z ~ Normal(1, sigma^2).
    BiAwgn(f64),
}

impl ChannelModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::Bec(e) if (0.0..=1.0).contains(&e) => Ok(()),
            ChannelModel::Bsc(p) if (0.0..=1.0).contains(&p) => Ok(()),
            ChannelModel::BiAwgn(s) if s > 0.0 => Ok(()),
            _ => Err(Error::InvalidParameter(format!(
                "channel parameter out of range: {self:?}"
            ))),
        }
    }

    /// Parse `bec:0.1`, `bsc:0.05`, or `awgn:0.8`.
    pub fn parse(spec: &str) -> Result<ChannelModel> {
        let (kind, value) = spec
            .split_once(':')
            .ok_or_else(|| Error::InvalidParameter(format!("channel spec {spec:?}")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("channel parameter {value:?}")))?;
        let ch = match kind {
            "bec" => ChannelModel::Bec(v),
            "bsc" => ChannelModel::Bsc(v),
            "awgn" => ChannelModel::BiAwgn(v),
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown channel kind {kind:?}"
                )))
            }
        };
        ch.validate()?;
        Ok(ch)
    }

    /// Channel capacity in bits per use.
    pub fn capacity(&self) -> f64 {
        match *self {
            ChannelModel::Bec(e) => 1.0 - e,
            ChannelModel::Bsc(p) => 1.0 - crate::math::binary_entropy(p),
            ChannelModel::BiAwgn(sigma) => {
                // I(X;Y) = int p(y|+1) log2(2 p(y|+1) / (p(y|+1)+p(y|-1))) dy
                let pdf = |y: f64, mu: f64| {
                    (-(y - mu) * (y - mu) / (2.0 * sigma * sigma)).exp()
                        / (sigma * (2.0 * std::f64::consts::PI).sqrt())
                };
                let f = |y: f64| {
                    let p1 = pdf(y, 1.0);
                    let p0 = pdf(y, -1.0);
                    if p1 <= 0.0 {
                        0.0
                    } else {
                        p1 * (2.0 * p1 / (p1 + p0)).log2()
                    }
                };
                let lo = -1.0 - 12.0 * sigma;
                let hi = 1.0 + 12.0 * sigma;
                integrate(&f, lo, hi, 1e-8).clamp(0.0, 1.0)
            }
        }
    }
}

/// Transmit a word: i.i.d. multiplicative noise per the channel law.
pub fn transmit<R: Rng>(x: &BitWord, ch: ChannelModel, rng: &mut R) -> Vec<f64> {
    let mut y = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let sign = if x.get(i) { -1.0 } else { 1.0 };
        let z = match ch {
            ChannelModel::Bec(e) => {
                if rng.gen::<f64>() < e {
                    0.0
                } else {
                    1.0
                }
            }
            ChannelModel::Bsc(p) => {
                if rng.gen::<f64>() < p {
                    -1.0
                } else {
                    1.0
                }
            }
            ChannelModel::BiAwgn(sigma) => {
                // Box-Muller from two uniforms.
                let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
                let u2: f64 = rng.gen();
                let g = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
                1.0 + sigma * g
            }
        };
        y.push(sign * z);
    }
    y
}

/// Per-bit outcome of an erasure decode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitDecision {
    Zero,
    One,
    Undecided,
}

impl BitDecision {
    pub fn from_bit(b: bool) -> Self {
        if b {
            BitDecision::One
        } else {
            BitDecision::Zero
        }
    }

    pub fn decided(&self) -> Option<bool> {
        match self {
            BitDecision::Zero => Some(false),
            BitDecision::One => Some(true),
            BitDecision::Undecided => None,
        }
    }
}

/// Exact erasure bit-MAP for a linear code given by a generator matrix.
///
/// The unerased positions pin the message to an affine set; a codeword bit is
/// output iff it is constant over that set, so a decided bit is never wrong
/// when `y` really came from a codeword. Inconsistent unerased symbols are an
/// error (they signal the wrong code or ordering).
pub fn bec_bitmap_decode(gen: &Gf2Matrix, y: &[f64]) -> Result<Vec<BitDecision>> {
    if y.len() != gen.cols() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} vs blocklength {}",
            y.len(),
            gen.cols()
        )));
    }
    let seen: Vec<usize> = (0..y.len()).filter(|&i| y[i] != 0.0).collect();
    let mut rhs = BitWord::zeros(seen.len());
    for (j, &i) in seen.iter().enumerate() {
        rhs.set(j, y[i] < 0.0);
    }
    let system = gen.restrict_columns(&seen)?.transpose();
    let sol = solve_affine(&system, &rhs)?;
    if !sol.feasible {
        return Err(Error::Inconsistent(
            "unerased symbols match no codeword".into(),
        ));
    }
    let base = gen.left_mul(sol.particular.as_ref().expect("feasible"))?;
    // A bit stays free iff some nullspace message flips it.
    let mut free = vec![false; gen.cols()];
    for v in &sol.nullspace {
        let w = gen.left_mul(v)?;
        for i in w.iter_ones() {
            free[i] = true;
        }
    }
    Ok((0..gen.cols())
        .map(|i| {
            if free[i] {
                BitDecision::Undecided
            } else {
                BitDecision::from_bit(base.get(i))
            }
        })
        .collect())
}

/// Exhaustive bit/block-MAP decode for small codes.
#[derive(Debug, Clone)]
pub struct MapDecode {
    /// P(bit = 1 | y) per position.
    pub posteriors: Vec<f64>,
    /// Argmax-likelihood codeword (ties broken toward the earlier codeword
    /// in message-enumeration order).
    pub block: BitWord,
    /// Bitwise decisions: argmax posterior, ties toward 0.
    pub bits: BitWord,
}

/// Exact posteriors by summing channel likelihoods over all codewords.
pub fn exhaustive_map_decode(code: &RmCode, y: &[f64], ch: ChannelModel) -> Result<MapDecode> {
    if code.k() > 16 {
        return Err(Error::TooLarge(format!(
            "dimension {} exceeds the MAP cap 16",
            code.k()
        )));
    }
    if y.len() != code.n() {
        return Err(Error::DimensionMismatch(format!(
            "received length {} vs blocklength {}",
            y.len(),
            code.n()
        )));
    }
    ch.validate()?;
    let loglik = |bit: bool, obs: f64| -> f64 {
        let sign = if bit { -obs } else { obs }; // sign of Z consistent with the bit
        match ch {
            ChannelModel::Bec(e) => {
                if obs == 0.0 {
                    e.ln()
                } else if sign > 0.0 {
                    (1.0 - e).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
            ChannelModel::Bsc(p) => {
                if sign > 0.0 {
                    (1.0 - p).ln()
                } else {
                    p.ln()
                }
            }
            ChannelModel::BiAwgn(sigma) => {
                let mu = if bit { -1.0 } else { 1.0 };
                -(obs - mu) * (obs - mu) / (2.0 * sigma * sigma)
            }
        }
    };
    let n = code.n();
    let mut total = f64::NEG_INFINITY;
    let mut per_bit_one = vec![f64::NEG_INFINITY; n];
    let mut best = (f64::NEG_INFINITY, BitWord::zeros(n));
    code.for_each_codeword(|c| {
        let ll: f64 = (0..n).map(|i| loglik(c.get(i), y[i])).sum();
        if ll > best.0 {
            best = (ll, c.clone());
        }
        total = lse_ln(total, ll);
        for i in c.iter_ones() {
            per_bit_one[i] = lse_ln(per_bit_one[i], ll);
        }
    })?;
    if total == f64::NEG_INFINITY {
        return Err(Error::Inconsistent(
            "no codeword has positive likelihood".into(),
        ));
    }
    let posteriors: Vec<f64> = per_bit_one
        .iter()
        .map(|&l1| {
            if l1 == f64::NEG_INFINITY {
                0.0
            } else {
                (l1 - total).exp()
            }
        })
        .collect();
    let bits = BitWord::from_bools(&posteriors.iter().map(|&p| p > 0.5).collect::<Vec<_>>());
    Ok(MapDecode {
        posteriors,
        block: best.1,
        bits,
    })
}

fn lse_ln(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn channel_validation_and_parse() {
        assert!(ChannelModel::Bec(0.3).validate().is_ok());
        assert!(ChannelModel::Bec(1.3).validate().is_err());
        assert!(ChannelModel::BiAwgn(0.0).validate().is_err());
        assert_eq!(
            ChannelModel::parse("bec:0.3").unwrap(),
            ChannelModel::Bec(0.3)
        );
        assert_eq!(
            ChannelModel::parse("bsc:0.05").unwrap(),
            ChannelModel::Bsc(0.05)
        );
        assert!(ChannelModel::parse("foo:1").is_err());
        assert!(ChannelModel::parse("bec").is_err());
    }

    #[test]
    fn capacities() {
        assert!((ChannelModel::Bec(0.3).capacity() - 0.7).abs() < 1e-12);
        assert!(ChannelModel::Bsc(0.5).capacity().abs() < 1e-12);
        assert!((ChannelModel::Bsc(0.11).capacity() - 0.5000837).abs() < 1e-6);
        // Gaussian capacity interpolates between the extremes sensibly.
        let high = ChannelModel::BiAwgn(0.2).capacity();
        let low = ChannelModel::BiAwgn(3.0).capacity();
        assert!(high > 0.95 && high <= 1.0);
        assert!(low < 0.2 && low > 0.0);
    }

    #[test]
    fn transmit_extremes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let x = BitWord::from_bit_str("0110").unwrap();
        let y = transmit(&x, ChannelModel::Bec(0.0), &mut rng);
        assert_eq!(y, vec![1.0, -1.0, -1.0, 1.0]);
        let y = transmit(&x, ChannelModel::Bec(1.0), &mut rng);
        assert!(y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn bsc_flip_rate_law_of_large_numbers() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let n = 1_000_000usize;
        let x = BitWord::zeros(n);
        let y = transmit(&x, ChannelModel::Bsc(0.1), &mut rng);
        let flips = y.iter().filter(|&&v| v < 0.0).count();
        let phat = flips as f64 / n as f64;
        let sigma = (0.1 * 0.9 / n as f64).sqrt();
        assert!((phat - 0.1).abs() < 3.0 * sigma, "phat={phat}");
    }

    #[test]
    fn repetition_code_erasure_decode() {
        // Length-4 repetition code: one surviving -1 pins every bit to 1.
        let gen = Gf2Matrix::from_rows(vec![BitWord::ones(4)]).unwrap();
        let dec = bec_bitmap_decode(&gen, &[0.0, 0.0, -1.0, 0.0]).unwrap();
        assert!(dec.iter().all(|&b| b == BitDecision::One));
        // All erased: everything undecided.
        let dec = bec_bitmap_decode(&gen, &[0.0; 4]).unwrap();
        assert!(dec.iter().all(|&b| b == BitDecision::Undecided));
        // Inconsistent: +1 and -1 on a repetition code.
        assert!(bec_bitmap_decode(&gen, &[1.0, -1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn partial_erasure_decode_leaves_middle_open() {
        // First and last bit fixed to 0 and 1: two codewords remain and the
        // middle two bits stay undecided.
        let code = RmCode::new(2, 1).unwrap();
        let y = [1.0, 0.0, 0.0, -1.0];
        let dec = bec_bitmap_decode(code.generator(), &y).unwrap();
        assert_eq!(dec[0], BitDecision::Zero);
        assert_eq!(dec[3], BitDecision::One);
        assert_eq!(dec[1], BitDecision::Undecided);
        assert_eq!(dec[2], BitDecision::Undecided);
    }

    #[test]
    fn below_min_distance_always_decodes() {
        // Erasure patterns lighter than the minimum distance decide all bits.
        let code = RmCode::new(3, 1).unwrap();
        let word = code.random_codeword(&mut rand_chacha::ChaCha8Rng::seed_from_u64(2));
        for pattern in 0u32..256 {
            if pattern.count_ones() >= 4 {
                continue;
            }
            let y: Vec<f64> = (0..8)
                .map(|i| {
                    if pattern >> i & 1 == 1 {
                        0.0
                    } else if word.get(i) {
                        -1.0
                    } else {
                        1.0
                    }
                })
                .collect();
            let dec = bec_bitmap_decode(code.generator(), &y).unwrap();
            for (i, b) in dec.iter().enumerate() {
                assert_eq!(b.decided(), Some(word.get(i)), "pattern {pattern:08b}");
            }
        }
    }

    #[test]
    fn genie_soundness_random_trials() {
        // Decided bits never contradict the transmitted codeword.
        let code = RmCode::new(6, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10_000 {
            let word = code.random_codeword(&mut rng);
            let y = transmit(&word, ChannelModel::Bec(0.3), &mut rng);
            let dec = bec_bitmap_decode(code.generator(), &y).unwrap();
            for (i, b) in dec.iter().enumerate() {
                if let Some(v) = b.decided() {
                    assert_eq!(v, word.get(i));
                }
            }
        }
    }

    #[test]
    fn decided_count_monotone_under_nested_erasures() {
        let code = RmCode::new(4, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        use rand::Rng;
        for _ in 0..50 {
            let word = code.random_codeword(&mut rng);
            let us: Vec<f64> = (0..code.n()).map(|_| rng.gen()).collect();
            let mut prev_decided = usize::MAX;
            for eps in [0.05, 0.2, 0.45, 0.7] {
                let y: Vec<f64> = (0..code.n())
                    .map(|i| {
                        if us[i] < eps {
                            0.0
                        } else if word.get(i) {
                            -1.0
                        } else {
                            1.0
                        }
                    })
                    .collect();
                let decided = bec_bitmap_decode(code.generator(), &y)
                    .unwrap()
                    .iter()
                    .filter(|b| b.decided().is_some())
                    .count();
                assert!(decided <= prev_decided);
                prev_decided = decided;
            }
        }
    }

    #[test]
    fn map_decode_dimension_cap() {
        let code = RmCode::new(5, 3).unwrap(); // dimension 26 > 16
        let y = vec![1.0; code.n()];
        assert!(exhaustive_map_decode(&code, &y, ChannelModel::Bsc(0.1)).is_err());
    }

    #[test]
    fn map_decode_noiseless_bsc() {
        let code = RmCode::new(3, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let word = code.random_codeword(&mut rng);
        let y: Vec<f64> = (0..8)
            .map(|i| if word.get(i) { -1.0 } else { 1.0 })
            .collect();
        let dec = exhaustive_map_decode(&code, &y, ChannelModel::Bsc(0.01)).unwrap();
        assert_eq!(dec.block, word);
        assert_eq!(dec.bits, word);
    }

    #[test]
    fn map_posteriors_match_erasure_decoder() {
        // Over the BEC the posteriors are exactly 0, 1, or 1/2, and the
        // decided/undecided split agrees with the affine decoder.
        let code = RmCode::new(3, 1).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let word = code.random_codeword(&mut rng);
        for pattern in 0u32..256 {
            let y: Vec<f64> = (0..8)
                .map(|i| {
                    if pattern >> i & 1 == 1 {
                        0.0
                    } else if word.get(i) {
                        -1.0
                    } else {
                        1.0
                    }
                })
                .collect();
            let map = exhaustive_map_decode(&code, &y, ChannelModel::Bec(0.4)).unwrap();
            let dec = bec_bitmap_decode(code.generator(), &y).unwrap();
            for i in 0..8 {
                match dec[i] {
                    BitDecision::Undecided => {
                        assert!((map.posteriors[i] - 0.5).abs() < 1e-9, "bit {i}")
                    }
                    BitDecision::Zero => assert!(map.posteriors[i] < 1e-9, "bit {i}"),
                    BitDecision::One => assert!(map.posteriors[i] > 1.0 - 1e-9, "bit {i}"),
                }
            }
        }
    }

    #[test]
    fn equidistant_flip_pattern_gives_half_posteriors() {
        // Repetition code, flip pattern equidistant between the two
        // codewords: every (differing) bit ends at posterior 1/2.
        let code = RmCode::new(2, 0).unwrap();
        let y = [1.0, 1.0, -1.0, -1.0];
        let dec = exhaustive_map_decode(&code, &y, ChannelModel::Bsc(0.2)).unwrap();
        for i in 0..4 {
            assert!((dec.posteriors[i] - 0.5).abs() < 1e-9, "bit {i}");
        }
    }
}

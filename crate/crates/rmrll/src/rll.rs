//! `(d,∞)`-runlength machinery: validity, counting, noiseless capacity,
//! enumerative (rank <-> word) coding, and run statistics.
//!
//! A word satisfies the `(d,∞)` constraint when every pair of successive 1s
//! is separated by at least `d` 0s.

use crate::gf2::BitWord;
use crate::{Error, Result};
use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Practical cap on enumerative-coding table length.
pub const MAX_ENUM_LEN: usize = 1 << 20;

/// Smallest z with 2^z >= d+1; the zero-gap exponent used by the subcode
/// constructions.
pub fn zero_gap_exponent(d: u32) -> u32 {
    let mut z = 0;
    while (1u64 << z) < (d as u64 + 1) {
        z += 1;
    }
    z
}

/// True iff every pair of successive 1s in `w` is separated by >= d zeros.
pub fn is_valid(w: &BitWord, d: u32) -> bool {
    let mut last_one: Option<usize> = None;
    for i in w.iter_ones() {
        if let Some(j) = last_one {
            if i - j - 1 < d as usize {
                return false;
            }
        }
        last_one = Some(i);
    }
    true
}

/// Counts `a(0..=n)` of valid words by length, via
/// `a(i) = a(i-1) + a(i-d-1)` with `a(i) = i+1` for `i <= d`.
fn count_table(n: usize, d: u32) -> Vec<BigUint> {
    let d = d as usize;
    let mut a: Vec<BigUint> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let v = if i <= d {
            BigUint::from(i + 1)
        } else {
            &a[i - 1] + &a[i - d - 1]
        };
        a.push(v);
    }
    a
}

/// Number of valid words of length `n`.
pub fn count_sequences(n: usize, d: u32) -> BigUint {
    count_table(n, d).pop().unwrap()
}

/// Noiseless capacity `C_0(d)`: log2 of the spectral radius of the
/// `(d+1)`-state transfer matrix, by power iteration.
pub fn noiseless_capacity(d: u32) -> f64 {
    let s = d as usize + 1;
    // State = zeros emitted since the last 1, capped at d. From state < d a 0
    // moves forward; state d loops on 0 and may emit a 1 back to state 0.
    let mut v = vec![1.0f64; s];
    let mut lambda = 1.0;
    for _ in 0..100_000 {
        let mut next = vec![0.0f64; s];
        for st in 0..s {
            let tgt0 = (st + 1).min(s - 1);
            next[tgt0] += v[st];
            if st == s - 1 {
                next[0] += v[st];
            }
        }
        let norm = next.iter().fold(0.0f64, |m, &x| m.max(x));
        for x in &mut next {
            *x /= norm;
        }
        // Converge on the eigenvector, not the norm estimate: successive
        // norms can coincide by accident while the vector is still moving.
        let delta = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        lambda = norm;
        v = next;
        if delta <= 1e-12 {
            break;
        }
    }
    lambda.log2()
}

/// Run statistics of a nonempty word: counts of maximal runs of 0s and 1s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunStats {
    pub runs0: usize,
    pub runs1: usize,
}

impl RunStats {
    pub fn total(&self) -> usize {
        self.runs0 + self.runs1
    }
}

pub fn run_stats(w: &BitWord) -> Result<RunStats> {
    if w.is_empty() {
        return Err(Error::InvalidParameter(
            "run statistics of an empty word".into(),
        ));
    }
    let mut stats = RunStats { runs0: 0, runs1: 0 };
    let mut prev: Option<bool> = None;
    for i in 0..w.len() {
        let b = w.get(i);
        if prev != Some(b) {
            if b {
                stats.runs1 += 1;
            } else {
                stats.runs0 += 1;
            }
        }
        prev = Some(b);
    }
    Ok(stats)
}

/// Right end-points of maximal zero-runs of `g`, excluding a run that ends at
/// the last coordinate (the all-ones point of the evaluation cube).
pub fn zero_run_ends(g: &BitWord) -> Vec<usize> {
    let n = g.len();
    let mut ends = Vec::new();
    for i in 0..n.saturating_sub(1) {
        if !g.get(i) && g.get(i + 1) {
            ends.push(i);
        }
    }
    ends
}

/// `g` with a 1 forced at every coordinate of `zero_run_ends(g)`.
pub fn force_zero_run_ends(g: &BitWord) -> BitWord {
    let mut out = g.clone();
    for i in zero_run_ends(g) {
        out.set(i, true);
    }
    out
}

/// Enumerative coder for the valid words of one fixed `(n, d)`: a bijection
/// between ranks `0..count` and valid words in lexicographic order.
///
/// The table holds `a(0..=n)`; a suffix of length `i` entered with `s` zeros
/// already seen has `a(i - (d - s))` valid completions (all-zeros only when
/// `i < d - s`), so both directions walk the word once.
pub struct EnumCoder {
    n: usize,
    d: u32,
    table: Vec<BigUint>,
}

impl EnumCoder {
    pub fn new(n: usize, d: u32) -> Result<Self> {
        if n > MAX_ENUM_LEN {
            return Err(Error::TooLarge(format!(
                "enumerative table length {n} > {MAX_ENUM_LEN}"
            )));
        }
        Ok(EnumCoder {
            n,
            d,
            table: count_table(n, d),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Total number of valid words.
    pub fn count(&self) -> &BigUint {
        &self.table[self.n]
    }

    /// Valid completions of a length-`i` suffix entered with `s` zeros seen.
    fn completions(&self, i: usize, s: u32) -> BigUint {
        let gap = (self.d - s) as usize;
        if i < gap {
            BigUint::one()
        } else {
            self.table[i - gap].clone()
        }
    }

    /// Word at `rank` in lexicographic order.
    pub fn encode(&self, rank: &BigUint) -> Result<BitWord> {
        if rank >= self.count() {
            return Err(Error::IndexOutOfRange(format!(
                "rank {rank} >= count {}",
                self.count()
            )));
        }
        let mut rem = rank.clone();
        let mut w = BitWord::zeros(self.n);
        let mut zeros_seen = self.d; // unconstrained start
        for pos in 0..self.n {
            let with_zero = self.completions(self.n - pos - 1, (zeros_seen + 1).min(self.d));
            if rem < with_zero {
                zeros_seen = (zeros_seen + 1).min(self.d);
            } else {
                rem -= with_zero;
                debug_assert!(zeros_seen >= self.d);
                w.set(pos, true);
                zeros_seen = 0;
            }
        }
        debug_assert!(rem.is_zero());
        Ok(w)
    }

    /// Rank of a valid word.
    pub fn decode(&self, w: &BitWord) -> Result<BigUint> {
        if w.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "word length {} vs coder length {}",
                w.len(),
                self.n
            )));
        }
        if !is_valid(w, self.d) {
            return Err(Error::InvalidParameter(
                "word violates the constraint".into(),
            ));
        }
        let mut rank = BigUint::zero();
        let mut zeros_seen = self.d;
        for pos in 0..self.n {
            if w.get(pos) {
                rank += self.completions(self.n - pos - 1, (zeros_seen + 1).min(self.d));
                zeros_seen = 0;
            } else {
                zeros_seen = (zeros_seen + 1).min(self.d);
            }
        }
        Ok(rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bw(s: &str) -> BitWord {
        BitWord::from_bit_str(s).unwrap()
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid(&bw("100100010"), 2));
        assert!(!is_valid(&bw("10100010"), 2));
        assert!(!is_valid(&bw("11"), 1));
        assert!(is_valid(&bw("0000"), 5));
    }

    #[test]
    fn zero_gap_exponents() {
        assert_eq!(zero_gap_exponent(0), 0);
        assert_eq!(zero_gap_exponent(1), 1);
        assert_eq!(zero_gap_exponent(2), 2);
        assert_eq!(zero_gap_exponent(3), 2);
        assert_eq!(zero_gap_exponent(7), 3);
    }

    // Brute-force oracle: enumerate all 2^n words.
    fn brute_count(n: usize, d: u32) -> u64 {
        (0u64..1 << n)
            .filter(|&x| {
                let w = BitWord::from_bools(&(0..n).map(|i| (x >> i) & 1 == 1).collect::<Vec<_>>());
                is_valid(&w, d)
            })
            .count() as u64
    }

    #[test]
    fn counts_match_brute_force() {
        for d in 0..=4u32 {
            for n in 0..=16usize {
                assert_eq!(
                    count_sequences(n, d),
                    BigUint::from(brute_count(n, d)),
                    "n={n} d={d}"
                );
            }
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_sequences(0, 3), BigUint::from(1u8));
        assert_eq!(count_sequences(1, 1), BigUint::from(2u8));
        assert_eq!(count_sequences(2, 1), BigUint::from(3u8));
        assert_eq!(count_sequences(3, 1), BigUint::from(5u8));
        assert_eq!(count_sequences(3, 2), BigUint::from(4u8));
    }

    #[test]
    fn capacity_values() {
        assert!((noiseless_capacity(0) - 1.0).abs() < 1e-12);
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).log2();
        assert!((noiseless_capacity(1) - golden).abs() < 1e-9);
        assert!((noiseless_capacity(2) - 0.5515).abs() < 1e-4);
    }

    #[test]
    fn capacity_bounded_by_finite_counts() {
        // log2 a(n)/n >= capacity for every n, and the gap shrinks.
        for d in 0..=4u32 {
            let cap = noiseless_capacity(d);
            let mut prev_gap = f64::INFINITY;
            for n in [4usize, 8, 16, 32, 64] {
                let rate = crate::math::log2_biguint(&count_sequences(n, d)) / n as f64;
                assert!(rate >= cap - 1e-12, "d={d} n={n}");
                let gap = rate - cap;
                assert!(gap <= prev_gap + 1e-12, "d={d} n={n}");
                prev_gap = gap;
            }
        }
    }

    #[test]
    fn enum_coding_examples() {
        let coder = EnumCoder::new(3, 1).unwrap();
        assert_eq!(coder.encode(&BigUint::from(0u8)).unwrap(), bw("000"));
        assert_eq!(coder.encode(&BigUint::from(4u8)).unwrap(), bw("101"));
        // Lex list for n=3, d=1: 000, 001, 010, 100, 101.
        let words: Vec<String> = (0..5u8)
            .map(|r| coder.encode(&BigUint::from(r)).unwrap().to_bit_string())
            .collect();
        assert_eq!(words, vec!["000", "001", "010", "100", "101"]);
        assert!(coder.encode(&BigUint::from(5u8)).is_err());
        assert!(coder.decode(&bw("011")).is_err());
    }

    #[test]
    fn enum_round_trip_and_lex_order() {
        for d in 1..=3u32 {
            for n in 1..=12usize {
                let coder = EnumCoder::new(n, d).unwrap();
                let count = coder.count().clone();
                let mut prev: Option<BitWord> = None;
                let mut r = BigUint::zero();
                while r < count {
                    let w = coder.encode(&r).unwrap();
                    assert!(is_valid(&w, d));
                    assert_eq!(coder.decode(&w).unwrap(), r);
                    if let Some(p) = prev {
                        assert!(
                            p.to_bit_string() < w.to_bit_string(),
                            "lex order d={d} n={n}"
                        );
                    }
                    prev = Some(w);
                    r += 1u8;
                }
            }
        }
    }

    #[test]
    fn run_stats_examples() {
        assert_eq!(
            run_stats(&bw("0000")).unwrap(),
            RunStats { runs0: 1, runs1: 0 }
        );
        assert_eq!(
            run_stats(&bw("0101")).unwrap(),
            RunStats { runs0: 2, runs1: 2 }
        );
        assert_eq!(
            run_stats(&bw("1001")).unwrap(),
            RunStats { runs0: 1, runs1: 2 }
        );
        assert!(run_stats(&BitWord::zeros(0)).is_err());
    }

    #[test]
    fn zero_run_end_examples() {
        assert!(zero_run_ends(&bw("0000")).is_empty());
        assert_eq!(zero_run_ends(&bw("0100")), vec![0]);
        assert_eq!(zero_run_ends(&bw("0010")), vec![1]);
        assert_eq!(force_zero_run_ends(&bw("0100")), bw("1100"));
        assert_eq!(force_zero_run_ends(&bw("01100110")), bw("11101110"));
    }

    proptest! {
        #[test]
        fn run_count_difference(bits in proptest::collection::vec(any::<bool>(), 1..64)) {
            let w = BitWord::from_bools(&bits);
            let s = run_stats(&w).unwrap();
            let diff = s.runs1 as i64 - s.runs0 as i64;
            prop_assert!(diff.abs() <= 1);
            let first = w.get(0);
            let last = w.get(w.len() - 1);
            prop_assert_eq!(diff == 1, first && last);
            prop_assert_eq!(diff == -1, !first && !last);
        }

        #[test]
        fn forced_word_weight(bits in proptest::collection::vec(any::<bool>(), 1..64)) {
            let g = BitWord::from_bools(&bits);
            let forced = force_zero_run_ends(&g);
            prop_assert_eq!(forced.weight(), g.weight() + zero_run_ends(&g).len());
            prop_assert!(g.support_subset_of(&forced));
        }
    }
}

//! Reed-Muller codes: monomial evaluation, the even/odd (Plotkin) split,
//! coordinate orderings, information sets, run counting along orderings, and
//! exhaustive weight distributions.
//!
//! Coordinates are indexed lexicographically: the binary expansion of
//! position `i` is `(b_1, ..., b_m)` with `b_1` most significant, so the last
//! variable `x_m` varies fastest and neighbouring positions share their top
//! `m-1` bits.

use crate::gf2::{BitWord, Gf2Matrix};
use crate::math::{binom_sum, normal_quantile};
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;

/// Hard cap on the variable count (blocklength 2^26).
pub const MAX_M: u32 = 26;
/// Exhaustive codeword sweeps are limited to this dimension.
pub const MAX_EXHAUSTIVE_DIM: u32 = 22;

/// A square-free monomial over variables `x_1..x_m`, stored as a set mask
/// with bit `j-1` standing for `x_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial(pub u32);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains_var(&self, j: u32) -> bool {
        debug_assert!(j >= 1);
        self.0 >> (j - 1) & 1 == 1
    }
}

/// Evaluation vector of a monomial on the lex-ordered cube `{0,1}^m`.
///
/// The bit at position `i` is 1 iff every variable of the monomial is 1 in
/// the binary expansion of `i`.
pub fn eval_monomial(mono: Monomial, m: u32) -> BitWord {
    let n = 1usize << m;
    let mut w = BitWord::zeros(n);
    for i in 0..n {
        // b_j = bit (m - j) of i, so x_j is extracted by shifting m - j.
        let hit = (1..=m).all(|j| !mono.contains_var(j) || (i >> (m - j)) & 1 == 1);
        if hit {
            w.set(i, true);
        }
    }
    w
}

/// All monomial masks of degree <= r over m variables, by degree then mask.
pub fn monomials_up_to(m: u32, r: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = (0..1u32 << m)
        .filter(|s| s.count_ones() <= r)
        .map(Monomial)
        .collect();
    out.sort_by_key(|s| (s.degree(), s.0));
    out
}

/// How codeword positions map to cube coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoordOrdering {
    /// Position j holds coordinate j.
    Lex,
    /// Binary reflected Gray sequence: consecutive positions differ in one bit.
    Gray,
    /// Arbitrary bijection: position `j` holds coordinate `perm[j]`.
    Explicit(Vec<usize>),
}

impl CoordOrdering {
    /// Cube coordinate held at position `j` for blocklength `2^m`.
    pub fn coord_at(&self, j: usize) -> usize {
        match self {
            CoordOrdering::Lex => j,
            CoordOrdering::Gray => j ^ (j >> 1),
            CoordOrdering::Explicit(p) => p[j],
        }
    }

    pub fn validate(&self, m: u32) -> Result<()> {
        if let CoordOrdering::Explicit(p) = self {
            let n = 1usize << m;
            if p.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "permutation length {} vs blocklength {n}",
                    p.len()
                )));
            }
            let mut seen = vec![false; n];
            for &x in p {
                if x >= n || seen[x] {
                    return Err(Error::InvalidParameter("not a permutation".into()));
                }
                seen[x] = true;
            }
        }
        Ok(())
    }
}

/// The reflected-Gray ordering; `m` is unused because the sequence rule is
/// the same at every blocklength, but keeping the parameter mirrors the
/// other constructors.
pub fn gray_permutation(_m: u32) -> CoordOrdering {
    CoordOrdering::Gray
}

/// A Reed-Muller code instance: order-`r` polynomial evaluations on the
/// `m`-cube, columns arranged by a coordinate ordering.
pub struct RmCode {
    m: u32,
    r: u32,
    ordering: CoordOrdering,
    monomials: Vec<Monomial>,
    generator: Gf2Matrix,
}

impl RmCode {
    /// Lex-ordered code.
    pub fn new(m: u32, r: u32) -> Result<Self> {
        Self::with_ordering(m, r, CoordOrdering::Lex)
    }

    pub fn with_ordering(m: u32, r: u32, ordering: CoordOrdering) -> Result<Self> {
        if m == 0 || m > MAX_M {
            return Err(Error::InvalidParameter(format!(
                "m={m} outside 1..={MAX_M}"
            )));
        }
        if r > m {
            return Err(Error::InvalidParameter(format!(
                "order r={r} exceeds m={m}"
            )));
        }
        ordering.validate(m)?;
        let monomials = monomials_up_to(m, r);
        let n = 1usize << m;
        let rows = monomials
            .iter()
            .map(|&mono| {
                let eval = eval_monomial(mono, m);
                match &ordering {
                    CoordOrdering::Lex => eval,
                    ord => {
                        let mut row = BitWord::zeros(n);
                        for j in 0..n {
                            if eval.get(ord.coord_at(j)) {
                                row.set(j, true);
                            }
                        }
                        row
                    }
                }
            })
            .collect();
        Ok(RmCode {
            m,
            r,
            ordering,
            monomials,
            generator: Gf2Matrix::from_rows(rows).expect("uniform row length"),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn ordering(&self) -> &CoordOrdering {
        &self.ordering
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn generator(&self) -> &Gf2Matrix {
        &self.generator
    }

    /// Dimension `K = C(m, <=r)`.
    pub fn k(&self) -> usize {
        self.monomials.len()
    }

    /// Blocklength `N = 2^m`.
    pub fn n(&self) -> usize {
        1usize << self.m
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    /// Minimum Hamming distance `2^(m-r)`.
    pub fn min_distance(&self) -> usize {
        1usize << (self.m - self.r)
    }

    /// XOR of the generator rows selected by `msg`.
    pub fn encode(&self, msg: &BitWord) -> Result<BitWord> {
        self.generator.left_mul(msg)
    }

    pub fn contains(&self, word: &BitWord) -> bool {
        self.generator.row_space_contains(word)
    }

    /// Visit every codeword once (Gray walk over messages, one row XOR per
    /// step). Errors when the dimension exceeds the exhaustive cap.
    pub fn for_each_codeword<F: FnMut(&BitWord)>(&self, mut f: F) -> Result<()> {
        let k = self.k() as u32;
        if k > MAX_EXHAUSTIVE_DIM {
            return Err(Error::TooLarge(format!(
                "dimension {k} exceeds exhaustive cap {MAX_EXHAUSTIVE_DIM}"
            )));
        }
        let mut word = BitWord::zeros(self.n());
        f(&word);
        for x in 1u64..1 << k {
            let flip = x.trailing_zeros() as usize;
            word.xor_assign(self.generator.row(flip));
            f(&word);
        }
        Ok(())
    }

    /// A uniformly random codeword.
    pub fn random_codeword<R: Rng>(&self, rng: &mut R) -> BitWord {
        let msg = BitWord::from_bools(&(0..self.k()).map(|_| rng.gen()).collect::<Vec<_>>());
        self.encode(&msg).expect("lengths agree")
    }
}

/// Split a lex-ordered word of even length into `(g, h)` with
/// `f[2j] = g[j]`, `f[2j+1] = g[j] + h[j]`: the last variable toggles between
/// neighbouring positions, so the word interleaves `g` and `g + h`.
pub fn plotkin_split(f: &BitWord) -> Result<(BitWord, BitWord)> {
    if !f.len().is_multiple_of(2) || f.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "length {} is not even",
            f.len()
        )));
    }
    let half = f.len() / 2;
    let mut g = BitWord::zeros(half);
    let mut h = BitWord::zeros(half);
    for j in 0..half {
        let even = f.get(2 * j);
        let odd = f.get(2 * j + 1);
        g.set(j, even);
        h.set(j, even ^ odd);
    }
    Ok((g, h))
}

/// Inverse of [`plotkin_split`].
pub fn plotkin_join(g: &BitWord, h: &BitWord) -> Result<BitWord> {
    if g.len() != h.len() {
        return Err(Error::DimensionMismatch(format!(
            "halves of length {} and {}",
            g.len(),
            h.len()
        )));
    }
    let mut f = BitWord::zeros(2 * g.len());
    for j in 0..g.len() {
        f.set(2 * j, g.get(j));
        f.set(2 * j + 1, g.get(j) ^ h.get(j));
    }
    Ok(f)
}

/// Order selection from a target rate via the Gaussian approximation:
/// `r = max(floor(m/2 + sqrt(m)/2 * Qinv(1-R)), 0)`, clamped to `m`.
///
/// The floor of the float is taken as-is, so results may be off by one when
/// the argument sits at an exact integer.
pub fn r_of_rate(m: u32, rate: f64) -> Result<u32> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rate {rate} outside (0,1)"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    // Qinv(1-R) = normal_quantile(R).
    let x = m as f64 / 2.0 + (m as f64).sqrt() / 2.0 * normal_quantile(rate);
    let r = x.floor().max(0.0) as i64;
    Ok((r.max(0) as u32).min(m))
}

/// Smallest order whose dimension reaches `floor(2^m * rate)`.
pub fn min_order_for_rate(m: u32, rate: f64) -> Result<u32> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rate {rate} outside (0,1)"
        )));
    }
    let target = ((1u128 << m) as f64 * rate).floor() as u128;
    Ok((0..=m).find(|&u| binom_sum(m, u) >= target).unwrap_or(m))
}

/// The low-weight information set `{b : wt(b) <= r}` as coordinate indices,
/// ascending.
pub fn information_set(m: u32, r: u32) -> Vec<usize> {
    (0..1usize << m).filter(|i| i.count_ones() <= r).collect()
}

/// Positions `s` whose coordinate lies in `info` while the successor's does
/// not; the successor of the final position is a dummy outside every set, so
/// a trailing run is always closed.
pub fn run_end_positions(ordering: &CoordOrdering, info: &[usize], m: u32) -> Vec<usize> {
    let n = 1usize << m;
    let mut member = vec![false; n];
    for &c in info {
        member[c] = true;
    }
    let mut ends = Vec::new();
    for s in 0..n {
        let here = member[ordering.coord_at(s)];
        let next = s + 1 < n && member[ordering.coord_at(s + 1)];
        if here && !next {
            ends.push(s);
        }
    }
    ends
}

/// Lengths of the maximal position-runs of `info` under the ordering.
pub fn run_lengths(ordering: &CoordOrdering, info: &[usize], m: u32) -> Vec<usize> {
    let n = 1usize << m;
    let mut member = vec![false; n];
    for &c in info {
        member[c] = true;
    }
    let mut lengths = Vec::new();
    let mut cur = 0usize;
    for s in 0..n {
        if member[ordering.coord_at(s)] {
            cur += 1;
        } else if cur > 0 {
            lengths.push(cur);
            cur = 0;
        }
    }
    if cur > 0 {
        lengths.push(cur);
    }
    lengths
}

/// Greedy count of disjoint `(d+1)`-tuples of consecutive positions inside
/// the runs of `info`: `sum_i floor(len_i / (d+1))`.
pub fn disjoint_tuple_count(ordering: &CoordOrdering, info: &[usize], m: u32, d: u32) -> usize {
    run_lengths(ordering, info, m)
        .iter()
        .map(|&l| l / (d as usize + 1))
        .sum()
}

/// Exhaustive weight distribution of a code.
#[derive(Debug, Clone)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn max_weight(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| (w, c))
    }
}

/// Exact weight distribution by codeword enumeration (dimension-capped).
pub fn weight_distribution(code: &RmCode) -> Result<WeightDistribution> {
    let mut counts = vec![0u64; code.n() + 1];
    code.for_each_codeword(|w| counts[w.weight()] += 1)?;
    Ok(WeightDistribution { counts })
}

/// Fraction of uniformly random coordinate permutations whose first
/// `ceil(K(1+alpha))` positions contain an information set, with its binomial
/// standard error.
pub fn random_prefix_infoset_fraction<R: Rng>(
    m: u32,
    r: u32,
    alpha: f64,
    trials: u32,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let code = RmCode::new(m, r)?;
    let k = code.k();
    let prefix = ((k as f64) * (1.0 + alpha)).ceil() as usize;
    if prefix > code.n() {
        return Err(Error::InvalidParameter(format!(
            "prefix {prefix} exceeds blocklength {}",
            code.n()
        )));
    }
    let mut hits = 0u32;
    let mut coords: Vec<usize> = (0..code.n()).collect();
    for _ in 0..trials {
        coords.shuffle(rng);
        let sub = code.generator().restrict_columns(&coords[..prefix])?;
        if sub.rank() == k {
            hits += 1;
        }
    }
    let p = hits as f64 / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    Ok((p, se))
}

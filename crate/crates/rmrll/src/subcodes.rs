//! Constrained subcodes of Reed-Muller codes: the explicit linear `(d,∞)`
//! subcode, the split-pair validity characterization for `d = 1`, exact and
//! Monte-Carlo subcode counting, and the closed-form rate bounds.

use crate::gf2::{solve_affine, BitWord, Gf2Matrix};
use crate::math::{binary_entropy, binom_sum, Lse2Stream};
use crate::rll::{self, noiseless_capacity, zero_gap_exponent};
use crate::rm::{eval_monomial, monomials_up_to, Monomial, RmCode};
use crate::{Error, Result};
use rand::Rng;

/// The explicit linear `(d,∞)`-valid subcode of RM(m, r): evaluations of
/// `q * h` where `q` is the product of the last `z` variables and
/// `deg(h) <= r - z` in the remaining `m - z` variables.
///
/// Every row, and hence every span element, has its support inside the
/// positions congruent to `2^z - 1 mod 2^z`, which sit at least `2^z - 1 >= d`
/// apart.
pub struct LinearSubcode {
    pub m: u32,
    pub r: u32,
    pub d: u32,
    pub z: u32,
    generator: Gf2Matrix,
}

impl LinearSubcode {
    pub fn new(m: u32, r: u32, d: u32) -> Result<Self> {
        let z = zero_gap_exponent(d);
        if r > m {
            return Err(Error::InvalidParameter(format!(
                "order r={r} exceeds m={m}"
            )));
        }
        if r < z {
            return Err(Error::InvalidParameter(format!(
                "order r={r} below zero-gap exponent z={z} for d={d}"
            )));
        }
        let tail: u32 = ((m - z)..m).map(|j| 1u32 << j).sum(); // x_{m-z+1}..x_m
        let rows: Vec<BitWord> = monomials_up_to(m - z, r - z)
            .into_iter()
            .map(|mono| eval_monomial(Monomial(mono.0 | tail), m))
            .collect();
        Ok(LinearSubcode {
            m,
            r,
            d,
            z,
            generator: Gf2Matrix::from_rows(rows).expect("uniform row length"),
        })
    }

    /// Dimension `C(m - z, <= r - z)`.
    pub fn dimension(&self) -> usize {
        self.generator.rows()
    }

    pub fn blocklength(&self) -> usize {
        1usize << self.m
    }

    pub fn generator(&self) -> &Gf2Matrix {
        &self.generator
    }

    pub fn encode(&self, msg: &BitWord) -> Result<BitWord> {
        self.generator.left_mul(msg)
    }

    /// Visit every codeword of the span (dimension permitting).
    pub fn for_each_codeword<F: FnMut(&BitWord)>(&self, mut f: F) -> Result<()> {
        let k = self.dimension() as u32;
        if k > crate::rm::MAX_EXHAUSTIVE_DIM {
            return Err(Error::TooLarge(format!(
                "subcode dimension {k} too large to enumerate"
            )));
        }
        let mut word = BitWord::zeros(self.blocklength());
        f(&word);
        for x in 1u64..1 << k {
            word.xor_assign(self.generator.row(x.trailing_zeros() as usize));
            f(&word);
        }
        Ok(())
    }
}

/// Split-pair validity: the interleaved word built from `(g, g + h)` obeys
/// the no-consecutive-ones constraint iff `supp(g) ⊆ supp(h)` and `h`
/// vanishes on every zero-run right end of `g`.
pub fn pair_is_valid(g: &BitWord, h: &BitWord) -> Result<bool> {
    if g.len() != h.len() {
        return Err(Error::DimensionMismatch(format!(
            "halves of length {} and {}",
            g.len(),
            h.len()
        )));
    }
    if !g.support_subset_of(h) {
        return Ok(false);
    }
    Ok(rll::zero_run_ends(g).iter().all(|&b| !h.get(b)))
}

/// Number of `h` in RM(m-1, r-1) compatible with a fixed `g`: `h = 1` on
/// `supp(g)` and `h = 0` on the zero-run ends of `g`. Returns the log2 count
/// (`None` when no such `h` exists); nonzero counts are powers of two.
pub fn count_h_given_g(m: u32, r: u32, g: &BitWord) -> Result<Option<u32>> {
    if r == 0 {
        return Err(Error::InvalidParameter("order r must be at least 1".into()));
    }
    if m == 0 || g.len() != 1usize << (m - 1) {
        return Err(Error::DimensionMismatch(format!(
            "g has length {}, expected half a blocklength of 2^{m}",
            g.len()
        )));
    }
    let hcode = RmCode::new(m - 1, r - 1)?;
    let mut cols: Vec<usize> = g.iter_ones().collect();
    let ones = cols.len();
    cols.extend(rll::zero_run_ends(g));
    let mut rhs = BitWord::zeros(cols.len());
    for i in 0..ones {
        rhs.set(i, true);
    }
    // Message coefficients solving G^T x = rhs on the constrained columns.
    let a = hcode.generator().restrict_columns(&cols)?.transpose();
    let sol = solve_affine(&a, &rhs)?;
    Ok(sol.log2_count())
}

/// Exact number of `(d,∞)`-valid codewords of RM(m, r), by enumeration.
pub fn exact_constrained_count(m: u32, r: u32, d: u32) -> Result<u64> {
    let code = RmCode::new(m, r)?;
    let mut count = 0u64;
    code.for_each_codeword(|w| {
        if rll::is_valid(w, d) {
            count += 1;
        }
    })?;
    Ok(count)
}

/// Finite-blocklength rate of RM(m-1, r): `C(m-1, <=r) / 2^(m-1)`.
fn half_rate(m: u32, r: u32) -> f64 {
    binom_sum(m - 1, r) as f64 / (1u128 << (m - 1)) as f64
}

/// Monte-Carlo estimate of the no-consecutive-ones subcode rate.
#[derive(Debug, Clone)]
pub struct McEstimate {
    /// `(R_g + R_h)/2 + log2(sample mean of 2^(-wt(g)-runs0(g)))/2^m`,
    /// clamped at zero.
    pub rate: f64,
    /// Standard error propagated to the rate (delta method on the log-mean).
    pub rate_stderr: f64,
    /// log2 of the sample mean of `2^(-wt(g)-runs0(g))`.
    pub log2_mean: f64,
    /// Relative standard error of the sample mean.
    pub rel_stderr: f64,
    pub samples: u32,
}

/// Sample `g` uniformly from RM(m-1, r) and average `2^(-wt(g) - runs0(g))`
/// in the log domain. The mean feeds the subcode-size lower bound
/// `(R_g + R_h)/2 + log2(mean)/2^m`.
pub fn mc_lower_bound<R: Rng>(m: u32, r: u32, samples: u32, rng: &mut R) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    if r == 0 || r > m {
        return Err(Error::InvalidParameter(format!(
            "order r={r} outside 1..={m}"
        )));
    }
    let gcode = RmCode::new(m - 1, r)?;
    let mut mean = Lse2Stream::new();
    let mut mean_sq = Lse2Stream::new();
    for _ in 0..samples {
        let g = gcode.random_codeword(rng);
        let runs0 = rll::run_stats(&g)?.runs0;
        let x = -((g.weight() + runs0) as f64);
        mean.push(x);
        mean_sq.push(2.0 * x);
    }
    let log2_mean = mean.log2_mean();
    let n = samples as f64;
    // var = n/(n-1) * (mean(4^X) - mean(2^X)^2), expressed through the gap
    // A - B = log2 mean(4^X) - 2 log2 mean(2^X), which is safe in log domain.
    let gap = mean_sq.log2_mean() - 2.0 * log2_mean;
    let rel_stderr = if samples == 1 {
        f64::INFINITY
    } else {
        ((gap.exp2() - 1.0).max(0.0) / (n - 1.0)).sqrt()
    };
    let half_sum = (half_rate(m, r) + half_rate(m, r - 1)) / 2.0;
    let rate = (half_sum + log2_mean / (1u64 << m) as f64).max(0.0);
    Ok(McEstimate {
        rate,
        rate_stderr: rel_stderr / std::f64::consts::LN_2 / (1u64 << m) as f64,
        log2_mean,
        rel_stderr,
        samples,
    })
}

/// Closed-form counterpart of [`mc_lower_bound`] obtained through Jensen's
/// inequality: `(R_g + R_h)/2 - 3/8 - delta/2` with `delta = 2^-(m+1)`,
/// clamped at zero.
pub fn jensen_lower_bound(m: u32, r: u32) -> Result<f64> {
    if r == 0 || r > m {
        return Err(Error::InvalidParameter(format!(
            "order r={r} outside 1..={m}"
        )));
    }
    let half_sum = (half_rate(m, r) + half_rate(m, r - 1)) / 2.0;
    let delta = (0.5f64).powi(m as i32 + 1);
    Ok((half_sum - 0.375 - delta / 2.0).max(0.0))
}

/// Means of the run counts over codewords. For a code whose dual distance is
/// at least 3 the exhaustive means equal `(N+1)/2` and `(N+1)/4` exactly.
#[derive(Debug, Clone, Copy)]
pub struct RunMeans {
    pub total: f64,
    pub zeros: f64,
    pub ones: f64,
}

/// Exhaustive run-count means (dimension-capped).
pub fn run_count_means(code: &RmCode) -> Result<RunMeans> {
    let mut sums = (0u64, 0u64, 0u64);
    let mut count = 0u64;
    code.for_each_codeword(|w| {
        let s = rll::run_stats(w).expect("nonempty");
        sums.0 += s.total() as u64;
        sums.1 += s.runs0 as u64;
        sums.2 += s.runs1 as u64;
        count += 1;
    })?;
    Ok(RunMeans {
        total: sums.0 as f64 / count as f64,
        zeros: sums.1 as f64 / count as f64,
        ones: sums.2 as f64 / count as f64,
    })
}

/// Sampled variant for codes too large to enumerate.
pub fn run_count_means_sampled<R: Rng>(
    code: &RmCode,
    samples: u32,
    rng: &mut R,
) -> Result<RunMeans> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut sums = (0u64, 0u64, 0u64);
    for _ in 0..samples {
        let w = code.random_codeword(rng);
        let s = rll::run_stats(&w)?;
        sums.0 += s.total() as u64;
        sums.1 += s.runs0 as u64;
        sums.2 += s.runs1 as u64;
    }
    let n = samples as f64;
    Ok(RunMeans {
        total: sums.0 as f64 / n,
        zeros: sums.1 as f64 / n,
        ones: sums.2 as f64 / n,
    })
}

/// Named closed-form rate bounds for `(d,∞)` subcodes of rate-R parents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateBound {
    /// Rate of the explicit linear subcode: `R * 2^-z`.
    LinearLb,
    /// Upper bound on any linear subcode: `R / (d+1)`.
    LinearUb,
    /// Existence bound for general subcodes at d = 1: `max(0, R - 3/8)`.
    NonlinearLb,
    /// Upper bound for general subcodes at d = 1: `min(7R/8, C_0(1))`.
    GeneralUb1Inf,
    /// Two-stage scheme: `C_0 R^2 2^-z / (R^2 2^-z + 1 - R + 2^-tau)`.
    ConcatLb { tau: u32 },
    /// Coset-averaging reference: `max(0, C_0 + R - 1)`.
    CosetAvg,
}

impl RateBound {
    pub fn eval(&self, rate: f64, d: u32) -> Result<f64> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rate {rate} outside (0,1)"
            )));
        }
        let z = zero_gap_exponent(d);
        Ok(match *self {
            RateBound::LinearLb => rate * (0.5f64).powi(z as i32),
            RateBound::LinearUb => rate / (d as f64 + 1.0),
            RateBound::NonlinearLb => {
                require_d1(d)?;
                (rate - 0.375).max(0.0)
            }
            RateBound::GeneralUb1Inf => {
                require_d1(d)?;
                (7.0 * rate / 8.0).min(noiseless_capacity(1))
            }
            RateBound::ConcatLb { tau } => {
                if tau == 0 {
                    return Err(Error::InvalidParameter("tau must be at least 1".into()));
                }
                let c0 = noiseless_capacity(d);
                let scaled = rate * rate * (0.5f64).powi(z as i32);
                c0 * scaled / (scaled + 1.0 - rate + (0.5f64).powi(tau as i32))
            }
            RateBound::CosetAvg => (noiseless_capacity(d) + rate - 1.0).max(0.0),
        })
    }
}

fn require_d1(d: u32) -> Result<()> {
    if d != 1 {
        return Err(Error::InvalidParameter(format!(
            "bound is specific to d=1, got d={d}"
        )));
    }
    Ok(())
}

/// One grid row of evaluated bounds.
#[derive(Debug, Clone)]
pub struct BoundRow {
    pub rate: f64,
    pub linear_lb: f64,
    pub nonlinear_lb: Option<f64>,
    pub linear_ub: f64,
    pub general_ub_1inf: Option<f64>,
    pub concat_lb: f64,
    pub coset_avg: f64,
}

/// Evaluate every bound on the grid `step, 2*step, ...` inside (0,1). The
/// d=1-specific curves are present only when `d == 1`.
pub fn bound_table(d: u32, step: f64, tau: u32) -> Result<Vec<BoundRow>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "grid step {step} outside (0, 0.5]"
        )));
    }
    let mut rows = Vec::new();
    let mut i = 1u64;
    loop {
        let rate = step * i as f64;
        if rate >= 1.0 - 1e-12 {
            break;
        }
        rows.push(BoundRow {
            rate,
            linear_lb: RateBound::LinearLb.eval(rate, d)?,
            nonlinear_lb: (d == 1)
                .then(|| RateBound::NonlinearLb.eval(rate, d))
                .transpose()?,
            linear_ub: RateBound::LinearUb.eval(rate, d)?,
            general_ub_1inf: (d == 1)
                .then(|| RateBound::GeneralUb1Inf.eval(rate, d))
                .transpose()?,
            concat_lb: RateBound::ConcatLb { tau }.eval(rate, d)?,
            coset_avg: RateBound::CosetAvg.eval(rate, d)?,
        });
        i += 1;
    }
    Ok(rows)
}

/// All roots of `a(R) = b(R)` on `(lo, hi)`: a sign scan over `scan_steps`
/// panels followed by bisection to 1e-6.
pub fn crossovers<A, B>(a: A, b: B, lo: f64, hi: f64, scan_steps: u32) -> Vec<f64>
where
    A: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    let diff = |x: f64| a(x) - b(x);
    let mut roots = Vec::new();
    let h = (hi - lo) / scan_steps as f64;
    for i in 0..scan_steps {
        let x0 = lo + h * i as f64;
        let x1 = x0 + h;
        let (f0, f1) = (diff(x0), diff(x1));
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut a0, mut a1) = (x0, x1);
            while a1 - a0 > 1e-6 {
                let mid = (a0 + a1) / 2.0;
                if diff(a0) * diff(mid) <= 0.0 {
                    a1 = mid;
                } else {
                    a0 = mid;
                }
            }
            roots.push((a0 + a1) / 2.0);
        }
    }
    roots
}

/// Sole crossover in a bracket; errors when the scan finds none.
pub fn crossover<A, B>(a: A, b: B, lo: f64, hi: f64) -> Result<f64>
where
    A: Fn(f64) -> f64,
    B: Fn(f64) -> f64,
{
    crossovers(a, b, lo, hi, 1000)
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoCrossover(format!("no root in ({lo}, {hi})")))
}

/// The scalar `h_b(2^-x) - 2^-(x+1)`; decreasing on `[2, ∞)` and over the
/// positive integers.
pub fn entropy_gap(x: f64) -> f64 {
    binary_entropy((0.5f64).powf(x).min(1.0)) - (0.5f64).powf(x + 1.0)
}

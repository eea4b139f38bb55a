//! Small numeric helpers: binary entropy, normal quantiles, binomial sums,
//! base-2 log-sum-exp, and adaptive quadrature.

use num_bigint::BigUint;

/// Binary entropy `h_b(p) = -p log2 p - (1-p) log2 (1-p)`, with `h_b(0) = h_b(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    let mut h = 0.0;
    if p > 0.0 {
        h -= p * p.log2();
    }
    if p < 1.0 {
        h -= (1.0 - p) * (1.0 - p).log2();
    }
    h
}

/// Standard normal upper-tail probability `Q(t)`.
pub fn q_func(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

/// Inverse of the standard normal CDF.
///
/// Rational initial guess (Acklam, peak relative error ~1.15e-9) followed by
/// one Halley refinement against an erfc-based CDF.
#[allow(clippy::excessive_precision)] // published coefficients kept verbatim
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile argument must lie in (0,1)");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // One Halley step: e = Phi(x) - p, u = e * sqrt(2*pi) * exp(x^2/2).
    let e = 0.5 * libm::erfc(-x / std::f64::consts::SQRT_2) - p;
    let u = e * (2.0 * std::f64::consts::PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

/// Inverse of the upper-tail function: `q_inv(y)` solves `Q(t) = y`.
pub fn q_inv(y: f64) -> f64 {
    normal_quantile(1.0 - y)
}

/// Binomial coefficient as u128; `m` is expected to stay small (< 100).
pub fn binom(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Partial binomial sum `C(n, <=k)`.
pub fn binom_sum(n: u32, k: u32) -> u128 {
    (0..=k.min(n)).map(|i| binom(n, i)).sum()
}

/// log2(a + b) given log2 values; tolerates -inf inputs.
pub fn lse2(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

/// Streaming base-2 log-sum-exp accumulator.
///
/// Tracks `log2(sum of 2^x_i)` without leaving the log domain, so exponents
/// around -1500 (far below f64 underflow) are handled exactly like small ones.
#[derive(Debug, Clone)]
pub struct Lse2Stream {
    max: f64,
    sum: f64, // sum of 2^(x_i - max)
    count: u64,
}

impl Default for Lse2Stream {
    fn default() -> Self {
        Self::new()
    }
}

impl Lse2Stream {
    pub fn new() -> Self {
        Lse2Stream {
            max: f64::NEG_INFINITY,
            sum: 0.0,
            count: 0,
        }
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.sum += (x - self.max).exp2();
        } else {
            self.sum = self.sum * (self.max - x).exp2() + 1.0;
            self.max = x;
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// log2 of the running sum.
    pub fn log2_sum(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.log2()
        }
    }

    /// log2 of the running mean.
    pub fn log2_mean(&self) -> f64 {
        self.log2_sum() - (self.count as f64).log2()
    }
}

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
                + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 48)
}

/// log2 of a positive big integer as f64 (exact for small values, top-53-bit
/// approximation otherwise). Returns -inf for zero.
pub fn log2_biguint(v: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    let bits = v.bits();
    if bits == 0 {
        return f64::NEG_INFINITY;
    }
    if bits <= 53 {
        return v.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top = (v >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

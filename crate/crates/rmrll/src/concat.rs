//! Two-stage constrained coding: a constrained word drives the systematic
//! positions of an outer Reed-Muller code, and the parity tail is chopped
//! into parts re-encoded by constrained linear inner subcodes, so the whole
//! transmitted block obeys the `(d,∞)` constraint. Decoding reverses the two
//! stages with the exact erasure bit-MAP decoder and only ever reports a bit
//! it can prove.

use crate::channel::{bec_bitmap_decode, BitDecision};
use crate::gf2::{solve_affine, BitWord, Gf2Matrix};
use crate::rll::{zero_gap_exponent, EnumCoder};
use crate::rm::{information_set, r_of_rate, RmCode};
use crate::subcodes::LinearSubcode;
use crate::{Error, Result};
use num_bigint::BigUint;

/// A Reed-Muller code in systematic form: columns permuted so the low-weight
/// information set comes first, rows reduced so the first K columns are the
/// identity. The first K codeword bits equal the message.
pub struct SystematicRm {
    pub m: u32,
    pub r: u32,
    /// Position -> original coordinate; the first K entries list the
    /// information set sorted by (weight, index).
    pub perm: Vec<usize>,
    generator: Gf2Matrix,
}

impl SystematicRm {
    pub fn new(m: u32, r: u32) -> Result<Self> {
        let code = RmCode::new(m, r)?;
        let k = code.k();
        let mut perm: Vec<usize> = (0..code.n()).collect();
        perm.sort_by_key(|&i| (i.count_ones(), i));
        debug_assert_eq!(
            {
                let mut prefix = perm[..k].to_vec();
                prefix.sort_unstable();
                prefix
            },
            information_set(m, r)
        );
        let permuted = code.generator().restrict_columns(&perm)?;
        let (rref, pivots) = permuted.rref();
        if pivots != (0..k).collect::<Vec<_>>() {
            return Err(Error::Inconsistent(
                "low-weight coordinates failed to pivot the generator".into(),
            ));
        }
        Ok(SystematicRm {
            m,
            r,
            perm,
            generator: rref,
        })
    }

    pub fn k(&self) -> usize {
        self.generator.rows()
    }

    pub fn n(&self) -> usize {
        self.generator.cols()
    }

    pub fn generator(&self) -> &Gf2Matrix {
        &self.generator
    }

    /// Encode; the first K output bits equal `msg`.
    pub fn encode(&self, msg: &BitWord) -> Result<BitWord> {
        self.generator.left_mul(msg)
    }
}

/// Parameters of one two-stage instance.
pub struct TwoStageParams {
    pub m: u32,
    pub r: u32,
    pub d: u32,
    pub z: u32,
    pub tau: u32,
    pub epsilon: f64,
    /// Outer dimension K and blocklength N = 2^m.
    pub k: usize,
    pub n: usize,
    /// Inner blocklength exponent `n* = m - tau + z` and `N_part = 2^n*`.
    pub n_star: u32,
    pub n_part: usize,
    /// Number of parity parts.
    pub l: usize,
    /// Payload bits per part (the final part carries the padding).
    pub part_bits: usize,
    /// Total channel uses `K + L * N_part`.
    pub n_tot: usize,
    pub outer: SystematicRm,
    pub inner: LinearSubcode,
    /// Parent code of the inner subcode; its decoder is used in stage one.
    pub inner_parent: RmCode,
    coder: EnumCoder,
}

/// Decode outcome: a recovered message rank, or the stage that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(BigUint),
    /// Some inner block left bits undecided (0-based block index).
    InnerUndecided(usize),
    /// The outer stage left message bits undecided.
    OuterUndecided,
}

impl TwoStageParams {
    /// Choose parameters from a target rate: the outer order is
    /// `r_of_rate(m, rate)` and the rest follows [`Self::with_order`].
    pub fn select(m: u32, rate: f64, d: u32, epsilon: f64, tau: u32) -> Result<Self> {
        Self::with_order(m, r_of_rate(m, rate)?, d, epsilon, tau)
    }

    /// Build an instance from an explicit outer order `r`.
    ///
    /// The part count L is the smallest integer satisfying both the dyadic
    /// sizing rule `L >= 2^tau (N-K) / (K (1-epsilon))` and the payload fit
    /// `ceil((N-K)/L) <= dim(inner)`. Up to L-1 zeros pad the parity tail.
    pub fn with_order(m: u32, r: u32, d: u32, epsilon: f64, tau: u32) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidParameter(format!(
                "epsilon {epsilon} outside [0,1)"
            )));
        }
        if tau == 0 || tau >= m {
            return Err(Error::InvalidParameter(format!("tau {tau} outside 1..{m}")));
        }
        let z = zero_gap_exponent(d);
        let n_star = m - tau + z;
        if n_star == 0 || n_star > m {
            return Err(Error::Infeasible(format!(
                "inner blocklength exponent {n_star}"
            )));
        }
        let r_inner = r.min(n_star);
        if r_inner < z {
            return Err(Error::Infeasible(format!(
                "inner order {r_inner} below zero-gap exponent {z}"
            )));
        }
        let outer = SystematicRm::new(m, r)?;
        let inner = LinearSubcode::new(n_star, r_inner, d)?;
        let inner_parent = RmCode::new(n_star, r_inner)?;
        let (k, n) = (outer.k(), outer.n());
        let parity = n - k;
        if parity == 0 {
            return Err(Error::Infeasible(
                "no parity bits to re-encode (r = m)".into(),
            ));
        }
        if inner.dimension() == 0 {
            return Err(Error::Infeasible("inner code has dimension zero".into()));
        }
        let l_sizing =
            ((1u64 << tau) as f64 * parity as f64 / (k as f64 * (1.0 - epsilon))).ceil() as usize;
        let l_fit = parity.div_ceil(inner.dimension());
        let l = l_sizing.max(l_fit).max(1);
        let part_bits = parity.div_ceil(l);
        debug_assert!(part_bits <= inner.dimension());
        let n_part = 1usize << n_star;
        let coder = EnumCoder::new(k, d)?;
        Ok(TwoStageParams {
            m,
            r,
            d,
            z,
            tau,
            epsilon,
            k,
            n,
            n_star,
            n_part,
            l,
            part_bits,
            n_tot: k + l * n_part,
            outer,
            inner,
            inner_parent,
            coder,
        })
    }

    /// Number of encodable messages (valid words of length K).
    pub fn message_count(&self) -> &BigUint {
        self.coder.count()
    }

    /// Exact finite-blocklength rate: `log2(message count) / N_tot`.
    pub fn achieved_rate(&self) -> f64 {
        crate::math::log2_biguint(self.message_count()) / self.n_tot as f64
    }

    /// Encode a message rank into the transmitted block.
    pub fn encode(&self, rank: &BigUint) -> Result<BitWord> {
        let w = self.coder.encode(rank)?;
        let c = self.outer.encode(&w)?;
        let mut x = BitWord::zeros(self.n_tot);
        for i in 0..self.k {
            x.set(i, w.get(i));
        }
        for (block, part) in self.parity_parts(&c).into_iter().enumerate() {
            let cw = self.inner.encode(&part)?;
            for j in 0..self.n_part {
                if cw.get(j) {
                    x.set(self.k + block * self.n_part + j, true);
                }
            }
        }
        Ok(x)
    }

    /// Chop the parity tail into L zero-padded inner messages.
    fn parity_parts(&self, c: &BitWord) -> Vec<BitWord> {
        let mut parts = Vec::with_capacity(self.l);
        for block in 0..self.l {
            let mut msg = BitWord::zeros(self.inner.dimension());
            for j in 0..self.part_bits {
                let idx = self.k + block * self.part_bits + j;
                if idx < self.n && c.get(idx) {
                    msg.set(j, true);
                }
            }
            parts.push(msg);
        }
        parts
    }

    /// Two-stage erasure decode. Stage one recovers each inner block with the
    /// parent code's bit-MAP decoder; stage two feeds the recovered parity
    /// and the raw systematic symbols to the outer decoder.
    pub fn decode(&self, y: &[f64]) -> Result<DecodeOutcome> {
        if y.len() != self.n_tot {
            return Err(Error::DimensionMismatch(format!(
                "received length {} vs {}",
                y.len(),
                self.n_tot
            )));
        }
        let mut parity = BitWord::zeros(self.n - self.k);
        for block in 0..self.l {
            let slice = &y[self.k + block * self.n_part..self.k + (block + 1) * self.n_part];
            let decisions = bec_bitmap_decode(self.inner_parent.generator(), slice)?;
            if decisions.iter().any(|b| *b == BitDecision::Undecided) {
                return Ok(DecodeOutcome::InnerUndecided(block));
            }
            let mut cw = BitWord::zeros(self.n_part);
            for (j, b) in decisions.iter().enumerate() {
                cw.set(j, b.decided().expect("all decided"));
            }
            // Invert the inner encoding; the decided word must lie in the
            // subcode when it is correct, so infeasibility is a failure.
            let system = self.inner.generator().transpose();
            let sol = solve_affine(&system, &cw)?;
            let Some(msg) = sol.particular else {
                return Ok(DecodeOutcome::InnerUndecided(block));
            };
            debug_assert!(sol.nullspace.is_empty());
            for j in 0..self.part_bits {
                let idx = block * self.part_bits + j;
                if idx < parity.len() {
                    parity.set(idx, msg.get(j));
                }
            }
        }
        // Outer stage: raw systematic symbols, recovered parity as clean
        // symbols.
        let mut outer_y = Vec::with_capacity(self.n);
        outer_y.extend_from_slice(&y[..self.k]);
        for j in 0..self.n - self.k {
            outer_y.push(if parity.get(j) { -1.0 } else { 1.0 });
        }
        let decisions = bec_bitmap_decode(self.outer.generator(), &outer_y)?;
        let mut w = BitWord::zeros(self.k);
        for (i, b) in decisions.iter().take(self.k).enumerate() {
            match b.decided() {
                Some(v) => w.set(i, v),
                None => return Ok(DecodeOutcome::OuterUndecided),
            }
        }
        Ok(DecodeOutcome::Decoded(self.coder.decode(&w)?))
    }
}

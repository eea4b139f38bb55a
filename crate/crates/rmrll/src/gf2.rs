//! Bit-packed GF(2) vectors and matrices with word-parallel elimination.
//!
//! Index 0 is the leftmost (first) coordinate everywhere in the crate; all
//! cross-module indexing rests on that convention.

use crate::{Error, Result};

const WORD_BITS: usize = 64;

/// Fixed-length binary vector over GF(2), packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitWord {
    len: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for BitWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitWord({})", self.to_bit_string())
    }
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        BitWord {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        for i in 0..len {
            w.set(i, true);
        }
        w
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            w.set(i, b);
        }
        w
    }

    /// Parse a string of `0`/`1` characters, index 0 first.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut w = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(i, true),
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "bit string may contain only 0/1, got {c:?}"
                    )))
                }
            }
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range (len {})",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if v {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    /// In-place XOR with an equal-length word.
    pub fn xor_assign(&mut self, other: &BitWord) {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitWord) -> BitWord {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Coordinatewise AND; used for support-restriction arguments.
    pub fn and(&self, other: &BitWord) -> BitWord {
        assert_eq!(self.len, other.len, "and of unequal lengths");
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// True iff `supp(self) ⊆ supp(other)`.
    pub fn support_subset_of(&self, other: &BitWord) -> bool {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

/// Row-major binary matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitWord>,
}

impl std::fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {}", r.to_bit_string())?;
        }
        Ok(())
    }
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![BitWord::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitWord>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        Ok(Gf2Matrix {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitWord {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r].set(c, v);
    }

    pub fn column(&self, c: usize) -> BitWord {
        let mut out = BitWord::zeros(self.rows);
        for r in 0..self.rows {
            if self.data[r].get(c) {
                out.set(r, true);
            }
        }
        out
    }

    /// GF(2) row rank by in-place elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| work[r].get(c)) else {
                continue;
            };
            work.swap(rank, p);
            let pivot = work[rank].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r != rank && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Reduced row-echelon form together with the pivot column indices
    /// (strictly increasing). The row space is preserved; non-pivot rows are
    /// zero and sorted to the bottom.
    pub fn rref(&self) -> (Gf2Matrix, Vec<usize>) {
        let mut work = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| work[i].get(c)) else {
                continue;
            };
            work.swap(r, p);
            let pivot = work[r].clone();
            for (i, row) in work.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        (
            Gf2Matrix {
                rows: self.rows,
                cols: self.cols,
                data: work,
            },
            pivots,
        )
    }

    /// Submatrix with the columns in `cols`, in the given order.
    pub fn restrict_columns(&self, cols: &[usize]) -> Result<Gf2Matrix> {
        if let Some(&bad) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(Error::IndexOutOfRange(format!(
                "column {bad} out of range (cols {})",
                self.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.data[r].get(c) {
                    out.data[r].set(j, true);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].iter_ones() {
                out.data[c].set(r, true);
            }
        }
        out
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack {} vs {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Gf2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Vector-matrix product `msg · M`: XOR of the rows selected by `msg`.
    pub fn left_mul(&self, msg: &BitWord) -> Result<BitWord> {
        if msg.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "message length {} vs {} rows",
                msg.len(),
                self.rows
            )));
        }
        let mut out = BitWord::zeros(self.cols);
        for r in msg.iter_ones() {
            out.xor_assign(&self.data[r]);
        }
        Ok(out)
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitWord) -> bool {
        if v.len() != self.cols {
            return false;
        }
        let stacked = self
            .vstack(&Gf2Matrix {
                rows: 1,
                cols: self.cols,
                data: vec![v.clone()],
            })
            .expect("equal cols");
        stacked.rank() == self.rank()
    }
}

/// Solution set of an affine system `Ax = b` over GF(2).
///
/// When feasible, the set is `particular + span(nullspace)`, so it holds
/// exactly `2^(nullspace.len())` vectors. Counts are reported as log2
/// exponents; exact integers only while the exponent stays small.
#[derive(Debug, Clone)]
pub struct AffineSolutionSet {
    pub feasible: bool,
    pub particular: Option<BitWord>,
    pub nullspace: Vec<BitWord>,
}

impl AffineSolutionSet {
    /// log2 of the number of solutions; `None` when infeasible (count 0).
    pub fn log2_count(&self) -> Option<u32> {
        self.feasible.then_some(self.nullspace.len() as u32)
    }

    /// Exact solution count. `Some(0)` when infeasible, `None` when the
    /// exponent exceeds 62 and the count no longer fits.
    pub fn exact_count(&self) -> Option<u64> {
        if !self.feasible {
            return Some(0);
        }
        let e = self.nullspace.len();
        (e <= 62).then(|| 1u64 << e)
    }

    /// A bit of every solution that is constant across the set, if any.
    pub fn is_unique(&self) -> bool {
        self.feasible && self.nullspace.is_empty()
    }
}

/// Solve `Ax = b` over GF(2), describing the full affine solution set.
pub fn solve_affine(a: &Gf2Matrix, b: &BitWord) -> Result<AffineSolutionSet> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} vs {} rows",
            b.len(),
            a.rows()
        )));
    }
    // Eliminate on [A | b].
    let mut work: Vec<BitWord> = a.data.clone();
    let mut rhs = b.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..a.cols() {
        let Some(p) = (r..a.rows()).find(|&i| work[i].get(c)) else {
            continue;
        };
        work.swap(r, p);
        let (br, bp) = (rhs.get(r), rhs.get(p));
        rhs.set(r, bp);
        rhs.set(p, br);
        let pivot = work[r].clone();
        let pivot_b = rhs.get(r);
        for i in 0..a.rows() {
            if i != r && work[i].get(c) {
                work[i].xor_assign(&pivot);
                if pivot_b {
                    let v = rhs.get(i);
                    rhs.set(i, !v);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == a.rows() {
            break;
        }
    }
    // Inconsistent iff a zero row has rhs 1.
    for i in r..a.rows() {
        if rhs.get(i) {
            debug_assert!(work[i].is_zero());
            return Ok(AffineSolutionSet {
                feasible: false,
                particular: None,
                nullspace: vec![],
            });
        }
    }
    let mut particular = BitWord::zeros(a.cols());
    for &(row, col) in &pivots {
        if rhs.get(row) {
            particular.set(col, true);
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut nullspace = Vec::new();
    let mut is_pivot = vec![false; a.cols()];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    for free in (0..a.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = BitWord::zeros(a.cols());
        v.set(free, true);
        for &(row, col) in &pivots {
            if work[row].get(free) {
                v.set(col, true);
            }
        }
        nullspace.push(v);
    }
    Ok(AffineSolutionSet {
        feasible: true,
        particular: Some(particular),
        nullspace,
    })
}

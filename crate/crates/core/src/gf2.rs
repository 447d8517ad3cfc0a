//! Square bit matrices over GF(2).
//!
//! Rows are packed little-endian into `u64` words: column `c` of a row lives
//! in word `c / 64`, bit `c % 64`. Adding one row to another is a word-wise
//! XOR sweep, which is the unit of work every synthesis routine is built on.
//!
//! Wire `i` of a circuit corresponds to row `i` of its matrix (0-based).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("invalid dimension {0}: matrices must have at least one row")]
    InvalidDimension(usize),
    #[error("row operation must use distinct rows, got {0} -> {0}")]
    SameRow(usize),
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An `n x n` matrix over the two-element field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// All-zero matrix. Not invertible; useful as a starting point for
    /// building matrices bit by bit.
    pub fn zeros(n: usize) -> Result<Self, Gf2Error> {
        if n == 0 {
            return Err(Gf2Error::InvalidDimension(n));
        }
        let words_per_row = n.div_ceil(WORD_BITS);
        Ok(Self {
            n,
            words_per_row,
            data: vec![0; n * words_per_row],
        })
    }

    pub fn identity(n: usize) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// The elementary matrix whose left action adds row `src` into row `dst`:
    /// the identity with bit `(dst, src)` set.
    pub fn elementary(n: usize, src: usize, dst: usize) -> Result<Self, Gf2Error> {
        let mut m = Self::identity(n)?;
        m.check_pair(src, dst)?;
        m.set(dst, src, true);
        Ok(m)
    }

    /// Builds a matrix from row-major booleans. Every row must have length
    /// equal to the number of rows.
    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(rows.len())?;
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != m.n {
                return Err(Gf2Error::DimensionMismatch {
                    left: m.n,
                    right: row.len(),
                });
            }
            for (c, &bit) in row.iter().enumerate() {
                m.set(r, c, bit);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(
            row < self.n && col < self.n,
            "bit ({row},{col}) out of range"
        );
        (self.data[row * self.words_per_row + col / WORD_BITS] >> (col % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(
            row < self.n && col < self.n,
            "bit ({row},{col}) out of range"
        );
        let word = &mut self.data[row * self.words_per_row + col / WORD_BITS];
        let mask = 1u64 << (col % WORD_BITS);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    #[inline]
    fn row_words(&self, row: usize) -> &[u64] {
        let start = row * self.words_per_row;
        &self.data[start..start + self.words_per_row]
    }

    pub fn row(&self, row: usize) -> Vec<bool> {
        (0..self.n).map(|c| self.get(row, c)).collect()
    }

    pub fn row_is_zero(&self, row: usize) -> bool {
        self.row_words(row).iter().all(|&w| w == 0)
    }

    /// Bits `[start, start + width)` of a row packed into an integer, with
    /// column `start + j` at bit `j`. `width` is at most 64.
    pub fn sub_row(&self, row: usize, start: usize, width: usize) -> u64 {
        debug_assert!(width <= WORD_BITS && start + width <= self.n);
        if width == 0 {
            return 0;
        }
        let words = self.row_words(row);
        let (w, off) = (start / WORD_BITS, start % WORD_BITS);
        let mut bits = words[w] >> off;
        if off != 0 && off + width > WORD_BITS {
            bits |= words[w + 1] << (WORD_BITS - off);
        }
        if width < WORD_BITS {
            bits &= (1u64 << width) - 1;
        }
        bits
    }

    fn check_pair(&self, src: usize, dst: usize) -> Result<(), Gf2Error> {
        for index in [src, dst] {
            if index >= self.n {
                return Err(Gf2Error::IndexOutOfRange { index, n: self.n });
            }
        }
        if src == dst {
            return Err(Gf2Error::SameRow(src));
        }
        Ok(())
    }

    /// Row `dst` becomes `row[dst] XOR row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) -> Result<(), Gf2Error> {
        self.check_pair(src, dst)?;
        self.xor_row(src, dst);
        Ok(())
    }

    /// Unchecked row addition for the elimination loops. Indices must be
    /// distinct and in range.
    #[inline]
    pub(crate) fn xor_row(&mut self, src: usize, dst: usize) {
        debug_assert!(src != dst && src < self.n && dst < self.n);
        let wpr = self.words_per_row;
        let (s, d) = (src * wpr, dst * wpr);
        if s < d {
            let (lo, hi) = self.data.split_at_mut(d);
            for (x, y) in hi[..wpr].iter_mut().zip(&lo[s..s + wpr]) {
                *x ^= y;
            }
        } else {
            let (lo, hi) = self.data.split_at_mut(s);
            for (x, y) in lo[d..d + wpr].iter_mut().zip(&hi[..wpr]) {
                *x ^= y;
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n).expect("n >= 1");
        for r in 0..self.n {
            for c in 0..self.n {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product `self * other` over GF(2).
    pub fn multiply(&self, other: &Self) -> Result<Self, Gf2Error> {
        if self.n != other.n {
            return Err(Gf2Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut out = Self::zeros(self.n)?;
        let wpr = self.words_per_row;
        for i in 0..self.n {
            let dst = i * wpr;
            for k in 0..self.n {
                if self.get(i, k) {
                    let src = other.row_words(k);
                    for (x, y) in out.data[dst..dst + wpr].iter_mut().zip(src) {
                        *x ^= y;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self * x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[bool]) -> Result<Vec<bool>, Gf2Error> {
        if x.len() != self.n {
            return Err(Gf2Error::DimensionMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        Ok((0..self.n)
            .map(|r| (0..self.n).fold(false, |acc, c| acc ^ (self.get(r, c) & x[c])))
            .collect())
    }

    /// Rank over GF(2), computed on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(pivot) = (rank..self.n).find(|&r| work.get(r, col)) else {
                continue;
            };
            if pivot != rank {
                work.swap_rows(pivot, rank);
            }
            for r in rank + 1..self.n {
                if work.get(r, col) {
                    work.xor_row(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        let wpr = self.words_per_row;
        for w in 0..wpr {
            self.data.swap(a * wpr + w, b * wpr + w);
        }
    }

    /// Uniformly random bits. Invertibility is not guaranteed.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self, Gf2Error> {
        let mut m = Self::zeros(n)?;
        let tail = n % WORD_BITS;
        for r in 0..n {
            let start = r * m.words_per_row;
            for w in 0..m.words_per_row {
                m.data[start + w] = rng.random();
            }
            if tail != 0 {
                m.data[start + m.words_per_row - 1] &= (1u64 << tail) - 1;
            }
        }
        Ok(m)
    }

    /// Uniformly random invertible matrix, by rejection sampling. The same
    /// `(n, seed)` always yields the same matrix.
    pub fn random_invertible(n: usize, seed: u64) -> Result<Self, Gf2Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let m = Self::random(n, &mut rng)?;
            if m.is_invertible() {
                return Ok(m);
            }
        }
    }

    /// Serializes to the text format: one line of `0`/`1` per row.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the text format. Line numbers in errors are 1-based.
    pub fn parse(text: &str) -> Result<Self, Gf2Error> {
        let lines: Vec<&str> = text.lines().collect();
        let mut rows = Vec::with_capacity(lines.len());
        for (i, raw) in lines.iter().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            let lineno = i + 1;
            if line.is_empty() {
                // only tolerated as trailing padding
                if lines[i..].iter().all(|l| l.trim().is_empty()) {
                    break;
                }
                return Err(Gf2Error::Parse {
                    line: lineno,
                    msg: "empty row".into(),
                });
            }
            let row = line
                .chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Gf2Error::Parse {
                        line: lineno,
                        msg: format!("unexpected character {other:?}"),
                    }),
                })
                .collect::<Result<Vec<bool>, _>>()?;
            if let Some(first) = rows.first().map(Vec::len) {
                if row.len() != first {
                    return Err(Gf2Error::Parse {
                        line: lineno,
                        msg: format!("row has {} columns, expected {first}", row.len()),
                    });
                }
            }
            if rows.len() == row.len() {
                return Err(Gf2Error::Parse {
                    line: lineno,
                    msg: format!("matrix is not square: more than {} rows", row.len()),
                });
            }
            rows.push(row);
        }
        let Some(width) = rows.first().map(Vec::len) else {
            return Err(Gf2Error::Parse {
                line: 1,
                msg: "empty matrix".into(),
            });
        };
        if rows.len() != width {
            return Err(Gf2Error::Parse {
                line: rows.len() + 1,
                msg: format!("matrix is not square: {} rows of width {width}", rows.len()),
            });
        }
        Self::from_rows(&rows)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut line = String::with_capacity(self.n + 1);
        for r in 0..self.n {
            line.clear();
            line.extend((0..self.n).map(|c| if self.get(r, c) { '1' } else { '0' }));
            line.push('\n');
            f.write_str(&line)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({}x{})", self.n, self.n)?;
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BitMatrix {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

/// Size of GL(n, 2): the number of distinct linear reversible functions on
/// `n` wires, `prod_{i=0}^{n-1} (2^n - 2^i)`.
pub fn count_linear_reversible(n: usize) -> Result<BigUint, Gf2Error> {
    if n == 0 {
        return Err(Gf2Error::InvalidDimension(n));
    }
    let one = BigUint::from(1u32);
    let full = &one << n;
    Ok((0..n).fold(one.clone(), |acc, i| acc * (&full - (&one << i))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::parse(&rows.join("\n")).unwrap()
    }

    const UPPER_AFTER_LOWER_PASS: [&str; 6] =
        ["110000", "010110", "001011", "000100", "000011", "000001"];
    const WORKED: [&str; 6] = ["110000", "100110", "010010", "111111", "110111", "001110"];

    /// Independent of `rank`: a set of rows is independent iff no nonempty
    /// subset XORs to zero.
    fn full_rank_by_subsets(a: &BitMatrix) -> bool {
        let n = a.n();
        (1u32..(1 << n)).all(|subset| {
            (0..n).any(|c| {
                (0..n)
                    .filter(|&r| subset >> r & 1 == 1)
                    .fold(false, |acc, r| acc ^ a.get(r, c))
            })
        })
    }

    #[test]
    fn identity_basics() {
        assert_eq!(BitMatrix::identity(1).unwrap().to_text(), "1\n");
        assert_eq!(BitMatrix::identity(2).unwrap().to_text(), "10\n01\n");
        assert_eq!(BitMatrix::identity(0), Err(Gf2Error::InvalidDimension(0)));
    }

    #[test]
    fn add_row_xors_and_is_involution() {
        let mut a = m(&["11", "10"]);
        a.add_row(0, 1).unwrap();
        assert_eq!(a, m(&["11", "01"]));
        a.add_row(0, 1).unwrap();
        assert_eq!(a, m(&["11", "10"]));
    }

    #[test]
    fn add_row_errors() {
        let mut a = BitMatrix::identity(3).unwrap();
        assert_eq!(a.add_row(1, 1), Err(Gf2Error::SameRow(1)));
        assert_eq!(
            a.add_row(0, 3),
            Err(Gf2Error::IndexOutOfRange { index: 3, n: 3 })
        );
        assert_eq!(a, BitMatrix::identity(3).unwrap());
    }

    #[test]
    fn worked_example_first_section_step_a() {
        let mut a = m(&WORKED);
        a.add_row(0, 3).unwrap();
        a.add_row(0, 4).unwrap();
        assert_eq!(a.sub_row(3, 0, 2), 0);
        assert_eq!(a.sub_row(4, 0, 2), 0);
        assert_eq!(a.to_text().lines().nth(3), Some("001111"));
        assert_eq!(a.to_text().lines().nth(4), Some("000111"));
    }

    #[test]
    fn transpose_involution_and_upper_to_lower() {
        let id = BitMatrix::identity(3).unwrap();
        assert_eq!(id.transpose(), id);
        // upper-triangular result of the lower pass on the worked example
        let upper = m(&UPPER_AFTER_LOWER_PASS);
        let lower = m(&["100000", "110000", "001000", "010100", "011010", "001011"]);
        assert_eq!(upper.transpose(), lower);
        assert_eq!(upper.transpose().transpose(), upper);
    }

    #[test]
    fn multiply_figure_two_product() {
        // G6 * G5 * ... * G1
        let factors = [
            m(&["1000", "0100", "0010", "0011"]),
            m(&["1100", "0100", "0010", "0001"]),
            m(&["1000", "0110", "0010", "0001"]),
            m(&["1000", "0100", "0110", "0001"]),
            m(&["1000", "0100", "0010", "0011"]),
            m(&["1000", "1100", "0010", "0001"]),
        ];
        let product = factors
            .iter()
            .skip(1)
            .fold(factors[0].clone(), |acc, g| acc.multiply(g).unwrap());
        assert_eq!(product, m(&["1010", "0010", "1110", "1101"]));
    }

    #[test]
    fn multiply_identity_and_elementary_square() {
        let a = m(&WORKED);
        let id = BitMatrix::identity(6).unwrap();
        assert_eq!(id.multiply(&a).unwrap(), a);
        let e = BitMatrix::elementary(6, 2, 4).unwrap();
        assert_eq!(e.multiply(&e).unwrap(), id);
        assert!(matches!(
            id.multiply(&BitMatrix::identity(5).unwrap()),
            Err(Gf2Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_cases() {
        assert_eq!(BitMatrix::identity(5).unwrap().rank(), 5);
        assert_eq!(BitMatrix::zeros(3).unwrap().rank(), 0);
        let a = m(&WORKED);
        assert!(full_rank_by_subsets(&a));
        assert_eq!(a.rank(), 6);
        assert_eq!(m(&["11", "11"]).rank(), 1);
    }

    #[test]
    fn random_invertible_deterministic_and_invertible() {
        let a = BitMatrix::random_invertible(8, 42).unwrap();
        assert_eq!(a, BitMatrix::random_invertible(8, 42).unwrap());
        for n in [1, 2, 3, 7, 63, 64, 65, 130] {
            for seed in 0..5 {
                assert!(BitMatrix::random_invertible(n, seed)
                    .unwrap()
                    .is_invertible());
            }
        }
    }

    #[test]
    fn random_invertible_covers_gl22_uniformly() {
        use std::collections::HashMap;
        let draws = 1000;
        let mut freq: HashMap<String, usize> = HashMap::new();
        for seed in 0..draws {
            *freq
                .entry(BitMatrix::random_invertible(2, seed).unwrap().to_text())
                .or_default() += 1;
        }
        assert_eq!(freq.len(), 6);
        for (k, v) in freq {
            let p = v as f64 / draws as f64;
            assert!((p - 1.0 / 6.0).abs() <= 0.05, "{k:?} frequency {p}");
        }
    }

    #[test]
    fn count_small_values() {
        let c: Vec<u64> = (1..=4)
            .map(|n| count_linear_reversible(n).unwrap().try_into().unwrap())
            .collect();
        assert_eq!(c, vec![1, 6, 168, 20160]);
        assert!(count_linear_reversible(0).is_err());
        assert!(count_linear_reversible(9).unwrap().bits() > 64);
    }

    #[test]
    fn count_matches_brute_force_enumeration() {
        for n in 1..=4usize {
            let total = 1u32 << (n * n);
            let found = (0..total)
                .filter(|bits| {
                    let mut a = BitMatrix::zeros(n).unwrap();
                    for k in 0..n * n {
                        a.set(k / n, k % n, bits >> k & 1 == 1);
                    }
                    full_rank_by_subsets(&a)
                })
                .count();
            assert_eq!(
                BigUint::from(found),
                count_linear_reversible(n).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn sub_row_across_word_boundary() {
        let mut a = BitMatrix::zeros(130).unwrap();
        a.set(5, 62, true);
        a.set(5, 64, true);
        a.set(5, 65, true);
        assert_eq!(a.sub_row(5, 62, 4), 0b1101);
        assert_eq!(a.sub_row(5, 64, 2), 0b11);
        assert_eq!(a.sub_row(5, 0, 62), 0);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = BitMatrix::parse("10\n012\n").unwrap_err();
        assert!(matches!(err, Gf2Error::Parse { line: 2, .. }), "{err}");
        let err = BitMatrix::parse("10\n0x\n").unwrap_err();
        assert!(matches!(err, Gf2Error::Parse { line: 2, .. }));
        let err = BitMatrix::parse("100\n010\n").unwrap_err();
        assert!(matches!(err, Gf2Error::Parse { line: 3, .. }), "{err}");
        let err = BitMatrix::parse("10\n01\n11\n").unwrap_err();
        assert!(matches!(err, Gf2Error::Parse { line: 3, .. }), "{err}");
        assert!(BitMatrix::parse("").is_err());
        assert!(BitMatrix::parse("10\n\n01\n").is_err());
    }

    #[test]
    fn text_round_trip() {
        let a = BitMatrix::random_invertible(70, 3).unwrap();
        assert_eq!(a.to_text().parse::<BitMatrix>().unwrap(), a);
        assert_eq!(
            BitMatrix::parse("10\r\n01\r\n").unwrap(),
            BitMatrix::identity(2).unwrap()
        );
    }
}

//! Dense linear algebra over GF(2) with bit-packed rows.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2). Bits past `len` are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Bit `i` of the vector is bit `i` of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD, "from_u64 supports at most 64 bits");
        let mut v = BitVector::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = value & mask;
        }
        v
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = BitVector::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a BitVector>) -> BitVector {
        let parts: Vec<&BitVector> = parts.into_iter().collect();
        let len = parts.iter().map(|p| p.len).sum();
        let mut out = BitVector::zeros(len);
        let mut at = 0;
        for p in parts {
            for i in 0..p.len {
                if p.get(i) {
                    out.set(at + i, true);
                }
            }
            at += p.len;
        }
        out
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len, "slice out of range");
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                out.set(i, true);
            }
        }
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::parse("", format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(BitVector::from_bools(&bits))
    }
}

/// Dense `rows x cols` matrix over GF(2), stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

/// Reduced row echelon form together with the pivot column of each nonzero row.
struct Echelon {
    reduced: Gf2Matrix,
    pivots: Vec<usize>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix { rows, cols, data: vec![BitVector::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Dimension(format!("row {bad} has length {} but expected {cols}", rows[bad].len())));
        }
        Ok(Gf2Matrix { rows: rows.len(), cols, data: rows })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Gf2Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::Dimension(format!("column {j} has length {} but expected {rows}", c.len())));
            }
            for i in 0..rows {
                if c.get(i) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Parses newline-separated rows of `0`/`1`. An empty string is a matrix
    /// with zero rows and zero columns.
    pub fn from_text(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if lines.is_empty() {
            return Ok(Gf2Matrix::zeros(0, 0));
        }
        let rows = lines.iter().map(|l| l.parse::<BitVector>()).collect::<Result<Vec<_>>>()?;
        let cols = rows[0].len();
        Gf2Matrix::from_rows(cols, rows).map_err(|e| Error::parse("", format!("ragged matrix text: {e}")))
    }

    pub fn to_text(&self) -> String {
        if self.cols == 0 {
            return String::new();
        }
        self.data.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.data[r].set(c, bit)
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            for j in 0..self.cols {
                if row.get(j) {
                    out.data[i].xor_assign(&other.data[j]);
                }
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut out = BitVector::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.dot(x) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Side-by-side concatenation `[a | b | ...]`.
    pub fn hstack(rows: usize, parts: &[&Gf2Matrix]) -> Result<Gf2Matrix> {
        if let Some(p) = parts.iter().find(|p| p.rows != rows) {
            return Err(Error::Dimension(format!("hstack of {} rows into {rows}", p.rows)));
        }
        let cols = parts.iter().map(|p| p.cols).sum();
        let data = (0..rows).map(|r| BitVector::concat(parts.iter().map(|p| &p.data[r]))).collect();
        Ok(Gf2Matrix { rows, cols, data })
    }

    /// Stacked concatenation of row blocks.
    pub fn vstack(cols: usize, parts: &[&Gf2Matrix]) -> Result<Gf2Matrix> {
        if let Some(p) = parts.iter().find(|p| p.cols != cols) {
            return Err(Error::Dimension(format!("vstack of {} columns into {cols}", p.cols)));
        }
        let data: Vec<BitVector> = parts.iter().flat_map(|p| p.data.iter().cloned()).collect();
        Ok(Gf2Matrix { rows: data.len(), cols, data })
    }

    pub fn column_block(&self, start: usize, len: usize) -> Gf2Matrix {
        let data = self.data.iter().map(|r| r.slice(start, len)).collect();
        Gf2Matrix { rows: self.rows, cols: len, data }
    }

    pub fn row_block(&self, start: usize, len: usize) -> Gf2Matrix {
        Gf2Matrix { rows: len, cols: self.cols, data: self.data[start..start + len].to_vec() }
    }

    fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| m.data[i].get(c)) else {
                continue;
            };
            m.data.swap(r, p);
            let pivot_row = m.data[r].clone();
            for i in 0..self.rows {
                if i != r && m.data[i].get(c) {
                    m.data[i].xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column of the
    /// reduced echelon form, in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<BitVector> {
        let Echelon { reduced, pivots } = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = BitVector::unit(self.cols, f);
                for (row, &p) in pivots.iter().enumerate() {
                    if reduced.get(row, f) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }

    /// Some `x` with `self * x = y`, or `None` when `y` is outside the column space.
    pub fn solve(&self, y: &BitVector) -> Result<Option<BitVector>> {
        if y.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                y.len(),
                self.rows
            )));
        }
        let augmented = Gf2Matrix::hstack(self.rows, &[self, &Gf2Matrix::from_columns(self.rows, std::slice::from_ref(y))?])?;
        let Echelon { reduced, pivots } = augmented.echelon();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            if reduced.get(row, self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    /// Some `L` with `L * self = I`, which exists iff the columns are independent.
    pub fn left_inverse(&self) -> Option<Gf2Matrix> {
        let t = self.transpose();
        let rows = (0..self.cols)
            .map(|j| t.solve(&BitVector::unit(self.cols, j)).ok().flatten())
            .collect::<Option<Vec<_>>>()?;
        Gf2Matrix::from_rows(self.rows, rows).ok()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in &self.data {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> Gf2Matrix {
        Gf2Matrix::from_text(text).unwrap()
    }

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn identity_rank() {
        assert_eq!(Gf2Matrix::identity(3).rank(), 3);
    }

    #[test]
    fn repeated_rows_rank_one() {
        assert_eq!(m("11\n11").rank(), 1);
    }

    #[test]
    fn identity_kernel_is_empty() {
        assert!(Gf2Matrix::identity(2).kernel_basis().is_empty());
    }

    #[test]
    fn all_ones_row_kernel() {
        assert_eq!(m("11").kernel_basis(), vec![bv("11")]);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let z = Gf2Matrix::zeros(2, 3);
        assert_eq!(z.kernel_basis(), vec![bv("100"), bv("010"), bv("001")]);
    }

    #[test]
    fn products() {
        let x = bv("1011");
        assert_eq!(Gf2Matrix::identity(4).mat_vec(&x).unwrap(), x);
        assert_eq!(m("11").mat_vec(&bv("11")).unwrap(), bv("0"));
        let a = m("10\n11");
        assert_eq!(a.mat_mul(&a).unwrap(), Gf2Matrix::identity(2));
        assert!(a.mat_mul(&m("111")).is_err());
        assert!(a.mat_vec(&bv("1")).is_err());
    }

    #[test]
    fn solve_and_inconsistent_system() {
        let a = m("110\n011");
        let x = a.solve(&bv("10")).unwrap().unwrap();
        assert_eq!(a.mat_vec(&x).unwrap(), bv("10"));
        assert_eq!(m("11\n11").solve(&bv("10")).unwrap(), None);
    }

    #[test]
    fn left_inverse_of_tall_matrix() {
        let k = m("10\n11\n01");
        let l = k.left_inverse().unwrap();
        assert_eq!(l.mat_mul(&k).unwrap(), Gf2Matrix::identity(2));
        assert!(m("1\n1").transpose().left_inverse().is_none());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let a = m("101\n010");
        assert_eq!(Gf2Matrix::from_text(&a.to_text()).unwrap(), a);
        assert!(Gf2Matrix::from_text("10\n1").is_err());
        assert!(Gf2Matrix::from_text("12").is_err());
        assert_eq!(Gf2Matrix::from_text("").unwrap().rows(), 0);
    }

    #[test]
    fn u64_packing() {
        let v = BitVector::from_u64(0b110, 3);
        assert_eq!(v.to_string(), "011");
        assert_eq!(v.to_u64(), 6);
        assert_eq!(BitVector::concat([&bv("1"), &bv("01")]), bv("101"));
        assert_eq!(bv("10110").slice(1, 3), bv("011"));
    }

    #[test]
    fn wide_vectors_cross_word_boundaries() {
        let mut a = BitVector::zeros(130);
        a.set(0, true);
        a.set(64, true);
        a.set(129, true);
        assert_eq!(a.count_ones(), 3);
        let b = a.clone();
        assert!(a.dot(&b));
        a.xor_assign(&b);
        assert!(a.is_zero());
    }
}

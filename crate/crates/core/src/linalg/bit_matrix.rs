use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FieldMatrix;
use crate::error::{Error, Result};

/// Dense GF(2) matrix, each row packed into 64-bit words (column `c` is bit
/// `c % 64` of word `c / 64`). Unused high bits of the last word stay zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set_bit(i, i, true);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!("column {c} has length {}, expected {rows}", col.len())));
            }
            for (r, &v) in col.iter().enumerate() {
                m.set_bit(r, c, v & 1 == 1);
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for (c, &v) in row.iter().enumerate() {
                m.set_bit(r, c, v & 1 == 1);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn bit(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index ({row},{col}) out of bounds");
        (self.data[row * self.words + col / 64] >> (col % 64)) & 1 == 1
    }

    #[inline]
    pub fn set_bit(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index ({row},{col}) out of bounds");
        let w = &mut self.data[row * self.words + col / 64];
        let mask = 1u64 << (col % 64);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    fn row_words(&self, row: usize) -> &[u64] {
        &self.data[row * self.words..(row + 1) * self.words]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        for w in 0..self.words {
            let v = self.data[src * self.words + w];
            self.data[dst * self.words + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for w in 0..self.words {
                self.data.swap(a * self.words + w, b * self.words + w);
            }
        }
    }

    /// Row `r` as a hex string, column 0 in the most significant bit.
    pub fn row_hex(&self, row: usize) -> String {
        let digits = self.cols.div_ceil(4);
        (0..digits)
            .map(|d| {
                let nibble = (0..4).fold(0u32, |acc, b| {
                    let c = d * 4 + b;
                    let bit = c < self.cols && self.bit(row, c);
                    (acc << 1) | u32::from(bit)
                });
                char::from_digit(nibble, 16).unwrap()
            })
            .collect()
    }

    pub fn from_row_hex(rows: usize, cols: usize, row_hex: &[String]) -> Result<Self> {
        if row_hex.len() != rows {
            return Err(Error::Parse(format!("expected {rows} hex rows, got {}", row_hex.len())));
        }
        let digits = cols.div_ceil(4);
        let mut m = Self::zeros(rows, cols);
        for (r, s) in row_hex.iter().enumerate() {
            if s.len() != digits {
                return Err(Error::Parse(format!("row {r}: expected {digits} hex digits")));
            }
            for (d, ch) in s.chars().enumerate() {
                let nibble = ch.to_digit(16).ok_or_else(|| Error::Parse(format!("row {r}: bad hex digit {ch:?}")))?;
                for b in 0..4 {
                    let c = d * 4 + b;
                    let bit = (nibble >> (3 - b)) & 1 == 1;
                    if c >= cols {
                        if bit {
                            return Err(Error::Parse(format!("row {r}: padding bit set")));
                        }
                    } else {
                        m.set_bit(r, c, bit);
                    }
                }
            }
        }
        Ok(m)
    }
}

/// `S^k` of size `q x q`: entry `(i, j)` is one iff `i = j + k`.
pub fn shift_matrix(q: usize, k: usize) -> Result<BitMatrix> {
    if q == 0 {
        return Err(Error::EmptyDimension);
    }
    let mut m = BitMatrix::zeros(q, q);
    for j in 0..q.saturating_sub(k) {
        m.set_bit(j + k, j, true);
    }
    Ok(m)
}

impl FieldMatrix for BitMatrix {
    fn modulus(&self) -> u32 {
        2
    }

    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn get(&self, row: usize, col: usize) -> u32 {
        u32::from(self.bit(row, col))
    }

    fn set(&mut self, row: usize, col: usize, value: u32) {
        self.set_bit(row, col, value & 1 == 1);
    }

    fn zeros_like(&self, rows: usize, cols: usize) -> Self {
        BitMatrix::zeros(rows, cols)
    }

    fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(p) = (next..m.rows).find(|&r| m.bit(r, col)) else {
                continue;
            };
            m.swap_rows(p, next);
            for r in 0..m.rows {
                if r != next && m.bit(r, col) {
                    m.xor_row_into(next, r);
                }
            }
            pivots.push(col);
            next += 1;
        }
        (m, pivots)
    }

    fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.bit(i, k) {
                    for w in 0..out.words {
                        out.data[i * out.words + w] ^= other.row_words(k)[w];
                    }
                }
            }
        }
        Ok(out)
    }

    fn transpose(&self) -> Self {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.bit(r, c) {
                    t.set_bit(c, r, true);
                }
            }
        }
        t
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols).map(|c| if self.bit(r, c) { '1' } else { '.' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BitMatrixJson {
    rows: usize,
    cols: usize,
    row_hex: Vec<String>,
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BitMatrixJson { rows: self.rows, cols: self.cols, row_hex: (0..self.rows).map(|r| self.row_hex(r)).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BitMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = BitMatrixJson::deserialize(deserializer)?;
        BitMatrix::from_row_hex(j.rows, j.cols, &j.row_hex).map_err(serde::de::Error::custom)
    }
}

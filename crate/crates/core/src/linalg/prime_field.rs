use std::fmt;

use serde::{Deserialize, Serialize};

use super::FieldMatrix;
use crate::error::{Error, Result};

/// Dense matrix over GF(p) for a small prime `p`, entries kept reduced.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeFieldMatrix {
    rows: usize,
    cols: usize,
    modulus: u32,
    entries: Vec<u32>,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn largest_prime_at_most(n: u32) -> Option<u32> {
    (2..=n).rev().find(|&p| is_prime(p))
}

fn inverse(a: u32, p: u32) -> u32 {
    // Fermat: a^(p-2) mod p
    let (mut base, mut exp, mut acc) = (u64::from(a % p), p - 2, 1u64);
    let p = u64::from(p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u32
}

impl PrimeFieldMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: u32) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(PrimeFieldMatrix { rows, cols, modulus, entries: vec![0; rows * cols] })
    }

    pub fn identity(n: usize, modulus: u32) -> Result<Self> {
        let mut m = Self::zeros(n, n, modulus)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Entries must already lie in `0..modulus`.
    pub fn from_rows(rows: &[Vec<u32>], modulus: u32) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols, modulus)?;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= modulus {
                    return Err(Error::EntryOutOfRange { value: v, modulus });
                }
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    fn idx(&self, row: usize, col: usize) -> usize {
        assert!(row < self.rows && col < self.cols, "index ({row},{col}) out of bounds");
        row * self.cols + col
    }
}

impl FieldMatrix for PrimeFieldMatrix {
    fn modulus(&self) -> u32 {
        self.modulus
    }

    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[self.idx(row, col)]
    }

    fn set(&mut self, row: usize, col: usize, value: u32) {
        let i = self.idx(row, col);
        self.entries[i] = value % self.modulus;
    }

    fn zeros_like(&self, rows: usize, cols: usize) -> Self {
        PrimeFieldMatrix { rows, cols, modulus: self.modulus, entries: vec![0; rows * cols] }
    }

    fn rref(&self) -> (Self, Vec<usize>) {
        let p = u64::from(self.modulus);
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(piv) = (next..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if piv != next {
                for c in 0..m.cols {
                    let (a, b) = (m.idx(piv, c), m.idx(next, c));
                    m.entries.swap(a, b);
                }
            }
            let inv = u64::from(inverse(m.get(next, col), m.modulus));
            for c in 0..m.cols {
                let v = u64::from(m.get(next, c)) * inv % p;
                m.set(next, c, v as u32);
            }
            for r in 0..m.rows {
                let f = u64::from(m.get(r, col));
                if r == next || f == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let sub = f * u64::from(m.get(next, c)) % p;
                    let v = (u64::from(m.get(r, c)) + p - sub) % p;
                    m.set(r, c, v as u32);
                }
            }
            pivots.push(col);
            next += 1;
        }
        (m, pivots)
    }
}

impl fmt::Debug for PrimeFieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PrimeFieldMatrix {}x{} over GF({})", self.rows, self.cols, self.modulus)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

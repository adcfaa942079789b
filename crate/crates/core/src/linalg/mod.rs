//! Exact linear algebra over GF(2) and small prime fields.
//!
//! Vectors are column vectors stored as `&[u32]` of reduced field elements.
//! Row 0 is the top level of a signal (the most significant level), and the
//! shift matrix `S` moves level `i` to level `i + 1`.

mod bit_matrix;
mod prime_field;

pub use bit_matrix::{shift_matrix, BitMatrix};
pub use prime_field::{is_prime, largest_prime_at_most, PrimeFieldMatrix};

use std::fmt;

use crate::error::{Error, Result};

/// Dense matrix over a finite prime field.
///
/// Implementors supply storage, reduced row echelon form and the field
/// modulus; everything else is derived from those.
pub trait FieldMatrix: Clone + fmt::Debug + PartialEq + Send + Sync + Sized {
    fn modulus(&self) -> u32;
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn get(&self, row: usize, col: usize) -> u32;
    fn set(&mut self, row: usize, col: usize, value: u32);

    /// Zero matrix over the same field.
    fn zeros_like(&self, rows: usize, cols: usize) -> Self;

    /// Reduced row echelon form and the pivot column of each nonzero row.
    fn rref(&self) -> (Self, Vec<usize>);

    fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns form a basis of `{x : A x = 0}`; there are `cols - rank` of them.
    fn nullspace_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let p = self.modulus();
        let n = self.cols();
        let mut is_pivot = vec![false; n];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut basis = self.zeros_like(n, free.len());
        for (j, &f) in free.iter().enumerate() {
            basis.set(f, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                let v = r.get(i, f);
                if v != 0 {
                    basis.set(pc, j, (p - v) % p);
                }
            }
        }
        basis
    }

    fn column(&self, col: usize) -> Vec<u32> {
        (0..self.rows()).map(|r| self.get(r, col)).collect()
    }

    fn transpose(&self) -> Self {
        let mut t = self.zeros_like(self.cols(), self.rows());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                let v = self.get(r, c);
                if v != 0 {
                    t.set(c, r, v);
                }
            }
        }
        t
    }

    fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let p = u64::from(self.modulus());
        let mut out = self.zeros_like(self.rows(), other.cols());
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                let a = u64::from(self.get(i, k));
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols() {
                    let b = u64::from(other.get(k, j));
                    if b != 0 {
                        let v = (u64::from(out.get(i, j)) + a * b) % p;
                        out.set(i, j, v as u32);
                    }
                }
            }
        }
        Ok(out)
    }

    fn matvec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows(),
                self.cols(),
                v.len()
            )));
        }
        let p = u64::from(self.modulus());
        Ok((0..self.rows())
            .map(|r| {
                let acc = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .fold(0u64, |acc, (c, &x)| (acc + u64::from(self.get(r, c)) * u64::from(x)) % p);
                acc as u32
            })
            .collect())
    }

    /// `[self | other]`
    fn hconcat(&self, other: &Self) -> Result<Self> {
        if self.rows() != other.rows() {
            return Err(Error::DimensionMismatch(format!(
                "cannot concatenate {} rows with {} rows",
                self.rows(),
                other.rows()
            )));
        }
        let mut out = self.zeros_like(self.rows(), self.cols() + other.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols() {
                out.set(r, self.cols() + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    /// Applies `S^k` independently to each consecutive block of `block` rows,
    /// i.e. left-multiplies by `diag(S^k, ..., S^k)`.
    fn block_shift_rows(&self, block: usize, k: usize) -> Self {
        let mut out = self.zeros_like(self.rows(), self.cols());
        if block == 0 {
            return out;
        }
        for r in 0..self.rows() {
            let offset = r % block;
            if offset + k < block {
                for c in 0..self.cols() {
                    out.set(r + k, c, self.get(r, c));
                }
            }
        }
        out
    }

    /// Some solution of `A x = b` (free variables zero), or `None` if inconsistent.
    fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows() {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows()
            )));
        }
        let mut rhs = self.zeros_like(self.rows(), 1);
        for (r, &v) in b.iter().enumerate() {
            rhs.set(r, 0, v % self.modulus());
        }
        let (r, pivots) = self.hconcat(&rhs)?.rref();
        let n = self.cols();
        if pivots.last() == Some(&n) {
            return Ok(None);
        }
        let mut x = vec![0u32; n];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, n);
        }
        Ok(Some(x))
    }
}

/// `[A_1 | A_2 | ... ]`; all parts must share the row count.
pub fn concat_cols<M: FieldMatrix>(parts: &[&M]) -> Result<M> {
    let (first, rest) = parts.split_first().ok_or_else(|| Error::DimensionMismatch("nothing to concatenate".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, m| acc.hconcat(m))
}

/// Embeds a GF(2) matrix into GF(p) entrywise (0 -> 0, 1 -> 1).
pub fn embed(m: &BitMatrix, modulus: u32) -> Result<PrimeFieldMatrix> {
    let mut out = PrimeFieldMatrix::zeros(m.rows(), m.cols(), modulus)?;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m.get(r, c) == 1 {
                out.set(r, c, 1);
            }
        }
    }
    Ok(out)
}

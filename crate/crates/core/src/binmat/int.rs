use super::BinaryMatrix;
use crate::error::{Error, Result};
use std::fmt;

/// Dense matrix of non-negative integers. Carries concurrence matrices,
/// relation matrices and integer products of (0,1)-matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix has a zero dimension")));
        }
        Ok(IntMatrix { rows, cols, data: vec![0; rows * cols] })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        Ok(m)
    }

    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.data[i * self.cols + j] = value;
    }

    #[inline]
    pub(crate) fn add_to(&mut self, i: usize, j: usize, value: u32) {
        self.data[i * self.cols + j] += value;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn max_entry(&self) -> u32 {
        self.data.iter().copied().max().unwrap_or(0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i)).expect("non-zero dimensions")
    }

    /// Plain triple-loop integer product.
    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &IntMatrix, factor: u32) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("shape mismatch in sum".into()));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(&other.data) {
            *o += factor * b;
        }
        Ok(out)
    }

    /// Simultaneous relabeling of rows and columns: entry (x, y) moves to (p(x), p(y)).
    pub fn relabel(&self, perm: &super::Permutation) -> Result<IntMatrix> {
        if !self.is_square() || perm.len() != self.rows {
            return Err(Error::Permutation("relabeling needs a square matrix of matching size".into()));
        }
        let mut out = IntMatrix::zeros(self.rows, self.cols)?;
        for x in 0..self.rows {
            for y in 0..self.cols {
                out.set(perm.apply(x), perm.apply(y), self.get(x, y));
            }
        }
        Ok(out)
    }

    /// Indicator matrix of the entries equal to `value`.
    pub fn indicator(&self, value: u32) -> BinaryMatrix {
        BinaryMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) == value).expect("non-zero dimensions")
    }

    pub fn to_binary(&self) -> Result<BinaryMatrix> {
        if let Some(pos) = self.data.iter().position(|&x| x > 1) {
            return Err(Error::Shape(format!(
                "entry ({}, {}) = {} is not 0 or 1",
                pos / self.cols,
                pos % self.cols,
                self.data[pos]
            )));
        }
        BinaryMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j) == 1)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(u32::to_string).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_matches_binary_product() {
        let l = BinaryMatrix::path_loop(5).unwrap();
        let d = BinaryMatrix::doubled(3).unwrap();
        assert_eq!(l.to_int().matmul(&l.to_int()).unwrap(), l.int_product(&l).unwrap());
        assert_eq!(d.to_int().matmul(&d.to_int()).unwrap(), d.int_product(&d).unwrap());
    }

    #[test]
    fn indicator_and_binary_roundtrip() {
        let r = IntMatrix::from_rows(&[[0u32, 2, 1], [2, 0, 1], [1, 1, 0]]).unwrap();
        assert!(r.is_symmetric());
        assert_eq!(r.indicator(1).count_ones(), 4);
        assert!(r.to_binary().is_err());
        let b = r.indicator(2);
        assert_eq!(b.to_int().to_binary().unwrap(), b);
    }
}

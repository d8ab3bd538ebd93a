//! Dense (0,1)-matrices with bit-packed rows.
//!
//! Every named matrix in this crate (incidence matrices, associate matrices,
//! the structured blocks `J`, `I`, `L`, `T`, `D`) is a [`BinaryMatrix`]. Rows are
//! stored as runs of `u64` words so that the scalar product of two rows is a
//! word-wise AND followed by a popcount.

mod equiv;
mod int;
mod text;

pub use equiv::{find_relabeling, is_perm_equivalent};
pub use int::IntMatrix;
pub use text::{parse_int_matrices, parse_matrices};

use crate::error::{Error, Result};
use std::fmt;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    bits: Vec<u64>,
}

/// Sorted, distinct 0-based indices into the rows or columns of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!("index set must be strictly increasing: {indices:?}")));
        }
        Ok(IndexSet(indices))
    }

    pub fn range(start: usize, end: usize) -> Self {
        IndexSet((start..end).collect())
    }

    /// Builds a set from 1-based indices.
    pub fn from_one_based(indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Parameter("1-based index set contains 0".into()));
        }
        IndexSet::new(indices.iter().map(|i| i - 1).collect())
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    fn check_bound(&self, bound: usize) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= bound => Err(Error::Index { index: last, bound }),
            _ => Ok(()),
        }
    }
}

/// A permutation of `0..n`, read as the map `i -> self[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &p in &images {
            if p >= n {
                return Err(Error::Permutation(format!("image {p} out of range 0..{n}")));
            }
            if seen[p] {
                return Err(Error::Permutation(format!("image {p} repeated")));
            }
            seen[p] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// `i -> n-1-i`.
    pub fn reversal(n: usize) -> Self {
        Permutation((0..n).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }
}

impl BinaryMatrix {
    fn zeroed(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix has a zero dimension")));
        }
        let stride = cols.div_ceil(WORD);
        Ok(BinaryMatrix { rows, cols, stride, bits: vec![0; rows * stride] })
    }

    /// Builds a matrix from a closure over (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut m = Self::zeroed(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.as_ref().len() != cols) {
            return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.as_ref().len())));
        }
        let mut m = Self::zeroed(rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.as_ref().iter().enumerate() {
                match x {
                    0 => {}
                    1 => m.set(i, j, true),
                    other => return Err(Error::Parse { line: i + 1, message: format!("entry {other} is not 0 or 1") }),
                }
            }
        }
        Ok(m)
    }

    /// `J_{m,n}` for `value = true`, `0_{m,n}` otherwise.
    pub fn constant(m: usize, n: usize, value: bool) -> Result<Self> {
        Self::from_fn(m, n, |_, _| value)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| i == j)
    }

    /// `C_n^-`: ones where `i + j = n - 1`.
    pub fn anti_diagonal(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| i + j + 1 == n)
    }

    /// `L_n`: the adjacency matrix of a path whose two end vertices carry a loop.
    pub fn path_loop(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("path_loop needs n >= 2, got {n}")));
        }
        Self::from_fn(n, n, |i, j| i.abs_diff(j) == 1 || (i == j && (i == 0 || i == n - 1)))
    }

    /// `T_n`: ones exactly where one of the two indices is on the boundary.
    pub fn border(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Dimension(format!("border needs n >= 3, got {n}")));
        }
        let edge = |i: usize| i == 0 || i == n - 1;
        Self::from_fn(n, n, |i, j| edge(i) != edge(j))
    }

    /// `D_m = [[I_m, L_m], [L_m, I_m]]`.
    pub fn doubled(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::Dimension(format!("doubled needs m >= 3, got {m}")));
        }
        let i = Self::identity(m)?;
        let l = Self::path_loop(m)?;
        Self::assemble(&[vec![&i, &l], vec![&l, &i]])
    }

    /// Concatenates a grid of blocks, row band by row band.
    pub fn assemble(blocks: &[Vec<&BinaryMatrix>]) -> Result<Self> {
        let first_band =
            blocks.first().filter(|b| !b.is_empty()).ok_or_else(|| Error::Dimension("empty block grid".into()))?;
        let widths: Vec<usize> = first_band.iter().map(|b| b.cols).collect();
        let mut heights = Vec::with_capacity(blocks.len());
        for (bi, band) in blocks.iter().enumerate() {
            if band.len() != widths.len() {
                return Err(Error::Dimension(format!(
                    "band {bi} has {} blocks, expected {}",
                    band.len(),
                    widths.len()
                )));
            }
            let h = band[0].rows;
            for (bj, b) in band.iter().enumerate() {
                if b.rows != h || b.cols != widths[bj] {
                    return Err(Error::Dimension(format!(
                        "block ({bi},{bj}) is {}x{}, expected {h}x{}",
                        b.rows, b.cols, widths[bj]
                    )));
                }
            }
            heights.push(h);
        }
        let mut out = Self::zeroed(heights.iter().sum(), widths.iter().sum())?;
        let mut r0 = 0;
        for (band, h) in blocks.iter().zip(&heights) {
            let mut c0 = 0;
            for b in band {
                for i in 0..*h {
                    for j in b.ones_in_row(i) {
                        out.set(r0 + i, c0 + j, true);
                    }
                }
                c0 += b.cols;
            }
            r0 += h;
        }
        Ok(out)
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
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.bits[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.bits[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Returns a copy with entry (i, j) flipped.
    pub fn with_flipped(&self, i: usize, j: usize) -> Result<Self> {
        self.check_row(i)?;
        if j >= self.cols {
            return Err(Error::Index { index: j, bound: self.cols });
        }
        let mut m = self.clone();
        m.set(i, j, !m.get(i, j));
        Ok(m)
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.stride..(i + 1) * self.stride]
    }

    pub fn ones_in_row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row_words(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(w * WORD + b)
            })
        })
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i >= self.rows {
            Err(Error::Index { index: i, bound: self.rows })
        } else {
            Ok(())
        }
    }

    /// Number of columns where rows `i` and `j` are both 1.
    pub fn row_dot(&self, i: usize, j: usize) -> Result<usize> {
        self.check_row(i)?;
        self.check_row(j)?;
        Ok(self.row_dot_unchecked(i, j))
    }

    #[inline]
    pub(crate) fn row_dot_unchecked(&self, i: usize, j: usize) -> usize {
        self.row_words(i).iter().zip(self.row_words(j)).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn submatrix(&self, rows: &IndexSet, cols: &IndexSet) -> Result<Self> {
        rows.check_bound(self.rows)?;
        cols.check_bound(self.cols)?;
        let (r, c) = (rows.as_slice(), cols.as_slice());
        Self::from_fn(r.len(), c.len(), |i, j| self.get(r[i], c[j]))
    }

    pub fn principal_submatrix(&self, indices: &IndexSet) -> Result<Self> {
        self.submatrix(indices, indices)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeroed(self.cols, self.rows).expect("non-zero dimensions");
        for i in 0..self.rows {
            for j in self.ones_in_row(i) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Number of ones on the main diagonal (of the leading square part).
    pub fn trace(&self) -> usize {
        (0..self.rows.min(self.cols)).filter(|&i| self.get(i, i)).count()
    }

    pub fn is_symmetric(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::Shape(format!("symmetry needs a square matrix, got {}x{}", self.rows, self.cols)));
        }
        Ok(*self == self.transpose())
    }

    pub fn row_sum(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn col_sum(&self, j: usize) -> usize {
        (0..self.rows).filter(|&i| self.get(i, j)).count()
    }

    pub fn row_sums(&self) -> Vec<usize> {
        (0..self.rows).map(|i| self.row_sum(i)).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.cols];
        for i in 0..self.rows {
            for j in self.ones_in_row(i) {
                sums[j] += 1;
            }
        }
        sums
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Moves entry (i, j) to (row_perm(i), col_perm(j)).
    pub fn permute(&self, row_perm: &Permutation, col_perm: &Permutation) -> Result<Self> {
        if row_perm.len() != self.rows || col_perm.len() != self.cols {
            return Err(Error::Permutation(format!(
                "permutation lengths ({}, {}) do not match a {}x{} matrix",
                row_perm.len(),
                col_perm.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = Self::zeroed(self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in self.ones_in_row(i) {
                out.set(row_perm.apply(i), col_perm.apply(j), true);
            }
        }
        Ok(out)
    }

    /// Integer (not Boolean) matrix product.
    pub fn int_product(&self, other: &BinaryMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols)?;
        for i in 0..self.rows {
            for l in self.ones_in_row(i) {
                for j in other.ones_in_row(l) {
                    out.add_to(i, j, 1);
                }
            }
        }
        Ok(out)
    }

    /// Product that must stay a (0,1)-matrix, e.g. multiplication by a permutation matrix.
    pub fn product(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        self.int_product(other)?.to_binary()
    }

    /// Entrywise integer sum of two matrices whose supports are disjoint.
    pub fn disjoint_sum(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if let Some(pos) = self.bits.iter().zip(&other.bits).position(|(a, b)| a & b != 0) {
            return Err(Error::Shape(format!(
                "summands overlap in row {}; the sum would leave (0,1)",
                pos / self.stride
            )));
        }
        let mut out = self.clone();
        for (o, b) in out.bits.iter_mut().zip(&other.bits) {
            *o |= b;
        }
        Ok(out)
    }

    pub fn complement(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| !self.get(i, j)).expect("non-zero dimensions")
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rows, self.cols, |i, j| u32::from(self.get(i, j))).expect("non-zero dimensions")
    }

    /// Rows as vectors of 0/1.
    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| u8::from(self.get(i, j))).collect()).collect()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '.' }).collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl PartialOrd for BinaryMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by shape, then row-major entries with earlier columns most significant.
impl Ord for BinaryMatrix {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rows, self.cols).cmp(&(other.rows, other.cols)).then_with(|| {
            for i in 0..self.rows {
                for j in 0..self.cols {
                    let o = other.get(i, j).cmp(&self.get(i, j));
                    if o.is_ne() {
                        return o;
                    }
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

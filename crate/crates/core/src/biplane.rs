//! Biplanes: symmetric 2-(1 + k(k-1)/2, k, 2) designs, their canonical
//! incidence matrices, and the 16-point biplane of order 4 assembled from blocks.

use crate::binmat::{BinaryMatrix, IndexSet};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BiplaneCertificate {
    pub k: usize,
    pub v: usize,
    /// `k - 2`; negative only for the degenerate k < 2 cases.
    pub order: i64,
    pub canonical: bool,
    pub full_trace: bool,
    pub symmetric: bool,
}

/// Number of points of a biplane with block size `k`.
pub fn points_for_block_size(k: usize) -> usize {
    1 + k * k.saturating_sub(1) / 2
}

/// Inverse of [`points_for_block_size`], if `v` is of that form.
pub fn block_size_for_points(v: usize) -> Option<usize> {
    (0..=v + 1).find(|&k| points_for_block_size(k) == v)
}

/// Checks the biplane axioms on a square incidence matrix.
///
/// Witness indices in errors are 1-based.
pub fn verify_biplane(m: &BinaryMatrix) -> Result<BiplaneCertificate> {
    if !m.is_square() {
        return Err(Error::Shape(format!("a biplane matrix is square, got {}x{}", m.rows(), m.cols())));
    }
    let v = m.rows();
    let k = m.row_sum(0);
    let rows = m.row_sums();
    if let Some(i) = rows.iter().position(|&s| s != k) {
        return Err(Error::NotBiplane {
            axiom: "constant row sum",
            witness: format!("row {} has sum {} but row 1 has sum {k}", i + 1, rows[i]),
        });
    }
    let cols = m.col_sums();
    if let Some(j) = cols.iter().position(|&s| s != k) {
        return Err(Error::NotBiplane {
            axiom: "column sums equal row sums",
            witness: format!("column {} has sum {} but rows have sum {k}", j + 1, cols[j]),
        });
    }
    check_pair_dots(m, "any two rows meet in two columns", "rows")?;
    check_pair_dots(&m.transpose(), "any two columns meet in two rows", "columns")?;
    if points_for_block_size(k) != v {
        return Err(Error::NotBiplane {
            axiom: "v = 1 + k(k-1)/2",
            witness: format!("v = {v} but k = {k} gives {}", points_for_block_size(k)),
        });
    }
    Ok(BiplaneCertificate {
        k,
        v,
        order: k as i64 - 2,
        canonical: k >= 3 && has_canonical_form(m)?,
        full_trace: m.trace() == v,
        symmetric: m.is_symmetric()?,
    })
}

fn check_pair_dots(m: &BinaryMatrix, axiom: &'static str, what: &str) -> Result<()> {
    for i in 0..m.rows() {
        for j in i + 1..m.rows() {
            let d = m.row_dot_unchecked(i, j);
            if d != 2 {
                return Err(Error::NotBiplane { axiom, witness: format!("{what} {} and {} share {d}", i + 1, j + 1) });
            }
        }
    }
    Ok(())
}

/// The first `k` rows of a biplane incidence matrix in canonical form.
///
/// Column 0 is all ones and row 0 is `1` on columns `0..k`. Each remaining row
/// `i` has a one on column `i`, and the later columns are the pairs `{a, b}`
/// of rows `1 <= a < b < k` in lexicographic order. This yields the staircase
/// of `J` header rows over identity blocks `I_{k-1}, I_{k-2}, ..., I_1`.
pub fn canonical_head(k: usize) -> Result<BinaryMatrix> {
    if k < 3 {
        return Err(Error::Parameter(format!("canonical head needs k >= 3, got {k}")));
    }
    let v = points_for_block_size(k);
    let mut rows = vec![vec![0u8; v]; k];
    for (i, row) in rows.iter_mut().enumerate() {
        row[0] = 1;
        row[i] = 1;
    }
    rows[0][..k].fill(1);
    let mut col = k;
    for a in 1..k {
        for b in a + 1..k {
            rows[a][col] = 1;
            rows[b][col] = 1;
            col += 1;
        }
    }
    debug_assert_eq!(col, v);
    BinaryMatrix::from_rows(&rows)
}

/// True iff the first `k` rows are the canonical head and the first `k`
/// columns are its transpose.
pub fn has_canonical_form(m: &BinaryMatrix) -> Result<bool> {
    let k = block_size_for_points(m.rows()).filter(|&k| m.is_square() && k >= 3).ok_or_else(|| {
        Error::Shape(format!("{}x{} is not the shape 1+k(k-1)/2 of a biplane with k >= 3", m.rows(), m.cols()))
    })?;
    let head = canonical_head(k)?;
    let v = m.rows();
    let rows_ok = (0..k).all(|i| (0..v).all(|j| m.get(i, j) == head.get(i, j)));
    let cols_ok = (0..v).all(|i| (0..k).all(|j| m.get(i, j) == head.get(j, i)));
    Ok(rows_ok && cols_ok)
}

/// The symmetric canonical incidence matrix of the order-4 biplane with the
/// largest automorphism group, built from its block description:
///
/// ```text
/// B  = [[0_{1,3}, J_{1,3}], [L_3 C_3, C_3]]
/// B' = [[I_4, B], [B^T, I_6 + C_6]]
/// ```
///
/// with the canonical head `M_[6]` on top and its transpose on the left.
pub fn assemble_b4c() -> BinaryMatrix {
    build_b4c().expect("fixed block construction is consistent")
}

fn build_b4c() -> Result<BinaryMatrix> {
    let c3 = BinaryMatrix::anti_diagonal(3)?;
    let lc3 = BinaryMatrix::path_loop(3)?.product(&c3)?;
    let b = BinaryMatrix::assemble(&[
        vec![&BinaryMatrix::constant(1, 3, false)?, &BinaryMatrix::constant(1, 3, true)?],
        vec![&lc3, &c3],
    ])?;
    let tail = BinaryMatrix::identity(6)?.disjoint_sum(&BinaryMatrix::anti_diagonal(6)?)?;
    let b_prime = BinaryMatrix::assemble(&[vec![&BinaryMatrix::identity(4)?, &b], vec![&b.transpose(), &tail]])?;

    let head = canonical_head(6)?;
    let rows = IndexSet::range(0, 6);
    let left = head.submatrix(&rows, &IndexSet::range(0, 6))?;
    let right = head.submatrix(&rows, &IndexSet::range(6, 16))?;
    debug_assert!(left.is_symmetric()?);
    BinaryMatrix::assemble(&[vec![&left, &right], vec![&right.transpose(), &b_prime]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binmat::Permutation;
    use crate::incidence::IncidenceStructure;

    #[test]
    fn b4c_certificate() {
        let m = assemble_b4c();
        let c = verify_biplane(&m).unwrap();
        assert_eq!((c.k, c.v, c.order), (6, 16, 4));
        assert!(c.canonical && c.full_trace && c.symmetric);
        assert_eq!(m.trace(), 16);
        assert_eq!(m, m.transpose());
    }

    #[test]
    fn trivial_biplane_of_order_one() {
        // Exhaustive oracle over all row and column pairs of the 4x4 complement of I.
        let m = BinaryMatrix::identity(4).unwrap().complement();
        for i in 0..4 {
            for j in i + 1..4 {
                assert_eq!((0..4).filter(|&c| m.get(i, c) && m.get(j, c)).count(), 2);
                assert_eq!((0..4).filter(|&r| m.get(r, i) && m.get(r, j)).count(), 2);
            }
        }
        let c = verify_biplane(&m).unwrap();
        assert_eq!((c.k, c.v, c.order), (3, 4, 1));
        assert!(!c.full_trace);
    }

    #[test]
    fn identity_is_rejected() {
        match verify_biplane(&BinaryMatrix::identity(4).unwrap()) {
            Err(Error::NotBiplane { axiom, witness }) => {
                assert_eq!(axiom, "any two rows meet in two columns");
                assert!(witness.contains("rows 1 and 2 share 0"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(verify_biplane(&BinaryMatrix::constant(2, 3, true).unwrap()), Err(Error::Shape(_))));
    }

    #[test]
    fn canonical_head_three() {
        let h = canonical_head(3).unwrap();
        assert_eq!(h, BinaryMatrix::from_rows(&[[1u8, 1, 1, 0], [1, 1, 0, 1], [1, 0, 1, 1]]).unwrap());
        assert!(matches!(canonical_head(2), Err(Error::Parameter(_))));
    }

    #[test]
    fn canonical_head_rows_meet_in_two() {
        for k in 3..=12 {
            let h = canonical_head(k).unwrap();
            assert_eq!(h.cols(), points_for_block_size(k));
            assert_eq!(h.row_sum(0), k);
            for i in 0..k {
                assert_eq!(h.row_sum(i), k);
                assert!(h.get(i, 0));
                for j in i + 1..k {
                    assert_eq!(h.row_dot(i, j).unwrap(), 2, "k={k} rows {i},{j}");
                }
            }
        }
    }

    #[test]
    fn canonical_head_matches_block_layout_at_six() {
        // Row 0 of the head for k = 6 is J_{1,6} followed by zeros, rows 1..6 carry
        // I_5 on columns 1..6, then the bands J_{1,4}/I_4, J_{1,3}/I_3, ...
        let h = canonical_head(6).unwrap();
        let i5 = BinaryMatrix::identity(5).unwrap();
        let mid = h.submatrix(&IndexSet::range(1, 6), &IndexSet::range(1, 6)).unwrap();
        assert_eq!(mid, i5);
        let band1 = h.submatrix(&IndexSet::range(1, 6), &IndexSet::range(6, 10)).unwrap();
        let expected = BinaryMatrix::assemble(&[
            vec![&BinaryMatrix::constant(1, 4, true).unwrap()],
            vec![&BinaryMatrix::identity(4).unwrap()],
        ])
        .unwrap();
        assert_eq!(band1, expected);
    }

    #[test]
    fn canonical_form_detection() {
        let m = assemble_b4c();
        assert!(has_canonical_form(&m).unwrap());
        let mut p: Vec<usize> = (0..16).collect();
        p.swap(0, 1);
        let swapped = m.permute(&Permutation::new(p).unwrap(), &Permutation::identity(16)).unwrap();
        assert!(!has_canonical_form(&swapped).unwrap());

        let h = canonical_head(6).unwrap();
        let padded = BinaryMatrix::from_fn(16, 16, |i, j| i < 6 && h.get(i, j)).unwrap();
        assert!(!has_canonical_form(&padded).unwrap());
        assert!(verify_biplane(&padded).is_err());
        assert!(matches!(has_canonical_form(&BinaryMatrix::identity(5).unwrap()), Err(Error::Shape(_))));
    }

    #[test]
    fn biplane_parameters_follow() {
        let m = assemble_b4c();
        let c = verify_biplane(&m).unwrap();
        let (p, _) = IncidenceStructure::new(m).derive_parameters().unwrap();
        assert_eq!((p.v, p.k, p.lambda, p.order), (c.v, c.k, Some(2), Some(c.k - 2)));
    }

    #[test]
    fn point_count_inverse() {
        for k in 0..20 {
            assert_eq!(
                block_size_for_points(points_for_block_size(k)).map(points_for_block_size),
                Some(points_for_block_size(k))
            );
        }
        assert_eq!(block_size_for_points(16), Some(6));
        assert_eq!(block_size_for_points(56), Some(11));
        assert_eq!(block_size_for_points(15), None);
    }
}

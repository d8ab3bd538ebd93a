//! Symmetric association schemes given by a relation matrix.

use crate::binmat::{BinaryMatrix, IntMatrix};
use crate::error::{Error, Result};
use crate::pbibd::PairClassification;
use serde::Serialize;

/// A symmetric association scheme with classes `0..=d`, class 0 the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationScheme {
    relation: IntMatrix,
    d: usize,
    n: Vec<usize>,
    p: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeReport {
    pub size: usize,
    pub d: usize,
    pub n: Vec<usize>,
    /// `p[h][i][j]`
    pub p: Vec<Vec<Vec<u32>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoseMesnerReport {
    pub products_checked: usize,
    pub closed: bool,
    pub commutative: bool,
}

/// Class-`i` neighbourhoods as bit rows: `rows[i][x]` holds `{z : R[x][z] = i}`.
struct Neighbourhoods {
    words: usize,
    bits: Vec<u64>,
    v: usize,
}

impl Neighbourhoods {
    fn new(r: &IntMatrix, d: usize) -> Self {
        let v = r.rows();
        let words = v.div_ceil(64);
        let mut bits = vec![0u64; (d + 1) * v * words];
        for x in 0..v {
            for z in 0..v {
                let i = r.get(x, z) as usize;
                bits[(i * v + x) * words + z / 64] |= 1 << (z % 64);
            }
        }
        Neighbourhoods { words, bits, v }
    }

    fn row(&self, i: usize, x: usize) -> &[u64] {
        let start = (i * self.v + x) * self.words;
        &self.bits[start..start + self.words]
    }

    fn common(&self, i: usize, x: usize, j: usize, y: usize) -> u32 {
        self.row(i, x).iter().zip(self.row(j, y)).map(|(a, b)| (a & b).count_ones()).sum()
    }
}

impl AssociationScheme {
    /// Checks axioms i to iv on `r` and computes the intersection numbers.
    ///
    /// Points in a [`Error::NotAScheme`] witness are 1-based.
    pub fn from_relation_matrix(r: &IntMatrix) -> Result<Self> {
        if !r.is_square() {
            return Err(Error::Shape(format!("relation matrix is {}x{}", r.rows(), r.cols())));
        }
        let v = r.rows();
        if let Some(x) = (0..v).find(|&x| r.get(x, x) != 0) {
            return Err(Error::Axiom {
                axiom: "i (diagonal is class 0)",
                detail: format!("entry ({0},{0}) is {1}", x + 1, r.get(x, x)),
            });
        }
        for x in 0..v {
            for y in 0..v {
                if x != y && r.get(x, y) == 0 {
                    return Err(Error::Axiom {
                        axiom: "ii (classes partition the pairs)",
                        detail: format!("off-diagonal entry ({},{}) is 0", x + 1, y + 1),
                    });
                }
                if r.get(x, y) != r.get(y, x) {
                    return Err(Error::Axiom {
                        axiom: "iii (symmetry)",
                        detail: format!(
                            "entry ({},{}) is {} but ({},{}) is {}",
                            x + 1,
                            y + 1,
                            r.get(x, y),
                            y + 1,
                            x + 1,
                            r.get(y, x)
                        ),
                    });
                }
            }
        }
        let d = r.max_entry() as usize;
        let mut seen = vec![false; d + 1];
        for x in 0..v {
            for &e in r.row(x) {
                seen[e as usize] = true;
            }
        }
        if let Some(i) = seen.iter().position(|&s| !s) {
            return Err(Error::Axiom {
                axiom: "ii (classes partition the pairs)",
                detail: format!("labels run up to {d} but class {i} is empty"),
            });
        }

        let nb = Neighbourhoods::new(r, d);
        let dim = d + 1;
        let mut p = vec![0u32; dim * dim * dim];
        // First pair met in each class h, used to read off p and as a witness.
        let mut first: Vec<Option<(usize, usize)>> = vec![None; dim];
        for x in 0..v {
            for y in 0..v {
                let h = r.get(x, y) as usize;
                match first[h] {
                    None => {
                        first[h] = Some((x, y));
                        for i in 0..dim {
                            for j in 0..dim {
                                p[(h * dim + i) * dim + j] = nb.common(i, x, j, y);
                            }
                        }
                    }
                    Some(f) => {
                        for i in 0..dim {
                            for j in 0..dim {
                                let here = nb.common(i, x, j, y);
                                let there = p[(h * dim + i) * dim + j];
                                if here != there {
                                    return Err(Error::NotAScheme {
                                        h,
                                        i,
                                        j,
                                        first: (f.0 + 1, f.1 + 1),
                                        first_count: there,
                                        second: (x + 1, y + 1),
                                        second_count: here,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        let n = (0..dim).map(|i| p[i * dim + i] as usize).collect();
        Ok(AssociationScheme { relation: r.clone(), d, n, p })
    }

    pub fn from_classification(c: &PairClassification) -> Result<Self> {
        Self::from_relation_matrix(c.relation())
    }

    pub fn size(&self) -> usize {
        self.relation.rows()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Valencies `n_0, ..., n_d`.
    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn p(&self, h: usize, i: usize, j: usize) -> u32 {
        let dim = self.d + 1;
        self.p[(h * dim + i) * dim + j]
    }

    pub fn relation_matrix(&self) -> &IntMatrix {
        &self.relation
    }

    /// `A_0, ..., A_d`.
    pub fn associate_matrices(&self) -> Vec<BinaryMatrix> {
        (0..=self.d).map(|i| self.relation.indicator(i as u32)).collect()
    }

    /// Checks `A_i A_j = sum_h p[h][i][j] A_h` and `A_i A_j = A_j A_i` over the integers.
    pub fn bose_mesner_check(&self) -> Result<BoseMesnerReport> {
        let a: Vec<IntMatrix> = self.associate_matrices().iter().map(BinaryMatrix::to_int).collect();
        let v = self.size();
        let mut checked = 0;
        for i in 0..=self.d {
            for j in 0..=self.d {
                let prod = a[i].matmul(&a[j])?;
                let mut expansion = IntMatrix::zeros(v, v)?;
                for (h, ah) in a.iter().enumerate() {
                    expansion = expansion.add_scaled(ah, self.p(h, i, j))?;
                }
                if prod != expansion {
                    return Err(Error::ArithmeticInconsistency(format!("A_{i} A_{j} is not sum_h p[h][{i}][{j}] A_h")));
                }
                if prod != a[j].matmul(&a[i])? {
                    return Err(Error::ArithmeticInconsistency(format!("A_{i} and A_{j} do not commute")));
                }
                checked += 1;
            }
        }
        Ok(BoseMesnerReport { products_checked: checked, closed: true, commutative: true })
    }

    pub fn report(&self) -> SchemeReport {
        let dim = self.d + 1;
        SchemeReport {
            size: self.size(),
            d: self.d,
            n: self.n.clone(),
            p: (0..dim).map(|h| (0..dim).map(|i| (0..dim).map(|j| self.p(h, i, j)).collect()).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binmat::Permutation;
    use crate::fixtures;
    use crate::pbibd::classify;
    use crate::IncidenceStructure;
    use proptest::prelude::*;

    fn r_prime() -> IntMatrix {
        fixtures::relation_r_prime()
    }

    /// Brute-force `p[h][i][j]` from the definition, or `None` if some count varies.
    #[allow(clippy::needless_range_loop)]
    fn brute_force_p(r: &IntMatrix) -> Option<Vec<Vec<Vec<u32>>>> {
        let v = r.rows();
        let d = r.max_entry() as usize;
        let mut p = vec![vec![vec![None::<u32>; d + 1]; d + 1]; d + 1];
        for x in 0..v {
            for y in 0..v {
                let h = r.get(x, y) as usize;
                for i in 0..=d {
                    for j in 0..=d {
                        let c =
                            (0..v).filter(|&z| r.get(x, z) as usize == i && r.get(z, y) as usize == j).count() as u32;
                        match p[h][i][j] {
                            None => p[h][i][j] = Some(c),
                            Some(old) if old != c => return None,
                            _ => {}
                        }
                    }
                }
            }
        }
        Some(
            p.into_iter()
                .map(|a| a.into_iter().map(|b| b.into_iter().map(|c| c.unwrap_or(0)).collect()).collect())
                .collect(),
        )
    }

    /// Closure oracle: every product `A_i A_j` is constant on each class.
    fn closure_holds(r: &IntMatrix) -> bool {
        let v = r.rows();
        let d = r.max_entry();
        let a: Vec<IntMatrix> = (0..=d).map(|i| r.indicator(i).to_int()).collect();
        for ai in &a {
            for aj in &a {
                let prod = ai.matmul(aj).unwrap();
                let mut value = vec![None; d as usize + 1];
                for x in 0..v {
                    for y in 0..v {
                        let h = r.get(x, y) as usize;
                        match value[h] {
                            None => value[h] = Some(prod.get(x, y)),
                            Some(c) if c != prod.get(x, y) => return false,
                            _ => {}
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn r_prime_is_a_scheme() {
        let s = AssociationScheme::from_relation_matrix(&r_prime()).unwrap();
        assert_eq!(s.size(), 6);
        assert_eq!(s.d(), 3);
        assert_eq!(s.n(), &[1, 1, 2, 2]);
        assert_eq!(s.report().p, brute_force_p(&r_prime()).unwrap());
    }

    #[test]
    fn r_prime_associates_match_block_displays() {
        let s = AssociationScheme::from_relation_matrix(&r_prime()).unwrap();
        assert_eq!(s.associate_matrices(), fixtures::six_point_associates().to_vec());
    }

    #[test]
    fn trivial_two_point_scheme() {
        let r = IntMatrix::from_rows(&[[0u32, 1], [1, 0]]).unwrap();
        let s = AssociationScheme::from_relation_matrix(&r).unwrap();
        assert_eq!((s.d(), s.n()), (1, &[1usize, 1][..]));
        assert_eq!(s.p(1, 1, 1), 0);
        assert_eq!(s.relation_matrix(), &r);
    }

    #[test]
    fn changed_entry_breaks_axiom_four() {
        let mut r = r_prime();
        r.set(0, 3, 2);
        r.set(3, 0, 2);
        assert!(brute_force_p(&r).is_none());
        assert!(matches!(AssociationScheme::from_relation_matrix(&r), Err(Error::NotAScheme { .. })));

        let mut r = r_prime();
        r.set(0, 3, 2);
        assert!(matches!(
            AssociationScheme::from_relation_matrix(&r),
            Err(Error::Axiom { axiom, .. }) if axiom.starts_with("iii")
        ));
    }

    #[test]
    fn axiom_gates() {
        let r = IntMatrix::from_rows(&[[1u32, 1], [1, 0]]).unwrap();
        assert!(
            matches!(AssociationScheme::from_relation_matrix(&r), Err(Error::Axiom { axiom, .. }) if axiom.starts_with("i "))
        );
        let r = IntMatrix::from_rows(&[[0u32, 0], [0, 0]]).unwrap();
        assert!(
            matches!(AssociationScheme::from_relation_matrix(&r), Err(Error::Axiom { axiom, .. }) if axiom.starts_with("ii"))
        );
        let r = IntMatrix::from_rows(&[[0u32, 2], [2, 0]]).unwrap();
        assert!(
            matches!(AssociationScheme::from_relation_matrix(&r), Err(Error::Axiom { axiom, .. }) if axiom.starts_with("ii"))
        );
        let r = IntMatrix::from_rows(&[[0u32, 1, 1]]).unwrap();
        assert!(matches!(AssociationScheme::from_relation_matrix(&r), Err(Error::Shape(_))));
    }

    #[test]
    fn bose_mesner_on_r_prime() {
        let s = AssociationScheme::from_relation_matrix(&r_prime()).unwrap();
        let report = s.bose_mesner_check().unwrap();
        assert_eq!(report.products_checked, 16);
        // A_1 swaps the halves, so A_1^2 = I.
        let a1 = s.associate_matrices()[1].to_int();
        assert_eq!(a1.matmul(&a1).unwrap(), BinaryMatrix::identity(6).unwrap().to_int());
        assert_eq!(s.p(0, 1, 1), 1);
        assert!((1..=3).all(|h| s.p(h, 1, 1) == 0));
    }

    #[test]
    fn complete_graph_identity() {
        for v in 2..9 {
            let r = BinaryMatrix::identity(v).unwrap().complement().to_int();
            let s = AssociationScheme::from_relation_matrix(&r).unwrap();
            s.bose_mesner_check().unwrap();
            let a = s.associate_matrices();
            let a1 = a[1].to_int();
            let expected = IntMatrix::zeros(v, v)
                .unwrap()
                .add_scaled(&a[0].to_int(), v as u32 - 1)
                .unwrap()
                .add_scaled(&a1, v as u32 - 2)
                .unwrap();
            assert_eq!(a1.matmul(&a1).unwrap(), expected);
        }
    }

    #[test]
    fn from_classification_of_doubled_three_is_r_prime_relabeled() {
        let c = classify(&IncidenceStructure::new(BinaryMatrix::doubled(3).unwrap())).unwrap();
        let s = AssociationScheme::from_classification(&c).unwrap();
        assert_eq!(s.n(), &[1, 1, 2, 2]);
        assert!(crate::binmat::find_relabeling(s.relation_matrix(), &r_prime()).is_some());
    }

    #[test]
    fn one_class_scheme_from_biplane() {
        let c = classify(&IncidenceStructure::new(crate::biplane::assemble_b4c())).unwrap();
        let s = AssociationScheme::from_classification(&c).unwrap();
        assert_eq!((s.d(), s.n()), (1, &[1usize, 15][..]));
        s.bose_mesner_check().unwrap();
    }

    #[test]
    fn sixteen_point_displays_are_not_closed() {
        // The displayed 16-point associate matrices partition J, but A_1 A_1 is not
        // constant on class 1.
        let a = fixtures::sixteen_point_associates();
        let mut r = IntMatrix::zeros(16, 16).unwrap();
        for (i, ai) in a.iter().enumerate() {
            for x in 0..16 {
                for y in ai.ones_in_row(x) {
                    assert_eq!(r.get(x, y), 0);
                    r.set(x, y, i as u32);
                }
            }
        }
        assert!(!closure_holds(&r));
        assert!(brute_force_p(&r).is_none());
        assert!(matches!(AssociationScheme::from_relation_matrix(&r), Err(Error::NotAScheme { .. })));
    }

    #[test]
    fn roundtrip_relation_matrix() {
        for r in [r_prime(), IntMatrix::from_rows(&[[0u32, 1], [1, 0]]).unwrap()] {
            let s = AssociationScheme::from_relation_matrix(&r).unwrap();
            let again = AssociationScheme::from_relation_matrix(s.relation_matrix()).unwrap();
            assert_eq!(again, s);
            assert_eq!(s.relation_matrix().to_string().parse::<IntMatrix>().unwrap(), r);
        }
    }

    fn symmetric_relation(v: usize, d: u32, seed: Vec<u32>) -> IntMatrix {
        let mut r = IntMatrix::zeros(v, v).unwrap();
        let mut k = 0;
        for x in 0..v {
            for y in x + 1..v {
                let c = seed[k % seed.len()] % d + 1;
                k += 1;
                r.set(x, y, c);
                r.set(y, x, c);
            }
        }
        r
    }

    fn shuffle(v: usize, keys: &[u32]) -> Permutation {
        let mut order: Vec<usize> = (0..v).collect();
        order.sort_by_key(|&i| (keys[i % keys.len()], i));
        Permutation::new(order).unwrap()
    }

    proptest! {
        #[test]
        fn axiom_four_iff_closure(
            v in 2usize..8,
            d in 1u32..4,
            seed in proptest::collection::vec(any::<u32>(), 1..30),
        ) {
            let r = symmetric_relation(v, d, seed);
            let all_used = (1..=r.max_entry()).all(|i| r.indicator(i).count_ones() > 0);
            prop_assume!(all_used);
            let verdict = AssociationScheme::from_relation_matrix(&r);
            prop_assert_eq!(verdict.is_ok(), closure_holds(&r));
            prop_assert_eq!(verdict.is_ok(), brute_force_p(&r).is_some());
            if let Ok(s) = verdict {
                s.bose_mesner_check().unwrap();
            }
        }

        #[test]
        fn known_schemes_pass_closure_under_relabeling(
            which in 0usize..3,
            keys in proptest::collection::vec(any::<u32>(), 16),
        ) {
            let r = match which {
                0 => r_prime(),
                1 => BinaryMatrix::identity(5).unwrap().complement().to_int(),
                _ => classify(&IncidenceStructure::new(BinaryMatrix::doubled(5).unwrap())).unwrap().relation().clone(),
            };
            let p = shuffle(r.rows(), &keys);
            let a = AssociationScheme::from_relation_matrix(&r);
            let b = AssociationScheme::from_relation_matrix(&r.relabel(&p).unwrap());
            prop_assert_eq!(a.is_ok(), b.is_ok());
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert_eq!(a.report().p, b.report().p);
                a.bose_mesner_check().unwrap();
            }
        }

        #[test]
        fn valency_row_sums(keys in proptest::collection::vec(any::<u32>(), 6)) {
            let r = r_prime().relabel(&shuffle(6, &keys)).unwrap();
            let s = AssociationScheme::from_relation_matrix(&r).unwrap();
            for h in 0..=s.d() {
                for i in 0..=s.d() {
                    let sum: u32 = (0..=s.d()).map(|j| s.p(h, i, j)).sum();
                    prop_assert_eq!(sum as usize, s.n()[i]);
                }
            }
        }

        #[test]
        fn class_label_permutation(keys in proptest::collection::vec(any::<u32>(), 3)) {
            let sigma = shuffle(3, &keys);
            let label = |c: u32| if c == 0 { 0 } else { sigma.apply(c as usize - 1) as u32 + 1 };
            let r = r_prime();
            let moved = IntMatrix::from_fn(6, 6, |x, y| label(r.get(x, y))).unwrap();
            let a = AssociationScheme::from_relation_matrix(&r).unwrap();
            let b = AssociationScheme::from_relation_matrix(&moved).unwrap();
            for h in 0..4u32 {
                for i in 0..4u32 {
                    for j in 0..4u32 {
                        prop_assert_eq!(
                            a.p(h as usize, i as usize, j as usize),
                            b.p(label(h) as usize, label(i) as usize, label(j) as usize)
                        );
                    }
                }
            }
        }
    }
}

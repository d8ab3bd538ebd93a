//! Built-in reference matrices.

use crate::binmat::{BinaryMatrix, IntMatrix};

const ORDER9: [(&str, &str); 4] = [
    ("order9_top_left", include_str!("../data/order9_top_left.txt")),
    ("order9_top_right", include_str!("../data/order9_top_right.txt")),
    ("order9_bottom_left", include_str!("../data/order9_bottom_left.txt")),
    ("order9_bottom_right", include_str!("../data/order9_bottom_right.txt")),
];

const ORDER7: [(&str, &str); 2] = [
    ("order7_left", include_str!("../data/order7_left.txt")),
    ("order7_right", include_str!("../data/order7_right.txt")),
];

const R_PRIME: &str = include_str!("../data/relation_r_prime.txt");

/// Order of the automorphism group of the order-4 biplane `B_4c`. Metadata only.
pub const AUT_B4C: u64 = 11520;
/// Order of the automorphism group of the order-9 biplane `B_9e`. Metadata only.
pub const AUT_B9E: u64 = 80640;

/// Raw text of a bundled data file, by name.
pub fn source(name: &str) -> Option<&'static str> {
    ORDER9
        .iter()
        .chain(ORDER7.iter())
        .chain([("relation_r_prime", R_PRIME)].iter())
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

fn parse(text: &str) -> BinaryMatrix {
    text.parse().expect("bundled table parses")
}

/// The four 16x16 cores `M_S` taken from the order-9 biplane `B_9e`.
pub fn order9_cores() -> Vec<(&'static str, BinaryMatrix)> {
    ORDER9.iter().map(|(n, t)| (*n, parse(t))).collect()
}

/// Two 12x12 cores from order-7 biplanes. They are not symmetric designs.
pub fn order7_cores() -> Vec<(&'static str, BinaryMatrix)> {
    ORDER7.iter().map(|(n, t)| (*n, parse(t))).collect()
}

/// Relation matrix of the 3-class scheme on six points.
pub fn relation_r_prime() -> IntMatrix {
    R_PRIME.parse().expect("bundled table parses")
}

fn block(rows: &[Vec<&BinaryMatrix>]) -> BinaryMatrix {
    BinaryMatrix::assemble(rows).expect("blocks fit")
}

fn lc(n: usize) -> BinaryMatrix {
    BinaryMatrix::path_loop(n).and_then(|l| l.product(&BinaryMatrix::anti_diagonal(n)?)).expect("n >= 2")
}

/// `A_0..A_3` of the six-point scheme, in the block form
/// `I_6`, `[[0, I], [I, 0]]`, `diag(L_3 C_3, L_3 C_3)`, `[[0, L_3 C_3], [L_3 C_3, 0]]`.
pub fn six_point_associates() -> [BinaryMatrix; 4] {
    let z = BinaryMatrix::constant(3, 3, false).unwrap();
    let i = BinaryMatrix::identity(3).unwrap();
    let x = lc(3);
    [
        BinaryMatrix::identity(6).unwrap(),
        block(&[vec![&z, &i], vec![&i, &z]]),
        block(&[vec![&x, &z], vec![&z, &x]]),
        block(&[vec![&z, &x], vec![&x, &z]]),
    ]
}

/// `A_0..A_3` as printed for the 16-point design from the top-left core.
///
/// These four matrices partition `J_16` and `A_2` is four `T_4` blocks on the
/// diagonal, but they do not close under multiplication.
pub fn sixteen_point_associates() -> [BinaryMatrix; 4] {
    let z = BinaryMatrix::constant(4, 4, false).unwrap();
    let j = BinaryMatrix::constant(4, 4, true).unwrap();
    let c = BinaryMatrix::anti_diagonal(4).unwrap();
    let l = BinaryMatrix::path_loop(4).unwrap();
    let x = lc(4);
    let t = BinaryMatrix::border(4).unwrap();
    [
        BinaryMatrix::identity(16).unwrap(),
        block(&[vec![&c, &j, &j, &l], vec![&j, &c, &x, &j], vec![&j, &x, &c, &j], vec![&l, &j, &j, &c]]),
        block(&[vec![&t, &z, &z, &z], vec![&z, &t, &z, &z], vec![&z, &z, &t, &z], vec![&z, &z, &z, &t]]),
        block(&[vec![&z, &z, &z, &x], vec![&z, &z, &l, &z], vec![&z, &l, &z, &z], vec![&x, &z, &z, &z]]),
    ]
}

/// Four `T_4` blocks on the diagonal of a 16x16 zero matrix.
pub fn four_border_blocks() -> BinaryMatrix {
    sixteen_point_associates()[2].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_have_expected_shapes() {
        for (name, m) in order9_cores() {
            assert_eq!((m.rows(), m.cols()), (16, 16), "{name}");
            assert_eq!(m.trace(), 16, "{name}");
            assert!(m.row_sums().iter().all(|&s| s == 3), "{name}");
        }
        for (_, m) in order7_cores() {
            assert_eq!((m.rows(), m.cols()), (12, 12));
        }
        assert_eq!(relation_r_prime().rows(), 6);
        assert!(source("order9_top_left").is_some());
        assert!(source("nothing").is_none());
    }

    #[test]
    fn associate_displays_partition_j() {
        for (v, a) in [(6, six_point_associates().to_vec()), (16, sixteen_point_associates().to_vec())] {
            let mut total = BinaryMatrix::constant(v, v, false).unwrap();
            for ai in &a {
                total = total.disjoint_sum(ai).unwrap();
            }
            assert_eq!(total, BinaryMatrix::constant(v, v, true).unwrap());
        }
    }
}

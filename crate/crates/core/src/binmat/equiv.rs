use super::{BinaryMatrix, IntMatrix, Permutation};
use std::collections::HashMap;

/// Looks for `(row_perm, col_perm)` with `a.permute(row_perm, col_perm) == b`.
///
/// Rows of `a` are matched to rows of `b` one at a time, rarest row signature
/// first. After each assignment the columns of both matrices are split by their
/// profile over the assigned rows; a branch dies as soon as some profile class
/// has different sizes in `a` and `b`. Once all rows are matched, columns with
/// equal full profiles are paired up.
pub fn is_perm_equivalent(a: &BinaryMatrix, b: &BinaryMatrix) -> Option<(Permutation, Permutation)> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    let (ra, rb) = (a.row_sums(), b.row_sums());
    let (ca, cb) = (a.col_sums(), b.col_sums());
    if sorted(ra.clone()) != sorted(rb.clone()) || sorted(ca.clone()) != sorted(cb.clone()) {
        return None;
    }

    // Row signature: own sum plus the sorted sums of the columns it meets.
    let row_sig = |m: &BinaryMatrix, rs: &[usize], cs: &[usize], i: usize| {
        let mut meets: Vec<usize> = m.ones_in_row(i).map(|j| cs[j]).collect();
        meets.sort_unstable();
        (rs[i], meets)
    };
    let sig_a: Vec<_> = (0..a.rows()).map(|i| row_sig(a, &ra, &ca, i)).collect();
    let sig_b: Vec<_> = (0..b.rows()).map(|i| row_sig(b, &rb, &cb, i)).collect();
    if sorted_clone(&sig_a) != sorted_clone(&sig_b) {
        return None;
    }

    let (at, bt) = (a.transpose(), b.transpose());
    let col_sig_a: Vec<_> = (0..a.cols()).map(|j| row_sig(&at, &ca, &ra, j)).collect();
    let col_sig_b: Vec<_> = (0..b.cols()).map(|j| row_sig(&bt, &cb, &rb, j)).collect();
    if sorted_clone(&col_sig_a) != sorted_clone(&col_sig_b) {
        return None;
    }
    let mut ids = HashMap::new();
    let class_a: Vec<u32> = col_sig_a.iter().map(|s| intern(&mut ids, s.clone())).collect();
    let class_b: Vec<u32> = col_sig_b.iter().map(|s| intern(&mut ids, s.clone())).collect();

    let mut freq: HashMap<&(usize, Vec<usize>), usize> = HashMap::new();
    for s in &sig_a {
        *freq.entry(s).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..a.rows()).collect();
    order.sort_by_key(|&i| (freq[&sig_a[i]], i));

    let mut search = RowMatcher {
        a,
        b,
        order,
        candidates: (0..a.rows()).map(|i| (0..b.rows()).filter(|&j| sig_b[j] == sig_a[i]).collect()).collect(),
        row_map: vec![usize::MAX; a.rows()],
        used: vec![false; b.rows()],
    };
    if !search.run(0, class_a.clone(), class_b.clone()) {
        return None;
    }
    let (class_a, class_b) = search.final_classes(class_a, class_b);
    let mut pool: HashMap<u32, Vec<usize>> = HashMap::new();
    for (j, c) in class_b.iter().enumerate().rev() {
        pool.entry(*c).or_default().push(j);
    }
    let col_map: Vec<usize> =
        class_a.iter().map(|c| pool.get_mut(c).and_then(Vec::pop).expect("class sizes agree")).collect();
    let p = Permutation::new(search.row_map).expect("bijective row map");
    let q = Permutation::new(col_map).expect("bijective column map");
    debug_assert_eq!(a.permute(&p, &q).ok().as_ref(), Some(b));
    Some((p, q))
}

fn sorted_clone<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

fn intern<K: std::hash::Hash + Eq>(ids: &mut HashMap<K, u32>, key: K) -> u32 {
    let next = ids.len() as u32;
    *ids.entry(key).or_insert(next)
}

struct RowMatcher<'m> {
    a: &'m BinaryMatrix,
    b: &'m BinaryMatrix,
    order: Vec<usize>,
    candidates: Vec<Vec<usize>>,
    row_map: Vec<usize>,
    used: Vec<bool>,
}

impl RowMatcher<'_> {
    /// Splits every column class by the entry in the newly matched row pair.
    /// Returns `None` when the two sides disagree on some class size.
    fn refine(&self, ra: usize, rb: usize, ca: &[u32], cb: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
        let mut ids: HashMap<(u32, bool), u32> = HashMap::new();
        let mut count: Vec<i64> = Vec::new();
        let mut next_a = Vec::with_capacity(ca.len());
        for (j, &c) in ca.iter().enumerate() {
            let id = intern(&mut ids, (c, self.a.get(ra, j)));
            if id as usize == count.len() {
                count.push(0);
            }
            count[id as usize] += 1;
            next_a.push(id);
        }
        let mut next_b = Vec::with_capacity(cb.len());
        for (j, &c) in cb.iter().enumerate() {
            let id = *ids.get(&(c, self.b.get(rb, j)))?;
            count[id as usize] -= 1;
            next_b.push(id);
        }
        count.iter().all(|&x| x == 0).then_some((next_a, next_b))
    }

    fn run(&mut self, depth: usize, ca: Vec<u32>, cb: Vec<u32>) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let ra = self.order[depth];
        for idx in 0..self.candidates[ra].len() {
            let rb = self.candidates[ra][idx];
            if self.used[rb] {
                continue;
            }
            if let Some((na, nb)) = self.refine(ra, rb, &ca, &cb) {
                self.used[rb] = true;
                self.row_map[ra] = rb;
                if self.run(depth + 1, na, nb) {
                    return true;
                }
                self.used[rb] = false;
                self.row_map[ra] = usize::MAX;
            }
        }
        false
    }

    fn final_classes(&self, mut ca: Vec<u32>, mut cb: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
        for &ra in &self.order {
            let (na, nb) =
                self.refine(ra, self.row_map[ra], &ca, &cb).expect("accepted assignment refines consistently");
            ca = na;
            cb = nb;
        }
        (ca, cb)
    }
}

/// Looks for a simultaneous relabeling `s` of rows and columns with
/// `b[s(x)][s(y)] == a[x][y]` for all `x, y`. Both matrices must be square.
pub fn find_relabeling(a: &IntMatrix, b: &IntMatrix) -> Option<Permutation> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return None;
    }
    let n = a.rows();
    let signature = |m: &IntMatrix, x: usize| {
        let mut row: Vec<u32> = m.row(x).to_vec();
        let mut col: Vec<u32> = (0..n).map(|y| m.get(y, x)).collect();
        row.sort_unstable();
        col.sort_unstable();
        (m.get(x, x), row, col)
    };
    let sig_a: Vec<_> = (0..n).map(|x| signature(a, x)).collect();
    let sig_b: Vec<_> = (0..n).map(|x| signature(b, x)).collect();
    if sorted_clone(&sig_a) != sorted_clone(&sig_b) {
        return None;
    }

    // Most common off-diagonal value; edges of any other value are informative.
    let mut tally: HashMap<u32, usize> = HashMap::new();
    for x in 0..n {
        for y in 0..n {
            if x != y {
                *tally.entry(a.get(x, y)).or_default() += 1;
            }
        }
    }
    let background = tally.into_iter().max_by_key(|&(v, c)| (c, std::cmp::Reverse(v))).map(|(v, _)| v);

    let mut freq: HashMap<_, usize> = HashMap::new();
    for s in &sig_a {
        *freq.entry(s.clone()).or_default() += 1;
    }
    // Greedy order: rarest signature first, then the vertex with the most
    // informative links into the already ordered prefix.
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&x| !placed[x])
            .max_by_key(|&x| {
                let links = order
                    .iter()
                    .filter(|&&y| Some(a.get(x, y)) != background || Some(a.get(y, x)) != background)
                    .count();
                (links, std::cmp::Reverse(freq[&sig_a[x]]), std::cmp::Reverse(x))
            })
            .expect("unplaced vertex exists");
        placed[next] = true;
        order.push(next);
    }

    let candidates: Vec<Vec<usize>> = (0..n).map(|x| (0..n).filter(|&y| sig_b[y] == sig_a[x]).collect()).collect();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        depth: usize,
        order: &[usize],
        candidates: &[Vec<usize>],
        a: &IntMatrix,
        b: &IntMatrix,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&x) = order.get(depth) else {
            return true;
        };
        for &y in &candidates[x] {
            if used[y] {
                continue;
            }
            let consistent =
                order[..depth].iter().all(|&w| a.get(x, w) == b.get(y, map[w]) && a.get(w, x) == b.get(map[w], y));
            if !consistent {
                continue;
            }
            used[y] = true;
            map[x] = y;
            if extend(depth + 1, order, candidates, a, b, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }

    extend(0, &order, &candidates, a, b, &mut map, &mut used)
        .then(|| Permutation::new(map).expect("bijective relabeling"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn random_perm(n: usize, rng: &mut impl Rng) -> Permutation {
        let mut v: Vec<usize> = (0..n).collect();
        v.shuffle(rng);
        Permutation::new(v).unwrap()
    }

    #[test]
    fn self_equivalence() {
        let d = BinaryMatrix::doubled(5).unwrap();
        let (p, q) = is_perm_equivalent(&d, &d).unwrap();
        assert_eq!(d.permute(&p, &q).unwrap(), d);
    }

    #[test]
    fn column_reversal_of_path_loop() {
        let l4 = BinaryMatrix::path_loop(4).unwrap();
        let lc = l4.product(&BinaryMatrix::anti_diagonal(4).unwrap()).unwrap();
        // Oracle: the reversal itself is an explicit witness.
        assert_eq!(l4.permute(&Permutation::identity(4), &Permutation::reversal(4)).unwrap(), lc);
        let (p, q) = is_perm_equivalent(&l4, &lc).unwrap();
        assert_eq!(l4.permute(&p, &q).unwrap(), lc);
    }

    #[test]
    fn identity_versus_others() {
        let i4 = BinaryMatrix::identity(4).unwrap();
        assert!(is_perm_equivalent(&i4, &BinaryMatrix::anti_diagonal(4).unwrap()).is_some());
        assert!(is_perm_equivalent(&i4, &BinaryMatrix::constant(4, 4, true).unwrap()).is_none());
        assert!(is_perm_equivalent(&i4, &BinaryMatrix::identity(5).unwrap()).is_none());
    }

    #[test]
    fn two_three_cycles_are_not_one_six_cycle() {
        let l3 = BinaryMatrix::path_loop(3).unwrap();
        let z = BinaryMatrix::constant(3, 3, false).unwrap();
        let two = BinaryMatrix::assemble(&[vec![&l3, &z], vec![&z, &l3]]).unwrap();
        let l6 = BinaryMatrix::path_loop(6).unwrap();
        assert_eq!(two.row_sums(), l6.row_sums());
        assert!(is_perm_equivalent(&two, &l6).is_none());
    }

    #[test]
    fn scrambled_matrices_are_recovered() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for m in [3, 5, 8, 12] {
            let d = BinaryMatrix::doubled(m).unwrap();
            let p = random_perm(2 * m, &mut rng);
            let q = random_perm(2 * m, &mut rng);
            let scrambled = d.permute(&p, &q).unwrap();
            let (p2, q2) = is_perm_equivalent(&d, &scrambled).unwrap();
            assert_eq!(d.permute(&p2, &q2).unwrap(), scrambled);
        }
    }

    #[test]
    fn relabeling_found_and_rejected() {
        let d = BinaryMatrix::doubled(4).unwrap().to_int();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let s = random_perm(8, &mut rng);
        let moved = d.relabel(&s).unwrap();
        let found = find_relabeling(&d, &moved).unwrap();
        assert_eq!(d.relabel(&found).unwrap(), moved);
        // L_4 C_4 is L_4 read backwards along its path, so it is a relabeling.
        let l = BinaryMatrix::path_loop(4).unwrap();
        let lc = l.product(&BinaryMatrix::anti_diagonal(4).unwrap()).unwrap();
        assert!(find_relabeling(&l.to_int(), &lc.to_int()).is_some());
        // One path against two: not a relabeling.
        let l3 = BinaryMatrix::path_loop(3).unwrap();
        let z = BinaryMatrix::constant(3, 3, false).unwrap();
        let two = BinaryMatrix::assemble(&[vec![&l3, &z], vec![&z, &l3]]).unwrap();
        assert!(find_relabeling(&BinaryMatrix::path_loop(6).unwrap().to_int(), &two.to_int()).is_none());
    }

    fn small_matrix() -> impl Strategy<Value = BinaryMatrix> {
        (1usize..=10, 1usize..=10).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| BinaryMatrix::from_fn(r, c, |i, j| bits[i * c + j]).unwrap())
        })
    }

    proptest! {
        #[test]
        fn reflexive_and_symmetric(a in small_matrix(), seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            prop_assert!(is_perm_equivalent(&a, &a).is_some());
            let b = a.permute(&random_perm(a.rows(), &mut rng), &random_perm(a.cols(), &mut rng)).unwrap();
            let (p, q) = is_perm_equivalent(&a, &b).expect("forward");
            prop_assert_eq!(a.permute(&p, &q).unwrap(), b.clone());
            let (p, q) = is_perm_equivalent(&b, &a).expect("backward");
            prop_assert_eq!(b.permute(&p, &q).unwrap(), a);
        }

        #[test]
        fn verdict_is_symmetric(a in small_matrix(), flip in any::<(usize, usize)>()) {
            let b = a.with_flipped(flip.0 % a.rows(), flip.1 % a.cols()).unwrap();
            prop_assert_eq!(is_perm_equivalent(&a, &b).is_some(), is_perm_equivalent(&b, &a).is_some());
        }
    }
}

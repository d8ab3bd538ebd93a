//! Partially balanced incomplete block designs: point pairs are grouped by how
//! many blocks contain them, and every point must have the same number of
//! partners in each group.

use crate::binmat::IntMatrix;
use crate::error::{Error, Result};
use crate::incidence::IncidenceStructure;
use serde::Serialize;

/// Pairs of points grouped by concurrence. Class labels run `1..=d` in
/// ascending order of concurrence; label 0 is the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    lambdas: Vec<u32>,
    n: Vec<usize>,
    relation: IntMatrix,
}

impl PairClassification {
    pub fn d(&self) -> usize {
        self.lambdas.len()
    }

    /// `lambda_1 < ... < lambda_d`.
    pub fn lambdas(&self) -> &[u32] {
        &self.lambdas
    }

    /// `n_1, ..., n_d`.
    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn relation_of(&self, p: usize, q: usize) -> u32 {
        self.relation.get(p, q)
    }

    /// The point-by-point class labels.
    pub fn relation(&self) -> &IntMatrix {
        &self.relation
    }
}

/// `N[p][q]` = number of blocks on both `p` and `q`; `N[p][p]` is the degree of `p`.
pub fn concurrence(s: &IncidenceStructure) -> IntMatrix {
    let m = s.matrix();
    let v = s.v();
    let mut n = IntMatrix::zeros(v, v).expect("structure has points");
    for p in 0..v {
        for q in p..v {
            let c = m.row_dot_unchecked(p, q) as u32;
            n.set(p, q, c);
            n.set(q, p, c);
        }
    }
    n
}

pub fn classify(s: &IncidenceStructure) -> Result<PairClassification> {
    if s.regularity().is_none() || s.uniformity().is_none() {
        s.derive_parameters()?;
    }
    let v = s.v();
    let conc = concurrence(s);
    let mut lambdas: Vec<u32> = (0..v)
        .flat_map(|p| (0..v).filter(move |&q| q != p).map(move |q| (p, q)))
        .map(|(p, q)| conc.get(p, q))
        .collect();
    lambdas.sort_unstable();
    lambdas.dedup();

    let mut relation = IntMatrix::zeros(v, v)?;
    for p in 0..v {
        for q in 0..v {
            if p != q {
                let label = lambdas.binary_search(&conc.get(p, q)).expect("value was collected") + 1;
                relation.set(p, q, label as u32);
            }
        }
    }

    let counts_of = |p: usize| {
        let mut counts = vec![0usize; lambdas.len()];
        for q in (0..v).filter(|&q| q != p) {
            counts[relation.get(p, q) as usize - 1] += 1;
        }
        counts
    };
    let n = counts_of(0);
    for p in 1..v {
        let here = counts_of(p);
        if let Some(i) = (0..n.len()).find(|&i| here[i] != n[i]) {
            return Err(Error::NotPbibd(format!(
                "point 1 has {} associates with concurrence {} but point {} has {}",
                n[i],
                lambdas[i],
                p + 1,
                here[i]
            )));
        }
    }
    Ok(PairClassification { lambdas, n, relation })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PbibdIdentities {
    /// `v r = b k`
    pub vr_bk: bool,
    /// `sum_i n_i lambda_i = r (k - 1)`
    pub sum_nl: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PbibdReport {
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub k: usize,
    pub d: usize,
    pub lambda: Vec<u32>,
    pub n: Vec<usize>,
    pub identities: PbibdIdentities,
    /// Parameters in the form `2-(v,b,r,k,λᵢ)`, with the values of λ listed.
    pub parameters: String,
}

impl PbibdReport {
    /// `d = 0` (one point) or `d = 1` with no pair on a common block.
    pub fn is_degenerate(&self) -> bool {
        self.d == 0 || (self.d == 1 && self.lambda[0] == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.v == self.b && self.r == self.k
    }
}

/// Classifies `s` and checks both counting identities.
pub fn verify_pbibd(s: &IncidenceStructure, expect_d: Option<usize>) -> Result<(PairClassification, PbibdReport)> {
    let classes = classify(s)?;
    let (v, b) = (s.v(), s.b());
    let r = s.regularity().expect("classify checked regularity");
    let k = s.uniformity().expect("classify checked uniformity");

    let sum_nl: usize = classes.n.iter().zip(&classes.lambdas).map(|(&n, &l)| n * l as usize).sum();
    let identities = PbibdIdentities { vr_bk: v * r == b * k, sum_nl: sum_nl == r * k.saturating_sub(1) };
    if !identities.vr_bk {
        return Err(Error::ArithmeticInconsistency(format!("v r = {} but b k = {}", v * r, b * k)));
    }
    if !identities.sum_nl {
        return Err(Error::ArithmeticInconsistency(format!(
            "sum n_i lambda_i = {sum_nl} but r (k - 1) = {}",
            r * k.saturating_sub(1)
        )));
    }
    if let Some(d) = expect_d {
        if classes.d() != d {
            return Err(Error::Expectation(format!("expected {d} associate classes, found {}", classes.d())));
        }
    }
    let lambda_list: Vec<String> = classes.lambdas.iter().map(u32::to_string).collect();
    let report = PbibdReport {
        v,
        b,
        r,
        k,
        d: classes.d(),
        lambda: classes.lambdas.clone(),
        n: classes.n.clone(),
        identities,
        parameters: format!("2-({v},{b},{r},{k},λᵢ), λᵢ={}", lambda_list.join(",")),
    };
    Ok((classes, report))
}

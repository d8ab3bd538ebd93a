//! The principal core of a symmetric canonical biplane matrix with full trace,
//! the two structural lemmas it rests on, and the `[[I, L], [L, I]]` family.

use crate::binmat::{is_perm_equivalent, BinaryMatrix, IndexSet, Permutation};
use crate::biplane::{canonical_head, points_for_block_size, verify_biplane};
use crate::error::{Error, Result};
use crate::incidence::IncidenceStructure;
use crate::pbibd::{verify_pbibd, PbibdReport};
use crate::scheme::{AssociationScheme, SchemeReport};
use serde::Serialize;

/// 0-based indices `k+1..=3k-6` of the core, `2k - 6` of them.
pub fn extraction_indices(k: usize) -> Result<IndexSet> {
    if k < 6 {
        return Err(Error::Parameter(format!(
            "the core needs k >= 6, got {k}; no biplane with k < 6 has a symmetric canonical matrix"
        )));
    }
    Ok(IndexSet::range(k + 1, 3 * k - 5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    Row,
    Column,
}

/// A row or column of a core whose sum is not 3. `index` is 1-based in the
/// matrix the check was run on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SumDeviation {
    pub line: Line,
    pub index: usize,
    pub sum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreSumCheck {
    pub holds: bool,
    pub deviations: Vec<SumDeviation>,
}

/// Row and column sums of a square core against 3.
pub fn core_sums(core: &BinaryMatrix) -> CoreSumCheck {
    core_sums_at(core, 0)
}

fn core_sums_at(core: &BinaryMatrix, offset: usize) -> CoreSumCheck {
    let mut deviations = Vec::new();
    for (line, sums) in [(Line::Row, core.row_sums()), (Line::Column, core.col_sums())] {
        for (i, &sum) in sums.iter().enumerate() {
            if sum != 3 {
                deviations.push(SumDeviation { line, index: offset + i + 1, sum });
            }
        }
    }
    CoreSumCheck { holds: deviations.is_empty(), deviations }
}

/// Sum condition on the core of a canonical biplane matrix whose diagonal is
/// all ones up to row `3k-6`. Deviations name rows and columns of `m`.
pub fn check_lemma1(m: &BinaryMatrix, k: usize) -> Result<CoreSumCheck> {
    let s = extraction_indices(k)?;
    let v = points_for_block_size(k);
    if !m.is_square() || m.rows() != v {
        return Err(Error::Precondition(format!(
            "expected a {v}x{v} matrix for k = {k}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if let Some(i) = (0..3 * k - 5).find(|&i| !m.get(i, i)) {
        return Err(Error::Precondition(format!("diagonal entry {0},{0} is 0", i + 1)));
    }
    let head = canonical_head(k)?;
    if (0..k).any(|i| (0..v).any(|j| m.get(i, j) != head.get(i, j) || m.get(j, i) != head.get(i, j))) {
        return Err(Error::Precondition("matrix is not in canonical form".into()));
    }
    Ok(core_sums_at(&m.principal_submatrix(&s)?, k + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma2Report {
    pub m: usize,
    /// For each row (1-based), the two rows it meets in exactly one column.
    pub neighbours: Vec<[usize; 2]>,
    /// Lengths of the cycles of the row/column incidence graph, ascending.
    pub cycle_lengths: Vec<usize>,
}

/// Square matrix with row and column sums 2 and no two rows sharing two
/// columns: each row meets exactly two others once and the rest not at all.
pub fn check_lemma2(a: &BinaryMatrix) -> Result<Lemma2Report> {
    if !a.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let m = a.rows();
    if let Some(i) = (0..m).find(|&i| a.row_sum(i) != 2) {
        return Err(Error::Hypothesis(format!("row {} sums to {}", i + 1, a.row_sum(i))));
    }
    if let Some(j) = (0..m).find(|&j| a.col_sum(j) != 2) {
        return Err(Error::Hypothesis(format!("column {} sums to {}", j + 1, a.col_sum(j))));
    }
    for i in 0..m {
        for j in i + 1..m {
            if a.row_dot_unchecked(i, j) > 1 {
                return Err(Error::Hypothesis(format!("rows {} and {} contain a 2x2 block of ones", i + 1, j + 1)));
            }
        }
    }

    let mut neighbours = Vec::with_capacity(m);
    for i in 0..m {
        let ones: Vec<usize> = (0..m).filter(|&j| j != i && a.row_dot_unchecked(i, j) == 1).collect();
        if ones.len() != 2 {
            return Err(Error::Counterexample(format!(
                "row {} meets {} other rows in one column, not 2",
                i + 1,
                ones.len()
            )));
        }
        neighbours.push([ones[0] + 1, ones[1] + 1]);
    }

    // Each component of the 2-regular bipartite graph is a cycle through as
    // many columns as rows.
    let mut seen = vec![false; m];
    let mut cycle_lengths = Vec::new();
    for start in 0..m {
        if seen[start] {
            continue;
        }
        let mut rows = 0;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(r) = stack.pop() {
            rows += 1;
            let [x, y] = neighbours[r];
            for n in [x - 1, y - 1] {
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
        cycle_lengths.push(2 * rows);
    }
    cycle_lengths.sort_unstable();
    Ok(Lemma2Report { m, neighbours, cycle_lengths })
}

/// Everything derived from one biplane matrix.
#[derive(Debug, Clone)]
pub struct ExtractionReport {
    pub k: usize,
    pub indices: IndexSet,
    pub core: BinaryMatrix,
    pub lemma1: CoreSumCheck,
    pub symmetric: bool,
    pub pbibd: PbibdReport,
    pub scheme: AssociationScheme,
    /// Row and column permutations carrying the core onto `doubled(k - 3)`, if any.
    pub d_equivalence: Option<(Permutation, Permutation)>,
}

#[derive(Serialize)]
struct EquivalenceView {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

#[derive(Serialize)]
pub struct ExtractionSummary {
    k: usize,
    indices: Vec<usize>,
    lemma1: CoreSumCheck,
    symmetric: bool,
    pbibd: PbibdReport,
    scheme: SchemeReport,
    d_equivalence: Option<EquivalenceView>,
}

impl ExtractionReport {
    /// JSON view. Indices and permutation images are 1-based.
    pub fn summary(&self) -> ExtractionSummary {
        let one_based = |p: &Permutation| p.images().iter().map(|x| x + 1).collect();
        ExtractionSummary {
            k: self.k,
            indices: self.indices.to_one_based(),
            lemma1: self.lemma1.clone(),
            symmetric: self.symmetric,
            pbibd: self.pbibd.clone(),
            scheme: self.scheme.report(),
            d_equivalence: self
                .d_equivalence
                .as_ref()
                .map(|(p, q)| EquivalenceView { rows: one_based(p), cols: one_based(q) }),
        }
    }
}

/// Cuts the core out of a symmetric canonical biplane matrix with full trace
/// and checks that it is a symmetric design with three associate classes.
///
/// A core that breaks any of the expected properties is reported as
/// [`Error::Counterexample`].
pub fn extract_design(m: &BinaryMatrix) -> Result<ExtractionReport> {
    let cert = verify_biplane(m).map_err(|e| Error::Precondition(e.to_string()))?;
    if !cert.symmetric {
        return Err(Error::Precondition("matrix is not symmetric".into()));
    }
    if !cert.full_trace {
        return Err(Error::Precondition(format!("trace is {}, not {}", m.trace(), cert.v)));
    }
    if !cert.canonical {
        return Err(Error::Precondition("matrix is not in canonical form".into()));
    }
    let k = cert.k;
    let indices = extraction_indices(k)?;
    let core = m.principal_submatrix(&indices)?;

    let lemma1 = check_lemma1(m, k)?;
    if !lemma1.holds {
        let d = &lemma1.deviations[0];
        return Err(Error::Counterexample(format!("core {:?} {} sums to {}", d.line, d.index, d.sum)));
    }
    let symmetric = core.is_symmetric()?;
    if !symmetric {
        return Err(Error::Counterexample("core is not symmetric".into()));
    }
    let (classes, pbibd) = verify_pbibd(&IncidenceStructure::new(core.clone()), Some(3))
        .map_err(|e| Error::Counterexample(format!("core is not a 3-class design: {e}")))?;
    let expected_n = [2 * k - 11, 2, 2];
    if pbibd.lambda != [0, 1, 2] || pbibd.n != expected_n || !pbibd.is_symmetric() || pbibd.k != 3 {
        return Err(Error::Counterexample(format!(
            "core has r = {}, k = {}, lambda = {:?}, n = {:?}; expected 3, 3, [0, 1, 2], {expected_n:?}",
            pbibd.r, pbibd.k, pbibd.lambda, pbibd.n
        )));
    }
    let scheme = AssociationScheme::from_classification(&classes)
        .map_err(|e| Error::Counterexample(format!("core classes do not form a scheme: {e}")))?;
    let d_equivalence = is_perm_equivalent(&core, &BinaryMatrix::doubled(k - 3)?);
    Ok(ExtractionReport { k, indices, core, lemma1, symmetric, pbibd, scheme, d_equivalence })
}

/// `doubled(m)` as a design, checked to have `v = b = 2m`, `r = k = 3`,
/// `lambda = (0, 1, 2)` and `n = (2m - 5, 2, 2)`.
pub fn family_generate(m: usize) -> Result<(IncidenceStructure, PbibdReport)> {
    if m < 3 {
        return Err(Error::Parameter(format!("family member needs m >= 3, got {m}")));
    }
    let s = IncidenceStructure::new(BinaryMatrix::doubled(m)?);
    let (_, report) = verify_pbibd(&s, Some(3)).map_err(|e| Error::Counterexample(e.to_string()))?;
    let expected_n = [2 * m - 5, 2, 2];
    if report.v != 2 * m
        || !report.is_symmetric()
        || report.k != 3
        || report.lambda != [0, 1, 2]
        || report.n != expected_n
    {
        return Err(Error::Counterexample(format!("doubled({m}) gives {}", report.parameters)));
    }
    Ok((s, report))
}

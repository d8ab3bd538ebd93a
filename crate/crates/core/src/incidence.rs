//! Point-block incidence structures and their counting identities.

use crate::binmat::BinaryMatrix;
use crate::error::{Error, Result};
use serde::Serialize;

/// Rows are points, columns are blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceStructure {
    matrix: BinaryMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignParameters {
    /// 2 when every pair of points is on equally many blocks, else 1.
    pub t: u8,
    pub v: usize,
    pub b: usize,
    pub r: usize,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<usize>,
    /// `r - lambda`, present when `lambda` is.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    pub symmetric: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    /// `v r = b k`
    pub vr_bk: bool,
    /// `r (k - 1) = lambda (v - 1)`, when lambda is defined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_k_lambda: Option<bool>,
}

impl IncidenceStructure {
    pub fn new(matrix: BinaryMatrix) -> Self {
        IncidenceStructure { matrix }
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> BinaryMatrix {
        self.matrix
    }

    pub fn v(&self) -> usize {
        self.matrix.rows()
    }

    pub fn b(&self) -> usize {
        self.matrix.cols()
    }

    /// Common point degree, if all points have the same degree.
    pub fn regularity(&self) -> Option<usize> {
        all_equal(self.matrix.row_sums())
    }

    /// Common block size, if all blocks have the same size.
    pub fn uniformity(&self) -> Option<usize> {
        all_equal(self.matrix.col_sums())
    }

    /// Number of blocks on every `t` points, if it does not depend on the points.
    /// A single point has no pairs, so 2-balance is undefined for `v = 1`.
    pub fn balance(&self, t: u8) -> Result<Option<usize>> {
        match t {
            1 => Ok(self.regularity()),
            2 => {
                let v = self.v();
                let mut common = None;
                for p in 0..v {
                    for q in p + 1..v {
                        let c = self.matrix.row_dot_unchecked(p, q);
                        match common {
                            None => common = Some(c),
                            Some(x) if x != c => return Ok(None),
                            _ => {}
                        }
                    }
                }
                Ok(common)
            }
            _ => Err(Error::Unsupported(format!("balance level t={t}; only t=1 and t=2 are supported"))),
        }
    }

    pub fn derive_parameters(&self) -> Result<(DesignParameters, IdentityReport)> {
        let sums = self.matrix.row_sums();
        let r = self
            .regularity()
            .ok_or_else(|| Error::Structure { property: "regular", detail: first_deviation("point", &sums) })?;
        let k = self.uniformity().ok_or_else(|| Error::Structure {
            property: "uniform",
            detail: first_deviation("block", &self.matrix.col_sums()),
        })?;
        let (v, b) = (self.v(), self.b());
        let lambda = self.balance(2)?;

        let identities = IdentityReport {
            vr_bk: v * r == b * k,
            r_k_lambda: lambda.map(|l| r * k.saturating_sub(1) == l * (v - 1)),
        };
        if !identities.vr_bk {
            return Err(Error::ArithmeticInconsistency(format!("v r = {} but b k = {}", v * r, b * k)));
        }
        if identities.r_k_lambda == Some(false) {
            let l = lambda.expect("identity present only with lambda");
            return Err(Error::ArithmeticInconsistency(format!(
                "r (k - 1) = {} but lambda (v - 1) = {}",
                r * k.saturating_sub(1),
                l * (v - 1)
            )));
        }
        let params = DesignParameters {
            t: if lambda.is_some() { 2 } else { 1 },
            v,
            b,
            r,
            k,
            lambda,
            order: lambda.map(|l| r - l),
            symmetric: v == b,
        };
        Ok((params, identities))
    }
}

impl From<BinaryMatrix> for IncidenceStructure {
    fn from(matrix: BinaryMatrix) -> Self {
        IncidenceStructure::new(matrix)
    }
}

fn all_equal(values: Vec<usize>) -> Option<usize> {
    let first = *values.first()?;
    values.iter().all(|&x| x == first).then_some(first)
}

fn first_deviation(what: &str, degrees: &[usize]) -> String {
    let first = degrees[0];
    let (idx, d) = degrees.iter().enumerate().find(|(_, &d)| d != first).map(|(i, &d)| (i, d)).unwrap_or((0, first));
    format!("{what} {} has degree {d} but {what} 1 has degree {first}", idx + 1)
}

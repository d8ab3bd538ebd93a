//! Search progress saved as JSON: which work items are finished and what they found.

use super::PruneRule;
use crate::binmat::BinaryMatrix;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub schema_version: u32,
    pub k: usize,
    pub frontier: usize,
    /// Indices of finished work items, ascending.
    pub completed: Vec<usize>,
    /// Solutions found in finished items, one `0`/`1` string per row.
    pub solutions: Vec<Vec<String>>,
    /// Decisions spent inside finished items.
    pub nodes_visited: u64,
    pub prunes_by_rule: BTreeMap<PruneRule, u64>,
}

impl Checkpoint {
    pub fn new(k: usize, frontier: usize) -> Self {
        Checkpoint {
            schema_version: 1,
            k,
            frontier,
            completed: Vec::new(),
            solutions: Vec::new(),
            nodes_visited: 0,
            prunes_by_rule: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }

    /// Writes through a temporary file so an interrupted write leaves the old file.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub(super) fn check_compatible(&self, k: usize, frontier: usize) -> Result<()> {
        if self.k != k || self.frontier != frontier {
            return Err(Error::Parameter(format!(
                "checkpoint is for k = {} with {} work items, this search has k = {k} with {frontier}",
                self.k, self.frontier
            )));
        }
        if let Some(&i) = self.completed.iter().find(|&&i| i >= frontier) {
            return Err(Error::Parameter(format!("checkpoint lists work item {i} of {frontier}")));
        }
        Ok(())
    }

    pub(super) fn record(&mut self, item: usize, found: &[Vec<u128>], nodes: u64, prunes: &[u64; 7], v: usize) {
        if let Err(pos) = self.completed.binary_search(&item) {
            self.completed.insert(pos, item);
        }
        for rows in found {
            self.solutions
                .push(rows.iter().map(|r| (0..v).map(|j| if r >> j & 1 == 1 { '1' } else { '0' }).collect()).collect());
        }
        self.nodes_visited += nodes;
        for rule in PruneRule::ALL {
            *self.prunes_by_rule.entry(rule).or_insert(0) += prunes[rule.index()];
        }
    }

    pub fn solution_matrices(&self) -> Result<Vec<BinaryMatrix>> {
        self.solutions
            .iter()
            .map(|rows| {
                let bytes: Vec<Vec<u8>> = rows
                    .iter()
                    .map(|r| {
                        r.bytes()
                            .map(|b| match b {
                                b'0' => Ok(0),
                                b'1' => Ok(1),
                                _ => Err(Error::Parse { line: 0, message: format!("bad checkpoint row {r:?}") }),
                            })
                            .collect()
                    })
                    .collect::<Result<_>>()?;
                BinaryMatrix::from_rows(&bytes)
            })
            .collect()
    }
}

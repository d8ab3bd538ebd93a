//! Exhaustive search for symmetric biplane matrices in canonical form with all
//! ones on the diagonal.
//!
//! The first `k` rows and columns are fixed to the canonical head, the whole
//! diagonal is fixed to 1, and the remaining entries above the diagonal are
//! decided row by row and mirrored below it. Rows are `u128` bitsets, so
//! `v <= 128` (`k <= 16`).
//!
//! The rows of the first free row's completions form a work queue that the
//! worker threads drain. Each item is searched to the end independently.

mod checkpoint;

pub use checkpoint::Checkpoint;

use crate::binmat::BinaryMatrix;
use crate::biplane::{canonical_head, points_for_block_size, verify_biplane};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

/// Pruning rules. Any one of them can be switched off without changing the
/// solutions, since every leaf is checked in full.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneRule {
    /// A row already has more than `k` ones.
    PartialRowSum,
    /// A finished row does not have `k` ones.
    CompletedRowSum,
    /// Two rows already share more than two columns.
    PartialDot,
    /// Two finished rows do not share exactly two columns.
    CompletedDot,
    /// A row can no longer reach `k` ones.
    ColumnFeasibility,
    /// A finished row can no longer share two columns with some other row.
    DotFeasibility,
    /// A row of the core `k+1..=3k-6` has more than 3 ones there, or ends with
    /// a different count.
    CoreSum,
}

impl PruneRule {
    pub const ALL: [PruneRule; 7] = [
        PruneRule::PartialRowSum,
        PruneRule::CompletedRowSum,
        PruneRule::PartialDot,
        PruneRule::CompletedDot,
        PruneRule::ColumnFeasibility,
        PruneRule::DotFeasibility,
        PruneRule::CoreSum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PruneRule::PartialRowSum => "partial_row_sum",
            PruneRule::CompletedRowSum => "completed_row_sum",
            PruneRule::PartialDot => "partial_dot",
            PruneRule::CompletedDot => "completed_dot",
            PruneRule::ColumnFeasibility => "column_feasibility",
            PruneRule::DotFeasibility => "dot_feasibility",
            PruneRule::CoreSum => "core_sum",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub k: usize,
    pub max_solutions: usize,
    /// Stop after this many decisions; the outcome is then not exhausted.
    pub node_limit: Option<u64>,
    pub threads: usize,
    pub disabled: Vec<PruneRule>,
    /// Progress file; finished work items recorded there are skipped on restart.
    pub checkpoint: Option<PathBuf>,
}

impl SearchConfig {
    pub fn new(k: usize) -> Self {
        SearchConfig {
            k,
            max_solutions: usize::MAX,
            node_limit: None,
            threads: 1,
            disabled: Vec::new(),
            checkpoint: None,
        }
    }

    fn enabled(&self, rule: PruneRule) -> bool {
        !self.disabled.contains(&rule)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub k: usize,
    /// Sorted.
    pub solutions: Vec<BinaryMatrix>,
    pub exhausted: bool,
    pub nodes_visited: u64,
    pub prunes_by_rule: BTreeMap<PruneRule, u64>,
    /// Number of work items the first free row produced.
    pub frontier: usize,
}

#[derive(Serialize)]
pub struct OutcomeSummary {
    pub k: usize,
    pub v: usize,
    pub solutions: usize,
    pub exhausted: bool,
    pub nodes_visited: u64,
    pub prunes_by_rule: BTreeMap<PruneRule, u64>,
    pub frontier: usize,
}

impl SearchOutcome {
    pub fn summary(&self) -> OutcomeSummary {
        OutcomeSummary {
            k: self.k,
            v: points_for_block_size(self.k),
            solutions: self.solutions.len(),
            exhausted: self.exhausted,
            nodes_visited: self.nodes_visited,
            prunes_by_rule: self.prunes_by_rule.clone(),
            frontier: self.frontier,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Stats {
    nodes: u64,
    prunes: [u64; 7],
}

impl Stats {
    fn merge(&mut self, other: &Stats) {
        self.nodes += other.nodes;
        for (a, b) in self.prunes.iter_mut().zip(&other.prunes) {
            *a += b;
        }
    }
}

struct Shared {
    stop: AtomicBool,
    nodes: AtomicU64,
    node_limit: Option<u64>,
    found: AtomicUsize,
    max_solutions: usize,
}

/// Fixed data for one `k`.
struct Problem {
    k: usize,
    v: usize,
    enabled: [bool; 7],
    core: u128,
    start: Vec<u128>,
}

impl Problem {
    fn new(cfg: &SearchConfig) -> Result<Self> {
        if cfg.k < 3 {
            return Err(Error::Parameter(format!("search needs k >= 3, got {}", cfg.k)));
        }
        let v = points_for_block_size(cfg.k);
        if v > 128 {
            return Err(Error::Unsupported(format!("k = {} gives {v} points; at most 128 are supported", cfg.k)));
        }
        if cfg.max_solutions == 0 || cfg.threads == 0 {
            return Err(Error::Parameter("max_solutions and threads must be at least 1".into()));
        }
        let k = cfg.k;
        let head = canonical_head(k)?;
        let mut start = vec![0u128; v];
        for i in 0..k {
            for j in head.ones_in_row(i) {
                start[i] |= 1 << j;
                start[j] |= 1 << i;
            }
        }
        for (i, row) in start.iter_mut().enumerate() {
            *row |= 1 << i;
        }
        let core = if k >= 6 { (k + 1..3 * k - 5).fold(0u128, |m, c| m | 1 << c) } else { 0 };
        let mut enabled = [true; 7];
        for r in PruneRule::ALL {
            enabled[r.index()] = cfg.enabled(r);
        }
        Ok(Problem { k, v, enabled, core, start })
    }

    fn to_matrix(&self, rows: &[u128]) -> BinaryMatrix {
        BinaryMatrix::from_fn(self.v, self.v, |i, j| rows[i] >> j & 1 == 1).expect("v >= 4")
    }
}

/// Columns strictly above `i`.
fn above(i: usize) -> u128 {
    if i >= 127 {
        0
    } else {
        !0u128 << (i + 1)
    }
}

fn dot(a: u128, b: u128) -> u32 {
    (a & b).count_ones()
}

enum Mode {
    /// Collect row `k` completions as work items.
    Frontier(Vec<Vec<u128>>),
    /// Search to the leaves.
    Solve(Vec<Vec<u128>>),
}

struct Solver<'a> {
    p: &'a Problem,
    shared: &'a Shared,
    rows: Vec<u128>,
    stats: Stats,
    mode: Mode,
    /// Set when the search stopped early inside this subtree.
    cut: bool,
}

impl<'a> Solver<'a> {
    fn on(&self, r: PruneRule) -> bool {
        self.p.enabled[r.index()]
    }

    fn prune(&mut self, r: PruneRule) -> bool {
        self.stats.prunes[r.index()] += 1;
        false
    }

    fn halted(&mut self) -> bool {
        if self.shared.stop.load(Ordering::Relaxed) {
            self.cut = true;
            return true;
        }
        false
    }

    fn enter_row(&mut self, i: usize) {
        if i == self.p.v {
            self.leaf();
        } else {
            self.decide(i, i + 1);
        }
    }

    fn decide(&mut self, i: usize, j: usize) {
        if self.halted() {
            return;
        }
        let v = self.p.v;
        if j == v {
            if !self.row_finished(i) {
                return;
            }
            if let Mode::Frontier(items) = &mut self.mode {
                if i == self.p.k {
                    items.push(self.rows.clone());
                    return;
                }
            }
            self.enter_row(i + 1);
            return;
        }
        for value in [true, false] {
            let total = self.shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if self.shared.node_limit.is_some_and(|limit| total > limit) {
                self.shared.stop.store(true, Ordering::Relaxed);
                self.cut = true;
                return;
            }
            self.stats.nodes += 1;
            let (ri, rj) = (self.rows[i], self.rows[j]);
            if value {
                self.rows[i] |= 1 << j;
                self.rows[j] |= 1 << i;
            }
            let ok = if value { self.after_one(i, j) } else { self.after_zero(i, j) };
            if ok {
                self.decide(i, j + 1);
            }
            self.rows[i] = ri;
            self.rows[j] = rj;
            if self.cut {
                return;
            }
        }
    }

    fn after_one(&mut self, i: usize, j: usize) -> bool {
        let k = self.p.k as u32;
        let (ri, rj) = (self.rows[i], self.rows[j]);
        if self.on(PruneRule::PartialRowSum) && (ri.count_ones() > k || rj.count_ones() > k) {
            return self.prune(PruneRule::PartialRowSum);
        }
        if self.on(PruneRule::PartialDot) {
            for (r, &row) in self.rows.iter().enumerate() {
                if (r != i && dot(ri, row) > 2) || (r != j && dot(rj, row) > 2) {
                    return self.prune(PruneRule::PartialDot);
                }
            }
        }
        let core = self.p.core;
        if self.on(PruneRule::CoreSum)
            && core >> i & 1 == 1
            && core >> j & 1 == 1
            && ((ri & core).count_ones() > 3 || (rj & core).count_ones() > 3)
        {
            return self.prune(PruneRule::CoreSum);
        }
        true
    }

    fn after_zero(&mut self, i: usize, j: usize) -> bool {
        let (k, v) = (self.p.k as u32, self.p.v);
        let (ri, rj) = (self.rows[i], self.rows[j]);
        if self.on(PruneRule::ColumnFeasibility) {
            // Row i still decides columns j+1.., row j everything above i but itself.
            let left_i = (v - 1 - j) as u32;
            let left_j = (v - i - 2) as u32;
            if ri.count_ones() + left_i < k || rj.count_ones() + left_j < k {
                return self.prune(PruneRule::ColumnFeasibility);
            }
        }
        if self.on(PruneRule::DotFeasibility) {
            let rest = above(j);
            if (0..i).any(|a| dot(self.rows[a], ri) + (self.rows[a] & rest).count_ones() < 2) {
                return self.prune(PruneRule::DotFeasibility);
            }
        }
        let core = self.p.core;
        if self.on(PruneRule::CoreSum)
            && core >> i & 1 == 1
            && (ri & core).count_ones() + (core & above(j)).count_ones() < 3
        {
            return self.prune(PruneRule::CoreSum);
        }
        true
    }

    /// Checks once rows `0..=i` are fully decided.
    fn row_finished(&mut self, i: usize) -> bool {
        let (k, v) = (self.p.k as u32, self.p.v);
        let ri = self.rows[i];
        if self.on(PruneRule::CompletedRowSum) && ri.count_ones() != k {
            return self.prune(PruneRule::CompletedRowSum);
        }
        if self.on(PruneRule::CompletedDot) && (0..i).any(|a| dot(self.rows[a], ri) != 2) {
            return self.prune(PruneRule::CompletedDot);
        }
        if self.on(PruneRule::ColumnFeasibility) {
            let left = v.saturating_sub(i + 2) as u32;
            if (i + 1..v).any(|r| self.rows[r].count_ones() + left < k) {
                return self.prune(PruneRule::ColumnFeasibility);
            }
        }
        if self.on(PruneRule::DotFeasibility) {
            let rest = above(i);
            for a in 0..=i {
                let ra = self.rows[a];
                for r in i + 1..v {
                    if dot(ra, self.rows[r]) + (ra & rest & !(1u128 << r)).count_ones() < 2 {
                        return self.prune(PruneRule::DotFeasibility);
                    }
                }
            }
        }
        let core = self.p.core;
        if self.on(PruneRule::CoreSum) && core != 0 {
            if core >> i & 1 == 1 && (ri & core).count_ones() != 3 {
                return self.prune(PruneRule::CoreSum);
            }
            let open = core & above(i);
            for r in i + 1..v {
                if core >> r & 1 == 1 && (self.rows[r] & core).count_ones() + (open & !(1u128 << r)).count_ones() < 3 {
                    return self.prune(PruneRule::CoreSum);
                }
            }
        }
        true
    }

    fn leaf(&mut self) {
        let (k, v) = (self.p.k as u32, self.p.v);
        let rows = &self.rows;
        let complete =
            rows.iter().all(|r| r.count_ones() == k) && (0..v).all(|a| (a + 1..v).all(|b| dot(rows[a], rows[b]) == 2));
        if !complete {
            return;
        }
        if let Mode::Solve(found) = &mut self.mode {
            found.push(rows.clone());
        }
        let n = self.shared.found.fetch_add(1, Ordering::Relaxed) + 1;
        if n >= self.shared.max_solutions {
            self.shared.stop.store(true, Ordering::Relaxed);
        }
    }
}

/// Re-checks a solution through the public verifiers, independent of the
/// search bookkeeping.
fn certify(m: &BinaryMatrix) -> Result<()> {
    let cert = verify_biplane(m).map_err(|e| Error::SearchBug(format!("emitted matrix fails verification: {e}")))?;
    if !(cert.symmetric && cert.canonical && cert.full_trace) {
        return Err(Error::SearchBug(format!("emitted matrix has certificate {cert:?}")));
    }
    Ok(())
}

/// Searches for every symmetric canonical biplane matrix with full trace and
/// block size `cfg.k`.
pub fn search_symmetric_canonical(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let problem = Problem::new(cfg)?;
    let shared = Shared {
        stop: AtomicBool::new(false),
        nodes: AtomicU64::new(0),
        node_limit: cfg.node_limit,
        found: AtomicUsize::new(0),
        max_solutions: cfg.max_solutions,
    };

    let mut checkpoint = match &cfg.checkpoint {
        Some(path) if path.exists() => Some(Checkpoint::load(path)?),
        _ => None,
    };

    // Rows 0..k are complete from the start.
    let mut root = Solver {
        p: &problem,
        shared: &shared,
        rows: problem.start.clone(),
        stats: Stats::default(),
        mode: Mode::Frontier(Vec::new()),
        cut: false,
    };
    if root.row_finished(problem.k - 1) {
        root.enter_row(problem.k);
    }
    let frontier_complete = !root.cut;
    let mut stats = root.stats;
    let items = match root.mode {
        Mode::Frontier(items) => items,
        Mode::Solve(_) => unreachable!(),
    };

    let mut solutions: Vec<BinaryMatrix> = Vec::new();
    let mut done = vec![false; items.len()];
    if let Some(c) = &checkpoint {
        c.check_compatible(cfg.k, items.len())?;
        for &i in &c.completed {
            done[i] = true;
        }
        solutions.extend(c.solution_matrices()?);
        stats.nodes += c.nodes_visited;
        for (rule, count) in &c.prunes_by_rule {
            stats.prunes[rule.index()] += count;
        }
        shared.found.store(solutions.len(), Ordering::Relaxed);
        if solutions.len() >= cfg.max_solutions {
            shared.stop.store(true, Ordering::Relaxed);
        }
    }
    let base = stats;
    if frontier_complete && checkpoint.is_none() {
        if let Some(path) = &cfg.checkpoint {
            let c = Checkpoint::new(cfg.k, items.len());
            c.save(path)?;
            checkpoint = Some(c);
        }
    }

    let next = AtomicUsize::new(0);
    let results: Mutex<(Stats, Vec<Vec<u128>>)> = Mutex::new((Stats::default(), Vec::new()));
    let progress = Mutex::new((checkpoint, done));
    let failure: Mutex<Option<Error>> = Mutex::new(None);
    let threads = cfg.threads.min(items.len().max(1));

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= items.len() || shared.stop.load(Ordering::Relaxed) {
                    break;
                }
                if progress.lock().expect("no poisoned lock").1[idx] {
                    continue;
                }
                let mut solver = Solver {
                    p: &problem,
                    shared: &shared,
                    rows: items[idx].clone(),
                    stats: Stats::default(),
                    mode: Mode::Solve(Vec::new()),
                    cut: false,
                };
                solver.enter_row(problem.k + 1);
                let found = match solver.mode {
                    Mode::Solve(found) => found,
                    Mode::Frontier(_) => unreachable!(),
                };
                {
                    let mut r = results.lock().expect("no poisoned lock");
                    r.0.merge(&solver.stats);
                    r.1.extend(found.iter().cloned());
                }
                if !solver.cut {
                    let mut g = progress.lock().expect("no poisoned lock");
                    g.1[idx] = true;
                    if let (Some(c), Some(path)) = (g.0.as_mut(), cfg.checkpoint.as_ref()) {
                        c.record(idx, &found, solver.stats.nodes, &solver.stats.prunes, problem.v);
                        if let Err(e) = c.save(path) {
                            failure.lock().expect("no poisoned lock").get_or_insert(e);
                            shared.stop.store(true, Ordering::Relaxed);
                        }
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().expect("no poisoned lock") {
        return Err(e);
    }

    let (_, done) = progress.into_inner().expect("no poisoned lock");
    let (worker_stats, found_rows) = results.into_inner().expect("no poisoned lock");
    let mut stats = base;
    stats.merge(&worker_stats);
    solutions.extend(found_rows.iter().map(|r| problem.to_matrix(r)));
    for m in &solutions {
        certify(m)?;
    }
    solutions.sort();
    solutions.dedup();
    let all_done = done.iter().all(|&d| d);
    solutions.truncate(cfg.max_solutions);

    Ok(SearchOutcome {
        k: cfg.k,
        solutions,
        exhausted: frontier_complete && all_done,
        nodes_visited: stats.nodes,
        prunes_by_rule: PruneRule::ALL.into_iter().map(|r| (r, stats.prunes[r.index()])).collect(),
        frontier: items.len(),
    })
}

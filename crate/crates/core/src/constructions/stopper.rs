//! Backtracking search for stopper arrangements.
//!
//! A stopper is a phaseless GHZ state whose `d x n` symbol grid has every
//! column a permutation of `{0..d-1}` and no constant row, so it is
//! orthogonal to the diagonal Fourier states. To witness a bipartition
//! `S | S-bar`, some stopper must own a row that is constant on `S` and
//! constant on `S-bar` with two different values — after merging, that row
//! is the product term sitting inside the diagonal d (x) d subspace that the
//! discrimination argument needs. A row with exactly two distinct values
//! covers exactly the bipartition induced by its value blocks, so the
//! search tracks covered bipartitions incrementally and prunes branches
//! that can no longer cover the rest.
//!
//! The search is depth-first over row slots, rows ordered lexicographically
//! and kept sorted within each grid, so the first solution found is
//! independent of everything but the inputs.

use crate::error::Error;
use crate::group::{enumerate_bipartitions, Bipartition};
use crate::states::{GhzState, PhaseFraction, ProductTerm};
use crate::Result;

/// Default node budget for the search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// A `d x n` symbol grid defining one stopper state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopperArrangement {
    d: usize,
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl StopperArrangement {
    /// Validate and wrap a grid: columns are permutations, rows distinct and
    /// non-constant.
    pub fn new(d: usize, n: usize, rows: Vec<Vec<u8>>) -> Result<Self> {
        if rows.len() != d {
            return Err(Error::InvalidState(format!(
                "expected {d} rows, got {}",
                rows.len()
            )));
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::InvalidState("row length mismatch".into()));
            }
            if r.iter().any(|&s| s as usize >= d) {
                return Err(Error::InvalidIndex("symbol out of range".into()));
            }
            if r.iter().all(|&s| s == r[0]) {
                return Err(Error::InvalidState(format!(
                    "constant row {r:?} overlaps the diagonal states"
                )));
            }
        }
        for col in 0..n {
            let mut seen = vec![false; d];
            for r in &rows {
                let s = r[col] as usize;
                if seen[s] {
                    return Err(Error::InvalidState(format!(
                        "column {col} repeats symbol {s}"
                    )));
                }
                seen[s] = true;
            }
        }
        let mut sorted = rows;
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidState("duplicate rows".into()));
        }
        Ok(StopperArrangement { d, n, rows: sorted })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    /// The stopper as a phaseless GHZ state.
    pub fn to_state(&self) -> Result<GhzState> {
        let terms = self
            .rows
            .iter()
            .map(|r| ProductTerm {
                symbols: r.clone(),
                phase: PhaseFraction::one(),
            })
            .collect();
        GhzState::new(self.n, self.d, terms)
    }

    /// Bipartitions covered by this grid: one per two-valued row.
    pub fn covered_bipartitions(&self) -> Vec<Bipartition> {
        self.rows
            .iter()
            .filter_map(|r| row_coverage(self.n, r))
            .collect()
    }
}

/// The bipartition covered by a row, if it has exactly two distinct values.
fn row_coverage(n: usize, row: &[u8]) -> Option<Bipartition> {
    let first = row[0];
    let mut other: Option<u8> = None;
    let mut mask = 0u64;
    for (p, &s) in row.iter().enumerate() {
        if s != first {
            match other {
                None => other = Some(s),
                Some(o) if o == s => {}
                Some(_) => return None, // three or more values
            }
            mask |= 1 << (n - 1 - p);
        }
    }
    other?;
    Bipartition::from_mask(n as u32, mask).ok()
}

/// Coverage report for a set of grids against all bipartitions.
#[derive(Debug, Clone)]
pub struct ArrangementReport {
    /// For each bipartition: the (grid, row) that covers it, if any.
    pub coverage: Vec<(Bipartition, Option<(usize, usize)>)>,
}

impl ArrangementReport {
    pub fn fully_covered(&self) -> bool {
        self.coverage.iter().all(|(_, c)| c.is_some())
    }

    pub fn uncovered(&self) -> Vec<Bipartition> {
        self.coverage
            .iter()
            .filter(|(_, c)| c.is_none())
            .map(|(b, _)| *b)
            .collect()
    }
}

/// Check a family of grids: per-grid invariants, pairwise-disjoint rows
/// (orthogonality between stoppers), and full bipartition coverage.
pub fn validate_arrangement(
    d: usize,
    n: usize,
    grids: &[StopperArrangement],
) -> Result<ArrangementReport> {
    for g in grids {
        if g.d != d || g.n != n {
            return Err(Error::ShapeError("grid dimensions mismatch".into()));
        }
    }
    let mut all_rows = std::collections::HashSet::new();
    for g in grids {
        for r in &g.rows {
            if !all_rows.insert(r.clone()) {
                return Err(Error::InvalidState(format!(
                    "row {r:?} appears in two grids; the stoppers are not orthogonal"
                )));
            }
        }
    }
    let bipartitions = enumerate_bipartitions(n as u32)?;
    let coverage = bipartitions
        .into_iter()
        .map(|b| {
            let mut found = None;
            'outer: for (gi, g) in grids.iter().enumerate() {
                for (ri, r) in g.rows.iter().enumerate() {
                    if row_coverage(n, r) == Some(b) {
                        found = Some((gi, ri));
                        break 'outer;
                    }
                }
            }
            (b, found)
        })
        .collect();
    Ok(ArrangementReport { coverage })
}

struct SearchState {
    d: usize,
    n: usize,
    m: usize,
    budget: u64,
    explored: u64,
    /// column availability per grid: avail[g][col][symbol]
    avail: Vec<Vec<Vec<bool>>>,
    grids: Vec<Vec<Vec<u8>>>,
    used_rows: std::collections::HashSet<Vec<u8>>,
    covered: Vec<u32>, // cover multiplicity per bipartition index
    uncovered_count: usize,
    bip_index: std::collections::HashMap<u64, usize>,
}

impl SearchState {
    fn remaining_slots(&self) -> usize {
        self.m * self.d - self.grids.iter().map(Vec::len).sum::<usize>()
    }

    fn place(&mut self, g: usize, row: Vec<u8>) {
        for (col, &s) in row.iter().enumerate() {
            self.avail[g][col][s as usize] = false;
        }
        if let Some(b) = row_coverage(self.n, &row) {
            let idx = self.bip_index[&b.mask()];
            if self.covered[idx] == 0 {
                self.uncovered_count -= 1;
            }
            self.covered[idx] += 1;
        }
        self.used_rows.insert(row.clone());
        self.grids[g].push(row);
    }

    fn unplace(&mut self, g: usize) {
        let row = self.grids[g].pop().expect("row was placed");
        for (col, &s) in row.iter().enumerate() {
            self.avail[g][col][s as usize] = true;
        }
        if let Some(b) = row_coverage(self.n, &row) {
            let idx = self.bip_index[&b.mask()];
            self.covered[idx] -= 1;
            if self.covered[idx] == 0 {
                self.uncovered_count += 1;
            }
        }
        self.used_rows.remove(&row);
    }

    /// DFS over row slots; fills grid `g` to `d` rows, then the next grid.
    fn search(&mut self, g: usize) -> std::result::Result<bool, ()> {
        if g == self.m {
            return Ok(self.uncovered_count == 0);
        }
        if self.grids[g].len() == self.d {
            return self.search(g + 1);
        }
        if self.uncovered_count > self.remaining_slots() {
            return Ok(false); // not enough slots left for the missing covers
        }
        let start = self.grids[g]
            .last()
            .map(|r| increment(r, self.d))
            .unwrap_or_else(|| Some(vec![0; self.n]));
        let mut candidate = match start {
            Some(c) => c,
            None => return Ok(false),
        };
        loop {
            self.explored += 1;
            if self.explored > self.budget {
                return Err(()); // budget exhausted
            }
            if self.admissible(g, &candidate) {
                self.place(g, candidate.clone());
                let found = self.search(g)?;
                if found {
                    return Ok(true);
                }
                self.unplace(g);
            }
            match increment(&candidate, self.d) {
                Some(next) => candidate = next,
                None => return Ok(false),
            }
        }
    }

    fn admissible(&self, g: usize, row: &[u8]) -> bool {
        if row.iter().all(|&s| s == row[0]) {
            return false;
        }
        if row
            .iter()
            .enumerate()
            .any(|(col, &s)| !self.avail[g][col][s as usize])
        {
            return false;
        }
        !self.used_rows.contains(row)
    }
}

/// Lexicographic successor of a row over symbols `0..d`.
fn increment(row: &[u8], d: usize) -> Option<Vec<u8>> {
    let mut next = row.to_vec();
    for i in (0..next.len()).rev() {
        if (next[i] as usize) < d - 1 {
            next[i] += 1;
            for item in next.iter_mut().skip(i + 1) {
                *item = 0;
            }
            return Some(next);
        }
    }
    None
}

/// Search for `m` mutually orthogonal stopper grids that jointly cover
/// every bipartition. Deterministic: the lexicographically first family is
/// returned. [`Error::NoArrangementFound`] reports the node count and
/// whether the space was exhausted (a nonexistence proof) or the budget ran
/// out.
pub fn stopper_search(
    d: usize,
    n: usize,
    m: usize,
    budget: u64,
) -> Result<Vec<StopperArrangement>> {
    if budget == 0 {
        return Err(Error::BudgetExceeded("search budget must be positive".into()));
    }
    if d < 2 || n < 2 || m < 1 {
        return Err(Error::InvalidArity(format!(
            "need d >= 2, n >= 2, m >= 1, got d = {d}, n = {n}, m = {m}"
        )));
    }
    let bipartitions = enumerate_bipartitions(n as u32)?;
    let bip_index = bipartitions
        .iter()
        .enumerate()
        .map(|(i, b)| (b.mask(), i))
        .collect();
    let mut state = SearchState {
        d,
        n,
        m,
        budget,
        explored: 0,
        avail: vec![vec![vec![true; d]; n]; m],
        grids: vec![Vec::new(); m],
        used_rows: Default::default(),
        uncovered_count: bipartitions.len(),
        covered: vec![0; bipartitions.len()],
        bip_index,
    };
    match state.search(0) {
        Ok(true) => state
            .grids
            .iter()
            .map(|rows| StopperArrangement::new(d, n, rows.clone()))
            .collect(),
        Ok(false) => Err(Error::NoArrangementFound {
            explored: state.explored,
            exhausted: true,
        }),
        Err(()) => Err(Error::NoArrangementFound {
            explored: state.explored,
            exhausted: false,
        }),
    }
}

//! Exhaustive sweeps over loss subsets: tolerance tables, maximal tolerable
//! loss, and minimal critical sets.
//!
//! Every sweep enumerates subsets in lexicographic order and refuses to run
//! past an explicit evaluation budget.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Mode};
use crate::graph::{Graph, VertexSet};
use crate::loss::{violation_report, BoundMode, LossSet};
use crate::quad::Quad;

pub const DEFAULT_BUDGET: u128 = 1_000_000;

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `k`-subsets of `items`, lexicographic in position order.
pub fn combinations(items: &[usize], k: usize) -> Vec<VertexSet> {
    let m = items.len();
    if k > m {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(m, k) as usize);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..k).rev().find(|&p| idx[p] != p + m - k) else {
            break;
        };
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

fn check_budget(count: u128, budget: u128) -> Result<()> {
    if count > budget {
        Err(Error::BudgetExceeded { count, budget })
    } else {
        Ok(())
    }
}

/// What a single loss set leaves behind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LossOutcome {
    pub loss: VertexSet,
    pub best_expectation: Option<Quad>,
    pub violates_full: bool,
    pub violates_induced: bool,
}

impl LossOutcome {
    pub fn violates(&self, bound: BoundMode) -> bool {
        match bound {
            BoundMode::Full => self.violates_full,
            BoundMode::Induced => self.violates_induced,
        }
    }
}

pub fn evaluate(g: &Graph, loss: &VertexSet) -> Result<LossOutcome> {
    let report = violation_report(g, &LossSet::new(g, loss.clone())?)?;
    Ok(LossOutcome {
        loss: loss.clone(),
        best_expectation: report.best_expectation().cloned(),
        violates_full: report.any_violation(BoundMode::Full),
        violates_induced: report.any_violation(BoundMode::Induced),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundTally {
    /// Subsets leaving some root in violation.
    pub violating: u64,
    pub first_violating: Option<VertexSet>,
    pub first_failing: Option<VertexSet>,
}

/// One loss size of a tolerance table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeRow {
    pub size: usize,
    pub subsets: u64,
    pub full: BoundTally,
    pub induced: BoundTally,
    /// Largest best-root expectation over the subsets.
    pub max_expectation: Option<Quad>,
    /// Smallest best-root expectation over the subsets.
    pub min_expectation: Option<Quad>,
}

impl SizeRow {
    pub fn tally(&self, bound: BoundMode) -> &BoundTally {
        match bound {
            BoundMode::Full => &self.full,
            BoundMode::Induced => &self.induced,
        }
    }

    /// Some subset of this size leaves a violation.
    pub fn best_case(&self, bound: BoundMode) -> bool {
        self.tally(bound).violating > 0
    }

    /// Every subset of this size leaves a violation.
    pub fn worst_case(&self, bound: BoundMode) -> bool {
        self.tally(bound).violating == self.subsets
    }
}

fn summarize(size: usize, outcomes: &[LossOutcome]) -> SizeRow {
    let mut row = SizeRow {
        size,
        subsets: outcomes.len() as u64,
        full: BoundTally::default(),
        induced: BoundTally::default(),
        max_expectation: None,
        min_expectation: None,
    };
    for o in outcomes {
        for (tally, hit) in [(&mut row.full, o.violates_full), (&mut row.induced, o.violates_induced)] {
            if hit {
                tally.violating += 1;
                tally.first_violating.get_or_insert_with(|| o.loss.clone());
            } else {
                tally.first_failing.get_or_insert_with(|| o.loss.clone());
            }
        }
        let v = o.best_expectation.clone().unwrap_or_default();
        if row.max_expectation.as_ref().is_none_or(|m| v > *m) {
            row.max_expectation = Some(v.clone());
        }
        if row.min_expectation.as_ref().is_none_or(|m| v < *m) {
            row.min_expectation = Some(v);
        }
    }
    row
}

/// Largest loss size considered for `m` candidates on an `n`-vertex graph.
fn max_size(n: usize, m: usize) -> usize {
    m.min(n - 1)
}

/// One row per loss size `0..=max` over subsets of `candidates`.
pub fn tolerance_table(
    g: &Graph,
    candidates: &VertexSet,
    max: Option<usize>,
    budget: u128,
    mode: Mode,
) -> Result<Vec<SizeRow>> {
    if let Some(m) = candidates.last() {
        if m >= g.n() {
            return Err(Error::IndexOutOfRange { index: m, n: g.n() });
        }
    }
    let items = candidates.to_vec();
    let top = max_size(g.n(), items.len()).min(max.unwrap_or(usize::MAX));
    let total: u128 = (0..=top).map(|k| binomial(items.len(), k)).sum();
    check_budget(total, budget)?;
    (0..=top)
        .map(|k| {
            let subsets = combinations(&items, k);
            let outcomes = exec::try_map(mode, &subsets, |s| evaluate(g, s))?;
            Ok(summarize(k, &outcomes))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// Every subset of the size must leave a violation.
    WorstCase,
    /// Some subset of the size must leave a violation.
    BestCase,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Tolerance {
    pub k: usize,
    /// Best case: a size-`k` subset that keeps a violation.
    /// Worst case: a size-`k+1` subset that destroys it, when one exists.
    pub witness: Option<VertexSet>,
    pub rows: Vec<SizeRow>,
}

/// Largest `k` such that every (worst case) or some (best case) size-`k`
/// subset of `candidates` leaves a root violating `bound`.
pub fn max_tolerable_loss(
    g: &Graph,
    candidates: &VertexSet,
    semantics: Semantics,
    bound: BoundMode,
    budget: u128,
    mode: Mode,
) -> Result<Tolerance> {
    let rows = tolerance_table(g, candidates, None, budget, mode)?;
    Ok(tolerance_from_rows(rows, semantics, bound))
}

/// Reads the tolerance off an already computed table whose rows start at size 0.
pub fn tolerance_from_rows(rows: Vec<SizeRow>, semantics: Semantics, bound: BoundMode) -> Tolerance {
    let holds = |row: &SizeRow| match semantics {
        Semantics::WorstCase => row.worst_case(bound),
        Semantics::BestCase => row.best_case(bound),
    };
    let k = rows.iter().filter(|r| holds(r)).map(|r| r.size).max().unwrap_or(0);
    let witness = match semantics {
        Semantics::BestCase => rows.get(k).and_then(|r| r.tally(bound).first_violating.clone()),
        Semantics::WorstCase => rows.get(k + 1).and_then(|r| r.tally(bound).first_failing.clone()),
    };
    Tolerance { k, witness, rows }
}

/// Inclusion-minimal loss sets of size `1..=max_size` after which no
/// surviving root violates `bound`.
pub fn critical_sets(g: &Graph, max_size: usize, bound: BoundMode, budget: u128, mode: Mode) -> Result<Vec<VertexSet>> {
    let items: Vec<usize> = (0..g.n()).collect();
    let top = max_size.min(g.n() - 1);
    let total: u128 = (1..=top).map(|k| binomial(items.len(), k)).sum();
    check_budget(total, budget)?;
    let mut found: Vec<VertexSet> = Vec::new();
    for k in 1..=top {
        let subsets: Vec<VertexSet> = combinations(&items, k)
            .into_iter()
            .filter(|s| !found.iter().any(|c| c.is_subset(s)))
            .collect();
        let outcomes = exec::try_map(mode, &subsets, |s| evaluate(g, s))?;
        found.extend(outcomes.into_iter().filter(|o| !o.violates(bound)).map(|o| o.loss));
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
    }

    #[test]
    fn combinations_are_lexicographic_and_complete() {
        let c = combinations(&[1, 3, 5, 7], 2);
        let v: Vec<Vec<usize>> = c.iter().map(VertexSet::to_vec).collect();
        assert_eq!(
            v,
            vec![vec![1, 3], vec![1, 5], vec![1, 7], vec![3, 5], vec![3, 7], vec![5, 7]]
        );
        assert_eq!(combinations(&[1, 2], 0), vec![VertexSet::new()]);
        assert!(combinations(&[1], 2).is_empty());
        let mut sorted = c.clone();
        sorted.sort();
        assert_eq!(sorted, c);
    }

    #[test]
    fn budget_is_enforced() {
        let g = Graph::new(30, &(1..30).map(|i| (0, i)).collect::<Vec<_>>()).unwrap();
        let err = critical_sets(&g, 10, BoundMode::Induced, DEFAULT_BUDGET, Mode::Sequential).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}

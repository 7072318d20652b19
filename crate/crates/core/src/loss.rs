//! Closed-form Bell expectations after qubit loss.
//!
//! For a root `r` and loss set `L`, with `N̄(L)` the union of the closed
//! neighborhoods of the lost vertices:
//!
//! * `W = N(r) ∖ N̄(L)` and `T = V ∖ (N̄(L) ∪ N̄(r))`;
//! * the post-loss expectation is `√2·n_max + √2|W| + |T|` when `N̄(r) ∩ L = ∅`
//!   and `√2|W| + |T|` otherwise;
//! * it is the same number for the full-graph operator and for the operator of
//!   the induced graph `G[V∖L]`.
//!
//! The per-stabilizer rule behind it is [`stabilizer_expectation`]: a
//! stabilizer (possibly with some sites removed) has expectation 0 or 1 on the
//! lossy state depending only on adjacency to the lost and removed vertices.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bell::{anchored_stabilizer_sum, classical_bound, quantum_bound, WeightedStabilizerSum};
use crate::error::{Error, Result};
use crate::graph::{Graph, Relabeling, VertexSet};
use crate::quad::{format_rational, Quad, Rational};

/// Set of lost qubits; never the whole vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LossSet(VertexSet);

impl LossSet {
    pub fn new(g: &Graph, lost: VertexSet) -> Result<Self> {
        if let Some(m) = lost.last() {
            if m >= g.n() {
                return Err(Error::IndexOutOfRange { index: m, n: g.n() });
            }
        }
        if lost.len() == g.n() {
            return Err(Error::LossCoversAll);
        }
        Ok(LossSet(lost))
    }

    pub fn from_slice(g: &Graph, lost: &[usize]) -> Result<Self> {
        LossSet::new(g, lost.iter().copied().collect())
    }

    pub fn empty() -> Self {
        LossSet(VertexSet::new())
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    /// Surviving vertices.
    pub fn survivors(&self, g: &Graph) -> VertexSet {
        g.vertices().difference(&self.0)
    }

    /// `G[V∖L]` and its relabeling.
    pub fn induced_graph(&self, g: &Graph) -> (Graph, Relabeling) {
        g.induced_subgraph(&self.survivors(g))
            .expect("loss set is a proper subset")
    }
}

impl fmt::Display for LossSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WTSets {
    pub w: VertexSet,
    pub t: VertexSet,
    /// Whether the root's closed neighborhood meets the loss set.
    pub root_hit: bool,
}

fn require_root(g: &Graph, r: usize) -> Result<()> {
    g.neighborhood(r)?;
    if g.n_max() == 0 {
        return Err(Error::DegenerateGraph);
    }
    if !g.is_root(r) {
        return Err(Error::NotARoot(r));
    }
    Ok(())
}

pub fn wt_sets(g: &Graph, r: usize, loss: &LossSet) -> Result<WTSets> {
    require_root(g, r)?;
    let hit = g.closed_neighborhood_of_set(loss.vertices());
    let closed_r = g.closed_neighborhood(r)?;
    Ok(WTSets {
        w: g.neighborhood(r)?.difference(&hit),
        t: g.vertices().difference(&hit.union(&closed_r)),
        root_hit: !closed_r.is_disjoint(loss.vertices()),
    })
}

/// Post-loss expectation of the Bell operator at root `r`.
///
/// When `r` itself is lost the value still holds for the full-graph operator;
/// the induced-graph operator is then undefined.
pub fn expectation_after_loss(g: &Graph, r: usize, loss: &LossSet) -> Result<Quad> {
    let wt = wt_sets(g, r, loss)?;
    Ok(expectation_from_wt(g.n_max(), &wt))
}

fn expectation_from_wt(n_max: usize, wt: &WTSets) -> Quad {
    let root_term = if wt.root_hit { 0 } else { n_max as i64 };
    Quad::from_ints(wt.t.len() as i64, root_term + wt.w.len() as i64)
}

/// Which stabilizer a per-term expectation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilizerKind {
    /// `S_i` of the original graph.
    FullGraph,
    /// `S_i` of the induced graph `G[V∖L]`.
    InducedGraph,
}

/// General 0/1 rule: the stabilizer of `G[V∖removed]` at `i`, padded with
/// identity on `removed`, measured on the state with `lost` traced out.
///
/// It vanishes iff `i` is lost, or `i` is adjacent to a vertex of
/// `removed ∪ lost`; otherwise it is 1. `removed = ∅` gives the full-graph
/// stabilizer, `removed = lost` the induced-graph one, `lost = ∅` the pure
/// graph state.
pub fn stabilizer_expectation(g: &Graph, i: usize, removed: &VertexSet, lost: &VertexSet) -> Result<u8> {
    g.neighborhood(i)?;
    if removed.contains(i) {
        return Err(Error::LostIndex(i));
    }
    if lost.contains(i) {
        return Ok(0);
    }
    let nbrs = g.neighborhood(i)?;
    let touched = !nbrs.is_disjoint(removed) || !nbrs.is_disjoint(lost);
    Ok(u8::from(!touched))
}

/// Per-stabilizer expectation on the lossy state, for the full-graph or the
/// induced-graph stabilizer at vertex `i`.
pub fn stabilizer_expectation_after_loss(g: &Graph, i: usize, loss: &LossSet, which: StabilizerKind) -> Result<u8> {
    match which {
        StabilizerKind::FullGraph => stabilizer_expectation(g, i, &VertexSet::new(), loss.vertices()),
        StabilizerKind::InducedGraph => stabilizer_expectation(g, i, loss.vertices(), loss.vertices()),
    }
}

/// Expectation of the induced graph's stabilizer at `i` on the intact graph state.
pub fn induced_stabilizer_on_full_state(g: &Graph, i: usize, loss: &LossSet) -> Result<u8> {
    stabilizer_expectation(g, i, loss.vertices(), &VertexSet::new())
}

/// Re-derives the closed form by summing `coefficient × ⟨S_i⟩` over the
/// operator's terms.
pub fn expectation_by_terms(g: &Graph, sum: &WeightedStabilizerSum, loss: &LossSet) -> Result<Quad> {
    sum.terms().iter().try_fold(Quad::zero(), |acc, t| {
        let e = stabilizer_expectation_after_loss(g, t.vertex, loss, StabilizerKind::FullGraph)?;
        Ok(if e == 1 { acc + &t.coefficient } else { acc })
    })
}

/// Which classical bound a verdict is taken against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    Full,
    Induced,
}

/// Strict excess over the bound; an undefined bound never counts as violated.
pub fn violates(expectation: &Quad, bound: Option<&Quad>) -> bool {
    bound.is_some_and(|b| expectation > b)
}

/// Classical bound of a graph, `None` when the graph has no edges.
pub fn classical_bound_opt(g: &Graph) -> Option<Quad> {
    classical_bound(g).ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootRecord {
    pub root: usize,
    pub expectation: Quad,
    pub violates_full: bool,
    pub violates_induced: bool,
    pub margin_full: Quad,
    pub margin_induced: Option<Quad>,
    pub w_size: usize,
    pub t_size: usize,
    pub root_hit: bool,
    /// Whether the root is still of maximal degree in the induced graph.
    pub root_of_induced: bool,
    #[serde(skip)]
    pub wt: WTSets,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LossReport {
    pub graph: String,
    pub n: usize,
    pub n_max: usize,
    pub connected: bool,
    pub loss: LossSet,
    pub induced_n: usize,
    pub induced_n_max: usize,
    pub bound_full: Quad,
    pub bound_induced: Option<Quad>,
    pub quantum_bound: Quad,
    /// Some root of the graph is in the loss set; no violation is then possible.
    pub root_lost: bool,
    /// No root survives, so the full-graph operator has no admissible anchor.
    pub no_admissible_root: bool,
    pub records: Vec<RootRecord>,
}

impl LossReport {
    pub fn any_violation(&self, bound: BoundMode) -> bool {
        self.records.iter().any(|r| match bound {
            BoundMode::Full => r.violates_full,
            BoundMode::Induced => r.violates_induced,
        })
    }

    /// Largest expectation over the surviving roots.
    pub fn best_expectation(&self) -> Option<&Quad> {
        self.records.iter().map(|r| &r.expectation).max()
    }
}

/// Evaluates every surviving root of `g` against both bounds.
pub fn violation_report(g: &Graph, loss: &LossSet) -> Result<LossReport> {
    let bound_full = classical_bound(g)?;
    let (induced, map) = loss.induced_graph(g);
    let bound_induced = classical_bound_opt(&induced);
    let roots = g.roots();
    let mut records = Vec::new();
    for r in roots.iter().filter(|&r| !loss.contains(r)) {
        let wt = wt_sets(g, r, loss)?;
        let expectation = expectation_from_wt(g.n_max(), &wt);
        let root_of_induced = map.forward(r).is_some_and(|v| induced.is_root(v));
        records.push(RootRecord {
            root: r,
            violates_full: violates(&expectation, Some(&bound_full)),
            violates_induced: violates(&expectation, bound_induced.as_ref()),
            margin_full: &expectation - &bound_full,
            margin_induced: bound_induced.as_ref().map(|b| &expectation - b),
            w_size: wt.w.len(),
            t_size: wt.t.len(),
            root_hit: wt.root_hit,
            root_of_induced,
            expectation,
            wt,
        });
    }
    Ok(LossReport {
        graph: g.fingerprint(),
        n: g.n(),
        n_max: g.n_max(),
        connected: g.is_connected(),
        root_lost: !roots.is_disjoint(loss.vertices()),
        no_admissible_root: records.is_empty(),
        loss: loss.clone(),
        induced_n: induced.n(),
        induced_n_max: induced.n_max(),
        bound_full,
        bound_induced,
        quantum_bound: quantum_bound(g)?,
        records,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootLossEntry {
    pub root: usize,
    pub expectation: Quad,
    /// `β_C(G[V∖{r'}]) − expectation`, when the induced bound exists.
    pub margin_induced: Option<Quad>,
    /// `β_C(G) − expectation`.
    pub margin_full: Quad,
    /// `r` is the lost root; only the full-graph operator is defined.
    pub is_lost_root: bool,
    pub root_of_induced: bool,
    pub holds: bool,
}

/// Outcome of losing a single root `r'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootLossCheck {
    pub lost_root: usize,
    pub bound_full: Quad,
    pub bound_induced: Option<Quad>,
    /// `β_C(G[V∖{r'}]) < β_C(G)`.
    pub bounds_ordered: bool,
    pub entries: Vec<RootLossEntry>,
    pub holds: bool,
}

/// Checks, for every root `r` of `g`, that losing root `r_lost` leaves
/// `⟨I_r⟩ < β_C(G[V∖{r'}]) < β_C(G)` strictly. An edgeless induced graph has
/// no bound; then only `⟨I_r⟩ < β_C(G)` is checked.
pub fn root_loss_check(g: &Graph, r_lost: usize) -> Result<RootLossCheck> {
    require_root(g, r_lost)?;
    let loss = LossSet::from_slice(g, &[r_lost])?;
    let bound_full = classical_bound(g)?;
    let (induced, map) = loss.induced_graph(g);
    let bound_induced = classical_bound_opt(&induced);
    let bounds_ordered = bound_induced.as_ref().is_none_or(|b| *b < bound_full);
    let mut entries = Vec::new();
    for r in g.roots().iter() {
        let expectation = expectation_after_loss(g, r, &loss)?;
        let margin_full = &bound_full - &expectation;
        let margin_induced = bound_induced.as_ref().map(|b| b - &expectation);
        let holds = margin_full.signum().is_gt() && margin_induced.as_ref().is_none_or(|m| m.signum().is_gt());
        entries.push(RootLossEntry {
            root: r,
            root_of_induced: map.forward(r).is_some_and(|v| induced.is_root(v)),
            is_lost_root: r == r_lost,
            expectation,
            margin_induced,
            margin_full,
            holds,
        });
    }
    let holds = bounds_ordered && entries.iter().all(|e| e.holds);
    Ok(RootLossCheck {
        lost_root: r_lost,
        bound_full,
        bound_induced,
        bounds_ordered,
        entries,
        holds,
    })
}

/// Probability distribution over loss sets, with exact rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LossDistribution {
    entries: Vec<(Rational, LossSet)>,
}

impl LossDistribution {
    /// Rejects negative weights and weights that do not sum to exactly 1.
    pub fn new(entries: Vec<(Rational, LossSet)>) -> Result<Self> {
        let mut total = Rational::zero();
        for (p, _) in &entries {
            if p.is_negative() {
                return Err(Error::NegativeProbability(format_rational(p)));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(Error::NotNormalized(format_rational(&total)));
        }
        Ok(LossDistribution { entries })
    }

    pub fn certain(loss: LossSet) -> Self {
        LossDistribution {
            entries: vec![(Rational::one(), loss)],
        }
    }

    /// `(1 − p)` on no loss and `p/k` on each single-vertex loss in `candidates`.
    pub fn single_loss(g: &Graph, p: &Rational, candidates: &VertexSet) -> Result<Self> {
        let k = candidates.len();
        let mut entries = vec![(Rational::one() - p, LossSet::empty())];
        if k > 0 {
            let share = p / Rational::from_integer(k.into());
            for v in candidates.iter() {
                entries.push((share.clone(), LossSet::from_slice(g, &[v])?));
            }
        }
        LossDistribution::new(entries)
    }

    /// `(1 − p)·δ_∅ + p·self`.
    pub fn diluted(&self, p: &Rational) -> Result<Self> {
        let mut entries = vec![(Rational::one() - p, LossSet::empty())];
        entries.extend(self.entries.iter().map(|(q, l)| (q * p, l.clone())));
        LossDistribution::new(entries)
    }

    pub fn entries(&self) -> &[(Rational, LossSet)] {
        &self.entries
    }

    /// Parses lines of the form `p/q : i,j,k`; an empty right side means no loss.
    pub fn parse(g: &Graph, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |column: usize, message: String| Error::Parse {
                line: lineno + 1,
                column,
                message,
            };
            let (p, set) = line
                .split_once(':')
                .ok_or_else(|| err(1, format!("expected `p/q : i,j,...`, found `{line}`")))?;
            let prob = crate::quad::parse_rational(p).map_err(|_| err(1, format!("bad probability `{}`", p.trim())))?;
            let col = p.len() + 2;
            let mut lost = VertexSet::new();
            for tok in set.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let v = tok
                    .parse::<usize>()
                    .map_err(|e| err(col, format!("bad vertex `{tok}`: {e}")))?;
                lost.insert(v);
            }
            entries.push((prob, LossSet::new(g, lost).map_err(|e| err(col, e.to_string()))?));
        }
        LossDistribution::new(entries)
    }
}

/// Operator whose expectation is averaged over a loss distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MixtureOperator {
    /// Full-graph Bell operator at a root of `G`.
    FullGraph { root: usize },
    /// Bell operator of `G[V∖hypothesis]` at `root` (an original vertex
    /// index that must be a root of the induced graph).
    InducedGraph { hypothesis: LossSet, root: usize },
}

/// Exact expectation of `op` on the state with `lost` traced out, summed
/// term by term with [`stabilizer_expectation`].
pub fn operator_expectation(g: &Graph, op: &MixtureOperator, lost: &LossSet) -> Result<Quad> {
    match op {
        MixtureOperator::FullGraph { root } => {
            require_root(g, *root)?;
            let sum = anchored_stabilizer_sum(g, *root)?;
            sum.terms().iter().try_fold(Quad::zero(), |acc, t| {
                let e = stabilizer_expectation(g, t.vertex, &VertexSet::new(), lost.vertices())?;
                Ok(if e == 1 { acc + &t.coefficient } else { acc })
            })
        }
        MixtureOperator::InducedGraph { hypothesis, root } => {
            let (sum, map) = induced_operator(g, hypothesis, *root)?;
            sum.terms().iter().try_fold(Quad::zero(), |acc, t| {
                let v = map.backward(t.vertex);
                let e = stabilizer_expectation(g, v, hypothesis.vertices(), lost.vertices())?;
                Ok(if e == 1 { acc + &t.coefficient } else { acc })
            })
        }
    }
}

/// The induced graph's Bell operator for hypothesis `L₀`, anchored at an
/// original vertex `root` that must be a root of `G[V∖L₀]`.
pub fn induced_operator(g: &Graph, hypothesis: &LossSet, root: usize) -> Result<(WeightedStabilizerSum, Relabeling)> {
    let (induced, map) = hypothesis.induced_graph(g);
    let local = map.forward(root).ok_or(Error::LostIndex(root))?;
    require_root(&induced, local)?;
    Ok((anchored_stabilizer_sum(&induced, local)?, map))
}

/// `Σ_k p_k ⟨op⟩_{ρ_{L_k}}`.
pub fn mixture_expectation(g: &Graph, dist: &LossDistribution, op: &MixtureOperator) -> Result<Quad> {
    dist.entries().iter().try_fold(Quad::zero(), |acc, (p, loss)| {
        Ok(acc + operator_expectation(g, op, loss)?.scale(p))
    })
}

/// Classical bound the operator is judged against: `β_C(G)` for the
/// full-graph operator, `β_C(G[V∖L₀])` for an induced one.
pub fn operator_bound(g: &Graph, op: &MixtureOperator) -> Result<Quad> {
    match op {
        MixtureOperator::FullGraph { .. } => classical_bound(g),
        MixtureOperator::InducedGraph { hypothesis, .. } => classical_bound(&hypothesis.induced_graph(g).0),
    }
}

/// Maximum quantum value of the operator's own graph.
pub fn operator_quantum_bound(g: &Graph, op: &MixtureOperator) -> Result<Quad> {
    match op {
        MixtureOperator::FullGraph { .. } => quantum_bound(g),
        MixtureOperator::InducedGraph { hypothesis, .. } => quantum_bound(&hypothesis.induced_graph(g).0),
    }
}

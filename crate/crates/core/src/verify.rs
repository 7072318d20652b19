//! Closed form versus statevector oracle, over whole families of graphs and
//! loss sets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bell::{bell_stabilizer_sum, generic_bell_operator, MeasurementSetting};
use crate::error::Result;
use crate::exec::{self, Mode};
use crate::graph::{Graph, VertexSet};
use crate::loss::{
    expectation_after_loss, expectation_by_terms, induced_operator, induced_stabilizer_on_full_state, root_loss_check,
    stabilizer_expectation_after_loss, LossSet, StabilizerKind,
};
use crate::oracle::{self, graph_state, LossyState, Replacement};
use crate::pauli::stabilizer;
use crate::sweep::combinations;

/// Tolerance for oracle expectation values.
pub const EXPECTATION_TOLERANCE: f64 = 1e-9;
/// Tolerance for state-level identities (amplitude magnitudes).
pub const STATE_TOLERANCE: f64 = 1e-10;
/// Tolerance for dense operator entries.
pub const OPERATOR_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_SEED: u64 = 0x5eed_b311;

/// Random connected graph: a random spanning tree plus each remaining pair
/// independently with probability `extra_edge_prob`.
pub fn random_connected_graph<R: Rng>(n: usize, extra_edge_prob: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !edges.contains(&(i, j)) && rng.gen_bool(extra_edge_prob) {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, &edges).expect("generated edges are simple")
}

/// `count` random connected graphs with sizes drawn from `sizes`, reproducible from `seed`.
pub fn random_graphs(count: usize, sizes: std::ops::RangeInclusive<usize>, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(sizes.clone());
            let p = rng.gen_range(0.1..0.6);
            random_connected_graph(n, p, &mut rng)
        })
        .collect()
}

/// Loss sets of size `0..=max_loss` (proper subsets only), smallest sizes
/// first and lexicographic within a size, truncated to `cap`.
pub fn loss_sets(g: &Graph, max_loss: usize, cap: usize) -> Vec<VertexSet> {
    loss_sets_between(g, 0, max_loss, cap)
}

/// Like [`loss_sets`] but only sizes `min_loss..=max_loss`.
pub fn loss_sets_between(g: &Graph, min_loss: usize, max_loss: usize, cap: usize) -> Vec<VertexSet> {
    let items: Vec<usize> = (0..g.n()).collect();
    (min_loss..=max_loss.min(g.n() - 1))
        .flat_map(|k| combinations(&items, k))
        .take(cap)
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct CheckStats {
    pub checked: u64,
    pub failed: u64,
    pub max_deviation: f64,
}

impl CheckStats {
    fn record(&mut self, deviation: f64, tol: f64) -> bool {
        self.checked += 1;
        self.max_deviation = self.max_deviation.max(deviation);
        let ok = deviation <= tol;
        if !ok {
            self.failed += 1;
        }
        ok
    }

    fn record_exact(&mut self, ok: bool) -> bool {
        self.record(if ok { 0.0 } else { f64::INFINITY }, 0.0)
    }

    fn merge(&mut self, other: &CheckStats) {
        self.checked += other.checked;
        self.failed += other.failed;
        self.max_deviation = self.max_deviation.max(other.max_deviation);
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub min_loss: usize,
    pub max_loss: usize,
    /// Most loss sets examined per graph.
    pub loss_cap: usize,
    pub replacement: bool,
    /// Cross-check through the dense generic operator and density matrix (n ≤ 8 only).
    pub dense: bool,
    pub mode: Mode,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            min_loss: 0,
            max_loss: 3,
            loss_cap: 500,
            replacement: true,
            dense: false,
            mode: Mode::Parallel,
        }
    }
}

/// Aggregated pass/fail counts for a verification run.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub graphs: usize,
    pub loss_sets: u64,
    /// Closed form vs oracle for the full-graph operator.
    pub expectation_full: CheckStats,
    /// Closed form vs oracle for the induced-graph operator.
    pub expectation_induced: CheckStats,
    pub stabilizer_full: CheckStats,
    pub stabilizer_induced: CheckStats,
    pub stabilizer_pure: CheckStats,
    /// Exact: closed form equals the term-by-term sum.
    pub reconstruction: CheckStats,
    pub replacement: CheckStats,
    pub amplitude: CheckStats,
    /// Exact strict inequality chain when a root is lost, plus oracle agreement.
    pub root_loss: CheckStats,
    /// Dense generic operator vs stabilizer sum (entrywise).
    pub generic_operator: CheckStats,
    /// Dense density-matrix path vs factored path.
    pub dense_expectation: CheckStats,
    pub failures: Vec<String>,
}

const MAX_LOGGED_FAILURES: usize = 20;

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.categories().iter().all(|(_, s)| s.passed())
    }

    pub fn categories(&self) -> Vec<(&'static str, &CheckStats)> {
        vec![
            ("expectation_full", &self.expectation_full),
            ("expectation_induced", &self.expectation_induced),
            ("stabilizer_full", &self.stabilizer_full),
            ("stabilizer_induced", &self.stabilizer_induced),
            ("stabilizer_pure", &self.stabilizer_pure),
            ("reconstruction", &self.reconstruction),
            ("replacement", &self.replacement),
            ("amplitude", &self.amplitude),
            ("root_loss", &self.root_loss),
            ("generic_operator", &self.generic_operator),
            ("dense_expectation", &self.dense_expectation),
        ]
    }

    pub fn total_checked(&self) -> u64 {
        self.categories().iter().map(|(_, s)| s.checked).sum()
    }

    pub fn max_deviation(&self) -> f64 {
        self.categories()
            .iter()
            .filter(|(_, s)| s.checked > 0)
            .map(|(_, s)| s.max_deviation)
            .fold(0.0, f64::max)
    }

    fn merge(&mut self, other: VerifyReport) {
        self.graphs += other.graphs;
        self.loss_sets += other.loss_sets;
        self.expectation_full.merge(&other.expectation_full);
        self.expectation_induced.merge(&other.expectation_induced);
        self.stabilizer_full.merge(&other.stabilizer_full);
        self.stabilizer_induced.merge(&other.stabilizer_induced);
        self.stabilizer_pure.merge(&other.stabilizer_pure);
        self.reconstruction.merge(&other.reconstruction);
        self.replacement.merge(&other.replacement);
        self.amplitude.merge(&other.amplitude);
        self.root_loss.merge(&other.root_loss);
        self.generic_operator.merge(&other.generic_operator);
        self.dense_expectation.merge(&other.dense_expectation);
        for f in other.failures {
            if self.failures.len() < MAX_LOGGED_FAILURES {
                self.failures.push(f);
            }
        }
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < MAX_LOGGED_FAILURES {
            self.failures.push(msg);
        }
    }
}

/// Runs every check on each graph and merges the results in input order.
pub fn verify_graphs(graphs: &[Graph], opts: &VerifyOptions) -> Result<VerifyReport> {
    let reports = exec::try_map(opts.mode, graphs, |g| verify_graph(g, opts))?;
    let mut total = VerifyReport::default();
    for r in reports {
        total.merge(r);
    }
    Ok(total)
}

/// All checks on a single graph. Graphs without edges are skipped.
pub fn verify_graph(g: &Graph, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut rep = VerifyReport {
        graphs: 1,
        ..VerifyReport::default()
    };
    if g.n_max() == 0 {
        return Ok(rep);
    }
    let tag = g.fingerprint();
    let state = graph_state(g)?;
    let roots = g.roots();
    let sums: Vec<_> = roots.iter().map(|r| bell_stabilizer_sum(g, r)).collect::<Result<_>>()?;

    for lost in loss_sets_between(g, opts.min_loss, opts.max_loss, opts.loss_cap) {
        rep.loss_sets += 1;
        let loss = LossSet::new(g, lost.clone())?;
        let lossy = LossyState::new(&state, lost.clone(), Replacement::Zero)?;
        let survivors = loss.survivors(g);
        let (induced, map) = loss.induced_graph(g);

        for i in 0..g.n() {
            let s = stabilizer(g, i)?;
            let predicted = stabilizer_expectation_after_loss(g, i, &loss, StabilizerKind::FullGraph)? as f64;
            let dev = (lossy.pauli_expectation(&s) - predicted).abs();
            if !rep.stabilizer_full.record(dev, EXPECTATION_TOLERANCE) {
                rep.fail(format!("{tag} L={lost} S_{i} full: deviation {dev:e}"));
            }
            let Some(local) = map.forward(i) else { continue };
            let s_ind = stabilizer(&induced, local)?.embed(g.n(), &survivors)?;
            let predicted = stabilizer_expectation_after_loss(g, i, &loss, StabilizerKind::InducedGraph)? as f64;
            let dev = (lossy.pauli_expectation(&s_ind) - predicted).abs();
            if !rep.stabilizer_induced.record(dev, EXPECTATION_TOLERANCE) {
                rep.fail(format!("{tag} L={lost} S_{i} induced: deviation {dev:e}"));
            }
            let predicted = induced_stabilizer_on_full_state(g, i, &loss)? as f64;
            let dev = (state.pauli_expectation(&s_ind).re - predicted).abs();
            if !rep.stabilizer_pure.record(dev, EXPECTATION_TOLERANCE) {
                rep.fail(format!("{tag} L={lost} S_{i} induced on pure state: deviation {dev:e}"));
            }
        }

        for (r, sum) in roots.iter().zip(&sums) {
            let closed = expectation_after_loss(g, r, &loss)?;
            let by_terms = expectation_by_terms(g, sum, &loss)?;
            if !rep.reconstruction.record_exact(closed == by_terms) {
                rep.fail(format!("{tag} L={lost} r={r}: {closed} != term sum {by_terms}"));
            }
            let want = closed.to_f64();
            let got = lossy.stabilizer_sum_expectation(sum, None)?;
            let dev = (got - want).abs();
            if !rep.expectation_full.record(dev, EXPECTATION_TOLERANCE) {
                rep.fail(format!("{tag} L={lost} r={r} full: oracle {got} vs {closed}"));
            }
            if opts.replacement {
                let vals = oracle::replacement_expectations(&state, &lost, sum, None)?;
                let dev = vals.iter().map(|v| (v - vals[0]).abs()).fold(0.0, f64::max);
                if !rep.replacement.record(dev, EXPECTATION_TOLERANCE) {
                    rep.fail(format!("{tag} L={lost} r={r}: replacements disagree {vals:?}"));
                }
            }
            if opts.dense && g.n() <= 8 {
                let op = sum.dense()?;
                let dense = lossy.dense_expectation(&op)?;
                let dev = (dense - got).abs();
                if !rep.dense_expectation.record(dev, EXPECTATION_TOLERANCE) {
                    rep.fail(format!("{tag} L={lost} r={r}: dense path {dense} vs {got}"));
                }
            }
            if loss.contains(r) {
                continue;
            }
            let (ind_sum, _) = induced_operator_any_anchor(g, &loss, r)?;
            let got = lossy.stabilizer_sum_expectation(&ind_sum, Some(&survivors))?;
            let dev = (got - want).abs();
            if !rep.expectation_induced.record(dev, EXPECTATION_TOLERANCE) {
                rep.fail(format!("{tag} L={lost} r={r} induced: oracle {got} vs {closed}"));
            }
            if opts.replacement {
                let vals = oracle::replacement_expectations(&state, &lost, &ind_sum, Some(&survivors))?;
                let dev = vals.iter().map(|v| (v - vals[0]).abs()).fold(0.0, f64::max);
                if !rep.replacement.record(dev, EXPECTATION_TOLERANCE) {
                    rep.fail(format!("{tag} L={lost} r={r} induced: replacements disagree {vals:?}"));
                }
            }
        }

        let weights = oracle::lost_block_weights(&state, &lost);
        let dev = weights.iter().map(|w| (w - weights[0]).abs()).fold(0.0, f64::max);
        if !rep.amplitude.record(dev, STATE_TOLERANCE) {
            rep.fail(format!("{tag} L={lost}: unequal block weights {weights:?}"));
        }
    }

    for r_lost in roots.iter() {
        let check = root_loss_check(g, r_lost)?;
        if !rep.root_loss.record_exact(check.holds) {
            rep.fail(format!("{tag}: losing root {r_lost} leaves a violation: {check:?}"));
        }
        let lossy = LossyState::new(&state, VertexSet::singleton(r_lost), Replacement::Zero)?;
        for (entry, sum) in check.entries.iter().zip(&sums) {
            let got = lossy.stabilizer_sum_expectation(sum, None)?;
            let dev = (got - entry.expectation.to_f64()).abs();
            if !rep.root_loss.record(dev, EXPECTATION_TOLERANCE) {
                rep.fail(format!(
                    "{tag}: root {r_lost} lost, oracle {got} vs {}",
                    entry.expectation
                ));
            }
        }
    }

    if opts.dense && g.n() <= 8 {
        for r in roots.iter() {
            let dev = generic_operator_deviation(g, r, &MeasurementSetting::ideal(g.n(), r))?;
            if !rep.generic_operator.record(dev, OPERATOR_TOLERANCE) {
                rep.fail(format!("{tag} r={r}: generic operator deviates by {dev:e}"));
            }
        }
    }
    Ok(rep)
}

/// The induced graph's Bell-sum operator anchored at original vertex `r`,
/// whether or not `r` keeps maximal degree there.
fn induced_operator_any_anchor(
    g: &Graph,
    loss: &LossSet,
    r: usize,
) -> Result<(crate::bell::WeightedStabilizerSum, crate::graph::Relabeling)> {
    match induced_operator(g, loss, r) {
        Ok(x) => Ok(x),
        Err(_) => {
            let (induced, map) = loss.induced_graph(g);
            let local = map.forward(r).expect("root survives");
            Ok((crate::bell::anchored_stabilizer_sum(&induced, local)?, map))
        }
    }
}

/// Largest entrywise gap between the generic operator under `settings` and
/// the dense stabilizer-sum operator at `r`.
pub fn generic_operator_deviation(g: &Graph, r: usize, settings: &MeasurementSetting) -> Result<f64> {
    let generic = generic_bell_operator(g, r, settings)?;
    let sum = bell_stabilizer_sum(g, r)?.dense()?;
    Ok(generic.max_abs_diff(&sum))
}

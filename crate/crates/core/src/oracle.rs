//! Brute-force statevector ground truth.
//!
//! Nothing here consults the closed forms in [`crate::loss`]; the graph state
//! is built by a CZ circuit, checked against its stabilizers, and every
//! expectation value is summed over amplitudes.

use num_complex::Complex64;

use crate::bell::{WeightedStabilizerSum, DENSE_QUBIT_CAP};
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::pauli::{stabilizer, Letter, PauliString};

/// Default qubit cap for statevector construction.
pub const ORACLE_QUBIT_CAP: usize = 14;

/// Tolerance of the eigenvalue check performed after construction.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Dense amplitudes; qubit `q` is bit `q` of the basis index.
#[derive(Clone, Debug)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `P|ψ⟩`.
    pub fn apply_pauli(&self, p: &PauliString) -> StateVector {
        let masks = PauliMasks::of(p);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (k, a) in self.amps.iter().enumerate() {
            out[k ^ masks.x] += masks.coefficient(k) * a;
        }
        StateVector {
            qubits: self.qubits,
            amps: out,
        }
    }

    /// `⟨ψ|P|ψ⟩` on the pure state.
    pub fn pauli_expectation(&self, p: &PauliString) -> Complex64 {
        PauliMasks::of(p).expectation(&self.amps)
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Bit masks of a Pauli string: `P|k⟩ = coeff(k) |k ⊕ x⟩`.
#[derive(Clone, Copy, Debug)]
struct PauliMasks {
    x: usize,
    z: usize,
    /// `i^(phase + #Y)`.
    prefactor: Complex64,
}

impl PauliMasks {
    fn of(p: &PauliString) -> Self {
        let x: usize = p.x_support().iter().map(|q| 1 << q).sum();
        let z: usize = p.z_support().iter().map(|q| 1 << q).sum();
        let ys = (x & z).count_ones();
        PauliMasks {
            x,
            z,
            prefactor: Complex64::i().powu(p.phase() as u32 + ys),
        }
    }

    fn coefficient(&self, k: usize) -> Complex64 {
        if (k & self.z).count_ones() % 2 == 1 {
            -self.prefactor
        } else {
            self.prefactor
        }
    }

    fn expectation(&self, amps: &[Complex64]) -> Complex64 {
        amps.iter()
            .enumerate()
            .map(|(k, a)| amps[k ^ self.x].conj() * self.coefficient(k) * a)
            .sum()
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::SizeCapExceeded { qubits: n, cap })
    } else {
        Ok(())
    }
}

/// The graph state: `|+⟩^⊗n` followed by CZ on every edge, then checked
/// against `S_i|φ⟩ = |φ⟩` for every vertex.
pub fn graph_state(g: &Graph) -> Result<StateVector> {
    graph_state_with_cap(g, ORACLE_QUBIT_CAP)
}

pub fn graph_state_with_cap(g: &Graph, cap: usize) -> Result<StateVector> {
    let n = g.n();
    check_cap(n, cap)?;
    let dim = 1usize << n;
    let amp = (dim as f64).sqrt().recip();
    let edge_masks: Vec<usize> = g.edges().iter().map(|&(i, j)| (1 << i) | (1 << j)).collect();
    let amps = (0..dim)
        .map(|k| {
            let flips = edge_masks.iter().filter(|&&m| k & m == m).count();
            Complex64::new(if flips % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    let state = StateVector { qubits: n, amps };
    for i in 0..n {
        let s = stabilizer(g, i)?;
        let dev = state.apply_pauli(&s).max_abs_diff(&state);
        if dev > STATE_TOLERANCE {
            return Err(Error::EigenvalueVerification {
                vertex: i,
                deviation: format!("{dev:e}"),
            });
        }
    }
    Ok(state)
}

/// State written onto the lost qubits after tracing them out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Replacement {
    Zero,
    One,
    MaximallyMixed,
}

impl Replacement {
    pub const ALL: [Replacement; 3] = [Replacement::Zero, Replacement::One, Replacement::MaximallyMixed];

    /// `tr(σ P)` for a single-qubit letter.
    fn letter_expectation(self, l: Letter) -> f64 {
        match (self, l) {
            (_, Letter::I) => 1.0,
            (_, Letter::X) | (_, Letter::Y) => 0.0,
            (Replacement::Zero, Letter::Z) => 1.0,
            (Replacement::One, Letter::Z) => -1.0,
            (Replacement::MaximallyMixed, Letter::Z) => 0.0,
        }
    }

    /// Matrix element `⟨a|σ|b⟩`.
    fn density(self, a: usize, b: usize) -> f64 {
        match self {
            Replacement::Zero => (a == 0 && b == 0) as u8 as f64,
            Replacement::One => (a == 1 && b == 1) as u8 as f64,
            Replacement::MaximallyMixed => {
                if a == b {
                    0.5
                } else {
                    0.0
                }
            }
        }
    }
}

/// `ρ = Tr_L(|φ⟩⟨φ|) ⊗ σ^⊗L`, kept in factored form.
#[derive(Clone, Debug)]
pub struct LossyState<'a> {
    state: &'a StateVector,
    lost: VertexSet,
    replacement: Replacement,
}

impl<'a> LossyState<'a> {
    pub fn new(state: &'a StateVector, lost: VertexSet, replacement: Replacement) -> Result<Self> {
        let n = state.qubits();
        if let Some(m) = lost.last() {
            if m >= n {
                return Err(Error::IndexOutOfRange { index: m, n });
            }
        }
        if lost.len() == n {
            return Err(Error::LossCoversAll);
        }
        Ok(LossyState {
            state,
            lost,
            replacement,
        })
    }

    pub fn lost(&self) -> &VertexSet {
        &self.lost
    }

    pub fn replacement(&self) -> Replacement {
        self.replacement
    }

    /// `⟨P⟩_ρ = ⟨φ| P_{V∖L} ⊗ 1_L |φ⟩ · Π_{ℓ∈L} tr(σ P_ℓ)`.
    pub fn pauli_expectation(&self, p: &PauliString) -> f64 {
        let mut factor = 1.0;
        let mut reduced = p.clone();
        for l in self.lost.iter() {
            factor *= self.replacement.letter_expectation(p.letter(l));
            reduced.set(l, Letter::I);
        }
        if factor == 0.0 {
            return 0.0;
        }
        factor * self.state.pauli_expectation(&reduced).re
    }

    /// `Σ c·⟨S⟩_ρ` over the sum's terms. With `keep`, the sum lives on the
    /// sites in `keep` (in increasing order) and acts as identity elsewhere.
    pub fn stabilizer_sum_expectation(&self, sum: &WeightedStabilizerSum, keep: Option<&VertexSet>) -> Result<f64> {
        let n = self.state.qubits();
        sum.terms().iter().try_fold(0.0, |acc, t| {
            let p = match keep {
                Some(k) => t.pauli.embed(n, k)?,
                None => {
                    if t.pauli.len() != n {
                        return Err(Error::LengthMismatch(t.pauli.len(), n));
                    }
                    t.pauli.clone()
                }
            };
            Ok(acc + t.coefficient.to_f64() * self.pauli_expectation(&p))
        })
    }

    /// Materializes `ρ` as a dense matrix; capped at the dense-operator cap.
    pub fn density_matrix(&self) -> Result<DenseMatrix> {
        let n = self.state.qubits();
        check_cap(n, DENSE_QUBIT_CAP)?;
        let dim = 1usize << n;
        let lost_mask: usize = self.lost.iter().map(|q| 1 << q).sum();
        let lost_sites = self.lost.to_vec();
        // Every assignment of the lost bits, as a mask.
        let patterns: Vec<usize> = (0..1usize << lost_sites.len())
            .map(|s| {
                lost_sites
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| s >> t & 1 == 1)
                    .map(|(_, &q)| 1 << q)
                    .sum()
            })
            .collect();
        let amps = self.state.amplitudes();
        let mut rho = DenseMatrix::zeros(n);
        for row in 0..dim {
            for col in 0..dim {
                let sigma: f64 = lost_sites
                    .iter()
                    .map(|&q| self.replacement.density(row >> q & 1, col >> q & 1))
                    .product();
                if sigma == 0.0 {
                    continue;
                }
                let (rv, cv) = (row & !lost_mask, col & !lost_mask);
                let reduced: Complex64 = patterns.iter().map(|&s| amps[rv | s] * amps[cv | s].conj()).sum();
                rho.set(row, col, reduced * sigma);
            }
        }
        Ok(rho)
    }

    /// `tr(ρ O)` through the materialized density matrix.
    pub fn dense_expectation(&self, op: &DenseMatrix) -> Result<f64> {
        Ok(self.density_matrix()?.trace_product(op).re)
    }
}

/// Bell-sum expectation under each replacement convention, in
/// [`Replacement::ALL`] order.
pub fn replacement_expectations(
    state: &StateVector,
    lost: &VertexSet,
    sum: &WeightedStabilizerSum,
    keep: Option<&VertexSet>,
) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (slot, rep) in out.iter_mut().zip(Replacement::ALL) {
        *slot = LossyState::new(state, lost.clone(), rep)?.stabilizer_sum_expectation(sum, keep)?;
    }
    Ok(out)
}

/// True when all replacement conventions agree within `tol`.
pub fn loss_replacement_invariance(
    state: &StateVector,
    lost: &VertexSet,
    sum: &WeightedStabilizerSum,
    tol: f64,
) -> Result<bool> {
    let v = replacement_expectations(state, lost, sum, None)?;
    Ok((v[0] - v[1]).abs() <= tol && (v[0] - v[2]).abs() <= tol)
}

/// Splits the state as `Σ_s α_s |ψ_s⟩ ⊗ |s⟩` over computational-basis
/// assignments `s` of the lost qubits and returns `|α_s|` for each `s`
/// (bit `t` of `s` is the `t`-th lost qubit in increasing order).
pub fn lost_block_weights(state: &StateVector, lost: &VertexSet) -> Vec<f64> {
    let sites = lost.to_vec();
    let mut weights = vec![0.0; 1 << sites.len()];
    for (k, a) in state.amplitudes().iter().enumerate() {
        let s = sites.iter().enumerate().map(|(t, &q)| (k >> q & 1) << t).sum::<usize>();
        weights[s] += a.norm_sqr();
    }
    weights.into_iter().map(f64::sqrt).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::bell_stabilizer_sum;

    fn star(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn single_vertex_is_plus_state() {
        let s = graph_state(&Graph::edgeless(1).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for a in s.amplitudes() {
            assert!((a.re - h).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::edgeless(ORACLE_QUBIT_CAP + 1).unwrap();
        assert!(matches!(graph_state(&g), Err(Error::SizeCapExceeded { .. })));
    }

    #[test]
    fn star_lossy_expectations() {
        let g = star(4);
        let state = graph_state(&g).unwrap();
        let lossy = LossyState::new(&state, VertexSet::singleton(3), Replacement::Zero).unwrap();
        assert!(lossy.pauli_expectation(&stabilizer(&g, 0).unwrap()).abs() < 1e-10);
        assert!((lossy.pauli_expectation(&stabilizer(&g, 1).unwrap()) - 1.0).abs() < 1e-10);
        assert!(lossy.pauli_expectation(&stabilizer(&g, 3).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn star3_stabilizer_expectations_are_one() {
        let g = star(3);
        let state = graph_state(&g).unwrap();
        for i in 0..3 {
            let v = state.pauli_expectation(&stabilizer(&g, i).unwrap());
            assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);
        }
        // Local Hadamards on the leaves map it to GHZ: amplitudes only on |000⟩, |111⟩.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let had = crate::dense::mat2_scale(
            &crate::dense::mat2_add(&crate::dense::PAULI_X, &crate::dense::PAULI_Z, 1.0),
            h,
        );
        let mut u = DenseMatrix::zeros(3);
        u.add_product(&[(1, had), (2, had)], Complex64::new(1.0, 0.0));
        let ghz = u.apply(state.amplitudes());
        for (k, a) in ghz.iter().enumerate() {
            let expected = if k == 0 || k == 7 { h } else { 0.0 };
            assert!((a.norm() - expected).abs() < 1e-12, "k={k} a={a}");
        }
    }

    #[test]
    fn loss_covering_all_rejected() {
        let state = graph_state(&star(2)).unwrap();
        assert!(matches!(
            LossyState::new(&state, VertexSet::full(2), Replacement::Zero),
            Err(Error::LossCoversAll)
        ));
    }

    #[test]
    fn dense_and_factored_paths_agree() {
        let g = star(4);
        let state = graph_state(&g).unwrap();
        let sum = bell_stabilizer_sum(&g, 0).unwrap();
        let op = sum.dense().unwrap();
        for rep in Replacement::ALL {
            let lossy = LossyState::new(&state, VertexSet::singleton(2), rep).unwrap();
            let a = lossy.stabilizer_sum_expectation(&sum, None).unwrap();
            let b = lossy.dense_expectation(&op).unwrap();
            assert!((a - b).abs() < 1e-10, "{rep:?}: {a} vs {b}");
            let rho = lossy.density_matrix().unwrap();
            let tr: Complex64 = (0..16).map(|k| rho.get(k, k)).sum();
            assert!((tr.re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn replacement_invariance_for_star_leaf() {
        let g = star(5);
        let state = graph_state(&g).unwrap();
        let sum = bell_stabilizer_sum(&g, 0).unwrap();
        assert!(loss_replacement_invariance(&state, &VertexSet::singleton(4), &sum, 1e-9).unwrap());
    }
}

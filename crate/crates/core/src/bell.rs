//! The linearly scalable Bell operator of a graph: bounds, the weighted
//! stabilizer-sum form used by the closed forms, and the generic
//! measurement-setting form assembled densely for the oracle.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::dense::{self, DenseMatrix, Mat2};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::pauli::{stabilizer, PauliString};
use crate::quad::Quad;

/// Largest register the dense operator builders accept.
pub const DENSE_QUBIT_CAP: usize = 10;

fn require_edges(g: &Graph) -> Result<usize> {
    match g.n_max() {
        0 => Err(Error::DegenerateGraph),
        m => Ok(m),
    }
}

/// `n_max + N − 1`.
pub fn classical_bound(g: &Graph) -> Result<Quad> {
    let m = require_edges(g)?;
    Ok(Quad::from_ints((m + g.n() - 1) as i64, 0))
}

/// `(2√2 − 1)·n_max + N − 1`.
pub fn quantum_bound(g: &Graph) -> Result<Quad> {
    let m = require_edges(g)? as i64;
    Ok(Quad::from_ints(g.n() as i64 - 1 - m, 2 * m))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundPair {
    pub classical: Quad,
    pub quantum: Quad,
}

impl BoundPair {
    pub fn of(g: &Graph) -> Result<Self> {
        Ok(BoundPair {
            classical: classical_bound(g)?,
            quantum: quantum_bound(g)?,
        })
    }

    pub fn gap(&self) -> Quad {
        &self.quantum - &self.classical
    }
}

/// One `coefficient · S_vertex` term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub vertex: usize,
    pub coefficient: Quad,
    pub pauli: PauliString,
}

/// The Bell operator under ideal measurements, written as a weighted sum of
/// the graph's stabilizers: `√2·n_max` on the root, `√2` on its neighbors,
/// `1` on everything else.
///
/// Terms are ordered root first, then the root's neighbors ascending, then the
/// remaining vertices ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedStabilizerSum {
    terms: Vec<Term>,
    root: usize,
    fingerprint: String,
}

impl WeightedStabilizerSum {
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn qubits(&self) -> usize {
        self.terms.first().map_or(0, |t| t.pauli.len())
    }

    pub fn coefficient_sum(&self) -> Quad {
        self.terms.iter().map(|t| t.coefficient.clone()).sum()
    }

    /// Dense matrix of the operator; capped at [`DENSE_QUBIT_CAP`].
    pub fn dense(&self) -> Result<DenseMatrix> {
        let n = self.qubits();
        check_dense_cap(n)?;
        let mut m = DenseMatrix::zeros(n);
        for t in &self.terms {
            m.add_pauli(&t.pauli, Complex64::new(t.coefficient.to_f64(), 0.0));
        }
        Ok(m)
    }
}

impl fmt::Display for WeightedStabilizerSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})·{}", t.coefficient, t.pauli)?;
        }
        Ok(())
    }
}

/// Bell operator at root `r` in stabilizer-sum form. `r` must be a root.
pub fn bell_stabilizer_sum(g: &Graph, r: usize) -> Result<WeightedStabilizerSum> {
    require_edges(g)?;
    g.neighborhood(r)?;
    if !g.is_root(r) {
        return Err(Error::NotARoot(r));
    }
    anchored_stabilizer_sum(g, r)
}

/// Same weight pattern as [`bell_stabilizer_sum`] but anchored at any vertex:
/// the anchor gets `√2·n_max(g)`, its neighbors `√2`, the rest `1`.
///
/// This is the operator an experimenter measures for an induced graph on
/// which the chosen anchor is no longer of maximal degree; the bounds do not
/// apply to it.
pub fn anchored_stabilizer_sum(g: &Graph, r: usize) -> Result<WeightedStabilizerSum> {
    let nbrs = g.neighborhood(r)?.clone();
    let n_max = g.n_max() as i64;
    let mut terms = Vec::with_capacity(g.n());
    terms.push(Term {
        vertex: r,
        coefficient: Quad::from_ints(0, n_max),
        pauli: stabilizer(g, r)?,
    });
    for i in nbrs.iter() {
        terms.push(Term {
            vertex: i,
            coefficient: Quad::sqrt2(),
            pauli: stabilizer(g, i)?,
        });
    }
    for i in (0..g.n()).filter(|&i| i != r && !nbrs.contains(i)) {
        terms.push(Term {
            vertex: i,
            coefficient: Quad::one(),
            pauli: stabilizer(g, i)?,
        });
    }
    Ok(WeightedStabilizerSum {
        terms,
        root: r,
        fingerprint: g.fingerprint(),
    })
}

/// A single-qubit ±1-valued observable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Observable {
    X,
    Z,
    /// `(X + Z)/√2`
    XPlusZ,
    /// `(X − Z)/√2`
    XMinusZ,
    Custom(Mat2),
}

impl Observable {
    pub fn matrix(&self) -> Mat2 {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Observable::X => dense::PAULI_X,
            Observable::Z => dense::PAULI_Z,
            Observable::XPlusZ => dense::mat2_scale(&dense::mat2_add(&dense::PAULI_X, &dense::PAULI_Z, 1.0), h),
            Observable::XMinusZ => dense::mat2_scale(&dense::mat2_add(&dense::PAULI_X, &dense::PAULI_Z, -1.0), h),
            Observable::Custom(m) => *m,
        }
    }

    /// Hermitian and squares to the identity, within `tol`.
    pub fn is_involution(&self, tol: f64) -> bool {
        let m = self.matrix();
        let sq = dense::mat2_mul(&m, &m);
        (0..2).all(|r| {
            (0..2).all(|col| {
                (m[r][col] - m[col][r].conj()).norm() <= tol && (sq[r][col] - dense::IDENTITY2[r][col]).norm() <= tol
            })
        })
    }
}

/// Per-vertex pair of observables `(Y_i(0), Y_i(1))`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSetting {
    pairs: Vec<(Observable, Observable)>,
}

impl MeasurementSetting {
    /// Rejects observables that are not Hermitian involutions.
    pub fn new(pairs: Vec<(Observable, Observable)>) -> Result<Self> {
        for (i, (a, b)) in pairs.iter().enumerate() {
            if !a.is_involution(1e-12) || !b.is_involution(1e-12) {
                return Err(Error::InvalidFamily(format!(
                    "observable at vertex {i} is not a Hermitian involution"
                )));
            }
        }
        Ok(MeasurementSetting { pairs })
    }

    /// The settings that attain the quantum bound: `(X±Z)/√2` at the root,
    /// `X` then `Z` everywhere else.
    pub fn ideal(n: usize, root: usize) -> Self {
        let pairs = (0..n)
            .map(|i| {
                if i == root {
                    (Observable::XPlusZ, Observable::XMinusZ)
                } else {
                    (Observable::X, Observable::Z)
                }
            })
            .collect();
        MeasurementSetting { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, i: usize) -> (Observable, Observable) {
        self.pairs[i]
    }

    /// Exchanges `Y_i(0)` and `Y_i(1)`.
    pub fn swapped(mut self, i: usize) -> Self {
        let (a, b) = self.pairs[i];
        self.pairs[i] = (b, a);
        self
    }

    fn y0(&self, i: usize) -> Mat2 {
        self.pairs[i].0.matrix()
    }

    fn y1(&self, i: usize) -> Mat2 {
        self.pairs[i].1.matrix()
    }
}

fn check_dense_cap(n: usize) -> Result<()> {
    if n > DENSE_QUBIT_CAP {
        Err(Error::SizeCapExceeded {
            qubits: n,
            cap: DENSE_QUBIT_CAP,
        })
    } else {
        Ok(())
    }
}

/// Assembles the Bell operator term by term from arbitrary settings:
///
/// ```text
/// n_max [Y_r(0) + Y_r(1)] ⊗_{i∈N(r)} Y_i(1)
///   + [Y_r(0) − Y_r(1)] Σ_{i∈N(r)} Y_i(0) ⊗_{j∈N(i)∖{r}} Y_j(1)
///   + Σ_{i∉N̄(r)} Y_i(0) ⊗_{j∈N(i)} Y_j(1)
/// ```
pub fn generic_bell_operator(g: &Graph, r: usize, settings: &MeasurementSetting) -> Result<DenseMatrix> {
    let n = g.n();
    check_dense_cap(n)?;
    if settings.len() != n {
        return Err(Error::LengthMismatch(settings.len(), n));
    }
    let n_max = require_edges(g)?;
    let nbrs_r = g.neighborhood(r)?.clone();
    if !g.is_root(r) {
        return Err(Error::NotARoot(r));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut op = DenseMatrix::zeros(n);

    let mut first = vec![(r, dense::mat2_add(&settings.y0(r), &settings.y1(r), 1.0))];
    first.extend(nbrs_r.iter().map(|i| (i, settings.y1(i))));
    op.add_product(&first, Complex64::new(n_max as f64, 0.0));

    let diff = dense::mat2_add(&settings.y0(r), &settings.y1(r), -1.0);
    for i in nbrs_r.iter() {
        let mut factors = vec![(r, diff), (i, settings.y0(i))];
        factors.extend(
            g.neighborhood(i)?
                .iter()
                .filter(|&j| j != r)
                .map(|j| (j, settings.y1(j))),
        );
        op.add_product(&factors, one);
    }

    for i in (0..n).filter(|&i| i != r && !nbrs_r.contains(i)) {
        let mut factors = vec![(i, settings.y0(i))];
        factors.extend(g.neighborhood(i)?.iter().map(|j| (j, settings.y1(j))));
        op.add_product(&factors, one);
    }
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        Graph::new(n, &edges).unwrap()
    }

    fn ring(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &edges).unwrap()
    }

    #[test]
    fn bounds_of_small_families() {
        assert_eq!(classical_bound(&ring(6)).unwrap(), Quad::from_ints(7, 0));
        assert_eq!(classical_bound(&star(6)).unwrap(), Quad::from_ints(10, 0));
        assert_eq!(quantum_bound(&ring(6)).unwrap(), Quad::from_ints(3, 4));
        assert_eq!(quantum_bound(&star(2)).unwrap(), Quad::from_ints(0, 2));
        assert_eq!(
            classical_bound(&Graph::edgeless(3).unwrap()),
            Err(Error::DegenerateGraph)
        );
        let b = BoundPair::of(&ring(6)).unwrap();
        // (2√2 − 2)·n_max
        assert_eq!(b.gap(), Quad::from_ints(-4, 4));
    }

    #[test]
    fn stabilizer_sum_of_star() {
        let s = bell_stabilizer_sum(&star(4), 0).unwrap();
        let coeffs: Vec<_> = s.terms().iter().map(|t| t.coefficient.clone()).collect();
        assert_eq!(
            coeffs,
            vec![Quad::from_ints(0, 3), Quad::sqrt2(), Quad::sqrt2(), Quad::sqrt2()]
        );
        assert_eq!(s.coefficient_sum(), quantum_bound(&star(4)).unwrap());
    }

    #[test]
    fn stabilizer_sum_of_ring_orders_terms() {
        let s = bell_stabilizer_sum(&ring(5), 0).unwrap();
        let order: Vec<_> = s.terms().iter().map(|t| t.vertex).collect();
        assert_eq!(order, vec![0, 1, 4, 2, 3]);
        let coeffs: Vec<_> = s.terms().iter().map(|t| t.coefficient.clone()).collect();
        assert_eq!(
            coeffs,
            vec![
                Quad::from_ints(0, 2),
                Quad::sqrt2(),
                Quad::sqrt2(),
                Quad::one(),
                Quad::one()
            ]
        );
    }

    #[test]
    fn non_root_rejected() {
        assert_eq!(bell_stabilizer_sum(&star(4), 2), Err(Error::NotARoot(2)));
        assert!(anchored_stabilizer_sum(&star(4), 2).is_ok());
    }

    #[test]
    fn generic_operator_cap() {
        let g = ring(DENSE_QUBIT_CAP + 1);
        let m = MeasurementSetting::ideal(g.n(), 0);
        assert!(matches!(
            generic_bell_operator(&g, 0, &m),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn ideal_observables_are_involutions() {
        for o in [Observable::X, Observable::Z, Observable::XPlusZ, Observable::XMinusZ] {
            assert!(o.is_involution(1e-12));
        }
        let bad = Observable::Custom(dense::mat2_scale(&dense::PAULI_X, 2.0));
        assert!(MeasurementSetting::new(vec![(bad, Observable::Z)]).is_err());
    }
}

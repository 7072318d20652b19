//! Generators for the four standard topologies and their closed-form
//! loss predictions.
//!
//! Vertex layout:
//! * ring: cycle `0–1–…–(n−1)–0`;
//! * star: center `0`, leaves `1..n`;
//! * two-centered GHZ: centers `0` and `1`; leaves `2..2+k` hang off `0`,
//!   leaves `2+k..n` off `1`, with `k = (n−2)/2`;
//! * dense center: clique on `0..n/2`, leaf `n/2 + c` attached to clique vertex `c`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::bell::{classical_bound, quantum_bound};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::loss::violates;
use crate::quad::Quad;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Ring,
    Star,
    TwoCenteredGhz,
    DenseCenter,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::Ring,
        FamilyKind::Star,
        FamilyKind::TwoCenteredGhz,
        FamilyKind::DenseCenter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Ring => "ring",
            FamilyKind::Star => "star",
            FamilyKind::TwoCenteredGhz => "two-centered-ghz",
            FamilyKind::DenseCenter => "dense-center",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            FamilyKind::Ring => "cycle on n >= 3 vertices",
            FamilyKind::Star => "one center joined to n-1 leaves (n >= 2)",
            FamilyKind::TwoCenteredGhz => "two adjacent centers with (n-2)/2 private leaves each (n >= 4, even)",
            FamilyKind::DenseCenter => "clique on n/2 vertices, one private leaf per clique vertex (n >= 4, even)",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidFamily(format!("unknown family `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: usize) -> Result<Self> {
        let ok = match kind {
            FamilyKind::Ring => n >= 3,
            FamilyKind::Star => n >= 2,
            FamilyKind::TwoCenteredGhz | FamilyKind::DenseCenter => n >= 4 && n.is_multiple_of(2),
        };
        if !ok {
            return Err(Error::InvalidFamily(format!(
                "{kind} needs {}, got n = {n}",
                kind.describe()
            )));
        }
        Ok(FamilySpec { kind, n })
    }

    /// Leaves attached to the given center or clique vertex.
    pub fn leaves_of(&self, vertex: usize) -> VertexSet {
        let n = self.n;
        match self.kind {
            FamilyKind::Ring => VertexSet::new(),
            FamilyKind::Star if vertex == 0 => (1..n).collect(),
            FamilyKind::Star => VertexSet::new(),
            FamilyKind::TwoCenteredGhz => {
                let k = (n - 2) / 2;
                match vertex {
                    0 => (2..2 + k).collect(),
                    1 => (2 + k..n).collect(),
                    _ => VertexSet::new(),
                }
            }
            FamilyKind::DenseCenter if vertex < n / 2 => VertexSet::singleton(n / 2 + vertex),
            FamilyKind::DenseCenter => VertexSet::new(),
        }
    }

    /// All degree-one vertices of the family.
    pub fn leaves(&self) -> VertexSet {
        match self.kind {
            FamilyKind::Ring => VertexSet::new(),
            FamilyKind::Star if self.n == 2 => VertexSet::singleton(1),
            FamilyKind::Star => (1..self.n).collect(),
            FamilyKind::TwoCenteredGhz => (2..self.n).collect(),
            FamilyKind::DenseCenter => (self.n / 2..self.n).collect(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={})", self.kind, self.n)
    }
}

pub fn generate(spec: &FamilySpec) -> Graph {
    let n = spec.n;
    let edges: Vec<(usize, usize)> = match spec.kind {
        FamilyKind::Ring => (0..n).map(|i| (i, (i + 1) % n)).collect(),
        FamilyKind::Star => (1..n).map(|i| (0, i)).collect(),
        FamilyKind::TwoCenteredGhz => {
            let mut e = vec![(0, 1)];
            e.extend(spec.leaves_of(0).iter().map(|l| (0, l)));
            e.extend(spec.leaves_of(1).iter().map(|l| (1, l)));
            e
        }
        FamilyKind::DenseCenter => {
            let h = n / 2;
            let mut e: Vec<_> = (0..h).flat_map(|i| (i + 1..h).map(move |j| (i, j))).collect();
            e.extend((0..h).map(|c| (c, h + c)));
            e
        }
    };
    Graph::new(n, &edges).expect("family invariants produce a simple graph")
}

/// Closed-form expectation for a family and loss size, with verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyPrediction {
    pub spec: FamilySpec,
    pub loss_size: usize,
    /// Canonical loss set the formula describes.
    pub loss: VertexSet,
    /// Root the formula is evaluated at.
    pub root: usize,
    pub expectation: Quad,
    pub bound_full: Quad,
    pub bound_induced: Quad,
    pub violates_full: bool,
    pub violates_induced: bool,
}

/// Closed-form expectation for `loss_size` lost leaves, within each formula's
/// validity range:
///
/// * ring: no loss only;
/// * star: no loss, or one leaf (`n ≥ 3`), giving `√2(N−2)`;
/// * two-centered GHZ: `1 ≤ |L| ≤ N/2 − 1` leaves of center `0`, root `1`:
///   `(2√2−1)n_max + N − 1 − √2 − |L|`;
/// * dense center: `0 ≤ |L| ≤ N/2 − 1` leaves of clique vertices `0..|L|`,
///   root `N/2 − 1`: `(2√2−1)n_max + N − 1 − (√2+1)|L|`.
pub fn family_prediction(spec: &FamilySpec, loss_size: usize) -> Result<FamilyPrediction> {
    let g = generate(spec);
    let n = spec.n as i64;
    let n_max = g.n_max() as i64;
    let size = loss_size as i64;
    let beta_q = quantum_bound(&g)?;
    let out_of_range = |why: &str| Err(Error::OutOfValidityRange(format!("{spec}, |L| = {loss_size}: {why}")));
    let (loss, root, expectation): (VertexSet, usize, Quad) = match spec.kind {
        FamilyKind::Ring if loss_size == 0 => (VertexSet::new(), 0, beta_q),
        FamilyKind::Ring => return out_of_range("every ring vertex is a root; only |L| = 0 has a formula"),
        FamilyKind::Star if loss_size == 0 => (VertexSet::new(), 0, beta_q),
        FamilyKind::Star if loss_size == 1 && spec.n >= 3 => {
            (VertexSet::singleton(spec.n - 1), 0, Quad::from_ints(0, n - 2))
        }
        FamilyKind::Star => return out_of_range("formula covers no loss or one leaf with n >= 3"),
        FamilyKind::TwoCenteredGhz => {
            if loss_size < 1 || 2 * loss_size > spec.n - 2 {
                return out_of_range("needs 1 <= |L| <= N/2 - 1");
            }
            let loss = spec.leaves_of(0).iter().take(loss_size).collect();
            (loss, 1, Quad::from_ints(n - 1 - n_max - size, 2 * n_max - 1))
        }
        FamilyKind::DenseCenter => {
            if 2 * loss_size > spec.n - 2 {
                return out_of_range("needs 0 <= |L| <= N/2 - 1");
            }
            let h = spec.n / 2;
            let loss = (0..loss_size).map(|c| h + c).collect();
            (loss, h - 1, Quad::from_ints(n - 1 - n_max - size, 2 * n_max - size))
        }
    };
    let bound_full = classical_bound(&g)?;
    let survivors = g.vertices().difference(&loss);
    let (induced, _) = g.induced_subgraph(&survivors)?;
    let bound_induced = classical_bound(&induced)?;
    Ok(FamilyPrediction {
        spec: *spec,
        loss_size,
        root,
        violates_full: violates(&expectation, Some(&bound_full)),
        violates_induced: violates(&expectation, Some(&bound_induced)),
        loss,
        expectation,
        bound_full,
        bound_induced,
    })
}

/// Same-root leaf tolerance of the two-centered GHZ family: `N/2 − 1`.
pub fn two_centered_tolerance(n: usize) -> usize {
    n / 2 - 1
}

/// Dense-center leaf tolerance against the induced bound: `⌊(√2−1)/√2 · N⌋`,
/// i.e. `⌊(1 − √2/2)·N⌋`, computed exactly.
pub fn dense_center_tolerance_induced(n: usize) -> BigInt {
    Quad::new(crate::quad::int(n as i64), crate::quad::ratio(-(n as i64), 2)).floor()
}

/// Dense-center leaf tolerance against the full-graph bound:
/// `⌊(√2−1)/(√2+1) · N⌋ = ⌊(3 − 2√2)·N⌋`.
pub fn dense_center_tolerance_full(n: usize) -> BigInt {
    Quad::from_ints(3 * n as i64, -2 * n as i64).floor()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(FamilySpec::new(FamilyKind::Ring, 2).is_err());
        assert!(FamilySpec::new(FamilyKind::Star, 1).is_err());
        assert!(FamilySpec::new(FamilyKind::TwoCenteredGhz, 7).is_err());
        assert!(FamilySpec::new(FamilyKind::DenseCenter, 2).is_err());
        assert!(FamilySpec::new(FamilyKind::DenseCenter, 4).is_ok());
        assert_eq!("dense-center".parse::<FamilyKind>().unwrap(), FamilyKind::DenseCenter);
        assert!("cube".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn generated_shapes() {
        let two = generate(&FamilySpec::new(FamilyKind::TwoCenteredGhz, 12).unwrap());
        assert_eq!(two.n_max(), 6);
        assert_eq!(two.roots().to_vec(), vec![0, 1]);

        let dense = generate(&FamilySpec::new(FamilyKind::DenseCenter, 12).unwrap());
        assert_eq!(dense.n(), 12);
        assert_eq!(dense.edge_count(), 21);
        assert_eq!(dense.n_max(), 6);
        assert_eq!(dense.roots().to_vec(), vec![0, 1, 2, 3, 4, 5]);

        let tri = generate(&FamilySpec::new(FamilyKind::Ring, 3).unwrap());
        assert_eq!(tri.edge_count(), 3);
        assert_eq!(tri.roots().len(), 3);
    }

    #[test]
    fn predictions_at_twelve() {
        let two = FamilySpec::new(FamilyKind::TwoCenteredGhz, 12).unwrap();
        assert_eq!(family_prediction(&two, 1).unwrap().expectation, Quad::from_ints(4, 11));
        let p5 = family_prediction(&two, 5).unwrap();
        assert_eq!(p5.expectation, Quad::from_ints(0, 11));
        assert!(p5.violates_induced && !p5.violates_full);
        assert!(family_prediction(&two, 0).is_err());
        assert!(family_prediction(&two, 6).is_err());

        let dense = FamilySpec::new(FamilyKind::DenseCenter, 12).unwrap();
        let p3 = family_prediction(&dense, 3).unwrap();
        assert_eq!(p3.expectation, Quad::from_ints(2, 9));
        assert_eq!(p3.bound_induced, Quad::from_ints(14, 0));
        assert!(p3.violates_induced);
        let p4 = family_prediction(&dense, 4).unwrap();
        assert_eq!(p4.expectation, Quad::from_ints(1, 8));
        assert_eq!(p4.bound_induced, Quad::from_ints(13, 0));
        assert!(!p4.violates_induced);
        assert!(family_prediction(&dense, 6).is_err());
    }

    #[test]
    fn tolerance_thresholds() {
        assert_eq!(two_centered_tolerance(12), 5);
        assert_eq!(dense_center_tolerance_induced(12), BigInt::from(3));
        assert_eq!(dense_center_tolerance_full(12), BigInt::from(2));
        assert_eq!(dense_center_tolerance_induced(8), BigInt::from(2));
        assert_eq!(dense_center_tolerance_induced(10), BigInt::from(2));
    }
}

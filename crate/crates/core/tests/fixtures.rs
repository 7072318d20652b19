//! Hand-encoded graphs: two adjacent roots, the same graph after one loss,
//! and a tree with nonempty W and T sets.

use bellgraph::bell::{bell_stabilizer_sum, classical_bound};
use bellgraph::loss::{expectation_after_loss, violation_report, wt_sets};
use bellgraph::oracle::{graph_state, LossyState, Replacement};
use bellgraph::{BoundMode, Graph, LossSet, Quad, VertexSet};

fn fixture(name: &str) -> Graph {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    Graph::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Sorted degree sequence; cheap isomorphism invariant.
fn degrees(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.n()).map(|i| g.degree(i).unwrap()).collect();
    d.sort_unstable();
    d
}

#[test]
fn two_root_example() {
    let g = fixture("two_roots.graph");
    assert_eq!(g.n_max(), 4);
    assert_eq!(g.roots().to_vec(), vec![0, 1]);
    assert!(g.is_connected());
}

#[test]
fn removing_a_vertex_gives_the_smaller_fixture() {
    let a = fixture("two_roots.graph");
    let b = fixture("two_roots_minus_5.graph");
    let keep = a.vertices().difference(&VertexSet::singleton(5));
    let (induced, map) = a.induced_subgraph(&keep).unwrap();
    assert_eq!(induced, b);
    assert_eq!(degrees(&induced), degrees(&b));
    assert_eq!(map.forward(6), Some(5));
    assert_eq!(map.forward(5), None);
    assert_eq!(b.roots().to_vec(), vec![0]);
    assert!(classical_bound(&b).unwrap() < classical_bound(&a).unwrap());
}

#[test]
fn wt_sets_on_a_tree() {
    let g = fixture("wt_example.graph");
    let loss = LossSet::from_slice(&g, &[5]).unwrap();
    let wt = wt_sets(&g, 0, &loss).unwrap();
    assert_eq!(wt.w.to_vec(), vec![2, 3, 4]);
    assert_eq!(wt.t.to_vec(), vec![7, 8]);
    assert!(!wt.root_hit);
    let value = expectation_after_loss(&g, 0, &loss).unwrap();
    assert_eq!(value, Quad::from_ints(2, 7));

    let state = graph_state(&g).unwrap();
    let lossy = LossyState::new(&state, loss.vertices().clone(), Replacement::Zero).unwrap();
    let got = lossy
        .stabilizer_sum_expectation(&bell_stabilizer_sum(&g, 0).unwrap(), None)
        .unwrap();
    assert!((got - value.to_f64()).abs() < 1e-9);

    let rep = violation_report(&g, &loss).unwrap();
    assert!(rep.any_violation(BoundMode::Induced));
    assert!(!rep.any_violation(BoundMode::Full));
}

#[test]
fn two_root_example_with_two_losses() {
    let g = fixture("two_roots.graph");
    let loss = LossSet::from_slice(&g, &[2, 5]).unwrap();
    let rep = violation_report(&g, &loss).unwrap();
    let by_root: Vec<(usize, usize, usize, bool)> = rep
        .records
        .iter()
        .map(|r| (r.root, r.w_size, r.t_size, r.root_hit))
        .collect();
    assert_eq!(by_root, vec![(0, 1, 2, true), (1, 2, 1, true)]);
}

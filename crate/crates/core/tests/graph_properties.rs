use proptest::prelude::*;

use bellgraph::pauli::{stabilizer, stabilizers};
use bellgraph::verify::{loss_sets, random_graphs};
use bellgraph::{Graph, VertexSet};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            let edges: Vec<_> = pairs.iter().zip(&mask).filter(|(_, &m)| m).map(|(e, _)| *e).collect();
            Graph::new(n, &edges).unwrap()
        })
    })
}

fn graph_and_subset(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        proptest::collection::vec(any::<bool>(), n).prop_map(move |bits| {
            let keep = bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
            (g.clone(), keep)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn degree_sum_is_twice_edge_count((g, keep) in graph_and_subset(12)) {
        let sum: usize = (0..g.n()).map(|i| g.degree(i).unwrap()).sum();
        prop_assert_eq!(sum, 2 * g.edge_count());
        if keep.is_empty() {
            prop_assert_eq!(g.induced_subgraph(&keep).unwrap_err(), bellgraph::Error::EmptyKeepSet);
            return Ok(());
        }
        let (h, map) = g.induced_subgraph(&keep).unwrap();
        let sum: usize = (0..h.n()).map(|i| h.degree(i).unwrap()).sum();
        prop_assert_eq!(sum, 2 * h.edge_count());
        for (a, b) in h.edges() {
            prop_assert!(g.has_edge(map.backward(a), map.backward(b)));
        }
        for (a, b) in g.edges() {
            if let (Some(x), Some(y)) = (map.forward(a), map.forward(b)) {
                prop_assert!(h.has_edge(x, y));
            }
        }
    }

    #[test]
    fn keeping_everything_is_identity(g in graph(12)) {
        let (h, map) = g.induced_subgraph(&g.vertices()).unwrap();
        prop_assert_eq!(h, g);
        prop_assert!(map.is_identity());
    }

    #[test]
    fn roots_have_maximal_degree(g in graph(12)) {
        let roots = g.roots();
        prop_assert!(!roots.is_empty());
        for i in 0..g.n() {
            prop_assert_eq!(roots.contains(i), g.degree(i).unwrap() == g.n_max());
        }
    }

    #[test]
    fn text_formats_round_trip(g in graph(12)) {
        prop_assert_eq!(Graph::parse(&g.to_edge_list()).unwrap(), g.clone());
        prop_assert_eq!(Graph::parse(&g.to_json()).unwrap(), g.clone());
        prop_assert_eq!(Graph::parse(&g.to_json()).unwrap().fingerprint(), g.fingerprint());
    }

    #[test]
    fn stabilizers_commute_pairwise(g in graph(10)) {
        let s = stabilizers(&g);
        for a in &s {
            for b in &s {
                prop_assert!(a.commutes(b).unwrap());
            }
        }
    }

    #[test]
    fn stabilizer_products_stay_hermitian(g in graph(8)) {
        let s = stabilizers(&g);
        let mut p = s[0].clone();
        for t in &s[1..] {
            p = p.mul(t).unwrap();
            prop_assert!(p.sign().is_some(), "product of commuting stabilizers has a real sign");
        }
    }
}

#[test]
fn restriction_matches_induced_stabilizer() {
    let mut checked = 0;
    for g in random_graphs(60, 2..=8, 42) {
        for lost in loss_sets(&g, 2, usize::MAX) {
            let keep = g.vertices().difference(&lost);
            let (h, map) = g.induced_subgraph(&keep).unwrap();
            for i in keep.iter() {
                let (restricted, _) = stabilizer(&g, i).unwrap().restrict(&lost).unwrap();
                let local = map.forward(i).unwrap();
                assert_eq!(
                    restricted,
                    stabilizer(&h, local).unwrap(),
                    "S_{i} on {} minus {lost}",
                    g.fingerprint()
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn parse_errors_carry_positions() {
    let err = Graph::parse("n=3\n0 1\n1 x\n").unwrap_err();
    assert!(
        matches!(err, bellgraph::Error::Parse { line: 3, column: 3, .. }),
        "{err}"
    );
    let err = Graph::parse("{\"n\": 3, \"edges\": [[0, 1], [1]]}").unwrap_err();
    assert!(matches!(err, bellgraph::Error::Parse { line: 1, .. }), "{err}");
    assert!(Graph::parse("n=2\n0 0\n").is_err());
    assert!(Graph::parse("n=2\n0 1\n1 0\n").is_err());
}

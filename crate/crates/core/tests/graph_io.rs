use proptest::prelude::*;
use wsat::graph::{Edge, EdgeSet, Graph};
use wsat::io::{parse_edge_list, parse_graph6, parse_graph_auto, serialize_edge_list, serialize_graph6};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        g.add_edge(u, v);
                    }
                    i += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #[test]
    fn graph6_round_trip(g in arb_graph(12)) {
        let s = serialize_graph6(&g);
        prop_assert_eq!(parse_graph6(&s).unwrap(), g.clone());
        prop_assert_eq!(parse_graph_auto(&s).unwrap(), g);
    }

    #[test]
    fn edge_list_round_trip(g in arb_graph(12)) {
        let s = serialize_edge_list(&g);
        prop_assert_eq!(parse_edge_list(&s).unwrap(), g.clone());
        prop_assert_eq!(parse_graph_auto(&s).unwrap(), g);
    }

    #[test]
    fn edge_count_tracks_mutations(n in 2usize..70, ops in proptest::collection::vec((any::<bool>(), 0usize..70, 0usize..70), 0..200)) {
        let mut g = Graph::empty(n);
        for (add, a, b) in ops {
            let (a, b) = (a % n, b % n);
            if a == b {
                continue;
            }
            if add {
                g.add_edge(a, b);
            } else {
                g.remove_edge(a, b);
            }
            prop_assert_eq!(g.edge_count(), g.bit_edge_count());
            prop_assert_eq!(g.has_edge(a, b), g.has_edge(b, a));
        }
        prop_assert_eq!(g.edges().count() + g.non_edges().count(), g.max_edges());
    }

    #[test]
    fn induced_subgraph_keeps_exactly_inner_edges(g in arb_graph(10), keep in proptest::collection::vec(any::<bool>(), 10)) {
        let vs: Vec<usize> = (0..g.n()).filter(|&v| keep[v]).collect();
        let sub = g.induced_subgraph(&vs);
        prop_assert_eq!(sub.n(), vs.len());
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                prop_assert_eq!(sub.has_edge(i, j), g.has_edge(vs[i], vs[j]));
            }
        }
    }

    #[test]
    fn edge_set_round_trip(g in arb_graph(15)) {
        let s = EdgeSet::from_graph(&g);
        prop_assert_eq!(s.len(), g.edge_count());
        prop_assert_eq!(s.iter().collect::<Vec<Edge>>(), g.edges().collect::<Vec<Edge>>());
        prop_assert_eq!(s.to_graph(), g);
    }
}

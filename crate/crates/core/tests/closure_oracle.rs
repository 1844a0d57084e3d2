use proptest::prelude::*;
use rayon::prelude::*;
use wsat::engine::{close, ClosureOptions};
use wsat::experiments::{rng_for, sample_gnp_with};
use wsat::graph::{make_clique, Graph};
use wsat::oracle::{enumerate_labeled_graphs, graph_from_mask, naive_close, sequential_close};

fn engine_final(g: &Graph, h: &Graph) -> Graph {
    close(g, h, &ClosureOptions::default()).final_graph
}

#[test]
fn engine_matches_naive_on_all_five_vertex_graphs() {
    for r in [4, 5] {
        let h = make_clique(r).unwrap();
        let graphs: Vec<Graph> = enumerate_labeled_graphs(5).collect();
        assert_eq!(graphs.len(), 1024);
        let bad: Vec<usize> = graphs
            .par_iter()
            .enumerate()
            .filter(|(_, g)| {
                let trace = close(g, &h, &ClosureOptions::default());
                trace.validate(&h).is_err() || trace.final_graph != naive_close(g, &h)
            })
            .map(|(i, _)| i)
            .collect();
        assert!(bad.is_empty(), "K{r}: masks {bad:?}");
    }
}

#[test]
fn engine_matches_naive_on_random_ten_vertex_graphs() {
    let h = make_clique(5).unwrap();
    for (i, p) in [0.3, 0.5, 0.7].into_iter().enumerate() {
        let bad: Vec<u64> = (0..100u64)
            .into_par_iter()
            .filter(|&t| {
                let g = sample_gnp_with(10, p, &mut rng_for(77, (i as u64) << 32 | t));
                engine_final(&g, &h) != naive_close(&g, &h)
            })
            .collect();
        assert!(bad.is_empty(), "p={p}: trials {bad:?}");
    }
}

#[test]
fn dirty_set_and_full_retest_agree() {
    let h = make_clique(4).unwrap();
    let full = ClosureOptions {
        dirty_set: false,
        ..Default::default()
    };
    for t in 0..60 {
        let g = sample_gnp_with(24, 0.18, &mut rng_for(5, t));
        let a = close(&g, &h, &ClosureOptions::default());
        let b = close(&g, &h, &full);
        assert_eq!(a, b, "trial {t}");
    }
}

#[test]
fn nested_graphs_have_nested_closures() {
    let h = make_clique(4).unwrap();
    for t in 0..500 {
        let mut rng = rng_for(9, t);
        let small = sample_gnp_with(12, 0.25, &mut rng);
        let mut big = small.clone();
        for e in sample_gnp_with(12, 0.1, &mut rng).edges() {
            big.add_edge(e.u, e.v);
        }
        assert!(engine_final(&small, &h).is_subgraph_of(&engine_final(&big, &h)), "pair {t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequential_and_round_closures_agree(mask in 0u64..1 << 21, r in 3usize..=5) {
        let g = graph_from_mask(7, mask);
        let h = make_clique(r).unwrap();
        prop_assert_eq!(engine_final(&g, &h), sequential_close(&g, &h));
    }

    #[test]
    fn closure_is_idempotent_and_extensive(mask in 0u64..1 << 28, r in 3usize..=5) {
        let g = graph_from_mask(8, mask);
        let h = make_clique(r).unwrap();
        let once = engine_final(&g, &h);
        prop_assert!(g.is_subgraph_of(&once));
        let twice = close(&once, &h, &ClosureOptions::default());
        prop_assert_eq!(twice.round_count(), 0);
        prop_assert_eq!(twice.final_graph, once);
    }

    #[test]
    fn every_certificate_is_valid(mask in 0u64..1 << 28) {
        let g = graph_from_mask(8, mask);
        let h = make_clique(4).unwrap();
        let trace = close(&g, &h, &ClosureOptions::default());
        prop_assert!(trace.validate(&h).is_ok());
    }
}

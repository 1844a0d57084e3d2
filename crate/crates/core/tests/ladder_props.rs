use proptest::prelude::*;
use wsat::engine::{close, ClosureOptions};
use wsat::experiments::{rng_for, sample_gnp_with};
use wsat::graph::{make_clique, Edge, Graph};
use wsat::ladder::{
    build_ladder, count_induced_ladders_at, has_induced_ladder_at, ladder_closure_check, verify_ladder_lemma,
    verify_ladder_weak_bound, Ladder, LadderSpec,
};
use wsat::oracle::graph_from_mask;
use wsat::pattern::analyze;

fn clique_ladder(r: usize, h: usize) -> Ladder {
    build_ladder(&LadderSpec::canonical(&make_clique(r).unwrap(), h).unwrap()).unwrap()
}

/// Brute force over injective maps of the ladder's free vertices.
fn naive_count(host: &Graph, pair: (usize, usize), l: &Ladder) -> u64 {
    fn go(host: &Graph, l: &Graph, map: &mut Vec<usize>) -> u64 {
        if map.len() == l.n() {
            let ok = (0..l.n()).all(|a| (a + 1..l.n()).all(|b| l.has_edge(a, b) == host.has_edge(map[a], map[b])));
            return u64::from(ok);
        }
        let mut total = 0;
        for c in 0..host.n() {
            if !map.contains(&c) {
                map.push(c);
                total += go(host, l, map);
                map.pop();
            }
        }
        total
    }
    go(host, &l.graph, &mut vec![pair.0, pair.1])
}

#[test]
fn ladder_lemma_for_k5_and_k6() {
    for (r, max_h) in [(5, 3), (6, 2)] {
        let stats = analyze(&make_clique(r).unwrap()).unwrap();
        for h in 1..=max_h {
            let rep = verify_ladder_lemma(&clique_ladder(r, h), &stats).unwrap();
            assert!(rep.passed(), "K{r} h={h}: {:?}", rep.violations);
            // x = 0 sets and the h - 1 proper step prefixes
            assert_eq!(rep.equality_cases, 4 + (h as u64 - 1), "K{r} h={h}");
        }
    }
}

#[test]
fn k4_weak_bound() {
    let stats = analyze(&make_clique(4).unwrap()).unwrap();
    for h in 1..=4 {
        let rep = verify_ladder_weak_bound(&clique_ladder(4, h), &stats).unwrap();
        assert!(rep.passed(), "h={h}: {:?}", rep.violations);
    }
}

#[test]
fn closure_adds_rungs_top_down() {
    for (r, h) in [(5, 3), (4, 4), (6, 2), (5, 1)] {
        let l = clique_ladder(r, h);
        let k = make_clique(r).unwrap();
        assert!(ladder_closure_check(&l, &k).passed());
        let trace = close(&l.graph, &k, &ClosureOptions::default());
        assert_eq!(trace.round_of(Edge::new(0, 1)), Some(h));
    }
}

#[test]
fn induced_count_matches_brute_force() {
    let ladders = [clique_ladder(4, 1), clique_ladder(4, 2), clique_ladder(5, 1)];
    for t in 0..40 {
        let host = sample_gnp_with(8, 0.55, &mut rng_for(21, t));
        for l in &ladders {
            for pair in [(0, 1), (1, 0), (2, 5)] {
                let fast = count_induced_ladders_at(&host, pair, l);
                assert_eq!(fast, naive_count(&host, pair, l), "trial {t} pair {pair:?}");
                assert_eq!(has_induced_ladder_at(&host, pair, l), fast > 0);
            }
        }
    }
}

#[test]
fn ladder_embedded_in_larger_host() {
    let l = clique_ladder(5, 2);
    let mut host = Graph::empty(12);
    for e in l.graph.edges() {
        host.add_edge(e.u + 2, e.v + 2);
    }
    assert!(count_induced_ladders_at(&host, (2, 3), &l) > 0);
    assert!(!has_induced_ladder_at(&host, (0, 1), &l));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ladder_size_formulas(mask in 0u64..1 << 28, h in 1usize..=5) {
        let pat = graph_from_mask(8, mask);
        let spec = LadderSpec::canonical(&pat, h);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let l = build_ladder(&spec).unwrap();
        let (vh, eh) = (pat.n(), pat.edge_count());
        prop_assert_eq!(l.graph.n(), (vh - 2) * h + 2);
        prop_assert_eq!(l.size, (vh - 2) * h);
        prop_assert_eq!(l.graph.edge_count(), (eh - 2) * h + 1);
        prop_assert!(!l.graph.has_edge(0, 1));
        for (i, r) in l.rungs.iter().enumerate() {
            prop_assert_eq!(l.graph.has_edge(r.u, r.v), i == h);
        }
        for i in 1..h {
            let shared = l.steps[i - 1].iter().filter(|v| l.steps[i].contains(v)).count();
            prop_assert_eq!(shared, 2);
        }
    }
}

use rayon::prelude::*;
use wsat::experiments::{rng_for, sample_gnp_with};
use wsat::graph::make_clique;
use wsat::pattern::analyze;
use wsat::witness::{close_with_witnesses, excess_histogram, rea_replay, verify_run};

#[test]
fn witness_checks_hold_on_random_graphs() {
    for (r, n, p) in [(4, 16, 0.22), (5, 14, 0.45)] {
        let h = make_clique(r).unwrap();
        let stats = analyze(&h).unwrap();
        let failures: Vec<String> = (0..30u64)
            .into_par_iter()
            .flat_map_iter(|t| {
                let g = sample_gnp_with(n, p, &mut rng_for(40 + r as u64, t));
                verify_run(&g, &h, &stats)
                    .unwrap()
                    .into_iter()
                    .flat_map(move |rep| rep.violations.into_iter().map(move |v| format!("K{r} trial {t}: {v}")))
            })
            .collect();
        assert!(failures.is_empty(), "{failures:?}");
    }
}

#[test]
fn excess_is_never_negative() {
    let h = make_clique(4).unwrap();
    for t in 0..20 {
        let g = sample_gnp_with(14, 0.25, &mut rng_for(3, t));
        let (_, w) = close_with_witnesses(&g, &h);
        for ((_, ell), _) in excess_histogram(&w) {
            assert!(!ell.is_negative());
        }
    }
}

#[test]
fn witnesses_are_deterministic() {
    let h = make_clique(4).unwrap();
    let g = sample_gnp_with(18, 0.2, &mut rng_for(1, 1));
    let (t1, w1) = close_with_witnesses(&g, &h);
    let (t2, w2) = close_with_witnesses(&g, &h);
    assert_eq!(w1, w2);
    for target in w1.keys() {
        assert_eq!(
            rea_replay(*target, &w1, &t1, &h).unwrap(),
            rea_replay(*target, &w2, &t2, &h).unwrap()
        );
    }
}

#[test]
fn red_edges_are_closure_edges_in_witness_span() {
    let h = make_clique(5).unwrap();
    for t in 0..10 {
        let g = sample_gnp_with(13, 0.5, &mut rng_for(8, t));
        let (trace, w) = close_with_witnesses(&g, &h);
        for rec in w.values().filter(|r| r.round > 0) {
            let rea = rea_replay(rec.target, &w, &trace, &h).unwrap();
            for e in rea.red_edges() {
                assert!(!g.has_edge(e.u, e.v));
                assert!(trace.final_graph.has_edge(e.u, e.v));
            }
            assert_eq!(rea.red_edges().last(), Some(&rec.target));
        }
    }
}

use wsat::experiments::{bisect_pc, percolation_curve, curve_monotonicity_violations, TrialConfig};
use wsat::graph::make_clique;
use wsat::pattern::analyze;

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap()
}

#[test]
fn curve_is_independent_of_thread_count() {
    let cfg = TrialConfig {
        n: 30,
        pattern: make_clique(4).unwrap(),
        p_grid: vec![0.1, 0.2, 0.3],
        trials: 60,
        master_seed: 12,
    };
    let one = pool(1).install(|| percolation_curve(&cfg).unwrap());
    let four = pool(4).install(|| percolation_curve(&cfg).unwrap());
    assert_eq!(one, four);
    assert!(curve_monotonicity_violations(&one).is_empty());
}

#[test]
fn bisection_is_independent_of_thread_count() {
    let h = make_clique(3).unwrap();
    let stats = analyze(&h).unwrap();
    let one = pool(1).install(|| bisect_pc(40, &h, Some(&stats), 100, 0.1, 3).unwrap());
    let three = pool(3).install(|| bisect_pc(40, &h, Some(&stats), 100, 0.1, 3).unwrap());
    assert_eq!(one, three);
    // common streams make the probe fractions monotone in p
    let mut probes = one.probes.clone();
    probes.sort_by(|a, b| a.p.total_cmp(&b.p));
    assert!(probes.windows(2).all(|w| w[0].successes <= w[1].successes));
}

//! Seeded Monte Carlo experiments on `G(n, p)`.
//!
//! Every trial draws from its own `ChaCha8Rng`, keyed by
//! `ChaCha8Rng::seed_from_u64(master_seed)` and a 64-bit stream id set with
//! `set_stream`, so results do not depend on the worker count. A sample
//! includes pair `(u, v)` (lexicographic order) when the next uniform `f64`
//! is below `p`; the same stream therefore gives nested graphs as `p` grows.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{close_compiled, ClosureOptions, CompiledPattern};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::ladder::{build_ladder, count_induced_ladders_at, LadderSpec};
use crate::pattern::PatternStats;

/// Normal quantile used for every 95% interval.
pub const Z95: f64 = 1.959_963_984_540_054;

pub fn rng_for(master_seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

pub fn sample_gnp_with<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Graph {
    sample_gnp_with(n, p, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let f = successes as f64 / t;
    let z2 = z * z;
    let centre = (f + z2 / (2.0 * t)) / (1.0 + z2 / t);
    let half = z * (f * (1.0 - f) / t + z2 / (4.0 * t * t)).sqrt() / (1.0 + z2 / t);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn percolates_compiled(g: &Graph, pat: &CompiledPattern) -> bool {
    close_compiled(g, pat, &ClosureOptions::default()).percolates()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeightRounding {
    Nearest,
    Floor,
}

/// `h = beta ln n`, rounded, at least 1.
pub fn ladder_height(n: usize, beta: f64, rounding: HeightRounding) -> usize {
    let raw = beta * (n as f64).ln();
    let h = match rounding {
        HeightRounding::Nearest => raw.round(),
        HeightRounding::Floor => raw.floor(),
    };
    (h as usize).max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialConfig {
    pub n: usize,
    pub pattern: Graph,
    pub p_grid: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(p) = self.p_grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidConfig(format!("p = {p} is outside [0, 1]")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvePoint {
    pub n: usize,
    pub p: f64,
    pub trials: u64,
    pub successes: u64,
    pub fraction: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl CurvePoint {
    fn new(n: usize, p: f64, successes: u64, trials: u64) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(successes, trials, Z95);
        CurvePoint {
            n,
            p,
            trials,
            successes,
            fraction: successes as f64 / trials as f64,
            ci_lo,
            ci_hi,
        }
    }

    fn std_err(&self) -> f64 {
        (self.fraction * (1.0 - self.fraction) / self.trials as f64).sqrt()
    }
}

/// Trial `t` at grid index `i` uses stream `(i << 32) | t`.
pub fn percolation_curve(cfg: &TrialConfig) -> Result<Vec<CurvePoint>> {
    cfg.validate()?;
    let pat = CompiledPattern::new(&cfg.pattern);
    Ok(cfg
        .p_grid
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let successes = (0..cfg.trials)
                .into_par_iter()
                .filter(|&t| {
                    let g = sample_gnp_with(cfg.n, p, &mut rng_for(cfg.master_seed, (i as u64) << 32 | t));
                    percolates_compiled(&g, &pat)
                })
                .count() as u64;
            CurvePoint::new(cfg.n, p, successes, cfg.trials)
        })
        .collect())
}

/// Pairs of grid points (sorted by `p`) where the fraction drops by more
/// than two combined standard errors.
pub fn curve_monotonicity_violations(points: &[CurvePoint]) -> Vec<String> {
    let mut sorted: Vec<&CurvePoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.p.total_cmp(&b.p));
    let mut out = Vec::new();
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            let se = (a.std_err().powi(2) + b.std_err().powi(2)).sqrt();
            if b.fraction < a.fraction - 2.0 * se {
                out.push(format!("fraction {} at p={} < {} at p={}", b.fraction, b.p, a.fraction, a.p));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Probe {
    pub p: f64,
    pub successes: u64,
    pub trials: u64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PcEstimate {
    pub n: usize,
    pub p_hat: f64,
    /// Final bracket `[lo, hi]`.
    pub ci: (f64, f64),
    pub trials_per_probe: u64,
    pub probes: Vec<Probe>,
    /// Set when the bracket width fell below `tol * p_hat`; unset when the
    /// search stopped because the midpoint was statistically at 1/2.
    pub converged: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

const MIN_BISECT_TRIALS: u64 = 100;
const MAX_PROBES: usize = 200;

/// Median threshold search. Every probe reuses the same `trials` streams
/// (`0..trials`), so the sampled graphs are nested in `p` and the estimated
/// fraction is monotone.
pub fn bisect_pc(n: usize, h: &Graph, stats: Option<&PatternStats>, trials: u64, tol: f64, master_seed: u64) -> Result<PcEstimate> {
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidConfig("tolerance must be positive".into()));
    }
    let pat = CompiledPattern::new(h);
    let mut probes: Vec<Probe> = Vec::new();
    let run = |probes: &mut Vec<Probe>, p: f64| -> u64 {
        let successes = (0..trials)
            .into_par_iter()
            .filter(|&t| percolates_compiled(&sample_gnp_with(n, p, &mut rng_for(master_seed, t)), &pat))
            .count() as u64;
        probes.push(Probe {
            p,
            successes,
            trials,
            fraction: successes as f64 / trials as f64,
        });
        successes
    };
    let above = |s: u64| 2 * s >= trials;
    let mut warnings = Vec::new();
    if trials < MIN_BISECT_TRIALS {
        warnings.push(format!("{trials} trials per probe is below {MIN_BISECT_TRIALS}"));
    }

    if above(run(&mut probes, 0.0)) {
        return Ok(PcEstimate {
            n,
            p_hat: 0.0,
            ci: (0.0, 0.0),
            trials_per_probe: trials,
            probes,
            converged: true,
            warnings,
        });
    }
    let marker = stats
        .and_then(|s| s.lambda)
        .map(|l| (n as f64).powf(-1.0 / l.to_f64()))
        .unwrap_or(0.5)
        .clamp(f64::MIN_POSITIVE, 1.0);
    let (mut lo, mut hi);
    if above(run(&mut probes, marker)) {
        hi = marker;
        lo = marker / 2.0;
        while above(run(&mut probes, lo)) && probes.len() < MAX_PROBES {
            hi = lo;
            lo /= 2.0;
        }
    } else {
        lo = marker;
        hi = (marker * 2.0).min(1.0);
        while !above(run(&mut probes, hi)) && hi < 1.0 && probes.len() < MAX_PROBES {
            lo = hi;
            hi = (hi * 2.0).min(1.0);
        }
    }

    let mut converged = false;
    let mut p_hat = (lo + hi) / 2.0;
    while probes.len() < MAX_PROBES {
        let mid = (lo + hi) / 2.0;
        p_hat = mid;
        if hi - lo < tol * mid {
            converged = true;
            break;
        }
        let s = run(&mut probes, mid);
        let (ci_lo, ci_hi) = wilson_interval(s, trials, Z95);
        if ci_lo <= 0.5 && 0.5 <= ci_hi {
            break;
        }
        if above(s) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if probes.len() >= MAX_PROBES {
        warnings.push(format!("stopped after {MAX_PROBES} probes"));
    }
    Ok(PcEstimate {
        n,
        p_hat,
        ci: (lo, hi),
        trials_per_probe: trials,
        probes,
        converged,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TheoryMarkers {
    /// `n^{-1/lambda}`
    pub upper_order: f64,
    /// `n^{-1/lambda_*} (ln n)^{1/lambda_* - 1}`
    pub lower_order: f64,
}

pub fn theory_markers(n: usize, stats: &PatternStats) -> Result<TheoryMarkers> {
    let (l, ls) = match (stats.lambda, stats.lambda_star) {
        (Some(l), Some(ls)) => (l.to_f64(), ls.to_f64()),
        _ => return Err(Error::LambdaUndefined),
    };
    let nf = n as f64;
    Ok(TheoryMarkers {
        upper_order: nf.powf(-1.0 / l),
        lower_order: nf.powf(-1.0 / ls) * nf.ln().powf(1.0 / ls - 1.0),
    })
}

/// `ln E N_k`, or `None` when the expectation is exactly zero.
pub fn log_expected_ladder_count(n: usize, p: f64, spec: &LadderSpec) -> Option<f64> {
    let vh = spec.pattern.n();
    let k = (vh - 2) * spec.height;
    if k + 2 > n {
        return None;
    }
    let edges = (spec.pattern.edge_count() - 2) * spec.height + 1;
    let pairs = (k + 2) * (k + 1) / 2;
    let non_edges = pairs - edges;
    if p <= 0.0 || (p >= 1.0 && non_edges > 0) {
        return None;
    }
    let falling: f64 = (0..k).map(|i| ((n - 2 - i) as f64).ln()).sum();
    let tail = if non_edges == 0 { 0.0 } else { non_edges as f64 * (-p).ln_1p() };
    Some(falling + edges as f64 * p.ln() + tail)
}

/// `(n-2)_k p^{lambda k + 1} (1-p)^{C(k+2,2) - (lambda k + 1)}`; may be `inf`
/// when the count overflows an `f64`.
pub fn expected_ladder_count(n: usize, p: f64, spec: &LadderSpec) -> f64 {
    log_expected_ladder_count(n, p, spec).map_or(0.0, f64::exp)
}

/// `1 - 1/(alpha^{v_H - 2} - 1)`.
pub fn gamma(alpha: f64, v_h: usize) -> f64 {
    1.0 - 1.0 / (alpha.powi(v_h as i32 - 2) - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LadderExperimentConfig {
    pub n: usize,
    pub pattern: Graph,
    pub p: f64,
    pub height: usize,
    pub trials: u64,
    pub master_seed: u64,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
}

impl LadderExperimentConfig {
    /// `p = (alpha/n)^{1/lambda}`, `h` from `beta ln n`.
    pub fn from_params(
        n: usize,
        pattern: &Graph,
        stats: &PatternStats,
        alpha: f64,
        beta: f64,
        rounding: HeightRounding,
        trials: u64,
        master_seed: u64,
    ) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0) {
            return Err(Error::InvalidConfig("alpha and beta must be positive".into()));
        }
        let lambda = stats.lambda.ok_or(Error::LambdaUndefined)?.to_f64();
        Ok(LadderExperimentConfig {
            n,
            pattern: pattern.clone(),
            p: (alpha / n as f64).powf(1.0 / lambda).min(1.0),
            height: ladder_height(n, beta, rounding),
            trials,
            master_seed,
            alpha: Some(alpha),
            beta: Some(beta),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LadderExperimentReport {
    pub n: usize,
    pub p: f64,
    pub height: usize,
    pub size: usize,
    pub trials: u64,
    /// Fraction of samples where `(0, 1)` is the base of an induced ladder.
    pub base_frequency: f64,
    pub base_ci: (f64, f64),
    /// Fraction of samples where `(0, 1)` is a non-edge in the closure.
    pub closure_frequency: f64,
    /// Samples with an induced ladder at `(0, 1)` but `(0, 1)` outside the closure.
    pub dominance_violations: u64,
    pub mean_count: f64,
    pub count_std_err: f64,
    pub expected_count: f64,
    /// `(mean - expected) / std_err`.
    pub z_score: f64,
    pub gamma: Option<f64>,
    /// `ln 2 < 1/(lambda beta)`
    pub lower_constraint: Option<bool>,
    /// `1/(lambda beta) < (v_H - 2) ln alpha`
    pub upper_constraint: Option<bool>,
}

/// Trial `t` uses stream `t`.
pub fn ladder_base_experiment(cfg: &LadderExperimentConfig, stats: &PatternStats) -> Result<LadderExperimentReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidConfig("trials must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&cfg.p) {
        return Err(Error::InvalidConfig(format!("p = {} is outside [0, 1]", cfg.p)));
    }
    let spec = LadderSpec::canonical(&cfg.pattern, cfg.height)?;
    let ladder = build_ladder(&spec)?;
    if ladder.graph.n() > cfg.n {
        return Err(Error::InvalidConfig(format!(
            "ladder on {} vertices does not fit in n = {}",
            ladder.graph.n(),
            cfg.n
        )));
    }
    let pat = CompiledPattern::new(&cfg.pattern);
    let base = Edge::new(0, 1);
    // (based, closed, violation, count, count^2)
    let (based, closed, violations, sum, sum_sq) = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let g = sample_gnp_with(cfg.n, cfg.p, &mut rng_for(cfg.master_seed, t));
            let count = count_induced_ladders_at(&g, (0, 1), &ladder);
            let in_closure = !g.has_edge(0, 1)
                && close_compiled(&g, &pat, &ClosureOptions::default())
                    .final_graph
                    .has_edge(base.u, base.v);
            let c = count as u128;
            (u64::from(count > 0), u64::from(in_closure), u64::from(count > 0 && !in_closure), c, c * c)
        })
        .reduce(
            || (0, 0, 0, 0, 0),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3, a.4 + b.4),
        );
    let t = cfg.trials as f64;
    let mean = sum as f64 / t;
    let var = if cfg.trials > 1 {
        ((sum_sq as f64) - t * mean * mean).max(0.0) / (t - 1.0)
    } else {
        0.0
    };
    let se = (var / t).sqrt();
    let expected = expected_ladder_count(cfg.n, cfg.p, &spec);
    let lambda = stats.lambda.map(|l| l.to_f64());
    let inv = match (lambda, cfg.beta) {
        (Some(l), Some(b)) => Some(1.0 / (l * b)),
        _ => None,
    };
    Ok(LadderExperimentReport {
        n: cfg.n,
        p: cfg.p,
        height: cfg.height,
        size: ladder.size,
        trials: cfg.trials,
        base_frequency: based as f64 / t,
        base_ci: wilson_interval(based, cfg.trials, Z95),
        closure_frequency: closed as f64 / t,
        dominance_violations: violations,
        mean_count: mean,
        count_std_err: se,
        expected_count: expected,
        z_score: if se > 0.0 { (mean - expected) / se } else { 0.0 },
        gamma: cfg.alpha.map(|a| gamma(a, cfg.pattern.n())),
        lower_constraint: inv.map(|x| std::f64::consts::LN_2 < x),
        upper_constraint: match (inv, cfg.alpha) {
            (Some(x), Some(a)) => Some(x < (cfg.pattern.n() as f64 - 2.0) * a.ln()),
            _ => None,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_std_err: f64,
    pub points: usize,
}

/// Least-squares slope of `ln p_hat` against `ln n`.
pub fn fit_exponent(estimates: &[(usize, f64)]) -> Result<ExponentFit> {
    if estimates.len() < 3 {
        return Err(Error::DegenerateFit("need at least 3 points".into()));
    }
    if let Some((n, p)) = estimates.iter().find(|(n, p)| *n == 0 || !(*p > 0.0)) {
        return Err(Error::DegenerateFit(format!("point ({n}, {p}) has no logarithm")));
    }
    let xs: Vec<f64> = estimates.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = estimates.iter().map(|(_, p)| p.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 1e-12 {
        return Err(Error::DegenerateFit("all n are equal".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let slope_std_err = if xs.len() > 2 { (rss / (m - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(ExponentFit {
        slope,
        intercept,
        slope_std_err,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, make_complete};
    use crate::pattern::analyze;

    #[test]
    fn gnp_extremes() {
        assert_eq!(sample_gnp(20, 0.0, 1).edge_count(), 0);
        assert_eq!(sample_gnp(20, 1.0, 1), make_complete(20));
        assert_eq!(sample_gnp(30, 0.3, 9), sample_gnp(30, 0.3, 9));
    }

    #[test]
    fn gnp_edge_count_statistics() {
        let n = 1000;
        let pairs = (n * (n - 1) / 2) as f64;
        let sd = (pairs * 0.25).sqrt();
        for seed in 0..100 {
            let m = sample_gnp(n, 0.5, seed).edge_count() as f64;
            assert!((m - pairs / 2.0).abs() < 4.0 * sd, "seed {seed}: {m}");
        }
    }

    #[test]
    fn streams_nest_in_p() {
        let a = sample_gnp_with(25, 0.1, &mut rng_for(3, 7));
        let b = sample_gnp_with(25, 0.3, &mut rng_for(3, 7));
        assert!(a.is_subgraph_of(&b));
    }

    #[test]
    fn wilson_brackets_fraction() {
        let (lo, hi) = wilson_interval(30, 100, Z95);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.2189).abs() < 1e-3 && (hi - 0.3958).abs() < 1e-3);
        assert_eq!(wilson_interval(0, 10, Z95).0, 0.0);
    }

    #[test]
    fn curve_extremes() {
        let cfg = TrialConfig {
            n: 8,
            pattern: make_clique(3).unwrap(),
            p_grid: vec![0.0, 1.0],
            trials: 20,
            master_seed: 1,
        };
        let pts = percolation_curve(&cfg).unwrap();
        assert_eq!(pts[0].fraction, 0.0);
        assert_eq!(pts[1].fraction, 1.0);
        assert!(curve_monotonicity_violations(&pts).is_empty());
        let bad = TrialConfig { p_grid: vec![1.5], ..cfg };
        assert!(percolation_curve(&bad).is_err());
    }

    #[test]
    fn k2_threshold_is_zero() {
        let h = make_clique(2).unwrap();
        let est = bisect_pc(30, &h, None, 100, 0.1, 5).unwrap();
        assert_eq!(est.p_hat, 0.0);
    }

    #[test]
    fn k3_threshold_near_connectivity() {
        let h = make_clique(3).unwrap();
        let stats = analyze(&h).unwrap();
        let est = bisect_pc(100, &h, Some(&stats), 200, 0.05, 11).unwrap();
        let target = (100f64).ln() / 100.0;
        assert!(est.p_hat > target / 2.0 && est.p_hat < target * 2.0, "{est:?}");
        assert!(est.ci.0 <= est.p_hat && est.p_hat <= est.ci.1);
    }

    #[test]
    fn markers() {
        let k5 = analyze(&make_clique(5).unwrap()).unwrap();
        let m = theory_markers(10_000, &k5).unwrap();
        assert!((m.upper_order - 10_000f64.powf(-3.0 / 8.0)).abs() < 1e-12);
        assert!((m.upper_order - 0.0316).abs() < 1e-4);
        let k4 = analyze(&make_clique(4).unwrap()).unwrap();
        let m = theory_markers(10_000, &k4).unwrap();
        assert!((m.upper_order - 0.01).abs() < 1e-12);
        assert!((m.lower_order - 0.01 / 10_000f64.ln().sqrt()).abs() < 1e-12);
        assert!((m.lower_order - 3.3e-3).abs() < 1e-4);
        let k2 = analyze(&make_clique(2).unwrap()).unwrap();
        assert_eq!(theory_markers(100, &k2), Err(Error::LambdaUndefined));
    }

    #[test]
    fn expected_count_formula() {
        let spec = LadderSpec::canonical(&make_clique(4).unwrap(), 1).unwrap();
        let p: f64 = 0.1;
        let direct = 58.0 * 57.0 * p.powi(5) * (1.0 - p);
        assert!((expected_ladder_count(60, p, &spec) - direct).abs() < 1e-12 * direct);
        assert_eq!(expected_ladder_count(60, 0.0, &spec), 0.0);
        assert_eq!(expected_ladder_count(60, 1.0, &spec), 0.0);
        assert_eq!(expected_ladder_count(3, 0.5, &spec), 0.0);
    }

    #[test]
    fn gamma_value() {
        assert!((gamma(2.0, 5) - 6.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn ladder_experiment_at_p_one() {
        let h = make_clique(4).unwrap();
        let stats = analyze(&h).unwrap();
        let cfg = LadderExperimentConfig {
            n: 10,
            pattern: h,
            p: 1.0,
            height: 1,
            trials: 5,
            master_seed: 0,
            alpha: None,
            beta: None,
        };
        let rep = ladder_base_experiment(&cfg, &stats).unwrap();
        assert_eq!(rep.base_frequency, 0.0);
        assert_eq!(rep.dominance_violations, 0);
    }

    #[test]
    fn height_rounding() {
        assert_eq!(ladder_height(100, 0.5, HeightRounding::Nearest), 2);
        assert_eq!(ladder_height(100, 0.5, HeightRounding::Floor), 2);
        assert_eq!(ladder_height(100, 0.4, HeightRounding::Nearest), 2);
        assert_eq!(ladder_height(100, 0.4, HeightRounding::Floor), 1);
        assert_eq!(ladder_height(3, 0.01, HeightRounding::Floor), 1);
    }

    #[test]
    fn exact_fits() {
        let pts: Vec<(usize, f64)> = [50, 100, 200, 400].iter().map(|&n| (n, 3.0 * (n as f64).powf(-0.5))).collect();
        let fit = fit_exponent(&pts).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12 && fit.slope_std_err < 1e-9);
        let pts: Vec<(usize, f64)> = [50, 100, 200].iter().map(|&n| (n, (n as f64).powf(-0.375))).collect();
        assert!((fit_exponent(&pts).unwrap().slope + 0.375).abs() < 1e-12);
        assert!(fit_exponent(&[(10, 0.1), (10, 0.2), (10, 0.3)]).is_err());
        assert!(fit_exponent(&[(10, 0.1), (20, 0.2)]).is_err());
    }
}

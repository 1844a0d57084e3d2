use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use wsat::engine::{close as close_graph, ClosureOptions};
use wsat::experiments::{
    bisect_pc, ladder_base_experiment, percolation_curve, rng_for, sample_gnp_with, theory_markers, HeightRounding,
    LadderExperimentConfig, TrialConfig,
};
use wsat::graph::Graph;
use wsat::io::serialize_edge_list;
use wsat::ladder::{
    build_ladder, count_induced_ladders_at, ladder_closure_check, verify_ladder_lemma, verify_ladder_weak_bound,
    Ladder, LadderSpec,
};
use wsat::oracle::{graph_from_mask, naive_close, percolation_census};
use wsat::pattern::{analyze as analyze_pattern, verify_appendix_lemmas, PatternStats, MAX_PATTERN_VERTICES};
use wsat::report::CheckReport;
use wsat::witness::{close_with_witnesses, rea_replay, verify_run};

use crate::resolve::{parse_edge, parse_pair, read_graph, resolve_pattern};
use crate::{CurveArgs, Format, LadderArgs, LadderCountArgs, LadderExpArgs, Output, PcSearchArgs, Rounding, Suite, VerifyArgs};

fn stats_for(h: &Graph) -> Result<PatternStats> {
    if h.n() > MAX_PATTERN_VERTICES {
        bail!("pattern has {} vertices; analysis supports at most {MAX_PATTERN_VERTICES}", h.n());
    }
    Ok(analyze_pattern(h)?)
}

fn optional_stats(h: &Graph) -> Option<PatternStats> {
    (h.n() <= MAX_PATTERN_VERTICES).then(|| analyze_pattern(h).ok()).flatten()
}

pub fn analyze(pattern: &str) -> Result<Output> {
    let h = resolve_pattern(pattern)?;
    Output::json(&stats_for(&h)?, None)
}

pub fn close(input: &str, pattern: &str, trace_path: Option<&str>) -> Result<Output> {
    let g = read_graph(input)?;
    let h = resolve_pattern(pattern)?;
    let trace = close_graph(&g, &h, &ClosureOptions::default());
    Ok(Output::Text {
        text: serialize_edge_list(&trace.final_graph),
        side: match trace_path {
            Some(p) => Some((p.to_string(), serde_json::to_value(&trace)?)),
            None => None,
        },
    })
}

pub fn percolate(input: &str, pattern: &str) -> Result<Output> {
    let g = read_graph(input)?;
    let h = resolve_pattern(pattern)?;
    let trace = close_graph(&g, &h, &ClosureOptions::default());
    let answer = if trace.percolates() { "yes" } else { "no" };
    Ok(Output::Text {
        text: format!("{answer}\nrounds {}\n", trace.round_count()),
        side: None,
    })
}

pub fn witness(input: &str, pattern: &str, target: &str, rea: bool) -> Result<Output> {
    let g = read_graph(input)?;
    let h = resolve_pattern(pattern)?;
    let target = parse_edge(target)?;
    if target.v >= g.n() {
        bail!("target ({target}) is outside a graph on {} vertices", g.n());
    }
    let (trace, witnesses) = close_with_witnesses(&g, &h);
    let Some(record) = witnesses.get(&target) else {
        bail!("({target}) is not in the closure");
    };
    let mut out = serde_json::to_value(record)?;
    out["size"] = json!(record.size());
    if rea {
        out["rea"] = serde_json::to_value(rea_replay(target, &witnesses, &trace, &h)?)?;
    }
    Ok(Output::Json {
        result: out,
        passed: true,
        seed: None,
    })
}

fn ladder_from_args(a: &LadderArgs) -> Result<(Graph, Ladder)> {
    let h = resolve_pattern(&a.pattern)?;
    let spec = match (&a.lower, &a.upper) {
        (Some(lo), Some(up)) => LadderSpec::with_rungs(&h, a.height, parse_edge(lo)?, parse_edge(up)?)?,
        _ => LadderSpec::canonical(&h, a.height)?,
    };
    Ok((h, build_ladder(&spec)?))
}

pub fn ladder_build(a: &LadderArgs) -> Result<Output> {
    let (_, ladder) = ladder_from_args(a)?;
    Output::json(&ladder, None)
}

pub fn ladder_verify(a: &LadderArgs) -> Result<Output> {
    let (h, ladder) = ladder_from_args(a)?;
    let stats = stats_for(&h)?;
    let (mode, lemma) = if stats.strictly_balanced && stats.xi_ladder.is_some_and(|x| x.is_positive()) {
        ("lambda-xi-sigma", verify_ladder_lemma(&ladder, &stats)?)
    } else {
        ("lambda-x-with-base", verify_ladder_weak_bound(&ladder, &stats)?)
    };
    let closure = ladder_closure_check(&ladder, &h);
    let passed = lemma.passed() && closure.passed();
    Ok(Output::Json {
        result: json!({ "mode": mode, "density": lemma, "closure": closure, "passed": passed }),
        passed,
        seed: None,
    })
}

pub fn ladder_count(a: &LadderCountArgs) -> Result<Output> {
    let (_, ladder) = ladder_from_args(&a.ladder)?;
    let host = read_graph(&a.host)?;
    let base = parse_pair(&a.base)?;
    if base.0 >= host.n() || base.1 >= host.n() || base.0 == base.1 {
        bail!("base {base:?} is not a pair of distinct host vertices");
    }
    let count = count_induced_ladders_at(&host, base, &ladder);
    Ok(Output::Json {
        result: json!({
            "base": [base.0, base.1],
            "height": ladder.height,
            "size": ladder.size,
            "count": count,
            "hasLadder": count > 0,
        }),
        passed: true,
        seed: None,
    })
}

pub fn census(n: usize, pattern: &str) -> Result<Output> {
    let h = resolve_pattern(pattern)?;
    if n * n.saturating_sub(1) / 2 > 20 {
        bail!("census needs C(n,2) <= 20, got n = {n}");
    }
    Output::json(&percolation_census(n, &h, pattern), None)
}

pub fn curve(a: &CurveArgs) -> Result<Output> {
    let h = resolve_pattern(&a.pattern)?;
    let cfg = TrialConfig {
        n: a.n,
        pattern: h,
        p_grid: a.grid.clone(),
        trials: a.trials,
        master_seed: a.seed,
    };
    let points = percolation_curve(&cfg)?;
    match a.format {
        Format::Json => Output::json(&points, Some(a.seed)),
        Format::Csv => {
            let mut text = String::from("n,p,trials,successes,fraction,ci_lo,ci_hi\n");
            for p in &points {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    p.n, p.p, p.trials, p.successes, p.fraction, p.ci_lo, p.ci_hi
                ));
            }
            Ok(Output::Text { text, side: None })
        }
    }
}

pub fn pc_search(a: &PcSearchArgs) -> Result<Output> {
    let h = resolve_pattern(&a.pattern)?;
    let stats = optional_stats(&h);
    let est = bisect_pc(a.n, &h, stats.as_ref(), a.trials, a.tol, a.seed)?;
    let markers = stats.as_ref().and_then(|s| theory_markers(a.n, s).ok());
    Ok(Output::Json {
        result: json!({ "estimate": est, "markers": markers }),
        passed: true,
        seed: Some(a.seed),
    })
}

pub fn ladder_exp(a: &LadderExpArgs) -> Result<Output> {
    let h = resolve_pattern(&a.pattern)?;
    let stats = stats_for(&h)?;
    let cfg = match (a.alpha, a.beta, a.p, a.height) {
        (Some(alpha), Some(beta), _, _) => {
            let rounding = match a.rounding {
                Rounding::Nearest => HeightRounding::Nearest,
                Rounding::Floor => HeightRounding::Floor,
            };
            LadderExperimentConfig::from_params(a.n, &h, &stats, alpha, beta, rounding, a.trials, a.seed)?
        }
        (_, _, Some(p), Some(height)) => LadderExperimentConfig {
            n: a.n,
            pattern: h,
            p,
            height,
            trials: a.trials,
            master_seed: a.seed,
            alpha: None,
            beta: None,
        },
        _ => bail!("give either --alpha and --beta, or --p and --height"),
    };
    Output::json(&ladder_base_experiment(&cfg, &stats)?, Some(a.seed))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SuiteResult {
    suite: &'static str,
    passed: bool,
    details: Value,
}

fn suite_output(suite: &'static str, passed: bool, details: Value, seed: Option<u64>) -> Result<Output> {
    Ok(Output::Json {
        result: serde_json::to_value(SuiteResult { suite, passed, details })?,
        passed,
        seed,
    })
}

pub fn verify(a: &VerifyArgs) -> Result<Output> {
    match a.suite {
        Suite::Appendix => {
            let rep = verify_appendix_lemmas(a.vmax)?;
            let passed = rep.passed();
            suite_output("appendix", passed, serde_json::to_value(rep)?, None)
        }
        Suite::Engine => verify_engine(a),
        Suite::Witness => verify_witness(a),
        Suite::Ladder => verify_ladders(a),
    }
}

fn verify_engine(a: &VerifyArgs) -> Result<Output> {
    let n = a.n.unwrap_or(5);
    let h = resolve_pattern(a.pattern.as_deref().unwrap_or("K4"))?;
    let pairs = n * n.saturating_sub(1) / 2;
    if pairs > 20 {
        bail!("engine suite enumerates all graphs and needs C(n,2) <= 20, got n = {n}");
    }
    let failures: Vec<Option<String>> = (0u64..1 << pairs)
        .into_par_iter()
        .map(|mask| {
            let g = graph_from_mask(n, mask);
            let trace = close_graph(&g, &h, &ClosureOptions::default());
            if let Err(e) = trace.validate(&h) {
                return Some(format!("mask {mask}: {e}"));
            }
            (trace.final_graph != naive_close(&g, &h)).then(|| format!("mask {mask}: closure differs from naive"))
        })
        .collect();
    let mut rep = CheckReport::new("engine-vs-naive");
    for f in failures {
        rep.record(f);
    }
    let passed = rep.passed();
    suite_output("engine", passed, serde_json::to_value(rep)?, None)
}

fn verify_witness(a: &VerifyArgs) -> Result<Output> {
    let n = a.n.unwrap_or(30);
    let h = resolve_pattern(a.pattern.as_deref().unwrap_or("K4"))?;
    let stats = stats_for(&h)?;
    let p = match a.p {
        Some(p) => p,
        None => theory_markers(n, &stats).context("no default p for this pattern; pass --p")?.upper_order,
    };
    if !(0.0..=1.0).contains(&p) {
        bail!("p = {p} is outside [0, 1]");
    }
    let per_run: Vec<Vec<CheckReport>> = (0..a.runs)
        .into_par_iter()
        .map(|run| {
            let g = sample_gnp_with(n, p, &mut rng_for(a.seed, run));
            verify_run(&g, &h, &stats)
        })
        .collect::<wsat::Result<_>>()?;
    let mut totals: Vec<CheckReport> = Vec::new();
    for reports in per_run {
        if totals.is_empty() {
            totals = reports;
            continue;
        }
        for (t, r) in totals.iter_mut().zip(reports) {
            if r.applicable {
                if !t.applicable {
                    t.applicable = true;
                    t.note = None;
                }
                t.merge(r);
            }
        }
    }
    let passed = totals.iter().all(CheckReport::passed);
    let details = json!({ "n": n, "p": p, "runs": a.runs, "checks": totals });
    suite_output("witness", passed, details, Some(a.seed))
}

fn verify_ladders(a: &VerifyArgs) -> Result<Output> {
    let h = resolve_pattern(a.pattern.as_deref().unwrap_or("K5"))?;
    let stats = stats_for(&h)?;
    let strict = stats.strictly_balanced && stats.xi_ladder.is_some_and(|x| x.is_positive());
    let mut passed = true;
    let mut rows = Vec::new();
    for height in 1..=a.max_height {
        let ladder = build_ladder(&LadderSpec::canonical(&h, height)?)?;
        let density = if strict {
            verify_ladder_lemma(&ladder, &stats)?
        } else {
            verify_ladder_weak_bound(&ladder, &stats)?
        };
        let closure = ladder_closure_check(&ladder, &h);
        passed &= density.passed() && closure.passed();
        rows.push(json!({ "height": height, "density": density, "closure": closure }));
    }
    let mode = if strict { "lambda-xi-sigma" } else { "lambda-x-with-base" };
    suite_output("ladder", passed, json!({ "mode": mode, "heights": rows }), None)
}

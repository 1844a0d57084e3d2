//! `H`-ladders: chains of `h` steps, each a copy of `H` minus two
//! non-incident rungs, consecutive steps sharing a rung, topped by the single
//! present rung `(u_h, v_h)`.
//!
//! Vertex labels: the base is `{0, 1}`; step `i` (1-based) adds the `v_H - 2`
//! vertices `2 + (i-1)(v_H-2) ..`, the first two of which are `u_i, v_i`.

use serde::Serialize;

use crate::engine::{close, ClosureOptions};
use crate::error::{Error, Result};
use crate::graph::{words_for, Edge, Graph};
use crate::pattern::PatternStats;
use crate::rational::Rational;
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderSpec {
    pub pattern: Graph,
    pub height: usize,
    /// `(lower, upper)`: pattern edges playing the `(u_{i-1}, v_{i-1})` and
    /// `(u_i, v_i)` roles in every step.
    pub rungs: (Edge, Edge),
}

impl LadderSpec {
    /// Uses the lexicographically least pair of non-incident pattern edges.
    pub fn canonical(pattern: &Graph, height: usize) -> Result<Self> {
        let edges: Vec<Edge> = pattern.edges().collect();
        let rungs = edges
            .iter()
            .enumerate()
            .find_map(|(i, e)| {
                edges[i + 1..]
                    .iter()
                    .find(|f| !e.shares_endpoint(f))
                    .map(|f| (*e, *f))
            })
            .ok_or(Error::NoRungPair)?;
        Self::with_rungs(pattern, height, rungs.0, rungs.1)
    }

    pub fn with_rungs(pattern: &Graph, height: usize, lower: Edge, upper: Edge) -> Result<Self> {
        if height == 0 {
            return Err(Error::InvalidSize("ladder height must be at least 1".into()));
        }
        for e in [lower, upper] {
            if e.v >= pattern.n() || !pattern.has_edge(e.u, e.v) {
                return Err(Error::InvalidRungs(format!("({e}) is not a pattern edge")));
            }
        }
        if lower.shares_endpoint(&upper) {
            return Err(Error::InvalidRungs(format!("({lower}) and ({upper}) share an endpoint")));
        }
        Ok(LadderSpec {
            pattern: pattern.clone(),
            height,
            rungs: (lower, upper),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ladder {
    pub graph: Graph,
    /// `(u_0, v_0)`, a non-edge.
    pub base: Edge,
    /// `(u_i, v_i)` for `0 <= i <= h`; only the last is an edge.
    pub rungs: Vec<Edge>,
    /// Sorted vertex set of each step `S_1..S_h`.
    pub steps: Vec<Vec<usize>>,
    pub height: usize,
    /// `k = (v_H - 2) h`.
    pub size: usize,
}

pub fn build_ladder(spec: &LadderSpec) -> Result<Ladder> {
    let h = &spec.pattern;
    let vh = h.n();
    let (lo, up) = spec.rungs;
    let fresh_order: Vec<usize> = [up.u, up.v]
        .into_iter()
        .chain((0..vh).filter(|&w| !lo.contains(w) && !up.contains(w)))
        .collect();
    let n = (vh - 2) * spec.height + 2;
    let mut g = Graph::empty(n);
    let mut rungs = vec![Edge::new(0, 1)];
    let mut steps = Vec::with_capacity(spec.height);
    for i in 1..=spec.height {
        let offset = 2 + (i - 1) * (vh - 2);
        let prev = rungs[i - 1];
        let mut map = vec![usize::MAX; vh];
        map[lo.u] = prev.u;
        map[lo.v] = prev.v;
        for (j, &w) in fresh_order.iter().enumerate() {
            map[w] = offset + j;
        }
        for e in h.edges() {
            if e != lo && e != up {
                g.add_edge(map[e.u], map[e.v]);
            }
        }
        let mut vs = map.clone();
        vs.sort_unstable();
        steps.push(vs);
        rungs.push(Edge::new(offset, offset + 1));
    }
    let top = rungs[spec.height];
    g.add_edge(top.u, top.v);
    Ok(Ladder {
        graph: g,
        base: rungs[0],
        rungs,
        steps,
        height: spec.height,
        size: (vh - 2) * spec.height,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LadderLemmaReport {
    pub height: usize,
    pub subsets_checked: u64,
    /// Proper subsets with `e(X) = lambda x`.
    pub equality_cases: u64,
    /// Subsets with `sigma > 0` attaining `e(X) = lambda x - xi sigma`.
    pub tight_cases: u64,
    pub violations: Vec<String>,
}

impl LadderLemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const LEMMA_VERTEX_LIMIT: usize = 24;

struct LadderMasks {
    adj: Vec<u32>,
    steps: Vec<u32>,
    uppers: Vec<u32>,
    prefixes: Vec<u32>,
    full: u32,
}

impl LadderMasks {
    fn new(l: &Ladder) -> Result<Self> {
        let n = l.graph.n();
        if n > LEMMA_VERTEX_LIMIT {
            return Err(Error::InvalidSize(format!(
                "exhaustive ladder scan needs at most {LEMMA_VERTEX_LIMIT} vertices, got {n}"
            )));
        }
        let adj = (0..n)
            .map(|u| l.graph.neighbors(u).fold(0u32, |m, v| m | 1 << v))
            .collect();
        let steps: Vec<u32> = l
            .steps
            .iter()
            .map(|s| s.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        let uppers = steps
            .iter()
            .enumerate()
            .map(|(i, &s)| s & !(1 << l.rungs[i].u) & !(1 << l.rungs[i].v))
            .collect();
        let mut prefixes = Vec::new();
        let mut acc = 0u32;
        for &s in &steps {
            acc |= s;
            prefixes.push(acc);
        }
        // the full union is L itself, which is not proper
        prefixes.pop();
        Ok(LadderMasks {
            adj,
            steps,
            uppers,
            prefixes,
            full: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
        })
    }

    fn edges(&self, set: u32) -> i64 {
        let mut total = 0;
        let mut rest = set;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += (self.adj[u] & set).count_ones() as i64;
        }
        total / 2
    }

    fn sigma(&self, set: u32) -> i64 {
        self.steps
            .iter()
            .zip(&self.uppers)
            .filter(|(&s, &up)| s & !set != 0 && up & set != 0)
            .count() as i64
    }
}

/// Exhaustively checks `e(X) <= lambda x - xi sigma` over every proper
/// induced subgraph `X`. Also checks that `sigma = 0`, and likewise
/// `e(X) = lambda x`, exactly when `x = 0` or `X` is a union of the first
/// `h' < h` steps.
pub fn verify_ladder_lemma(l: &Ladder, stats: &PatternStats) -> Result<LadderLemmaReport> {
    let (lambda, xi) = match (stats.lambda, stats.xi_ladder) {
        (Some(l), Some(x)) if stats.strictly_balanced && x.is_positive() => (l, x),
        _ => return Err(Error::NotStrictlyBalanced),
    };
    let masks = LadderMasks::new(l)?;
    let mut report = LadderLemmaReport {
        height: l.height,
        ..Default::default()
    };
    for set in 0..masks.full {
        report.subsets_checked += 1;
        let x = (set & !0b11).count_ones() as i64;
        let e = masks.edges(set);
        let sigma = masks.sigma(set);
        let bound = lambda * x - xi * sigma;
        let special = x == 0 || masks.prefixes.contains(&set);
        let value = Rational::integer(e);
        if value > bound {
            report
                .violations
                .push(format!("X={set:#b}: e={e} > {bound} (x={x}, sigma={sigma})"));
        }
        if (sigma == 0) != special {
            report
                .violations
                .push(format!("X={set:#b}: sigma={sigma} but prefix/empty={special}"));
        }
        if sigma > 0 && value == bound {
            report.tight_cases += 1;
        }
        let level = value == lambda * x;
        if level {
            report.equality_cases += 1;
        }
        if level != special {
            report
                .violations
                .push(format!("X={set:#b}: e={e}, lambda x={}, prefix/empty={special}", lambda * x));
        }
    }
    Ok(report)
}

/// `e(X) <= lambda x` for every proper induced `X` containing both base vertices.
/// Holds for balanced patterns where `xi` may vanish.
pub fn verify_ladder_weak_bound(l: &Ladder, stats: &PatternStats) -> Result<LadderLemmaReport> {
    let lambda = stats.lambda.ok_or(Error::LambdaUndefined)?;
    let masks = LadderMasks::new(l)?;
    let mut report = LadderLemmaReport {
        height: l.height,
        ..Default::default()
    };
    for set in (0..masks.full).filter(|s| s & 0b11 == 0b11) {
        report.subsets_checked += 1;
        let x = (set & !0b11).count_ones() as i64;
        let e = Rational::integer(masks.edges(set));
        let bound = lambda * x;
        if e > bound {
            report.violations.push(format!("X={set:#b}: e={e} > {bound}"));
        }
        if e == bound {
            report.equality_cases += 1;
        }
    }
    Ok(report)
}

/// Backtracking placement of the non-base ladder vertices in label order.
struct InducedSearch<'a> {
    host: &'a Graph,
    ladder: &'a Graph,
    map: Vec<usize>,
    used: Vec<u64>,
    cand: Vec<u64>,
    full: Vec<u64>,
}

impl<'a> InducedSearch<'a> {
    fn new(host: &'a Graph, ladder: &'a Graph, pair: (usize, usize)) -> Self {
        let words = host.words();
        let mut full = vec![u64::MAX; words];
        let n = host.n();
        if n % 64 != 0 {
            full[words - 1] = (1u64 << (n % 64)) - 1;
        }
        let mut used = vec![0u64; words];
        used[pair.0 / 64] |= 1 << (pair.0 % 64);
        used[pair.1 / 64] |= 1 << (pair.1 % 64);
        let mut map = vec![usize::MAX; ladder.n()];
        map[0] = pair.0;
        map[1] = pair.1;
        InducedSearch {
            host,
            ladder,
            map,
            used,
            cand: vec![0; ladder.n() * words],
            full,
        }
    }

    /// Counts completions from ladder vertex `w`; stops at the first when `first_only`.
    fn run(&mut self, w: usize, first_only: bool) -> u64 {
        if w == self.ladder.n() {
            return 1;
        }
        let words = self.host.words();
        let base = w * words;
        for i in 0..words {
            self.cand[base + i] = self.full[i] & !self.used[i];
        }
        for z in 0..w {
            let row = self.host.row(self.map[z]);
            let want = self.ladder.has_edge(w, z);
            for i in 0..words {
                self.cand[base + i] &= if want { row[i] } else { !row[i] };
            }
        }
        let mut total = 0;
        for i in 0..words {
            let mut word = self.cand[base + i];
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                self.map[w] = i * 64 + bit;
                self.used[i] |= 1 << bit;
                total += self.run(w + 1, first_only);
                self.used[i] &= !(1 << bit);
                if first_only && total > 0 {
                    return total;
                }
            }
        }
        total
    }
}

/// Number of injective maps `phi` of the ladder into `host` with
/// `phi(u_0) = pair.0`, `phi(v_0) = pair.1` whose image induces exactly the
/// image of the ladder's edges.
pub fn count_induced_ladders_at(host: &Graph, pair: (usize, usize), ladder: &Ladder) -> u64 {
    if !induced_precheck(host, pair, ladder) {
        return 0;
    }
    InducedSearch::new(host, &ladder.graph, pair).run(2, false)
}

pub fn has_induced_ladder_at(host: &Graph, pair: (usize, usize), ladder: &Ladder) -> bool {
    induced_precheck(host, pair, ladder)
        && InducedSearch::new(host, &ladder.graph, pair).run(2, true) > 0
}

fn induced_precheck(host: &Graph, pair: (usize, usize), ladder: &Ladder) -> bool {
    debug_assert_eq!(ladder.base, Edge::new(0, 1));
    pair.0 != pair.1
        && pair.0 < host.n()
        && pair.1 < host.n()
        && ladder.graph.n() <= host.n()
        && !host.has_edge(pair.0, pair.1)
        && words_for(host.n()) == host.words()
}

/// Closes the ladder under `h` and checks that rung `(u_{h-j}, v_{h-j})`
/// appears in round `j`, the base last.
pub fn ladder_closure_check(l: &Ladder, h: &Graph) -> CheckReport {
    let mut report = CheckReport::new("ladder-closure");
    let trace = close(&l.graph, h, &ClosureOptions::default());
    for j in 1..=l.height {
        let rung = l.rungs[l.height - j];
        let got = trace.round_of(rung);
        report.record((got != Some(j)).then(|| format!("rung ({rung}) added in round {got:?}, expected {j}")));
    }
    report
}

//! Round-synchronous `H`-bootstrap closure with per-edge certificates.
//!
//! A missing pair `e` is added in round `t` when `G_{t-1} + e` contains a
//! copy of `H` (an injective, edge-preserving, not necessarily induced
//! embedding) that uses `e`. All pairs of a round are tested against
//! `G_{t-1}` only and committed together.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{Edge, Graph};

/// Patterns up to this size get their edge orbits from a brute-force
/// automorphism search.
pub const ORBIT_VERTEX_LIMIT: usize = 8;

/// An embedding of `H` whose anchor edge is mapped onto the tested pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Embedding {
    /// `map[i]` is the host vertex of pattern vertex `i`.
    pub map: Vec<usize>,
    /// Pattern edge mapped onto the target pair, as `(a, b)` with `map[a] < map[b]`.
    pub anchor: (usize, usize),
}

impl Embedding {
    pub fn target(&self) -> Edge {
        Edge::new(self.map[self.anchor.0], self.map[self.anchor.1])
    }

    /// Host images of all pattern edges, anchor included, sorted.
    pub fn image_edges(&self, h: &Graph) -> Vec<Edge> {
        let mut out: Vec<Edge> = h
            .edges()
            .map(|e| Edge::new(self.map[e.u], self.map[e.v]))
            .collect();
        out.sort_unstable();
        out
    }

    /// Host images of the pattern edges other than the anchor.
    pub fn support_edges(&self, h: &Graph) -> Vec<Edge> {
        let t = self.target();
        let mut out = self.image_edges(h);
        out.retain(|&e| e != t);
        out
    }

    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        v.sort_unstable();
        v
    }

    /// Checks injectivity, that the anchor lands on the target and that every
    /// other pattern edge is present in `host`. The target itself must be absent.
    pub fn certifies(&self, h: &Graph, host: &Graph) -> bool {
        if self.map.len() != h.n() || self.map.iter().any(|&x| x >= host.n()) {
            return false;
        }
        let mut seen = self.sorted_vertices();
        seen.dedup();
        if seen.len() != self.map.len() || !h.has_edge(self.anchor.0, self.anchor.1) {
            return false;
        }
        let t = self.target();
        !host.has_edge(t.u, t.v)
            && self
                .support_edges(h)
                .iter()
                .all(|e| host.has_edge(e.u, e.v))
    }
}

/// Search plan for one anchor arc `(a, b)` of the pattern.
#[derive(Debug, Clone)]
struct AnchorPlan {
    a: usize,
    b: usize,
    /// Remaining pattern vertices in search order.
    order: Vec<usize>,
    /// For each position of `order`, the already placed pattern neighbours.
    back: Vec<Vec<usize>>,
    min_deg_a: usize,
    min_deg_b: usize,
}

/// A pattern prepared for repeated completion queries.
#[derive(Debug, Clone)]
pub struct CompiledPattern {
    h: Graph,
    plans: Vec<AnchorPlan>,
    connected: bool,
}

fn automorphisms(h: &Graph) -> Vec<Vec<usize>> {
    fn extend(h: &Graph, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let i = perm.len();
        if i == h.n() {
            out.push(perm.clone());
            return;
        }
        for c in 0..h.n() {
            if used[c] || h.degree(c) != h.degree(i) {
                continue;
            }
            if (0..i).all(|j| h.has_edge(i, j) == h.has_edge(c, perm[j])) {
                used[c] = true;
                perm.push(c);
                extend(h, perm, used, out);
                perm.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(h, &mut Vec::new(), &mut vec![false; h.n()], &mut out);
    out
}

/// Representatives of the orbits of directed pattern edges, ordered by
/// their least member.
fn arc_orbit_representatives(h: &Graph) -> Vec<(usize, usize)> {
    let mut arcs: Vec<(usize, usize)> = h
        .edges()
        .flat_map(|e| [(e.u, e.v), (e.v, e.u)])
        .collect();
    arcs.sort_unstable();
    if h.n() > ORBIT_VERTEX_LIMIT {
        return arcs;
    }
    let autos = automorphisms(h);
    let mut reps = Vec::new();
    let mut covered = std::collections::BTreeSet::new();
    for &arc in &arcs {
        if covered.contains(&arc) {
            continue;
        }
        reps.push(arc);
        for p in &autos {
            covered.insert((p[arc.0], p[arc.1]));
        }
    }
    reps
}

impl CompiledPattern {
    pub fn new(h: &Graph) -> Self {
        let plans = arc_orbit_representatives(h)
            .into_iter()
            .map(|(a, b)| {
                let mut placed = vec![a, b];
                let mut order = Vec::new();
                let mut back = Vec::new();
                while placed.len() < h.n() {
                    // most already-placed neighbours first, then higher degree, then lower index
                    let next = (0..h.n())
                        .filter(|w| !placed.contains(w))
                        .max_by_key(|&w| {
                            let links = placed.iter().filter(|&&p| h.has_edge(w, p)).count();
                            (links, h.degree(w), std::cmp::Reverse(w))
                        })
                        .expect("unplaced vertex exists");
                    back.push(
                        placed
                            .iter()
                            .copied()
                            .filter(|&p| h.has_edge(next, p))
                            .collect(),
                    );
                    order.push(next);
                    placed.push(next);
                }
                AnchorPlan {
                    a,
                    b,
                    order,
                    back,
                    min_deg_a: h.degree(a) - 1,
                    min_deg_b: h.degree(b) - 1,
                }
            })
            .collect();
        CompiledPattern {
            h: h.clone(),
            plans,
            connected: h.is_connected(),
        }
    }

    pub fn pattern(&self) -> &Graph {
        &self.h
    }

    /// Number of anchor orbits searched per pair.
    pub fn orbit_count(&self) -> usize {
        self.plans.len()
    }
}

/// Reusable scratch space for the backtracking search.
#[derive(Debug, Default)]
pub struct Searcher {
    cand: Vec<u64>,
    used: Vec<u64>,
    map: Vec<usize>,
}

impl Searcher {
    pub fn new() -> Self {
        Self::default()
    }

    /// First completion of `pair` in `g`, or `None`.
    ///
    /// Anchor orbits are tried in order; within one, the search returns the
    /// lexicographically least assignment of the remaining pattern vertices in
    /// plan order, candidates being visited in increasing host order.
    pub fn find(&mut self, g: &Graph, pair: Edge, pat: &CompiledPattern) -> Option<Embedding> {
        let (x, y) = (pair.u, pair.v);
        debug_assert!(!g.has_edge(x, y));
        let k = pat.h.n();
        if k > g.n() || k < 2 {
            return None;
        }
        let words = g.words();
        self.cand.clear();
        self.cand.resize(k * words, 0);
        self.used.clear();
        self.used.resize(words, 0);
        self.map.clear();
        self.map.resize(k, usize::MAX);
        let dx = g.degree(x);
        let dy = g.degree(y);
        for plan in &pat.plans {
            if dx < plan.min_deg_a || dy < plan.min_deg_b {
                continue;
            }
            self.map[plan.a] = x;
            self.map[plan.b] = y;
            self.used.iter_mut().for_each(|w| *w = 0);
            self.used[x / 64] |= 1 << (x % 64);
            self.used[y / 64] |= 1 << (y % 64);
            if self.extend(g, plan, 0) {
                return Some(Embedding {
                    map: self.map.clone(),
                    anchor: (plan.a, plan.b),
                });
            }
        }
        None
    }

    fn extend(&mut self, g: &Graph, plan: &AnchorPlan, depth: usize) -> bool {
        if depth == plan.order.len() {
            return true;
        }
        let words = g.words();
        let w = plan.order[depth];
        let base = depth * words;
        let constraints = &plan.back[depth];
        if constraints.is_empty() {
            let n = g.n();
            for i in 0..words {
                let lo = i * 64;
                let full = if n >= lo + 64 { u64::MAX } else { (1u64 << (n - lo)) - 1 };
                self.cand[base + i] = full & !self.used[i];
            }
        } else {
            let first = g.row(self.map[constraints[0]]);
            for i in 0..words {
                self.cand[base + i] = first[i] & !self.used[i];
            }
            for &c in &constraints[1..] {
                let row = g.row(self.map[c]);
                for i in 0..words {
                    self.cand[base + i] &= row[i];
                }
            }
        }
        for i in 0..words {
            let mut word = self.cand[base + i];
            while word != 0 {
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                let c = i * 64 + bit;
                self.map[w] = c;
                self.used[i] |= 1 << bit;
                if self.extend(g, plan, depth + 1) {
                    return true;
                }
                self.used[i] &= !(1 << bit);
            }
        }
        self.map[w] = usize::MAX;
        false
    }
}

/// A copy of `h` in `g + pair` that uses `pair`, if one exists.
pub fn find_completion(g: &Graph, pair: Edge, h: &Graph) -> Option<Embedding> {
    if g.has_edge(pair.u, pair.v) {
        return None;
    }
    Searcher::new().find(g, pair, &CompiledPattern::new(h))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub t: usize,
    pub added: Vec<(Edge, Embedding)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureTrace {
    pub initial: Graph,
    pub rounds: Vec<RoundRecord>,
    #[serde(rename = "final")]
    pub final_graph: Graph,
}

impl ClosureTrace {
    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn percolates(&self) -> bool {
        self.final_graph.is_complete()
    }

    /// Round in which `e` appeared: 0 for initial edges, `None` if absent.
    pub fn round_of(&self, e: Edge) -> Option<usize> {
        if self.initial.has_edge(e.u, e.v) {
            return Some(0);
        }
        self.rounds
            .iter()
            .find(|r| r.added.iter().any(|(f, _)| *f == e))
            .map(|r| r.t)
    }

    /// Added edge -> (round, certificate).
    pub fn certificates(&self) -> BTreeMap<Edge, (usize, &Embedding)> {
        self.rounds
            .iter()
            .flat_map(|r| r.added.iter().map(move |(e, emb)| (*e, (r.t, emb))))
            .collect()
    }

    /// Replays every round against the reconstructed `G_{t-1}`.
    pub fn validate(&self, h: &Graph) -> Result<(), String> {
        let mut cur = self.initial.clone();
        for (i, round) in self.rounds.iter().enumerate() {
            if round.t != i + 1 {
                return Err(format!("round index {} at position {}", round.t, i));
            }
            if round.added.is_empty() {
                return Err(format!("round {} is empty", round.t));
            }
            for w in round.added.windows(2) {
                if w[0].0 >= w[1].0 {
                    return Err(format!("round {} not strictly sorted", round.t));
                }
            }
            for (e, emb) in &round.added {
                if emb.target() != *e || !emb.certifies(h, &cur) {
                    return Err(format!("bad certificate for {e} in round {}", round.t));
                }
            }
            for (e, _) in &round.added {
                cur.add_edge(e.u, e.v);
            }
        }
        if cur != self.final_graph {
            return Err("final graph differs from initial plus added edges".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureOptions {
    /// Rounds with at least this many candidate pairs are tested in parallel.
    pub parallel_threshold: usize,
    /// Retest only pairs near newly added edges.
    pub dirty_set: bool,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        ClosureOptions {
            parallel_threshold: 4096,
            dirty_set: true,
        }
    }
}

/// Vertices within distance `radius` of `sources` in `g`, as a bitset.
fn ball(g: &Graph, sources: &[usize], radius: usize) -> Vec<u64> {
    let words = g.words();
    let mut seen = vec![0u64; words];
    let mut frontier = vec![0u64; words];
    for &s in sources {
        seen[s / 64] |= 1 << (s % 64);
        frontier[s / 64] |= 1 << (s % 64);
    }
    for _ in 0..radius {
        let mut next = vec![0u64; words];
        for u in crate::graph::BitIter::new(&frontier) {
            for (i, w) in g.row(u).iter().enumerate() {
                next[i] |= w;
            }
        }
        let mut grew = false;
        for i in 0..words {
            next[i] &= !seen[i];
            seen[i] |= next[i];
            grew |= next[i] != 0;
        }
        if !grew {
            break;
        }
        frontier = next;
    }
    seen
}

fn dirty_pairs(g: &Graph, added: &[Edge], radius: usize) -> Vec<Edge> {
    let mut sources: Vec<usize> = added.iter().flat_map(|e| [e.u, e.v]).collect();
    sources.sort_unstable();
    sources.dedup();
    let near = ball(g, &sources, radius);
    let in_near = |x: usize| near[x / 64] >> (x % 64) & 1 == 1;
    let mut out = Vec::new();
    for x in 0..g.n() {
        let xn = in_near(x);
        for y in x + 1..g.n() {
            if (xn || in_near(y)) && !g.has_edge(x, y) {
                out.push(Edge { u: x, v: y });
            }
        }
    }
    out
}

fn test_pairs(
    g: &Graph,
    pat: &CompiledPattern,
    pairs: &[Edge],
    opts: &ClosureOptions,
) -> Vec<(Edge, Embedding)> {
    if pairs.len() >= opts.parallel_threshold {
        pairs
            .par_iter()
            .map_init(Searcher::new, |s, &e| s.find(g, e, pat).map(|emb| (e, emb)))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    } else {
        let mut s = Searcher::new();
        pairs
            .iter()
            .filter_map(|&e| s.find(g, e, pat).map(|emb| (e, emb)))
            .collect()
    }
}

pub fn close_compiled(g: &Graph, pat: &CompiledPattern, opts: &ClosureOptions) -> ClosureTrace {
    let h = pat.pattern();
    let mut cur = g.clone();
    let mut rounds = Vec::new();
    if h.edge_count() == 0 || h.n() > g.n() {
        return ClosureTrace {
            initial: g.clone(),
            rounds,
            final_graph: cur,
        };
    }
    // Any copy through a pair lies within distance v_H - 2 of the pair in
    // the host when H is connected.
    let radius = h.n() - 2;
    let mut candidates: Vec<Edge> = cur.non_edges().collect();
    while !candidates.is_empty() {
        let added = test_pairs(&cur, pat, &candidates, opts);
        if added.is_empty() {
            break;
        }
        for (e, _) in &added {
            cur.add_edge(e.u, e.v);
        }
        let new_edges: Vec<Edge> = added.iter().map(|(e, _)| *e).collect();
        rounds.push(RoundRecord {
            t: rounds.len() + 1,
            added,
        });
        candidates = if opts.dirty_set && pat.connected {
            dirty_pairs(&cur, &new_edges, radius)
        } else {
            cur.non_edges().collect()
        };
    }
    ClosureTrace {
        initial: g.clone(),
        rounds,
        final_graph: cur,
    }
}

pub fn close(g: &Graph, h: &Graph, opts: &ClosureOptions) -> ClosureTrace {
    close_compiled(g, &CompiledPattern::new(h), opts)
}

pub fn percolates(g: &Graph, h: &Graph) -> bool {
    close(g, h, &ClosureOptions::default()).percolates()
}

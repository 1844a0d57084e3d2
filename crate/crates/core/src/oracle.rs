//! Slow reference implementations used as ground truth in differential tests.

use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{Edge, Graph};

/// Whether `g + e` contains a copy of `h` using `e`, by unanchored
/// backtracking over all injective maps `V(H) -> V(G)`.
pub fn naive_completes(g: &Graph, e: Edge, h: &Graph) -> bool {
    fn adj(g: &Graph, e: Edge, a: usize, b: usize) -> bool {
        Edge::new(a, b) == e || g.has_edge(a, b)
    }
    fn go(g: &Graph, e: Edge, h: &Graph, map: &mut Vec<usize>) -> bool {
        let i = map.len();
        if i == h.n() {
            return h
                .edges()
                .any(|f| Edge::new(map[f.u], map[f.v]) == e);
        }
        for c in 0..g.n() {
            if map.contains(&c) {
                continue;
            }
            if (0..i).all(|j| !h.has_edge(i, j) || adj(g, e, c, map[j])) {
                map.push(c);
                if go(g, e, h, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    if h.n() > g.n() || g.has_edge(e.u, e.v) {
        return false;
    }
    go(g, e, h, &mut Vec::with_capacity(h.n()))
}

/// Closure with every missing pair retested every round.
pub fn naive_close(g: &Graph, h: &Graph) -> Graph {
    let mut cur = g.clone();
    loop {
        let added: Vec<Edge> = cur
            .non_edges()
            .filter(|&e| naive_completes(&cur, e, h))
            .collect();
        if added.is_empty() {
            return cur;
        }
        for e in added {
            cur.add_edge(e.u, e.v);
        }
    }
}

/// Closure that adds one edge at a time (the least completing pair) and
/// restarts the scan after every addition.
pub fn sequential_close(g: &Graph, h: &Graph) -> Graph {
    let mut cur = g.clone();
    loop {
        let next = cur.non_edges().find(|&e| naive_completes(&cur, e, h));
        match next {
            Some(e) => cur.add_edge(e.u, e.v),
            None => return cur,
        };
    }
}

/// Graph whose edge set is given by `mask`, pairs numbered lexicographically.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v);
            }
            bit += 1;
        }
    }
    g
}

/// All `2^C(n,2)` labeled graphs on `n` vertices in edge-mask order.
pub fn enumerate_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = n * n.saturating_sub(1) / 2;
    assert!(pairs <= 24, "enumeration limited to C(n,2) <= 24");
    (0u64..1 << pairs).map(move |m| graph_from_mask(n, m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeCountRow {
    pub edges: usize,
    pub total: u64,
    pub percolating: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusResult {
    pub n: usize,
    pub pattern: String,
    pub total: u64,
    pub percolating: u64,
    pub by_edge_count: Vec<EdgeCountRow>,
}

/// Counts percolating labeled graphs on `n` vertices via [`naive_close`].
pub fn percolation_census(n: usize, h: &Graph, pattern_id: &str) -> CensusResult {
    let pairs = n * n.saturating_sub(1) / 2;
    assert!(pairs <= 20, "census limited to C(n,2) <= 20");
    let (total, perc) = (0u64..1 << pairs)
        .into_par_iter()
        .fold(
            || (vec![0u64; pairs + 1], vec![0u64; pairs + 1]),
            |(mut t, mut p), mask| {
                let g = graph_from_mask(n, mask);
                let k = g.edge_count();
                t[k] += 1;
                if naive_close(&g, h).is_complete() {
                    p[k] += 1;
                }
                (t, p)
            },
        )
        .reduce(
            || (vec![0u64; pairs + 1], vec![0u64; pairs + 1]),
            |(mut t1, mut p1), (t2, p2)| {
                for i in 0..=pairs {
                    t1[i] += t2[i];
                    p1[i] += p2[i];
                }
                (t1, p1)
            },
        );
    CensusResult {
        n,
        pattern: pattern_id.to_string(),
        total: total.iter().sum(),
        percolating: perc.iter().sum(),
        by_edge_count: (0..=pairs)
            .map(|k| EdgeCountRow {
                edges: k,
                total: total[k],
                percolating: perc[k],
            })
            .collect(),
    }
}

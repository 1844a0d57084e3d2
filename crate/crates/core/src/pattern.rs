//! Exact density invariants and balance classes of a pattern graph `H`.
//!
//! Every extremum over subgraphs `F ⊆ H` with a fixed vertex count is
//! attained by an induced subgraph on a densest vertex subset, so all of
//! them are read off the densest-subgraph profile `m(v)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::rational::Rational;

/// Exhaustive subset scans are limited to patterns this small.
pub const MAX_PATTERN_VERTICES: usize = 12;

/// Adjacency of a small graph as one bitmask per vertex.
fn adjacency_masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|u| g.neighbors(u).fold(0u32, |m, v| m | 1 << v))
        .collect()
}

fn edges_in(adj: &[u32], set: u32) -> usize {
    let mut total = 0;
    let mut rest = set;
    while rest != 0 {
        let u = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        total += (adj[u] & set).count_ones() as usize;
    }
    total / 2
}

/// `m[v]` = maximum number of edges of a subgraph on `v` vertices, for
/// `v` in `0..=n`.
pub fn densest_subgraph_profile(h: &Graph) -> Result<Vec<usize>> {
    let n = h.n();
    if n > MAX_PATTERN_VERTICES {
        return Err(Error::PatternTooLarge {
            got: n,
            limit: MAX_PATTERN_VERTICES,
        });
    }
    let adj = adjacency_masks(h);
    let mut m = vec![0usize; n + 1];
    for set in 0u32..(1 << n) {
        let v = set.count_ones() as usize;
        let e = edges_in(&adj, set);
        if e > m[v] {
            m[v] = e;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PatternStats {
    #[serde(rename = "vH")]
    pub v_h: usize,
    #[serde(rename = "eH")]
    pub e_h: usize,
    #[serde(rename = "deltaH")]
    pub delta_h: usize,
    /// `(e_H - 2)/(v_H - 2)`; undefined below three vertices.
    pub lambda: Option<Rational>,
    pub lambda_prime: Option<Rational>,
    pub lambda_star: Option<Rational>,
    /// Vertex counts in `2..v_H` attaining `lambda_star`.
    pub v_star: Vec<usize>,
    /// Gap to `lambda_star` off `v_star`; `None` when every count attains it.
    pub xi: Option<Rational>,
    /// `min(1, xi)`, or zero when `xi` is undefined.
    pub xi_prime: Rational,
    /// Gap relative to `lambda` over `3 <= v_F < v_H`, used by the ladder bound.
    pub xi_ladder: Option<Rational>,
    pub balanced: bool,
    pub strictly_balanced: bool,
    pub connected: bool,
    /// `v_H <= 3` or minimum degree 1: the balance theory does not apply.
    pub degenerate: bool,
    pub densest_profile: BTreeMap<usize, usize>,
}

impl PatternStats {
    /// The "new component" baseline `lambda_*(k - v_H) + e_H - 1` for a graph on `k` vertices.
    pub fn star_bound(&self, k: usize) -> Option<Rational> {
        let ls = self.lambda_star?;
        Some(ls * (k as i64 - self.v_h as i64) + Rational::integer(self.e_h as i64 - 1))
    }

    /// The minimal-witness baseline `lambda (k - 2) + 1` for a graph on `k` vertices.
    pub fn lambda_bound(&self, k: usize) -> Option<Rational> {
        let l = self.lambda?;
        Some(l * (k as i64 - 2) + Rational::one())
    }

    /// `xi` is defined and positive, so the Case-2 and ladder bounds apply.
    pub fn has_positive_xi(&self) -> bool {
        self.xi.is_some_and(|x| x.is_positive())
    }
}

pub fn analyze(h: &Graph) -> Result<PatternStats> {
    let m = densest_subgraph_profile(h)?;
    let v_h = h.n();
    let e_h = h.edge_count();
    let delta_h = h.min_degree();
    let e = e_h as i64;
    let v = v_h as i64;

    let lambda = (v_h >= 3).then(|| Rational::new(e - 2, v - 2));

    // (e_H - m(v) - 1)/(v_H - v) for v in 2..v_H
    let star_terms: Vec<(usize, Rational)> = (2..v_h)
        .map(|vf| (vf, Rational::new(e - m[vf] as i64 - 1, v - vf as i64)))
        .collect();
    let lambda_star = star_terms.iter().map(|&(_, r)| r).min();
    let v_star: Vec<usize> = match lambda_star {
        Some(ls) => star_terms
            .iter()
            .filter(|&&(_, r)| r == ls)
            .map(|&(vf, _)| vf)
            .collect(),
        None => Vec::new(),
    };
    let xi = lambda_star.and_then(|ls| {
        star_terms
            .iter()
            .filter(|(vf, _)| !v_star.contains(vf))
            .map(|&(_, r)| r - ls)
            .min()
    });
    let xi_prime = match xi {
        Some(x) => x.min(Rational::one()),
        None => Rational::zero(),
    };
    let xi_ladder = lambda.and_then(|l| {
        star_terms
            .iter()
            .filter(|&&(vf, _)| vf >= 3)
            .map(|&(_, r)| r - l)
            .min()
    });

    // (m(v) - 1)/(v - 2) against lambda for proper vertex counts 3 <= v < v_H
    let (balanced, strictly_balanced) = match lambda {
        Some(l) => {
            let mut bal = true;
            let mut strict = true;
            for vf in 3..v_h {
                let r = Rational::new(m[vf] as i64 - 1, vf as i64 - 2);
                bal &= r <= l;
                strict &= r < l;
            }
            (bal, strict)
        }
        None => (false, false),
    };

    let lambda_prime = compute_lambda_prime(h)?;

    Ok(PatternStats {
        v_h,
        e_h,
        delta_h,
        lambda,
        lambda_prime,
        lambda_star,
        v_star,
        xi,
        xi_prime,
        xi_ladder,
        balanced,
        strictly_balanced,
        connected: h.is_connected(),
        degenerate: v_h <= 3 || delta_h < 2,
        densest_profile: (2..=v_h).map(|vf| (vf, m[vf])).collect(),
    })
}

/// Whether `(e_F - 1)/(v_F - 2)` over subgraphs with `v_F >= 3` is maximised by `G` itself.
pub fn is_2_balanced(g: &Graph) -> Result<bool> {
    let m = densest_subgraph_profile(g)?;
    Ok(two_balanced_from_profile(&m, g.edge_count()))
}

fn two_balanced_from_profile(m: &[usize], e_g: usize) -> bool {
    let v_g = m.len() - 1;
    if v_g < 3 {
        return false;
    }
    // (m(v) - 1)/(v - 2) <= (e_G - 1)/(v_G - 2), cross-multiplied
    (3..v_g).all(|v| {
        (m[v] as i64 - 1) * (v_g as i64 - 2) <= (e_g as i64 - 1) * (v as i64 - 2)
    })
}

/// `min over e of max over F ⊆ H \ e of e_F / v_F`. `None` for edgeless `H`.
pub fn compute_lambda_prime(h: &Graph) -> Result<Option<Rational>> {
    let mut best: Option<Rational> = None;
    for e in h.edges() {
        let m = densest_subgraph_profile(&h.without_edge(e))?;
        let densest = (1..=h.n())
            .map(|v| Rational::new(m[v] as i64, v as i64))
            .max()
            .expect("pattern has vertices");
        best = Some(best.map_or(densest, |b| b.min(densest)));
    }
    Ok(best)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AppendixReport {
    pub v_max: usize,
    /// Labeled graphs with `4 <= v_H <= v_max` and minimum degree at least 2.
    pub graphs_checked: u64,
    pub balanced: u64,
    pub violations: Vec<String>,
}

impl AppendixReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Result of checking both appendix facts on one pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AppendixCheck {
    pub balanced: bool,
    pub all_deletions_2_balanced: bool,
    pub connected: bool,
}

impl AppendixCheck {
    pub fn consistent(&self) -> bool {
        self.balanced == self.all_deletions_2_balanced && (!self.balanced || self.connected)
    }
}

/// Balanced-ness, 2-balancedness of every `H \ e` and connectivity from a single subset scan.
pub fn appendix_check(h: &Graph) -> Result<AppendixCheck> {
    let n = h.n();
    if n > MAX_PATTERN_VERTICES {
        return Err(Error::PatternTooLarge {
            got: n,
            limit: MAX_PATTERN_VERTICES,
        });
    }
    let adj = adjacency_masks(h);
    let edges: Vec<Edge> = h.edges().collect();
    let mut m = vec![0usize; n + 1];
    let mut m_del = vec![vec![0usize; n + 1]; edges.len()];
    for set in 0u32..(1 << n) {
        let v = set.count_ones() as usize;
        let c = edges_in(&adj, set);
        m[v] = m[v].max(c);
        for (i, e) in edges.iter().enumerate() {
            let inside = set >> e.u & 1 == 1 && set >> e.v & 1 == 1;
            let ce = c - inside as usize;
            if ce > m_del[i][v] {
                m_del[i][v] = ce;
            }
        }
    }
    let e_h = edges.len() as i64;
    let balanced = n >= 3
        && (3..n).all(|v| (m[v] as i64 - 1) * (n as i64 - 2) <= (e_h - 2) * (v as i64 - 2));
    let all_deletions_2_balanced = m_del
        .iter()
        .all(|md| two_balanced_from_profile(md, edges.len() - 1));
    Ok(AppendixCheck {
        balanced,
        all_deletions_2_balanced,
        connected: h.is_connected(),
    })
}

/// Checks both appendix facts on every labeled graph with
/// `4 <= v_H <= v_max` and minimum degree at least two.
pub fn verify_appendix_lemmas(v_max: usize) -> Result<AppendixReport> {
    if v_max > 7 {
        return Err(Error::InvalidConfig(format!(
            "exhaustive appendix check supports v_max <= 7, got {v_max}"
        )));
    }
    let mut report = AppendixReport {
        v_max,
        ..Default::default()
    };
    for n in 4..=v_max {
        let pairs = n * (n - 1) / 2;
        let (checked, balanced, violations) = (0u64..1 << pairs)
            .into_par_iter()
            .fold(
                || (0u64, 0u64, Vec::new()),
                |(mut c, mut b, mut viol), mask| {
                    let h = crate::oracle::graph_from_mask(n, mask);
                    if h.min_degree() >= 2 {
                        c += 1;
                        let chk = appendix_check(&h).expect("n <= 7");
                        b += chk.balanced as u64;
                        if !chk.consistent() {
                            viol.push(format!("n={n} mask={mask:#x}: {chk:?}"));
                        }
                    }
                    (c, b, viol)
                },
            )
            .reduce(
                || (0, 0, Vec::new()),
                |(c1, b1, mut v1), (c2, b2, v2)| {
                    v1.extend(v2);
                    (c1 + c2, b1 + b2, v1)
                },
            );
        report.graphs_checked += checked;
        report.balanced += balanced;
        report.violations.extend(violations);
    }
    report.violations.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_clique, make_complete_bipartite, make_double_barbell, make_path};

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    fn triangle_with_pendant() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn profiles() {
        let m = densest_subgraph_profile(&make_clique(5).unwrap()).unwrap();
        assert_eq!(&m[2..], &[1, 3, 6, 10]);
        let m = densest_subgraph_profile(&make_double_barbell(4).unwrap()).unwrap();
        assert_eq!(m[4], 6);
        assert_eq!(m[8], 14);
        let m = densest_subgraph_profile(&make_path(4)).unwrap();
        assert_eq!(m[3], 2);
        assert!(densest_subgraph_profile(&Graph::empty(13)).is_err());
    }

    #[test]
    fn k5_stats() {
        let s = analyze(&make_clique(5).unwrap()).unwrap();
        assert_eq!(s.lambda, Some(r(8, 3)));
        assert_eq!(s.lambda_star, Some(r(8, 3)));
        assert_eq!(s.v_star, vec![2]);
        assert_eq!(s.xi, Some(r(1, 3)));
        assert_eq!(s.xi_prime, r(1, 3));
        assert_eq!(s.xi_ladder, Some(r(1, 3)));
        assert!(s.balanced && s.strictly_balanced && s.connected && !s.degenerate);
        assert_eq!(s.lambda_prime, Some(r(9, 5)));
    }

    #[test]
    fn k4_stats() {
        let s = analyze(&make_clique(4).unwrap()).unwrap();
        assert_eq!(s.lambda, Some(r(2, 1)));
        assert_eq!(s.lambda_star, Some(r(2, 1)));
        assert!(s.balanced && !s.strictly_balanced);
        assert_eq!(s.v_star, vec![2, 3]);
        // every vertex count attains lambda_*, so xi has an empty domain
        assert_eq!(s.xi, None);
        assert_eq!(s.xi_prime, Rational::zero());
        assert_eq!(s.xi_ladder, Some(Rational::zero()));
    }

    #[test]
    fn double_barbell_stats() {
        let s = analyze(&make_double_barbell(4).unwrap()).unwrap();
        assert_eq!(s.lambda, Some(r(2, 1)));
        assert_eq!(s.lambda_star, Some(r(7, 4)));
        assert!(!s.balanced && !s.strictly_balanced);
        assert_eq!(s.v_star, vec![4]);
    }

    #[test]
    fn two_balanced_examples() {
        assert!(is_2_balanced(&make_clique(4).unwrap().without_edge(Edge::new(0, 1))).unwrap());
        assert!(!is_2_balanced(&triangle_with_pendant()).unwrap());
        assert!(is_2_balanced(&make_clique(3).unwrap()).unwrap());
    }

    #[test]
    fn lambda_prime_examples() {
        // Deleting a triangle edge leaves a star K_{1,3} of density 3/4.
        assert_eq!(compute_lambda_prime(&triangle_with_pendant()).unwrap(), Some(r(3, 4)));
        assert_eq!(compute_lambda_prime(&make_clique(5).unwrap()).unwrap(), Some(r(9, 5)));
        // K_2 minus its edge has no edges at all.
        assert_eq!(compute_lambda_prime(&make_clique(2).unwrap()).unwrap(), Some(r(0, 1)));
        assert_eq!(compute_lambda_prime(&Graph::empty(3)).unwrap(), None);
    }

    #[test]
    fn appendix_spot_checks() {
        let k4 = appendix_check(&make_clique(4).unwrap()).unwrap();
        assert!(k4.balanced && k4.all_deletions_2_balanced && k4.consistent());
        let dd = make_double_barbell(4).unwrap();
        let chk = appendix_check(&dd).unwrap();
        assert!(!chk.balanced && !chk.all_deletions_2_balanced);
        let some_bad = dd
            .edges()
            .any(|e| !is_2_balanced(&dd.without_edge(e)).unwrap());
        assert!(some_bad);
    }

    #[test]
    fn appendix_exhaustive_v5() {
        let rep = verify_appendix_lemmas(5).unwrap();
        assert!(rep.passed(), "{:?}", rep.violations);
        assert!(rep.graphs_checked > 0);
        assert!(verify_appendix_lemmas(8).is_err());
    }

    #[test]
    fn bipartite_is_analyzed() {
        let s = analyze(&make_complete_bipartite(2, 3).unwrap()).unwrap();
        assert_eq!(s.lambda, Some(r(4, 3)));
        assert!(s.connected);
    }

    #[test]
    fn degenerate_flags() {
        assert!(analyze(&make_clique(3).unwrap()).unwrap().degenerate);
        assert!(analyze(&triangle_with_pendant()).unwrap().degenerate);
        let k2 = analyze(&make_clique(2).unwrap()).unwrap();
        assert!(k2.degenerate && k2.lambda.is_none() && k2.lambda_star.is_none());
    }
}

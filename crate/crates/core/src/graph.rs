//! Undirected simple graphs with bit-packed adjacency rows.
//!
//! Every row is a slice of `words` 64-bit words, so common-neighbourhood
//! queries are word-wise `AND`s. Vertices are the dense range `0..n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of 64-bit words needed for `n` bits.
#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Canonical unordered vertex pair with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Normalises the endpoint order. Panics on a self-loop.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "an edge needs two distinct endpoints");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn try_new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(Edge::new(a, b))
    }

    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.contains(other.u) || self.contains(other.v)
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.u, e.v]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = Error;
    fn try_from(p: [usize; 2]) -> Result<Self> {
        Edge::try_new(p[0], p[1])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Graph", 2)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("edges", &self.edges().collect::<Vec<_>>())?;
        st.end()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
            edges: 0,
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !g.add_edge(a, b) {
                let e = Edge::new(a, b);
                return Err(Error::DuplicateEdge(e.u, e.v));
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Edge count recomputed from the adjacency bits.
    pub fn bit_edge_count(&self) -> usize {
        let set: u64 = self.rows.iter().map(|w| w.count_ones() as u64).sum();
        (set / 2) as usize
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        (self.rows[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    /// Inserts `{u, v}`; returns false when it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u}, {v})");
        if self.has_edge(u, v) {
            return false;
        }
        self.rows[u * self.words + v / 64] |= 1 << (v % 64);
        self.rows[v * self.words + u / 64] |= 1 << (u % 64);
        self.edges += 1;
        true
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || !self.has_edge(u, v) {
            return false;
        }
        self.rows[u * self.words + v / 64] &= !(1 << (v % 64));
        self.rows[v * self.words + u / 64] &= !(1 << (u % 64));
        self.edges -= 1;
        true
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Minimum degree; zero for the graph on no vertices.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).min().unwrap_or(0)
    }

    pub fn neighbors(&self, u: usize) -> BitIter<'_> {
        BitIter::new(self.row(u))
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| Edge { u, v })
        })
    }

    /// Missing pairs in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n)
                .filter(move |&v| !self.has_edge(u, v))
                .map(move |v| Edge { u, v })
        })
    }

    pub fn max_edges(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    pub fn is_complete(&self) -> bool {
        self.edges == self.max_edges()
    }

    /// True when every edge of `self` is an edge of `other` (same vertex count).
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &Graph) {
        assert_eq!(self.n, other.n);
        for e in other.edges() {
            self.add_edge(e.u, e.v);
        }
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![0u64; self.words];
        let mut stack = vec![0usize];
        seen[0] |= 1;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if seen[v / 64] >> (v % 64) & 1 == 0 {
                    seen[v / 64] |= 1 << (v % 64);
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Subgraph induced by `vertices`, relabelled `0..len` in ascending
    /// original order. Duplicates in `vertices` are ignored.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut vs: Vec<usize> = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let mut g = Graph::empty(vs.len());
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Copy with vertex `i` renamed to `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n);
        for e in self.edges() {
            g.add_edge(perm[e.u], perm[e.v]);
        }
        g
    }

    pub fn without_edge(&self, e: Edge) -> Graph {
        let mut g = self.clone();
        g.remove_edge(e.u, e.v);
        g
    }
}

/// Iterator over the set bits of a word slice.
pub struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        BitIter {
            words,
            idx: 0,
            cur: words.first().copied().unwrap_or(0),
        }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Set of vertex pairs of a fixed host, indexed lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    n: usize,
    bits: Vec<u64>,
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Serialized as the lexicographic list of its edges.
impl Serialize for EdgeSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl EdgeSet {
    pub fn new(n: usize) -> Self {
        EdgeSet {
            n,
            bits: vec![0; words_for(n * n.saturating_sub(1) / 2)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, e: Edge) -> usize {
        e.u * self.n - e.u * (e.u + 1) / 2 + (e.v - e.u - 1)
    }

    fn edge_at(&self, mut idx: usize) -> Edge {
        let mut u = 0;
        loop {
            let row = self.n - u - 1;
            if idx < row {
                return Edge { u, v: u + 1 + idx };
            }
            idx -= row;
            u += 1;
        }
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        let i = self.index(e);
        let was = self.bits[i / 64] >> (i % 64) & 1 == 1;
        self.bits[i / 64] |= 1 << (i % 64);
        !was
    }

    pub fn contains(&self, e: Edge) -> bool {
        let i = self.index(e);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &EdgeSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_subset_of(&self, other: &EdgeSet) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// Edges in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        BitIter::new(&self.bits).map(move |i| self.edge_at(i))
    }

    /// Number of vertices touched by at least one edge.
    pub fn spanned_vertices(&self) -> usize {
        let mut seen = vec![0u64; words_for(self.n)];
        for e in self.iter() {
            seen[e.u / 64] |= 1 << (e.u % 64);
            seen[e.v / 64] |= 1 << (e.v % 64);
        }
        seen.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for e in self.iter() {
            g.add_edge(e.u, e.v);
        }
        g
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut s = EdgeSet::new(g.n());
        for e in g.edges() {
            s.insert(e);
        }
        s
    }
}

/// Complete graph `K_n`.
pub fn make_complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g
}

/// The clique `K_r`, `r >= 2`.
pub fn make_clique(r: usize) -> Result<Graph> {
    if r < 2 {
        return Err(Error::InvalidSize(format!("clique needs r >= 2, got {r}")));
    }
    Ok(make_complete(r))
}

/// `K_{r,s}` with parts `0..r` and `r..r+s`.
pub fn make_complete_bipartite(r: usize, s: usize) -> Result<Graph> {
    if r < 1 || s < 1 {
        return Err(Error::InvalidSize(format!(
            "complete bipartite needs r, s >= 1, got ({r}, {s})"
        )));
    }
    let mut g = Graph::empty(r + s);
    for a in 0..r {
        for b in r..r + s {
            g.add_edge(a, b);
        }
    }
    Ok(g)
}

/// Double barbell `DD_r`: cliques on `0..r` and `r..2r` joined by the
/// vertex-disjoint edges `(0, r)` and `(1, r + 1)`.
pub fn make_double_barbell(r: usize) -> Result<Graph> {
    if r < 4 {
        return Err(Error::InvalidSize(format!("double barbell needs r >= 4, got {r}")));
    }
    let mut g = Graph::empty(2 * r);
    for base in [0, r] {
        for a in 0..r {
            for b in a + 1..r {
                g.add_edge(base + a, base + b);
            }
        }
    }
    g.add_edge(0, r);
    g.add_edge(1, r + 1);
    Ok(g)
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn make_path(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 1..n {
        g.add_edge(u - 1, u);
    }
    g
}

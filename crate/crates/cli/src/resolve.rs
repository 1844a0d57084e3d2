use std::path::Path;

use anyhow::{bail, Context, Result};
use wsat::graph::{make_clique, make_complete_bipartite, make_double_barbell, Edge, Graph};
use wsat::io::parse_graph_auto;

/// `K<r>`, `K<r>,<s>`, `DD<r>`, or a path to an edge-list / graph6 file.
pub fn resolve_pattern(spec: &str) -> Result<Graph> {
    if let Some(g) = named_pattern(spec)? {
        return Ok(g);
    }
    if Path::new(spec).exists() {
        return read_graph(spec);
    }
    bail!("unknown pattern '{spec}' (expected K<r>, K<r>,<s>, DD<r> or a graph file)")
}

fn named_pattern(spec: &str) -> Result<Option<Graph>> {
    let parse = |s: &str| s.parse::<usize>().ok();
    if let Some(rest) = spec.strip_prefix("DD") {
        if let Some(r) = parse(rest) {
            return Ok(Some(make_double_barbell(r)?));
        }
    } else if let Some(rest) = spec.strip_prefix('K') {
        if let Some((a, b)) = rest.split_once(',') {
            if let (Some(r), Some(s)) = (parse(a), parse(b)) {
                return Ok(Some(make_complete_bipartite(r, s)?));
            }
        } else if let Some(r) = parse(rest) {
            return Ok(Some(make_clique(r)?));
        }
    }
    Ok(None)
}

pub fn read_graph(path: &str) -> Result<Graph> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    parse_graph_auto(&text).with_context(|| format!("cannot parse {path}"))
}

/// Parses `"u v"` (also accepts `u,v`).
pub fn parse_pair(s: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .collect();
    match parts.as_slice() {
        [a, b] => Ok((
            a.parse().with_context(|| format!("bad vertex '{a}'"))?,
            b.parse().with_context(|| format!("bad vertex '{b}'"))?,
        )),
        _ => bail!("expected a pair \"u v\", got '{s}'"),
    }
}

pub fn parse_edge(s: &str) -> Result<Edge> {
    let (u, v) = parse_pair(s)?;
    Ok(Edge::try_new(u, v)?)
}

//! Text formats: a plain edge list and graph6.
//!
//! Edge list: the first line is the vertex count `n`; every later non-empty
//! line is `u v` with `0 <= u, v < n`. Repeated edges are rejected.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing vertex count".into(),
    })?;
    let n: usize = header.trim().parse().map_err(|_| Error::Parse {
        line: 1,
        msg: format!("expected vertex count, found {:?}", header.trim()),
    })?;
    let mut g = Graph::empty(n);
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let mut next_vertex = || -> Result<usize> {
            let tok = it.next().ok_or(Error::Parse {
                line: line_no,
                msg: "expected two vertices".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad vertex {tok:?}"),
            })
        };
        let (a, b) = (next_vertex()?, next_vertex()?);
        if it.next().is_some() {
            return Err(Error::Parse {
                line: line_no,
                msg: "trailing tokens".into(),
            });
        }
        for x in [a, b] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        if !g.add_edge(a, b) {
            return Err(Error::DuplicateEdge(a.min(b), a.max(b)));
        }
    }
    Ok(g)
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for e in g.edges() {
        out.push_str(&format!("{} {}\n", e.u, e.v));
    }
    out
}

const G6_HEADER: &str = ">>graph6<<";

fn encode_n(n: usize, out: &mut Vec<u8>) {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + 63);
        }
    }
}

pub fn serialize_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    encode_n(n, &mut out);
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is printable ASCII")
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let s = text.trim();
    let s = s.strip_prefix(G6_HEADER).unwrap_or(s);
    let bytes = s.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::Graph6(format!("byte {b} outside 63..=126")));
    }
    let (n, body) = match bytes {
        [] => return Err(Error::Graph6("empty input".into())),
        [126, 126, rest @ ..] => {
            if rest.len() < 6 {
                return Err(Error::Graph6("truncated 8-byte header".into()));
            }
            let n = rest[..6]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &rest[6..])
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(Error::Graph6("truncated 4-byte header".into()));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &rest[3..])
        }
        [b, rest @ ..] => ((b - 63) as usize, rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(Error::Graph6(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            body.len()
        )));
    }
    let mut g = Graph::empty(n);
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte = body[k / 6] - 63;
            if (byte >> (5 - k % 6)) & 1 == 1 {
                g.add_edge(u, v);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Parses either format; graph6 never starts with a digit.
pub fn parse_graph_auto(text: &str) -> Result<Graph> {
    match text.trim_start().chars().next() {
        Some(c) if c.is_ascii_digit() => parse_edge_list(text),
        _ => parse_graph6(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_path};

    #[test]
    fn edge_list_path() {
        let g = parse_edge_list("3\n0 1\n1 2\n").unwrap();
        assert_eq!(g, make_path(3));
    }

    #[test]
    fn edge_list_normalizes() {
        let g = parse_edge_list("4\n\n3 1\n  0   2 \n").unwrap();
        assert_eq!(serialize_edge_list(&g), "4\n0 2\n1 3\n");
    }

    #[test]
    fn edge_list_errors() {
        assert_eq!(parse_edge_list("2\n0 0\n"), Err(Error::SelfLoop(0)));
        assert_eq!(
            parse_edge_list("3\n0 1\n1 0\n"),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            parse_edge_list("3\n0 5\n"),
            Err(Error::VertexOutOfRange { vertex: 5, .. })
        ));
        assert!(matches!(parse_edge_list("x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("3\n0 1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_edge_list(""), Err(Error::Parse { .. })));
    }

    // Expected strings are hand-encoded from the published format: header
    // byte n + 63, then upper-triangle bits in column order, 6 per byte.
    #[test]
    fn graph6_known_values() {
        assert_eq!(serialize_graph6(&make_complete(4)), "C~");
        assert_eq!(serialize_graph6(&Graph::empty(3)), "B?");
        // path 0-1-2: bits x01=1, x02=0, x12=1 -> 101000 = 40
        assert_eq!(serialize_graph6(&make_path(3)), "Bg");
        let k4 = parse_graph6("C~").unwrap();
        assert_eq!((k4.n(), k4.edge_count()), (4, 6));
        let e3 = parse_graph6(">>graph6<<B?").unwrap();
        assert_eq!((e3.n(), e3.edge_count()), (3, 0));
    }

    #[test]
    fn graph6_long_header() {
        let mut g = Graph::empty(100);
        g.add_edge(3, 97);
        let s = serialize_graph6(&g);
        assert!(s.starts_with("~?@c"));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn graph6_errors() {
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("C").is_err());
        assert!(parse_graph6("C~~").is_err());
        assert!(parse_graph6("~?").is_err());
        assert!(parse_graph6("C\u{1}").is_err());
    }

    #[test]
    fn auto_detects() {
        assert_eq!(parse_graph_auto("C~").unwrap(), make_complete(4));
        assert_eq!(parse_graph_auto("3\n0 1\n1 2\n").unwrap(), make_path(3));
    }
}

//! Plain-text edge lists: a header line `r t m`, then `m` lines of `r` ascending vertex ids.
//! Blank lines and `#` comments are ignored.

use super::RGraph;
use crate::error::{Error, Result};
use std::fmt::Write;

pub fn write_edge_list(g: &RGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", g.r(), g.t(), g.len()).unwrap();
    for e in g.edge_tuples() {
        let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| tok.parse::<usize>().map_err(|_| Error::Parse { line, msg: format!("not a vertex id: {tok:?}") }))
        .collect()
}

pub fn parse_edge_list(input: &str) -> Result<RGraph> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "missing `r t m` header".into() })?;
    let h = numbers(hline, header)?;
    let [r, t, m] = h[..] else {
        return Err(Error::Parse { line: hline, msg: "header must be `r t m`".into() });
    };
    RGraph::empty(r, t).map_err(|e| Error::Parse { line: hline, msg: e.to_string() })?;
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        if edges.len() == m {
            return Err(Error::Parse { line, msg: format!("more than the declared {m} edges") });
        }
        let e = numbers(line, text)?;
        if e.len() != r || !e.windows(2).all(|w| w[0] < w[1]) || e[0] == 0 || e[r - 1] > t {
            return Err(Error::Parse { line, msg: format!("edge {e:?} is not {r} ascending ids in 1..={t}") });
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(Error::Parse { line: 0, msg: format!("declared {m} edges, found {}", edges.len()) });
    }
    RGraph::new(r, t, edges).map_err(|e| Error::Parse { line: 0, msg: e.to_string() })
}

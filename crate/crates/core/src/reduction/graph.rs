//! Graph instances for the coloring reduction.
//!
//! Two text formats are accepted: an edge list (`n m` header, then `u v`
//! lines, 0-based) and DIMACS `.col` (`p edge n m`, `e u v`, 1-based).

use std::fmt;
use std::str::FromStr;

use crate::error::{input, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    n: usize,
    edges: Vec<(usize, usize)>,
    colors: usize,
}

impl GraphInstance {
    /// Edges are normalized to `(min, max)`; repeated edges are dropped.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, colors: usize) -> Result<Self> {
        if colors < 3 {
            return input(format!("coloring instances need at least 3 colors, got {colors}"));
        }
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return input(format!("edge ({u}, {v}) out of range for {n} vertices"));
            }
            if u == v {
                return input(format!("self-loop at vertex {u}"));
            }
            let e = (u.min(v), u.max(v));
            if !out.contains(&e) {
                out.push(e);
            }
        }
        Ok(GraphInstance { n, edges: out, colors })
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn with_colors(&self, colors: usize) -> Result<Self> {
        GraphInstance::new(self.n, self.edges.iter().copied(), colors)
    }

    pub fn is_proper(&self, coloring: &[usize]) -> bool {
        coloring.len() == self.n
            && coloring.iter().all(|&c| c < self.colors)
            && self.edges.iter().all(|&(u, v)| coloring[u] != coloring[v])
    }

    pub fn complete(n: usize, colors: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        GraphInstance::new(n, edges, colors)
    }

    pub fn cycle(n: usize, colors: usize) -> Result<Self> {
        GraphInstance::new(n, (0..n).map(|u| (u, (u + 1) % n)), colors)
    }

    /// Either format; colors default to 3.
    pub fn parse(text: &str) -> Result<Self> {
        let is_dimacs = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .is_some_and(|l| l.starts_with("c ") || l == "c" || l.starts_with("p "));
        if is_dimacs {
            parse_dimacs(text)
        } else {
            parse_edge_list(text)
        }
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

fn num(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Input(format!("bad number {s:?}")))
}

fn parse_edge_list(text: &str) -> Result<GraphInstance> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header: Vec<&str> = lines.next().ok_or_else(|| Error::Input("empty graph file".into()))?.split_whitespace().collect();
    let [n, m] = header.as_slice() else {
        return input("edge list header must be `n m`");
    };
    let (n, m) = (num(n)?, num(m)?);
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = parts.as_slice() else {
            return input(format!("bad edge line {line:?}"));
        };
        edges.push((num(u)?, num(v)?));
    }
    if edges.len() != m {
        return input(format!("header announces {m} edges, found {}", edges.len()));
    }
    GraphInstance::new(n, edges, 3)
}

fn parse_dimacs(text: &str) -> Result<GraphInstance> {
    let mut n = None;
    let mut edges = Vec::new();
    for line in text.lines().map(str::trim) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            [] | ["c", ..] => {}
            ["p", _, nv, _] => n = Some(num(nv)?),
            ["e", u, v] => {
                let (u, v) = (num(u)?, num(v)?);
                if u == 0 || v == 0 {
                    return input("DIMACS vertices are 1-based");
                }
                edges.push((u - 1, v - 1));
            }
            _ => return input(format!("bad DIMACS line {line:?}")),
        }
    }
    let n = n.ok_or_else(|| Error::Input("missing DIMACS `p` line".into()))?;
    GraphInstance::new(n, edges, 3)
}

impl FromStr for GraphInstance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GraphInstance::parse(s)
    }
}

impl fmt::Display for GraphInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices, {} edges, {} colors", self.n, self.edges.len(), self.colors)
    }
}

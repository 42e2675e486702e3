use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `1..=vertex_count`, stored as
/// adjacency bitmasks (at most 64 vertices).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

pub const MAX_VERTICES: usize = 64;

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                size: n,
                limit: MAX_VERTICES,
            });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        for w in [u, v] {
            if w == 0 || w > self.n {
                return Err(Error::InvalidGraph(format!("vertex {w} outside [1, {}]", self.n)));
            }
        }
        self.adj[u - 1] |= 1 << (v - 1);
        self.adj[v - 1] |= 1 << (u - 1);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && v >= 1 && u <= self.n && v <= self.n && self.adj[u - 1] >> (v - 1) & 1 == 1
    }

    /// Neighbourhood of 0-based vertex `i` as a 0-based bitmask.
    pub(crate) fn mask(&self, i: usize) -> u64 {
        self.adj[i]
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.n {
            for v in u + 1..=self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (1..=self.n).filter(|&v| self.has_edge(u, v)).collect()
    }

    fn is_permutation(&self, seq: &[usize]) -> bool {
        let mut seen = vec![false; self.n];
        seq.len() == self.n
            && seq
                .iter()
                .all(|&v| v >= 1 && v <= self.n && !std::mem::replace(&mut seen[v - 1], true))
    }

    pub fn is_hamiltonian_path(&self, seq: &[usize]) -> bool {
        self.n > 0 && self.is_permutation(seq) && seq.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// Cyclic order with every consecutive pair adjacent, including the
    /// closing pair. A single vertex has no loop, so it is never a cycle.
    pub fn is_hamiltonian_cycle(&self, seq: &[usize]) -> bool {
        self.n >= 2 && self.is_hamiltonian_path(seq) && self.has_edge(seq[0], seq[seq.len() - 1])
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices={}", self.n)?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty graph file"))?;
        let n: usize = header
            .strip_prefix("vertices=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(ln, "expected header \"vertices=<n>\""))?;
        let mut g = Graph::empty(n)?;
        for (ln, line) in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => g.add_edge(u, v).map_err(|e| Error::parse(ln, e.to_string()))?,
                _ => return Err(Error::parse(ln, "expected an edge \"u v\"")),
            }
        }
        Ok(g)
    }
}

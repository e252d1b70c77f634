//! Undirected simple graphs over vertex indices `0..n`, with DIMACS
//! edge-format import/export.
//!
//! The adjacency relation is stored as a bit matrix, which is what both
//! the chromatic solver and the compatibility-graph construction want:
//! neighbourhood intersections are word-parallel.

use std::fmt::Write as _;

use thiserror::Error;

/// Symmetric irreflexive adjacency over `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SimpleGraph {
    pub fn new(n: usize) -> SimpleGraph {
        let words = n.div_ceil(64).max(1);
        SimpleGraph { n, words, bits: vec![0; words * n] }
    }

    pub fn complete(n: usize) -> SimpleGraph {
        let mut g = SimpleGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Adds `{u, v}`; loops are rejected, repeats are harmless.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "loop at vertex {u}");
        assert!(u < self.n && v < self.n, "edge ({u},{v}) outside 0..{}", self.n);
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Adjacency row of `u` as bit words.
    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbours(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(u).iter().enumerate().flat_map(|(wi, &w)| {
            BitIter { word: w, base: wi * 64 }
        })
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// All edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbours(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * self.n.saturating_sub(1) / 2
    }

    /// DIMACS edge format, 1-based: a `p edge n m` line then `e u v` lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p edge {} {}", self.n, self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "e {} {}", u + 1, v + 1);
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<SimpleGraph, DimacsError> {
        let mut graph: Option<SimpleGraph> = None;
        for (lno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lno = lno + 1;
            match line.split_ascii_whitespace().collect::<Vec<_>>().as_slice() {
                [] | ["c", ..] => {}
                ["p", "edge" | "col", n, _m] => {
                    let n = n.parse().map_err(|_| DimacsError::Bad { line: lno, text: raw.into() })?;
                    graph = Some(SimpleGraph::new(n));
                }
                ["e", u, v] => {
                    let g = graph.as_mut().ok_or(DimacsError::EdgeBeforeHeader { line: lno })?;
                    let u: usize = u.parse().map_err(|_| DimacsError::Bad { line: lno, text: raw.into() })?;
                    let v: usize = v.parse().map_err(|_| DimacsError::Bad { line: lno, text: raw.into() })?;
                    if u == 0 || v == 0 || u > g.n || v > g.n || u == v {
                        return Err(DimacsError::BadEdge { line: lno, u, v, n: g.n });
                    }
                    g.add_edge(u - 1, v - 1);
                }
                _ => return Err(DimacsError::Bad { line: lno, text: raw.into() }),
            }
        }
        graph.ok_or(DimacsError::NoHeader)
    }
}

struct BitIter {
    word: u64,
    base: usize,
}

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + tz)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: cannot parse {text:?}")]
    Bad { line: usize, text: String },
    #[error("line {line}: edge ({u},{v}) invalid for a graph on {n} vertices")]
    BadEdge { line: usize, u: usize, v: usize, n: usize },
    #[error("line {line}: edge line before the `p edge` header")]
    EdgeBeforeHeader { line: usize },
    #[error("no `p edge` header line")]
    NoHeader,
}

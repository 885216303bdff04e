//! Support graphs of matrices.
//!
//! Vertex `j` is the basis state `|j>`. Column `j` of `U` is `U|j>`, so
//! the edge `j -> i` exists when `|U[i, j]|` exceeds the threshold.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::matrix::ComplexMatrix;

/// Magnitudes at or below this count as zero.
pub const DEFAULT_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph must have at least one vertex")]
    Empty,
}

/// Directed graph on `0..n` with sorted, duplicate-free successor lists.
#[derive(Clone, Debug)]
pub struct TssGraph {
    n: usize,
    successors: Vec<Vec<usize>>,
    rows: Vec<FixedBitSet>,
    threshold: f64,
}

impl PartialEq for TssGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.successors == other.successors
            && self.threshold.to_bits() == other.threshold.to_bits()
    }
}

impl TssGraph {
    /// Builds a graph from an edge list; duplicates are merged.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        threshold: f64,
    ) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for (from, to) in edges {
            for vertex in [from, to] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { vertex, n });
                }
            }
            rows[from].insert(to);
        }
        Ok(Self::from_rows(rows, threshold))
    }

    fn from_rows(rows: Vec<FixedBitSet>, threshold: f64) -> Self {
        let successors = rows.iter().map(|r| r.ones().collect()).collect();
        Self {
            n: rows.len(),
            successors,
            rows,
            threshold,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Ascending successors of `v`.
    #[inline]
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }

    /// Successor set of `v` as a bitset over `0..n`.
    #[inline]
    pub fn successor_bits(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.rows[from].contains(to)
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().map(Vec::len).sum()
    }

    /// Edges in ascending `(from, to)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(j, succ)| succ.iter().map(move |&i| (j, i)))
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.successors[v].len()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (_, i) in self.edges() {
            deg[i] += 1;
        }
        deg
    }

    /// Same vertices with every edge reversed.
    pub fn reversed(&self) -> Self {
        let mut rows = vec![FixedBitSet::with_capacity(self.n); self.n];
        for (j, i) in self.edges() {
            rows[i].insert(j);
        }
        Self::from_rows(rows, self.threshold)
    }

    /// The subgraph keeping only the out-edges of `j`.
    pub fn star_subgraph(&self, j: usize) -> Result<Self, GraphError> {
        self.check_vertex(j)?;
        let mut rows = vec![FixedBitSet::with_capacity(self.n); self.n];
        rows[j] = self.rows[j].clone();
        Ok(Self::from_rows(rows, self.threshold))
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }
}

/// Builds the support graph: `j -> i` iff `|m[i, j]| > threshold`.
pub fn build_tss(m: &ComplexMatrix, threshold: f64) -> TssGraph {
    assert!(threshold >= 0.0, "threshold must be non-negative");
    let n = m.dim();
    let mut rows = vec![FixedBitSet::with_capacity(n); n];
    for (i, row) in m.rows().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if z.norm() > threshold {
                rows[j].insert(i);
            }
        }
    }
    TssGraph::from_rows(rows, threshold)
}

/// Out-edges of a single vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeLevelTss {
    pub source: usize,
    pub targets: Vec<usize>,
    pub has_self_loop: bool,
}

pub fn node_tss(g: &TssGraph, j: usize) -> Result<NodeLevelTss, GraphError> {
    g.check_vertex(j)?;
    Ok(NodeLevelTss {
        source: j,
        targets: g.successors(j).to_vec(),
        has_self_loop: g.has_edge(j, j),
    })
}

/// Two stars are isomorphic exactly when they have the same number of
/// targets and agree on the self loop.
pub fn node_patterns_isomorphic(a: &NodeLevelTss, b: &NodeLevelTss) -> bool {
    a.targets.len() == b.targets.len() && a.has_self_loop == b.has_self_loop
}

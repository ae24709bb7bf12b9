//! Simple undirected graphs, connectivity and degree statistics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::geometry::NodeId;

/// Simple undirected graph on nodes `0..n`.
///
/// Edges are stored once each as `(lo, hi)` with `lo < hi`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndirectedGraph {
    n: usize,
    edges: Vec<(NodeId, NodeId)>,
}

impl UndirectedGraph {
    pub fn empty(n: usize) -> Self {
        UndirectedGraph {
            n,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from an edge list. Orientation and repeats are
    /// normalized away; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut out = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(invalid(format!("self-loop at node {u}")));
            }
            if u.index() >= n || v.index() >= n {
                return Err(invalid(format!("edge {u}-{v} out of range for n = {n}")));
            }
            out.push(if u < v { (u, v) } else { (v, u) });
        }
        out.sort_unstable();
        out.dedup();
        Ok(UndirectedGraph { n, edges: out })
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (NodeId::from(u), NodeId::from(v))))
            .collect();
        UndirectedGraph { n, edges }
    }

    /// Builds from a symmetric predicate evaluated on every unordered pair.
    pub(crate) fn from_pair_predicate(n: usize, mut keep: impl FnMut(NodeId, NodeId) -> bool) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                let (u, v) = (NodeId::from(u), NodeId::from(v));
                if keep(u, v) {
                    edges.push((u, v));
                }
            }
        }
        UndirectedGraph { n, edges }
    }

    /// Caller guarantees the edges are normalized, sorted and unique.
    pub(crate) fn from_sorted_unchecked(n: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v.index() < n));
        UndirectedGraph { n, edges }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u.index()] += 1;
            deg[v.index()] += 1;
        }
        deg
    }

    /// True when every edge of `self` is also an edge of `other`.
    pub fn is_subgraph_of(&self, other: &UndirectedGraph) -> bool {
        self.n == other.n && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<u32>,
    size: Vec<u32>,
    sets: usize,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    /// Merges the sets holding `a` and `b`; returns false if already merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}

/// True iff the graph has exactly one connected component.
///
/// The empty graph on zero nodes has no component and is reported as
/// disconnected.
pub fn is_connected(g: &UndirectedGraph) -> bool {
    let mut dsu = DisjointSet::new(g.node_count());
    for &(u, v) in g.edges() {
        dsu.union(u.index(), v.index());
        if dsu.set_count() == 1 {
            return true;
        }
    }
    dsu.set_count() == 1
}

/// Component label for every node: the smallest [`NodeId`] in its component.
pub fn connected_components(g: &UndirectedGraph) -> Vec<NodeId> {
    let n = g.node_count();
    let mut dsu = DisjointSet::new(n);
    for &(u, v) in g.edges() {
        dsu.union(u.index(), v.index());
    }
    let mut min_of_root = vec![u32::MAX; n];
    let roots: Vec<usize> = (0..n).map(|u| dsu.find(u)).collect();
    for (u, &r) in roots.iter().enumerate() {
        min_of_root[r] = min_of_root[r].min(u as u32);
    }
    roots.into_iter().map(|r| NodeId(min_of_root[r])).collect()
}

/// Per-graph degree summary. `histogram` maps degree to the share of nodes
/// with that degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub mean: f64,
    pub min: usize,
    pub max: usize,
    pub histogram: BTreeMap<usize, f64>,
}

pub fn degree_stats(g: &UndirectedGraph) -> Result<DegreeStats> {
    let n = g.node_count();
    if n == 0 {
        return Err(invalid("degree statistics need at least one node"));
    }
    let deg = g.degrees();
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in &deg {
        *counts.entry(d).or_default() += 1;
    }
    let histogram = counts
        .into_iter()
        .map(|(d, c)| (d, c as f64 / n as f64))
        .collect();
    Ok(DegreeStats {
        mean: 2.0 * g.edge_count() as f64 / n as f64,
        min: deg.iter().copied().min().unwrap_or(0),
        max: deg.iter().copied().max().unwrap_or(0),
        histogram,
    })
}

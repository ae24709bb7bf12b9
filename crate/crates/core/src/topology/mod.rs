//! Topology builders: symmetric k-NN, symmetric (k,j)-NN, random geometric
//! graph and the composite (k,j)-NN-RGG.
//!
//! All rank-based builders read neighbor order from a [`NeighborRanking`], so
//! several topologies built on the same cloud share one O(n² log n) sort.

mod radius;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{NeighborRanking, NodeId, PointCloud};
use crate::graph::UndirectedGraph;

pub use radius::{critical_radius, RadiusParams};

/// How the shortest `j-1` links of each node are dropped from the symmetric
/// k-NN graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneRule {
    /// Each node keeps links to its neighbors at ranks `j..=k`; the graph is
    /// the union of those per-node choices. A link survives when at least one
    /// endpoint ranks the other in `j..=k`.
    #[default]
    Directed,
    /// Start from the symmetric k-NN graph and delete `{u,v}` only when both
    /// endpoints rank each other within their own first `j-1`.
    Mutual,
}

impl PruneRule {
    pub fn as_str(self) -> &'static str {
        match self {
            PruneRule::Directed => "directed",
            PruneRule::Mutual => "mutual",
        }
    }
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PruneRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "directed" => Ok(PruneRule::Directed),
            "mutual" => Ok(PruneRule::Mutual),
            other => Err(invalid(format!("unknown prune rule `{other}`"))),
        }
    }
}

/// Neighbor-list length `k` and cut rank `j`, with `1 <= j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TopologyParams {
    k: usize,
    j: usize,
    rule: PruneRule,
}

impl TopologyParams {
    pub fn new(k: usize, j: usize) -> Result<Self> {
        if j < 1 || j >= k {
            return Err(invalid(format!("(k, j) = ({k}, {j}) violates 1 <= j < k")));
        }
        Ok(TopologyParams {
            k,
            j,
            rule: PruneRule::default(),
        })
    }

    pub fn with_rule(mut self, rule: PruneRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn rule(&self) -> PruneRule {
        self.rule
    }
}

fn ordered(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn check_ranking(ranking: &NeighborRanking) -> Result<()> {
    if ranking.len() < 2 {
        return Err(invalid("topology builders need at least two nodes"));
    }
    Ok(())
}

/// Union of per-node neighbor slices, deduplicated.
fn union_of_choices<'a, F>(n: usize, mut choose: F) -> Vec<(NodeId, NodeId)>
where
    F: FnMut(NodeId) -> &'a [NodeId],
{
    let mut edges = Vec::new();
    for u in (0..n).map(NodeId::from) {
        edges.extend(choose(u).iter().map(|&v| ordered(u, v)));
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Edge `{u,v}` iff `v` is among the `k` nearest of `u` or vice versa.
pub fn build_symmetric_knn(ranking: &NeighborRanking, k: usize) -> Result<UndirectedGraph> {
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    check_ranking(ranking)?;
    let n = ranking.len();
    let k = k.min(n - 1);
    let edges = union_of_choices(n, |u| &ranking.neighbors(u)[..k]);
    Ok(UndirectedGraph::from_sorted_unchecked(n, edges))
}

/// Symmetric (k,j)-NN graph: the symmetric k-NN graph with each node's
/// shortest `j-1` links removed under `params.rule()`.
pub fn build_symmetric_kj(ranking: &NeighborRanking, params: TopologyParams) -> Result<UndirectedGraph> {
    check_ranking(ranking)?;
    let n = ranking.len();
    let k = params.k.min(n - 1);
    let cut = (params.j - 1).min(k);
    let edges = match params.rule {
        PruneRule::Directed => union_of_choices(n, |u| &ranking.neighbors(u)[cut..k]),
        PruneRule::Mutual => {
            let mut edges = union_of_choices(n, |u| &ranking.neighbors(u)[..k]);
            edges.retain(|&(u, v)| !(ranking.rank(u, v) <= cut && ranking.rank(v, u) <= cut));
            edges
        }
    };
    Ok(UndirectedGraph::from_sorted_unchecked(n, edges))
}

/// Random geometric graph: edge iff the Euclidean distance is at most `r`.
pub fn build_rgg(cloud: &PointCloud, r: f64) -> Result<UndirectedGraph> {
    if r.is_nan() || r <= 0.0 {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    Ok(UndirectedGraph::from_pair_predicate(cloud.len(), |u, v| {
        cloud.distance(u, v) <= r
    }))
}

/// Composite (k,j)-NN-RGG.
///
/// A node with fewer than `k` others inside its radius-`r` disk links to all
/// of them. Any other node picks its links as in [`build_symmetric_kj`]. The
/// per-node choices are merged the same way the (k,j)-NN graph merges them,
/// so every resulting edge is at most `r` long.
pub fn build_composite(
    cloud: &PointCloud,
    ranking: &NeighborRanking,
    params: TopologyParams,
    r: f64,
) -> Result<UndirectedGraph> {
    if r.is_nan() || r <= 0.0 {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    check_ranking(ranking)?;
    if cloud.len() != ranking.len() {
        return Err(invalid("cloud and ranking disagree on node count"));
    }
    let n = ranking.len();
    let (k, j) = (params.k, params.j);
    let in_disk: Vec<usize> = (0..n).map(|u| ranking.count_within(NodeId::from(u), r)).collect();
    let sparse = |u: NodeId| in_disk[u.index()] < k;

    let edges = match params.rule {
        PruneRule::Directed => union_of_choices(n, |u| {
            let list = ranking.neighbors(u);
            if sparse(u) {
                &list[..in_disk[u.index()]]
            } else {
                &list[j - 1..k]
            }
        }),
        PruneRule::Mutual => {
            let mut edges = union_of_choices(n, |u| {
                let list = ranking.neighbors(u);
                if sparse(u) {
                    &list[..in_disk[u.index()]]
                } else {
                    &list[..k]
                }
            });
            let marked = |u: NodeId, v: NodeId| !sparse(u) && ranking.rank(u, v) < j;
            edges.retain(|&(u, v)| !(marked(u, v) && marked(v, u)));
            edges
        }
    };
    Ok(UndirectedGraph::from_sorted_unchecked(n, edges))
}

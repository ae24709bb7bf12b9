//! Node placement in the unit square and per-node neighbor ordering.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Dense node index in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Node positions inside the closed unit square. Points are pairwise distinct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointCloud {
    points: Vec<Point>,
}

impl PointCloud {
    /// Builds a cloud from explicit coordinates, rejecting empty input,
    /// coordinates outside `[0, 1]` (or non-finite) and duplicate points.
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(invalid("a point cloud needs at least one point"));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            let inside = |c: f64| (0.0..=1.0).contains(&c);
            if !inside(p.x) || !inside(p.y) {
                return Err(invalid(format!(
                    "point {i} = ({}, {}) lies outside the unit square",
                    p.x, p.y
                )));
            }
            if !seen.insert(point_key(p)) {
                return Err(invalid(format!("point {i} duplicates an earlier point")));
            }
        }
        Ok(PointCloud { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, id: NodeId) -> Point {
        self.points[id.index()]
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> f64 {
        self.points[u.index()].distance(&self.points[v.index()])
    }
}

fn point_key(p: &Point) -> (u64, u64) {
    // +0.0 and -0.0 compare equal but differ bitwise; fold them together.
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

/// Samples `n` i.i.d. uniform points on `[0,1]²` using ChaCha8 seeded from
/// `seed`. An exact duplicate of an earlier point is redrawn.
pub fn sample_uniform_points(n: usize, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let p = Point::new(rng.random::<f64>(), rng.random::<f64>());
        if seen.insert(point_key(&p)) {
            points.push(p);
        }
    }
    Ok(PointCloud { points })
}

/// For every node, all other nodes sorted by ascending Euclidean distance,
/// ties broken by ascending [`NodeId`].
///
/// Ranks are 1-based: the nearest neighbor of `u` has `rank(u, v) == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborRanking {
    n: usize,
    // Row u occupies [u*(n-1), (u+1)*(n-1)).
    order: Vec<NodeId>,
    dists: Vec<f64>,
    // rank_of[u*n + v]; zero on the diagonal.
    rank_of: Vec<u32>,
}

impl NeighborRanking {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn row(&self, u: NodeId) -> std::ops::Range<usize> {
        let w = self.n - 1;
        u.index() * w..(u.index() + 1) * w
    }

    /// Neighbors of `u`, nearest first.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.order[self.row(u)]
    }

    /// Distances matching [`neighbors`](Self::neighbors), non-decreasing.
    pub fn distances(&self, u: NodeId) -> &[f64] {
        &self.dists[self.row(u)]
    }

    /// 1-based position of `v` in `u`'s list. Panics if `u == v`.
    pub fn rank(&self, u: NodeId, v: NodeId) -> usize {
        let r = self.rank_of[u.index() * self.n + v.index()];
        assert!(r != 0, "a node has no rank in its own neighbor list");
        r as usize
    }

    /// Number of other nodes within distance `r` of `u` (inclusive).
    pub fn count_within(&self, u: NodeId, r: f64) -> usize {
        self.distances(u).partition_point(|&d| d <= r)
    }
}

/// Brute-force O(n² log n) ranking of every node's neighbors.
pub fn pairwise_rankings(cloud: &PointCloud) -> NeighborRanking {
    let n = cloud.len();
    let w = n.saturating_sub(1);
    let pts = cloud.points();
    let mut order = Vec::with_capacity(n * w);
    let mut dists = Vec::with_capacity(n * w);
    let mut rank_of = vec![0u32; n * n];
    let mut row: Vec<(f64, u32)> = Vec::with_capacity(w);

    for (u, pu) in pts.iter().enumerate() {
        row.clear();
        row.extend(
            pts.iter()
                .enumerate()
                .filter(|&(v, _)| v != u)
                .map(|(v, pv)| (pu.distance(pv), v as u32)),
        );
        row.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for (pos, &(d, v)) in row.iter().enumerate() {
            order.push(NodeId(v));
            dists.push(d);
            rank_of[u * n + v as usize] = pos as u32 + 1;
        }
    }

    NeighborRanking {
        n,
        order,
        dists,
        rank_of,
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Collinear four-node set: A=(0,0), B=(0.1,0), C=(0.25,0), D=(0.6,0).
    pub fn p4() -> PointCloud {
        PointCloud::new(vec![
            Point::new(0.0, 0.0),
            Point::new(0.1, 0.0),
            Point::new(0.25, 0.0),
            Point::new(0.6, 0.0),
        ])
        .unwrap()
    }

    pub const A: NodeId = NodeId(0);
    pub const B: NodeId = NodeId(1);
    pub const C: NodeId = NodeId(2);
    pub const D: NodeId = NodeId(3);
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_points_is_rejected() {
        assert!(matches!(
            sample_uniform_points(0, 1),
            Err(crate::Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn single_point_lies_in_square() {
        let c = sample_uniform_points(1, 123).unwrap();
        assert_eq!(c.len(), 1);
        let p = c.points()[0];
        assert!((0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y));
    }

    #[test]
    fn thousand_points_in_bounds_and_distinct() {
        let c = sample_uniform_points(1000, 42).unwrap();
        assert_eq!(c.len(), 1000);
        let mut keys = HashSet::new();
        for p in c.points() {
            assert!((0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y));
            assert!(keys.insert(point_key(p)));
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_uniform_points(500, 7).unwrap();
        let b = sample_uniform_points(500, 7).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_uniform_points(500, 8).unwrap());
    }

    #[test]
    fn cloud_validation() {
        assert!(PointCloud::new(vec![]).is_err());
        assert!(PointCloud::new(vec![Point::new(1.5, 0.0)]).is_err());
        assert!(PointCloud::new(vec![Point::new(f64::NAN, 0.0)]).is_err());
        assert!(PointCloud::new(vec![Point::new(0.3, 0.3), Point::new(0.3, 0.3)]).is_err());
        assert!(PointCloud::new(vec![Point::new(0.0, 0.0), Point::new(-0.0, 0.0)]).is_err());
    }

    #[test]
    fn p4_rankings() {
        let r = pairwise_rankings(&p4());
        assert_eq!(r.neighbors(A), &[B, C, D]);
        assert_eq!(r.neighbors(C), &[B, A, D]);
        assert_eq!(r.neighbors(D), &[C, B, A]);
        assert_eq!(r.neighbors(B), &[A, C, D]);
        assert_eq!(r.rank(C, A), 2);
        assert_eq!(r.rank(D, A), 3);
        assert_eq!(r.count_within(B, 0.15), 2);
        assert_eq!(r.count_within(D, 0.2), 0);
    }

    #[test]
    fn ties_break_by_node_id() {
        // Node 0 is equidistant from 1, 2 and 3.
        let cloud = PointCloud::new(vec![
            Point::new(0.5, 0.5),
            Point::new(0.75, 0.5),
            Point::new(0.5, 0.25),
            Point::new(0.25, 0.5),
        ])
        .unwrap();
        let r = pairwise_rankings(&cloud);
        assert_eq!(r.neighbors(NodeId(0)), &[NodeId(1), NodeId(2), NodeId(3)]);
    }

    #[test]
    fn single_node_ranking_is_empty() {
        let r = pairwise_rankings(&sample_uniform_points(1, 3).unwrap());
        assert_eq!(r.len(), 1);
        assert!(r.neighbors(NodeId(0)).is_empty());
    }

    proptest! {
        #[test]
        fn rankings_are_complete_and_sorted(n in 2usize..60, seed in any::<u64>()) {
            let cloud = sample_uniform_points(n, seed).unwrap();
            let r = pairwise_rankings(&cloud);
            for u in (0..n).map(NodeId::from) {
                let list = r.neighbors(u);
                prop_assert_eq!(list.len(), n - 1);
                let mut seen: Vec<_> = list.to_vec();
                seen.sort();
                seen.dedup();
                prop_assert_eq!(seen.len(), n - 1);
                prop_assert!(!list.contains(&u));
                let d = r.distances(u);
                prop_assert!(d.windows(2).all(|w| w[0] <= w[1]));
                for (i, &v) in list.iter().enumerate() {
                    prop_assert_eq!(r.rank(u, v), i + 1);
                    prop_assert_eq!(d[i], cloud.distance(u, v));
                }
            }
            prop_assert_eq!(pairwise_rankings(&cloud), r);
        }
    }
}

//! Plain graphs, BFS distance tables and the validated [`MedianGraph`].

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::set::VertexSet;

pub const UNREACHABLE: u32 = u32::MAX;

/// Graphs with at most this many vertices have the median condition checked
/// on every triple when a [`MedianGraph`] is built.
pub const EXHAUSTIVE_VALIDATION_LIMIT: usize = 256;

/// Number of triples checked on larger graphs.
pub const SAMPLED_VALIDATION_TRIPLES: usize = 20_000;

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and ids out of
    /// range. Edges are stored canonically as `(min, max)` in sorted order.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut canonical = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        count: vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::PreconditionViolation(format!("self-loop at vertex {u}")));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::PreconditionViolation(format!(
                "duplicate edge {} {}",
                w[0].0, w[0].1
            )));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &canonical {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            adjacency,
            edges: canonical,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNREACHABLE; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// All-pairs shortest path lengths, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceTable {
    pub fn from_graph(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let mut dist = Vec::with_capacity(n * n);
        for v in 0..n {
            dist.extend(graph.bfs(v));
        }
        DistanceTable { n, dist }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    pub fn row(&self, x: usize) -> &[u32] {
        &self.dist[x * self.n..(x + 1) * self.n]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `{c : d(a,c) + d(c,b) = d(a,b)}`.
    pub fn interval(&self, a: usize, b: usize) -> VertexSet {
        let ab = self.get(a, b);
        let (ra, rb) = (self.row(a), self.row(b));
        VertexSet::from_iter(self.n, (0..self.n).filter(|&c| ra[c] + rb[c] == ab))
    }

    /// Candidate medians of a triple: vertices on geodesics between every
    /// pair.
    pub fn median_candidates(&self, x: usize, y: usize, z: usize) -> VertexSet {
        let mut m = self.interval(x, y);
        m.intersect_with(&self.interval(y, z));
        m.intersect_with(&self.interval(z, x));
        m
    }

    /// First vertex not reachable from vertex 0.
    pub fn first_unreachable(&self) -> Option<usize> {
        (0..self.n).find(|&v| self.get(0, v) == UNREACHABLE)
    }
}

/// Checks the median condition on `graph` and returns the first triple that
/// fails it, with its number of median candidates.
///
/// Small graphs are checked on every unordered triple; larger ones on
/// `SAMPLED_VALIDATION_TRIPLES` seeded random triples.
pub fn find_median_violation(graph: &Graph, dist: &DistanceTable) -> Option<(usize, usize, usize, usize)> {
    find_median_violation_within(graph, dist, EXHAUSTIVE_VALIDATION_LIMIT)
}

/// As [`find_median_violation`] with a caller-chosen exhaustive limit.
pub fn find_median_violation_within(
    graph: &Graph,
    dist: &DistanceTable,
    exhaustive_limit: usize,
) -> Option<(usize, usize, usize, usize)> {
    let n = graph.vertex_count();
    if n <= exhaustive_limit {
        let intervals = IntervalCache::new(dist);
        for x in 0..n {
            for y in x + 1..n {
                let ixy = intervals.get(x, y);
                for z in y + 1..n {
                    let mut m = ixy.intersection(intervals.get(y, z));
                    m.intersect_with(intervals.get(z, x));
                    let count = m.len();
                    if count != 1 {
                        return Some((x, y, z, count));
                    }
                }
            }
        }
        None
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_6469_616e);
        (0..SAMPLED_VALIDATION_TRIPLES).find_map(|_| {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            let count = dist.median_candidates(x, y, z).len();
            (count != 1).then_some((x, y, z, count))
        })
    }
}

/// Interval bitsets for every ordered pair, for graphs small enough that
/// `n^3` bits is cheap.
pub struct IntervalCache {
    n: usize,
    sets: Vec<VertexSet>,
}

impl IntervalCache {
    pub fn new(dist: &DistanceTable) -> Self {
        let n = dist.len();
        let mut sets = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                sets.push(dist.interval(a, b));
            }
        }
        IntervalCache { n, sets }
    }

    pub fn get(&self, a: usize, b: usize) -> &VertexSet {
        &self.sets[a * self.n + b]
    }
}

/// A finite connected graph in which every triple of vertices has exactly
/// one median. Immutable after construction.
#[derive(Debug, Clone)]
pub struct MedianGraph {
    graph: Graph,
    dist: DistanceTable,
}

impl MedianGraph {
    /// Validates connectivity and the median condition (see
    /// [`find_median_violation`] for the checking regime).
    pub fn new(graph: Graph) -> Result<Self> {
        if graph.vertex_count() == 0 {
            return Err(Error::EmptySet);
        }
        let dist = DistanceTable::from_graph(&graph);
        if let Some(vertex) = dist.first_unreachable() {
            return Err(Error::Disconnected { vertex });
        }
        if let Some((x, y, z, candidates)) = find_median_violation(&graph, &dist) {
            return Err(Error::MedianViolation { x, y, z, candidates });
        }
        Ok(MedianGraph { graph, dist })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn distances(&self) -> &DistanceTable {
        &self.dist
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }

    #[inline]
    pub fn distance(&self, x: usize, y: usize) -> u32 {
        self.dist.get(x, y)
    }

    pub fn diameter(&self) -> u32 {
        (0..self.vertex_count())
            .flat_map(|x| self.dist.row(x).iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Closed ball `B(x, radius)`.
    pub fn ball(&self, x: usize, radius: u32) -> VertexSet {
        let row = self.dist.row(x);
        VertexSet::from_iter(self.vertex_count(), (0..self.vertex_count()).filter(|&v| row[v] <= radius))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count(),
            })
        }
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.vertex_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn rejects_malformed_edges() {
        assert!(matches!(Graph::new(3, [(0, 0)]), Err(Error::PreconditionViolation(_))));
        assert!(matches!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(Error::PreconditionViolation(_))
        ));
        assert!(matches!(Graph::new(3, [(0, 3)]), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn distances_match_bfs() {
        let g = cycle(7);
        let d = DistanceTable::from_graph(&g);
        assert_eq!(d.get(0, 3), 3);
        assert_eq!(d.get(0, 4), 3);
        assert_eq!(d.get(2, 2), 0);
    }

    #[test]
    fn six_cycle_is_not_median() {
        let err = MedianGraph::new(cycle(6)).unwrap_err();
        assert!(matches!(err, Error::MedianViolation { .. }));
    }

    #[test]
    fn disconnected_graph_rejected() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(MedianGraph::new(g).unwrap_err(), Error::Disconnected { vertex: 2 });
    }

    #[test]
    fn path_is_median() {
        let g = Graph::new(5, (0..4).map(|i| (i, i + 1))).unwrap();
        let mg = MedianGraph::new(g).unwrap();
        assert_eq!(mg.diameter(), 4);
        assert_eq!(mg.ball(2, 1).to_vec(), vec![1, 2, 3]);
    }
}

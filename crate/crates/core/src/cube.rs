//! Hyperplanes of the cube complex dual to a median graph, crossing and
//! rank, normal cube paths and the witness sets they induce.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clique;
use crate::error::{Error, Result};
use crate::graph::MedianGraph;
use crate::set::VertexSet;

/// One Θ-class of edges together with the two half-spaces it cuts the
/// vertex set into. `minus` contains the lower endpoint of the class's
/// first edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub id: usize,
    pub edges: Vec<(usize, usize)>,
    pub minus: VertexSet,
    pub plus: VertexSet,
}

impl Hyperplane {
    /// `true` when `v` lies in the plus half-space.
    #[inline]
    pub fn side(&self, v: usize) -> bool {
        self.plus.contains(v)
    }

    pub fn separates(&self, x: usize, y: usize) -> bool {
        self.side(x) != self.side(y)
    }

    /// All four quarter-spaces are non-empty.
    pub fn crosses(&self, other: &Hyperplane) -> bool {
        self.minus.intersects(&other.minus)
            && self.minus.intersects(&other.plus)
            && self.plus.intersects(&other.minus)
            && self.plus.intersects(&other.plus)
    }
}

/// A median graph together with its hyperplanes.
#[derive(Debug, Clone)]
pub struct CubeComplex<'g> {
    graph: &'g MedianGraph,
    hyperplanes: Vec<Hyperplane>,
    /// For each vertex, `(neighbor, hyperplane id)` in neighbor order.
    dual: Vec<Vec<(usize, usize)>>,
}

impl<'g> CubeComplex<'g> {
    /// Extracts the Θ-classes of `graph`, where edges `(a,b)`, `(c,d)` are
    /// related iff `ρ(a,c)+ρ(b,d) ≠ ρ(a,d)+ρ(b,c)`.
    ///
    /// The relation is evaluated pairwise from each class representative and
    /// not closed transitively; an edge related to two representatives, a
    /// tie in the half-space split, a non-convex side or a cut edge outside
    /// its class all mean the input is not a median graph.
    pub fn new(graph: &'g MedianGraph) -> Result<Self> {
        let n = graph.vertex_count();
        let edges = graph.graph().edges();
        let theta = |(a, b): (usize, usize), (c, d): (usize, usize)| {
            graph.distance(a, c) + graph.distance(b, d) != graph.distance(a, d) + graph.distance(b, c)
        };
        let mut class_of = vec![usize::MAX; edges.len()];
        let mut hyperplanes = Vec::new();
        for (ei, &e) in edges.iter().enumerate() {
            if class_of[ei] != usize::MAX {
                continue;
            }
            let id = hyperplanes.len();
            let mut members = Vec::new();
            for (fi, &f) in edges.iter().enumerate().skip(ei) {
                if theta(e, f) {
                    if class_of[fi] != usize::MAX {
                        return Err(Error::NotMedian {
                            reason: format!(
                                "edge {f:?} is Θ-related to representatives of classes {} and {id}",
                                class_of[fi]
                            ),
                        });
                    }
                    class_of[fi] = id;
                    members.push(f);
                }
            }
            let (a, b) = e;
            let (ra, rb) = (graph.distances().row(a), graph.distances().row(b));
            let mut minus = VertexSet::empty(n);
            let mut plus = VertexSet::empty(n);
            for w in 0..n {
                match ra[w].cmp(&rb[w]) {
                    std::cmp::Ordering::Less => minus.insert(w),
                    std::cmp::Ordering::Greater => plus.insert(w),
                    std::cmp::Ordering::Equal => {
                        return Err(Error::NotMedian {
                            reason: format!("vertex {w} is equidistant from both ends of edge {e:?}"),
                        })
                    }
                };
            }
            hyperplanes.push(Hyperplane {
                id,
                edges: members,
                minus,
                plus,
            });
        }

        let mut dual = vec![Vec::new(); n];
        for (ei, &(u, v)) in edges.iter().enumerate() {
            dual[u].push((v, class_of[ei]));
            dual[v].push((u, class_of[ei]));
        }
        for list in &mut dual {
            list.sort_unstable();
        }
        let complex = CubeComplex {
            graph,
            hyperplanes,
            dual,
        };
        complex.validate_half_spaces(&class_of)?;
        Ok(complex)
    }

    fn validate_half_spaces(&self, class_of: &[usize]) -> Result<()> {
        let g = self.graph;
        for (ei, &(u, v)) in g.graph().edges().iter().enumerate() {
            for h in &self.hyperplanes {
                let cut = h.separates(u, v);
                if cut != (class_of[ei] == h.id) {
                    return Err(Error::NotMedian {
                        reason: format!("edge ({u}, {v}) and hyperplane {} disagree on the cut", h.id),
                    });
                }
            }
        }
        // A side fails convexity iff some geodesic leaves it; the first exit
        // is a cut edge (s, w) with w one step closer to a member t.
        for h in &self.hyperplanes {
            for &(u, v) in &h.edges {
                for (s, w) in [(u, v), (v, u)] {
                    let side = if h.side(s) { &h.plus } else { &h.minus };
                    let (rs, rw) = (g.distances().row(s), g.distances().row(w));
                    if let Some(t) = side.iter().find(|&t| rw[t] + 1 == rs[t]) {
                        return Err(Error::NotMedian {
                            reason: format!(
                                "half-space of hyperplane {} is not convex: geodesic {s}..{t} exits through {w}",
                                h.id
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &'g MedianGraph {
        self.graph
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn crosses(&self, h1: usize, h2: usize) -> bool {
        h1 != h2 && self.hyperplanes[h1].crosses(&self.hyperplanes[h2])
    }

    /// Adjacency matrix of the crossing graph.
    pub fn crossing_graph(&self) -> Vec<Vec<bool>> {
        let m = self.len();
        let mut adj = vec![vec![false; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                let c = self.hyperplanes[i].crosses(&self.hyperplanes[j]);
                adj[i][j] = c;
                adj[j][i] = c;
            }
        }
        adj
    }

    /// Largest number of pairwise-crossing hyperplanes, i.e. the dimension
    /// of the largest cube. A single vertex has rank 0.
    pub fn rank(&self) -> usize {
        clique::max_clique(&self.crossing_graph()).len()
    }

    /// Ids of the hyperplanes with `x` and `y` on opposite sides.
    pub fn separators(&self, x: usize, y: usize) -> Vec<usize> {
        self.hyperplanes
            .iter()
            .filter(|h| h.separates(x, y))
            .map(|h| h.id)
            .collect()
    }

    /// `(neighbor, hyperplane)` pairs for the edges at `v`.
    pub fn dual_edges(&self, v: usize) -> &[(usize, usize)] {
        &self.dual[v]
    }

    fn neighbor_across(&self, v: usize, hyperplane: usize) -> Result<usize> {
        self.dual[v]
            .iter()
            .find(|&&(_, h)| h == hyperplane)
            .map(|&(w, _)| w)
            .ok_or(Error::CornerFailure { vertex: v, hyperplane })
    }

    /// Opposite corner of the cube at `v` spanned by `step`, crossing one
    /// edge at a time in the given order.
    pub fn cross_all(&self, v: usize, step: &[usize]) -> Result<usize> {
        step.iter().try_fold(v, |cur, &h| self.neighbor_across(cur, h))
    }

    /// Normal cube path from `source` to `target`: at each vertex, cross
    /// every hyperplane dual to an incident edge that still separates the
    /// vertex from `target`.
    pub fn normal_cube_path(&self, source: usize, target: usize) -> Result<NormalCubePath> {
        self.graph.check_vertex(source)?;
        self.graph.check_vertex(target)?;
        let mut vertices = vec![source];
        let mut steps = Vec::new();
        let mut v = source;
        let mut rng = ChaCha8Rng::seed_from_u64(((source as u64) << 32) ^ target as u64);
        while v != target {
            let mut step: Vec<usize> = self.dual[v]
                .iter()
                .filter(|&&(_, h)| self.hyperplanes[h].separates(v, target))
                .map(|&(_, h)| h)
                .collect();
            step.sort_unstable();
            if step.is_empty() {
                return Err(Error::NotMedian {
                    reason: format!("no incident hyperplane separates {v} from {target}"),
                });
            }
            let next = self.cross_all(v, &step)?;
            let mut shuffled = step.clone();
            shuffled.shuffle(&mut rng);
            let again = self.cross_all(v, &shuffled)?;
            if again != next {
                return Err(Error::NotMedian {
                    reason: format!("cube corner at {v} depends on crossing order ({next} vs {again})"),
                });
            }
            vertices.push(next);
            steps.push(step);
            v = next;
        }
        Ok(NormalCubePath {
            source,
            target,
            vertices,
            steps,
        })
    }

    /// Vertex `v_j` of the normal cube path from `y` to `target`, or
    /// `target` once the path has run out.
    pub fn ncp_vertex(&self, y: usize, target: usize, j: usize) -> Result<usize> {
        Ok(self.normal_cube_path(y, target)?.vertex_at(j))
    }

    /// Normal cube paths from every vertex to `basepoint`.
    pub fn paths_to(&self, basepoint: usize) -> Result<NcpCache> {
        let paths = (0..self.graph.vertex_count())
            .map(|y| self.normal_cube_path(y, basepoint).map(|p| p.vertices))
            .collect::<Result<Vec<_>>>()?;
        Ok(NcpCache { basepoint, paths })
    }
}

/// Vertices `v_0..v_m` of a normal cube path and the hyperplanes crossed at
/// each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalCubePath {
    pub source: usize,
    pub target: usize,
    pub vertices: Vec<usize>,
    pub steps: Vec<Vec<usize>>,
}

impl NormalCubePath {
    /// Number of cubes `m`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn vertex_at(&self, j: usize) -> usize {
        self.vertices.get(j).copied().unwrap_or(self.target)
    }
}

/// Normal cube path vertices from every vertex to a fixed basepoint.
#[derive(Debug, Clone)]
pub struct NcpCache {
    basepoint: usize,
    paths: Vec<Vec<usize>>,
}

impl NcpCache {
    pub fn basepoint(&self) -> usize {
        self.basepoint
    }

    /// `v_j` on the path from `y`, clamped to the basepoint.
    #[inline]
    pub fn vertex_at(&self, y: usize, j: usize) -> usize {
        self.paths[y].get(j).copied().unwrap_or(self.basepoint)
    }

    pub fn path(&self, y: usize) -> &[usize] {
        &self.paths[y]
    }
}

/// `S(x, k, l)`: the `3l`-th vertex of the normal cube path to the basepoint
/// from every `y` with `ρ(x, y) ≤ k`. Requires `1 ≤ k ≤ 3l`.
pub fn witness_set_cat0(graph: &MedianGraph, paths: &NcpCache, x: usize, k: u32, l: u32) -> Result<VertexSet> {
    graph.check_vertex(x)?;
    if k < 1 || k > 3 * l {
        return Err(Error::PreconditionViolation(format!(
            "witness set needs 1 <= k <= 3l, got k = {k}, l = {l}"
        )));
    }
    let row = graph.distances().row(x);
    let step = 3 * l as usize;
    Ok(VertexSet::from_iter(
        graph.vertex_count(),
        (0..graph.vertex_count())
            .filter(|&y| row[y] <= k)
            .map(|y| paths.vertex_at(y, step)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn hyperplane_counts() {
        for d in 1..=4 {
            let q = generate::hypercube(d).unwrap();
            let cc = CubeComplex::new(&q).unwrap();
            assert_eq!(cc.len(), d);
            for h in cc.hyperplanes() {
                assert_eq!(h.minus.len(), 1 << (d - 1));
            }
        }
        let p = generate::path(6).unwrap();
        assert_eq!(CubeComplex::new(&p).unwrap().len(), 5);
        let g = generate::grid(2, 2).unwrap();
        assert_eq!(CubeComplex::new(&g).unwrap().len(), 4);
    }

    #[test]
    fn crossing_and_rank() {
        let q2 = generate::hypercube(2).unwrap();
        let cc = CubeComplex::new(&q2).unwrap();
        assert!(cc.crosses(0, 1));
        let p = generate::path(4).unwrap();
        let cp = CubeComplex::new(&p).unwrap();
        assert!(!cp.crosses(0, 1));
        assert_eq!(cp.rank(), 1);

        let g = generate::grid(2, 2).unwrap();
        let cg = CubeComplex::new(&g).unwrap();
        let horizontal: Vec<_> = cg
            .hyperplanes()
            .iter()
            .filter(|h| h.edges.iter().all(|&(u, v)| v == u + 1))
            .map(|h| h.id)
            .collect();
        let vertical: Vec<_> = cg
            .hyperplanes()
            .iter()
            .filter(|h| h.edges.iter().all(|&(u, v)| v == u + 3))
            .map(|h| h.id)
            .collect();
        assert_eq!((horizontal.len(), vertical.len()), (2, 2));
        assert!(cg.crosses(horizontal[0], vertical[0]));
        assert!(!cg.crosses(horizontal[0], horizontal[1]));
        assert_eq!(cg.rank(), 2);

        for d in 1..=4 {
            let q = generate::hypercube(d).unwrap();
            assert_eq!(CubeComplex::new(&q).unwrap().rank(), d);
        }
        let t = generate::tree(3, 3).unwrap();
        assert_eq!(CubeComplex::new(&t).unwrap().rank(), 1);
    }

    #[test]
    fn separators_examples() {
        let q2 = generate::hypercube(2).unwrap();
        let cc = CubeComplex::new(&q2).unwrap();
        assert!(cc.separators(1, 1).is_empty());
        assert_eq!(cc.separators(0b00, 0b11), vec![0, 1]);
        let g = generate::grid(4, 4).unwrap();
        let cg = CubeComplex::new(&g).unwrap();
        for x in 0..25 {
            for y in 0..25 {
                assert_eq!(cg.separators(x, y).len() as u32, g.distance(x, y));
            }
        }
    }

    #[test]
    fn normal_cube_path_examples() {
        let p = generate::path(5).unwrap();
        let cp = CubeComplex::new(&p).unwrap();
        let path = cp.normal_cube_path(0, 4).unwrap();
        assert_eq!(path.vertices, vec![0, 1, 2, 3, 4]);
        assert!(path.steps.iter().all(|s| s.len() == 1));

        let g = generate::grid(2, 2).unwrap();
        let cg = CubeComplex::new(&g).unwrap();
        let path = cg.normal_cube_path(0, 8).unwrap();
        assert_eq!(path.vertices, vec![0, 4, 8]);
        assert_eq!(path.len(), 2);
        assert_eq!(cg.ncp_vertex(0, 8, 1).unwrap(), 4);
        assert_eq!(cg.ncp_vertex(0, 8, 0).unwrap(), 0);
        assert_eq!(cg.ncp_vertex(0, 8, 7).unwrap(), 8);

        let empty = cg.normal_cube_path(5, 5).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty.vertices, vec![5]);
    }

    #[test]
    fn witness_set_saturates_to_basepoint() {
        let g = generate::grid(3, 3).unwrap();
        let cc = CubeComplex::new(&g).unwrap();
        let paths = cc.paths_to(0).unwrap();
        // 3l >= diameter: every path has run out
        let s = witness_set_cat0(&g, &paths, 15, 3, 2).unwrap();
        assert_eq!(s.to_vec(), vec![0]);
        let s = witness_set_cat0(&g, &paths, 0, 1, 1).unwrap();
        assert!(s.contains(0));
        assert!(witness_set_cat0(&g, &paths, 0, 4, 1).is_err());
        assert!(witness_set_cat0(&g, &paths, 0, 0, 1).is_err());
    }
}

//! Exact median-algebra operations on a [`MedianGraph`]: medians, intervals,
//! joins and hulls, the iterated median `μ(x₁,…,xₙ; b)` and the finite
//! deep-point construction.

use crate::error::{Error, Result};
use crate::graph::{IntervalCache, MedianGraph};
use crate::set::VertexSet;

impl MedianGraph {
    /// The unique vertex lying on geodesics between each pair of `x, y, z`.
    pub fn median(&self, x: usize, y: usize, z: usize) -> Result<usize> {
        for v in [x, y, z] {
            self.check_vertex(v)?;
        }
        // Two equal arguments short-circuit to the repeated one.
        if x == y || x == z {
            return Ok(x);
        }
        if y == z {
            return Ok(y);
        }
        let candidates = self.distances().median_candidates(x, y, z);
        match candidates.len() {
            1 => Ok(candidates.first().expect("one candidate")),
            count => Err(Error::MedianViolation {
                x,
                y,
                z,
                candidates: count,
            }),
        }
    }

    /// Interval `[a, b]`: vertices `c` with `μ(a, b, c) = c`, i.e. the
    /// vertices on some geodesic from `a` to `b`.
    pub fn interval(&self, a: usize, b: usize) -> VertexSet {
        self.distances().interval(a, b)
    }

    /// `J(A) = ⋃_{a,b ∈ A} [a, b]`.
    pub fn join(&self, set: &VertexSet) -> VertexSet {
        let members = set.to_vec();
        let mut out = set.clone();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                out.union_with(&self.interval(a, b));
            }
        }
        out
    }

    /// Convex hull of a non-empty set, by iterating the join to a fixed point.
    pub fn hull(&self, set: &VertexSet) -> Result<VertexSet> {
        self.hull_with_steps(set).map(|(h, _)| h)
    }

    /// Hull together with the least `p` such that `J^p(A)` is already the
    /// hull, where `J^0(A) = J(A)`.
    pub fn hull_with_steps(&self, set: &VertexSet) -> Result<(VertexSet, usize)> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut current = self.join(set);
        let mut p = 0;
        loop {
            let next = self.join(&current);
            if next == current {
                return Ok((current, p));
            }
            current = next;
            p += 1;
        }
    }

    pub fn is_convex(&self, set: &VertexSet) -> bool {
        self.join(set) == *set
    }

    /// Left fold `μ(x₁,…,x_{k+1}; b) = μ(μ(x₁,…,x_k; b), x_{k+1}, b)` with
    /// `μ(x₁; b) = x₁`.
    pub fn iterated_median(&self, xs: &[usize], b: usize) -> Result<usize> {
        let (&first, rest) = xs.split_first().ok_or(Error::EmptySet)?;
        self.check_vertex(first)?;
        rest.iter().try_fold(first, |acc, &x| self.median(acc, x, b))
    }

    /// Greedily drops generators that do not change `μ(xs; b)` until none can
    /// be dropped. The survivors number at most `max(d, 2)`; anything more
    /// means the supplied rank is wrong.
    ///
    /// Rank 1 really needs two: on the path `0 - 1 - 2`, `μ(0, 2; 1) = 1`
    /// while each generator alone gives itself.
    pub fn reduce_generators(&self, xs: &[usize], b: usize, rank: usize) -> Result<Vec<usize>> {
        let target = self.iterated_median(xs, b)?;
        let mut kept = xs.to_vec();
        let mut changed = true;
        while changed {
            changed = false;
            let mut i = 0;
            while i < kept.len() {
                if kept.len() > 1 {
                    let mut trial = kept.clone();
                    trial.remove(i);
                    if self.iterated_median(&trial, b)? == target {
                        kept = trial;
                        changed = true;
                        continue;
                    }
                }
                i += 1;
            }
        }
        if kept.len() > rank.max(2) {
            return Err(Error::ReductionFailure {
                size: kept.len(),
                rank,
            });
        }
        Ok(kept)
    }

    /// Finds `g = μ(h₁,…,h_d; b)` with every `hᵢ ∈ C` and `C ⊆ [a, g]`.
    ///
    /// The generators are obtained by folding all of `C` (farthest from `a`
    /// first) and then reducing to at most `rank` of them; the tuple is padded
    /// to exactly `rank` entries by repeating the last generator, which does
    /// not change the iterated median.
    pub fn deep_point_exact(&self, a: usize, b: usize, set: &VertexSet, rank: usize) -> Result<DeepPoint> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let ab = self.interval(a, b);
        if let Some(c) = set.iter().find(|&c| !ab.contains(c)) {
            return Err(Error::NotFound {
                what: format!("deep point: vertex {c} of C lies outside [{a}, {b}]"),
            });
        }
        let mut ordered = set.to_vec();
        ordered.sort_by_key(|&c| (std::cmp::Reverse(self.distance(a, c)), c));
        let mut generators = self.reduce_generators(&ordered, b, rank.max(1))?;
        let point = self.iterated_median(&generators, b)?;
        let reach = self.interval(a, point);
        if !set.is_subset(&reach) {
            return Err(Error::NotFound {
                what: format!("deep point: C not contained in [{a}, {point}]"),
            });
        }
        let last = *generators.last().expect("non-empty");
        while generators.len() < rank {
            generators.push(last);
        }
        Ok(DeepPoint { point, generators })
    }
}

/// Result of [`MedianGraph::deep_point_exact`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeepPoint {
    pub point: usize,
    pub generators: Vec<usize>,
}

/// Precomputed median of every ordered triple, for exhaustive sweeps on
/// small graphs.
#[derive(Debug, Clone)]
pub struct MedianTable {
    n: usize,
    table: Vec<u16>,
}

/// Largest graph a [`MedianTable`] is built for.
pub const MEDIAN_TABLE_LIMIT: usize = 256;

impl MedianTable {
    pub fn new(graph: &MedianGraph) -> Result<Self> {
        let n = graph.vertex_count();
        if n > MEDIAN_TABLE_LIMIT {
            return Err(Error::BudgetExceeded {
                what: "median table".into(),
                needed: n,
                budget: MEDIAN_TABLE_LIMIT,
            });
        }
        let intervals = IntervalCache::new(graph.distances());
        let mut table = vec![0u16; n * n * n];
        for x in 0..n {
            for y in 0..n {
                let ixy = intervals.get(x, y);
                for z in 0..n {
                    let m = if x == y || x == z {
                        x
                    } else if y == z {
                        y
                    } else {
                        let mut c = ixy.intersection(intervals.get(y, z));
                        c.intersect_with(intervals.get(z, x));
                        if c.len() != 1 {
                            return Err(Error::MedianViolation {
                                x,
                                y,
                                z,
                                candidates: c.len(),
                            });
                        }
                        c.first().expect("one candidate")
                    };
                    table[(x * n + y) * n + z] = m as u16;
                }
            }
        }
        Ok(MedianTable { n, table })
    }

    /// Wraps an arbitrary ternary table; `table[(x*n + y)*n + z]`.
    pub fn from_raw(n: usize, table: Vec<u16>) -> Self {
        assert_eq!(table.len(), n * n * n);
        MedianTable { n, table }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> usize {
        self.table[(x * self.n + y) * self.n + z] as usize
    }

    #[inline]
    fn row(&self, x: usize, y: usize) -> &[u16] {
        let start = (x * self.n + y) * self.n;
        &self.table[start..start + self.n]
    }

    /// First triple where the value depends on argument order.
    pub fn m1_violation(&self) -> Option<[usize; 3]> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let m = self.get(x, y, z);
                    if m != self.get(y, z, x) || m != self.get(y, x, z) {
                        return Some([x, y, z]);
                    }
                }
            }
        }
        None
    }

    /// First pair with `μ(a, a, b) ≠ a`.
    pub fn m2_violation(&self) -> Option<[usize; 2]> {
        let n = self.n;
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.get(a, a, b) != a)
            .map(|(a, b)| [a, b])
    }

    /// First 5-tuple with `μ(a,b,μ(c,d,e)) ≠ μ(μ(a,b,c),μ(a,b,d),e)`.
    ///
    /// Only meaningful once [`Self::m1_violation`] returned `None`: both
    /// sides are then symmetric in `a↔b` and `c↔d`, so only `a ≤ b`, `c ≤ d`
    /// are visited.
    pub fn m3_violation(&self) -> Option<[usize; 5]> {
        let n = self.n;
        for a in 0..n {
            for b in a..n {
                let ab = self.row(a, b);
                for c in 0..n {
                    let p = ab[c] as usize;
                    for d in c..n {
                        let q = ab[d] as usize;
                        let cd = self.row(c, d);
                        let pq = self.row(p, q);
                        // branch-free scan first; locate the failing e only on a hit
                        let bad = cd.iter().zip(pq).fold(false, |acc, (&m, &v)| acc | (ab[m as usize] != v));
                        if bad {
                            let e = (0..n).find(|&e| ab[cd[e] as usize] != pq[e]).expect("mismatch exists");
                            return Some([a, b, c, d, e]);
                        }
                    }
                }
            }
        }
        None
    }
}

/// Median closure of a set under a ternary operation: the smallest superset
/// closed under `table`. Each triple is visited once, as members arrive.
pub fn median_closure(table: &MedianTable, set: &VertexSet) -> VertexSet {
    let mut closed = set.clone();
    let mut members: Vec<usize> = set.to_vec();
    let mut processed = 0;
    while processed < members.len() {
        let z = members[processed];
        for i in 0..=processed {
            for j in i..=processed {
                let m = table.get(members[i], members[j], z);
                if closed.insert(m) {
                    members.push(m);
                }
            }
        }
        processed += 1;
    }
    closed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn path(n: usize) -> MedianGraph {
        generate::path(n).unwrap()
    }

    #[test]
    fn median_examples() {
        let q3 = generate::hypercube(3).unwrap();
        // vertex ids are bit patterns
        assert_eq!(q3.median(0b000, 0b011, 0b101).unwrap(), 0b001);
        assert_eq!(q3.median(5, 5, 2).unwrap(), 5);
        assert_eq!(path(5).median(0, 4, 2).unwrap(), 2);
    }

    #[test]
    fn interval_examples() {
        let p = path(5);
        assert_eq!(p.interval(1, 3).to_vec(), vec![1, 2, 3]);
        assert_eq!(p.interval(2, 2).to_vec(), vec![2]);
        let q2 = generate::hypercube(2).unwrap();
        assert_eq!(q2.interval(0b00, 0b11).len(), 4);
    }

    #[test]
    fn hull_examples() {
        let q2 = generate::hypercube(2).unwrap();
        let a = VertexSet::from_iter(4, [0b00, 0b01, 0b10]);
        assert_eq!(q2.hull(&a).unwrap().len(), 4);
        let s = VertexSet::singleton(4, 2);
        assert_eq!(q2.hull(&s).unwrap(), s);
        let p = path(6);
        let pair = VertexSet::from_iter(6, [1, 4]);
        assert_eq!(p.hull(&pair).unwrap(), p.interval(1, 4));
        assert_eq!(p.hull(&p.empty_set()), Err(Error::EmptySet));
    }

    #[test]
    fn iterated_median_examples() {
        let q2 = generate::hypercube(2).unwrap();
        assert_eq!(q2.iterated_median(&[2], 1).unwrap(), 2);
        assert_eq!(q2.iterated_median(&[0b01, 0b10], 0b11).unwrap(), 0b11);
        assert_eq!(q2.iterated_median(&[0b00, 0b01], 0b11).unwrap(), q2.median(0, 1, 3).unwrap());
        assert_eq!(q2.iterated_median(&[], 0), Err(Error::EmptySet));
    }

    #[test]
    fn reduce_generators_examples() {
        let p = path(6);
        assert_eq!(p.reduce_generators(&[1, 2, 3], 5, 1).unwrap(), vec![3]);
        let q2 = generate::hypercube(2).unwrap();
        let ys = q2.reduce_generators(&[0b00, 0b01, 0b10], 0b11, 2).unwrap();
        assert_eq!(ys.len(), 2);
        assert_eq!(q2.iterated_median(&ys, 0b11).unwrap(), 0b11);
        // nothing removable
        assert_eq!(q2.reduce_generators(&[0b01, 0b10], 0b11, 2).unwrap(), vec![0b01, 0b10]);
        assert_eq!(path(3).reduce_generators(&[0, 2], 1, 1).unwrap(), vec![0, 2]);
        let q3 = generate::hypercube(3).unwrap();
        assert!(matches!(
            q3.reduce_generators(&[0b110, 0b101, 0b011], 0, 2),
            Err(Error::ReductionFailure { size: 3, rank: 2 })
        ));
    }

    #[test]
    fn deep_point_examples() {
        let p = path(8);
        let single = VertexSet::singleton(8, 2);
        assert_eq!(p.deep_point_exact(2, 6, &single, 1).unwrap().point, 2);
        let c = VertexSet::from_iter(8, [3, 5, 4]);
        assert_eq!(p.deep_point_exact(2, 7, &c, 1).unwrap().point, 5);

        let grid = generate::grid(3, 3).unwrap();
        let id = |i: usize, j: usize| i * 4 + j;
        let c = VertexSet::from_iter(16, [id(1, 0), id(0, 1)]);
        let dp = grid.deep_point_exact(id(0, 0), id(3, 3), &c, 2).unwrap();
        assert_eq!(dp.point, id(1, 1));
        assert_eq!(dp.generators.len(), 2);

        let outside = VertexSet::singleton(16, id(3, 0));
        assert!(matches!(
            grid.deep_point_exact(id(0, 0), id(1, 1), &outside, 2),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn median_table_matches_direct_computation() {
        let g = generate::grid(2, 3).unwrap();
        let t = MedianTable::new(&g).unwrap();
        for x in 0..g.vertex_count() {
            for y in 0..g.vertex_count() {
                for z in 0..g.vertex_count() {
                    assert_eq!(t.get(x, y, z), g.median(x, y, z).unwrap());
                }
            }
        }
        assert_eq!(t.m1_violation(), None);
        assert_eq!(t.m2_violation(), None);
        assert_eq!(t.m3_violation(), None);
    }

    #[test]
    fn m3_violation_detected_on_broken_table() {
        let g = generate::hypercube(2).unwrap();
        let t = MedianTable::new(&g).unwrap();
        let mut raw: Vec<u16> = (0..64).map(|i| t.get(i / 16, (i / 4) % 4, i % 4) as u16).collect();
        // corrupt every permutation of one triple consistently: M1, M2 still hold
        for [x, y, z] in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            raw[(x * 4 + y) * 4 + z] = 3;
        }
        let broken = MedianTable::from_raw(4, raw);
        assert_eq!(broken.m1_violation(), None);
        assert_eq!(broken.m2_violation(), None);
        assert!(broken.m3_violation().is_some());
    }

    #[test]
    fn closure_of_pair_and_triple() {
        let q3 = generate::hypercube(3).unwrap();
        let t = MedianTable::new(&q3).unwrap();
        let pair = VertexSet::from_iter(8, [0b000, 0b111]);
        assert_eq!(median_closure(&t, &pair), pair);
        let triple = VertexSet::from_iter(8, [0b000, 0b011, 0b101]);
        let closed = median_closure(&t, &triple);
        assert!(closed.contains(0b001));
        assert_eq!(median_closure(&t, &closed), closed);
    }
}

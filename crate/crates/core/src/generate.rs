//! Generators for median graph instances.
//!
//! Vertex numbering is part of each generator's contract:
//! hypercube ids are bit patterns, grid and staircase ids are row-major
//! `i * (h + 1) + j`, tree ids are breadth-first with the root at 0.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, MedianGraph};

/// Instance families understood by [`generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GraphKind {
    Hypercube { dim: usize },
    /// `width × height` counted in edges.
    Grid { width: usize, height: usize },
    Tree { branching: usize, depth: usize },
    Staircase { size: usize },
    /// Median closure of `points` random vertices of `Q_dim`.
    MedianClosure { points: usize, dim: usize },
}

pub fn generate(kind: GraphKind, seed: u64, budget: usize) -> Result<MedianGraph> {
    let needed = match kind {
        GraphKind::Hypercube { dim } => 1usize.checked_shl(dim as u32).unwrap_or(usize::MAX),
        GraphKind::Grid { width, height } => (width + 1).saturating_mul(height + 1),
        GraphKind::Tree { branching, depth } => tree_size(branching, depth),
        GraphKind::Staircase { size } => (size + 1) * (size + 2) / 2,
        GraphKind::MedianClosure { points, .. } => points,
    };
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: format!("{kind:?}"),
            needed,
            budget,
        });
    }
    match kind {
        GraphKind::Hypercube { dim } => hypercube(dim),
        GraphKind::Grid { width, height } => grid(width, height),
        GraphKind::Tree { branching, depth } => tree(branching, depth),
        GraphKind::Staircase { size } => staircase(size),
        GraphKind::MedianClosure { points, dim } => median_closure_graph(points, dim, seed, budget).map(|(g, _)| g),
    }
}

fn tree_size(branching: usize, depth: usize) -> usize {
    (0..=depth).fold((0usize, 1usize), |(total, level), _| {
        (total.saturating_add(level), level.saturating_mul(branching))
    })
    .0
}

/// `Q_d`; vertex ids are the `d`-bit patterns.
pub fn hypercube(dim: usize) -> Result<MedianGraph> {
    let n = 1usize << dim;
    let edges = (0..n).flat_map(|v| (0..dim).map(move |b| (v, v ^ (1 << b))).filter(|&(u, w)| u < w));
    MedianGraph::new(Graph::new(n, edges)?)
}

/// Path on `n` vertices.
pub fn path(n: usize) -> Result<MedianGraph> {
    MedianGraph::new(Graph::new(n, (1..n).map(|i| (i - 1, i)))?)
}

/// Product of a path with `width` edges and a path with `height` edges.
pub fn grid(width: usize, height: usize) -> Result<MedianGraph> {
    let cols = height + 1;
    let id = |i: usize, j: usize| i * cols + j;
    let mut edges = Vec::new();
    for i in 0..=width {
        for j in 0..=height {
            if i < width {
                edges.push((id(i, j), id(i + 1, j)));
            }
            if j < height {
                edges.push((id(i, j), id(i, j + 1)));
            }
        }
    }
    MedianGraph::new(Graph::new((width + 1) * cols, edges)?)
}

/// Complete `branching`-ary tree of the given depth.
pub fn tree(branching: usize, depth: usize) -> Result<MedianGraph> {
    let n = tree_size(branching, depth);
    // children of v are branching*v + 1 ..= branching*v + branching
    let edges = (1..n).map(|c| ((c - 1) / branching.max(1), c));
    MedianGraph::new(Graph::new(n, edges)?)
}

/// Grid cells `(i, j)` with `i + j ≤ size`, as an induced subgraph of the
/// square grid. Ids run row-major over the kept cells.
pub fn staircase(size: usize) -> Result<MedianGraph> {
    let mut ids = BTreeMap::new();
    for i in 0..=size {
        for j in 0..=size - i {
            let next = ids.len();
            ids.insert((i, j), next);
        }
    }
    let mut edges = Vec::new();
    for (&(i, j), &v) in &ids {
        if let Some(&w) = ids.get(&(i + 1, j)) {
            edges.push((v, w));
        }
        if let Some(&w) = ids.get(&(i, j + 1)) {
            edges.push((v, w));
        }
    }
    MedianGraph::new(Graph::new(ids.len(), edges)?)
}

fn majority(a: u64, b: u64, c: u64) -> u64 {
    (a & b) | (b & c) | (a & c)
}

fn close_under_majority(set: &mut BTreeSet<u64>) {
    let mut members: Vec<u64> = set.iter().copied().collect();
    let mut processed = 0;
    while processed < members.len() {
        let z = members[processed];
        for i in 0..=processed {
            for j in i..=processed {
                let m = majority(members[i], members[j], z);
                if set.insert(m) {
                    members.push(m);
                }
            }
        }
        processed += 1;
    }
}

fn components(set: &BTreeSet<u64>, dim: usize) -> Vec<Vec<u64>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in set {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            for b in 0..dim {
                let w = v ^ (1 << b);
                if set.contains(&w) && seen.insert(w) {
                    comp.push(w);
                }
            }
            i += 1;
        }
        out.push(comp);
    }
    out
}

/// Samples `points` distinct vertices of `Q_dim`, closes them under
/// coordinatewise majority and, while the induced subgraph is disconnected,
/// bridges the component of the smallest vertex to its Hamming-nearest
/// outside vertex along a bit-flip path and closes again.
///
/// Returns the graph together with the bit pattern of each vertex id.
pub fn median_closure_graph(points: usize, dim: usize, seed: u64, budget: usize) -> Result<(MedianGraph, Vec<u64>)> {
    if dim == 0 || dim > 20 {
        return Err(Error::PreconditionViolation(format!("median closure needs 1 <= dim <= 20, got {dim}")));
    }
    let universe = 1usize << dim;
    if points == 0 || points > universe {
        return Err(Error::PreconditionViolation(format!(
            "cannot sample {points} distinct vertices of Q_{dim}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set: BTreeSet<u64> = sample(&mut rng, universe, points).into_iter().map(|v| v as u64).collect();
    loop {
        close_under_majority(&mut set);
        if set.len() > budget {
            return Err(Error::BudgetExceeded {
                what: "median closure".into(),
                needed: set.len(),
                budget,
            });
        }
        let comps = components(&set, dim);
        if comps.len() == 1 {
            break;
        }
        let first: BTreeSet<u64> = comps[0].iter().copied().collect();
        let (_, from, to) = comps[0]
            .iter()
            .flat_map(|&a| set.iter().filter(|b| !first.contains(b)).map(move |&b| ((a ^ b).count_ones(), a, b)))
            .min()
            .expect("another component exists");
        let mut cur = from;
        for b in 0..dim {
            if (from ^ to) & (1 << b) != 0 {
                cur ^= 1 << b;
                set.insert(cur);
            }
        }
    }
    let labels: Vec<u64> = set.iter().copied().collect();
    let index: BTreeMap<u64, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (i, &v) in labels.iter().enumerate() {
        for b in 0..dim {
            let w = v ^ (1 << b);
            if w > v {
                if let Some(&j) = index.get(&w) {
                    edges.push((i, j));
                }
            }
        }
    }
    let graph = MedianGraph::new(Graph::new(labels.len(), edges)?)?;
    Ok((graph, labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::CubeComplex;

    #[test]
    fn sizes() {
        let q3 = hypercube(3).unwrap();
        assert_eq!((q3.vertex_count(), q3.edge_count()), (8, 12));
        assert_eq!(CubeComplex::new(&q3).unwrap().rank(), 3);
        let g = grid(2, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 12));
        assert_eq!(CubeComplex::new(&g).unwrap().rank(), 2);
        let t = tree(3, 4).unwrap();
        assert_eq!(t.vertex_count(), 121);
        let s = staircase(3).unwrap();
        assert_eq!(s.vertex_count(), 10);
        assert_eq!(CubeComplex::new(&s).unwrap().rank(), 2);
    }

    #[test]
    fn median_closure_is_closed_and_deterministic() {
        let (g, labels) = median_closure_graph(5, 6, 7, 64).unwrap();
        let mut again: BTreeSet<u64> = labels.iter().copied().collect();
        close_under_majority(&mut again);
        assert_eq!(again.len(), labels.len());
        let (g2, labels2) = median_closure_graph(5, 6, 7, 64).unwrap();
        assert_eq!(labels, labels2);
        assert_eq!(g.graph(), g2.graph());
        // induced hypercube subgraph is isometric
        for (i, &a) in labels.iter().enumerate() {
            for (j, &b) in labels.iter().enumerate() {
                assert_eq!(g.distance(i, j), (a ^ b).count_ones());
            }
        }
    }

    #[test]
    fn budget_enforced() {
        let err = generate(GraphKind::Hypercube { dim: 10 }, 0, 100).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 1024, .. }));
    }
}

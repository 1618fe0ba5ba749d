//! Coarse median instances and the interval calculus on them.
//!
//! An instance is a finite point set with a rational metric and a ternary
//! operation table. Parameters `(K, H(0), γ, λ)` are measured from the
//! instance; the derived scales
//!
//! ```text
//! L₁(r)   = (K+1)r + Kλ + γ + 2H(0)
//! L₂(r)   = (K+2)r + H(0)
//! L₃(r,t) = 3^d K^d r t + r
//! ```
//!
//! drive the interval containment checks, the deep-point search and the
//! witness-set provider built on it.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::CubeComplex;
use crate::error::{Error, Result};
use crate::generate;
use crate::graph::MedianGraph;
use crate::median::{median_closure, MedianTable};
use crate::propa::WitnessProvider;
use crate::set::VertexSet;

pub type Rational = Ratio<i64>;

/// Default for instances up to this size: sweeps visit every tuple.
pub const EXHAUSTIVE_LIMIT: usize = 40;

/// A median graph the instance sits in, with maps both ways. Used for the
/// `H(p)` proxy: finite subsets are approximated by their median closure in
/// the ambient graph, projected back to the instance.
#[derive(Debug, Clone)]
pub struct Ambient {
    pub graph: MedianGraph,
    pub table: MedianTable,
    /// Point id to ambient vertex.
    pub embed: Vec<usize>,
    /// Ambient vertex to nearest point.
    pub project: Vec<usize>,
}

/// Finite metric space with a ternary operation.
#[derive(Debug, Clone)]
pub struct CoarseMedianInstance {
    n: usize,
    /// Common denominator of all distances.
    scale: i64,
    /// `ρ(x, y) · scale`, row-major.
    dist: Vec<i64>,
    mu: MedianTable,
    rank_bound: Option<usize>,
    ambient: Option<Ambient>,
}

impl CoarseMedianInstance {
    /// Validates the metric axioms (symmetry, zero exactly on the diagonal,
    /// every triangle inequality) and the operation table's range.
    pub fn new(n: usize, metric: &[Rational], mu: Vec<u16>, rank_bound: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySet);
        }
        if metric.len() != n * n || mu.len() != n * n * n {
            return Err(Error::PreconditionViolation(format!(
                "instance tables have wrong size for {n} points"
            )));
        }
        if let Some(&v) = mu.iter().find(|&&v| v as usize >= n) {
            return Err(Error::VertexOutOfRange {
                vertex: v as usize,
                count: n,
            });
        }
        let scale = metric.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
        let dist: Vec<i64> = metric
            .iter()
            .map(|q| {
                q.numer()
                    .checked_mul(scale / q.denom())
                    .ok_or_else(|| Error::InvalidMetric("distance overflows common denominator".into()))
            })
            .collect::<Result<_>>()?;
        let inst = CoarseMedianInstance {
            n,
            scale,
            dist,
            mu: MedianTable::from_raw(n, mu),
            rank_bound,
            ambient: None,
        };
        inst.validate_metric()?;
        Ok(inst)
    }

    fn validate_metric(&self) -> Result<()> {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                let d = self.d(x, y);
                if d < 0 {
                    return Err(Error::InvalidMetric(format!("negative distance between {x} and {y}")));
                }
                if (d == 0) != (x == y) {
                    return Err(Error::InvalidMetric(format!(
                        "distance between {x} and {y} is {}",
                        self.distance(x, y)
                    )));
                }
                if d != self.d(y, x) {
                    return Err(Error::InvalidMetric(format!("asymmetric at ({x}, {y})")));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let dxy = self.d(x, y);
                for z in 0..n {
                    if dxy > self.d(x, z) + self.d(z, y) {
                        return Err(Error::InvalidMetric(format!("triangle inequality fails for ({x}, {y}) via {z}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exact instance of a median graph: graph metric, exact medians, the
    /// graph's rank, and the graph itself as ambient space.
    pub fn from_median_graph(graph: &MedianGraph) -> Result<Self> {
        let n = graph.vertex_count();
        let table = MedianTable::new(graph)?;
        let metric: Vec<Rational> = (0..n * n)
            .map(|i| Rational::from_integer(graph.distance(i / n, i % n) as i64))
            .collect();
        let raw: Vec<u16> = (0..n * n * n)
            .map(|i| table.get(i / (n * n), (i / n) % n, i % n) as u16)
            .collect();
        let rank = CubeComplex::new(graph)?.rank();
        let mut inst = Self::new(n, &metric, raw, Some(rank))?;
        inst.ambient = Some(Ambient {
            graph: graph.clone(),
            table,
            embed: (0..n).collect(),
            project: (0..n).collect(),
        });
        Ok(inst)
    }

    /// Checkerboard coarsening of the `(2w+1) × (2h+1)` vertex grid: points
    /// are the vertices `(i, j)` with `i + j` even, the metric is the grid
    /// metric, and `μ` is the grid median moved to the nearest kept vertex
    /// when it lands on an odd one (ties toward lower coordinates, checking
    /// `(i−1,j)`, `(i,j−1)`, `(i,j+1)`, `(i+1,j)` in that order).
    ///
    /// Point ids follow ambient row-major order; the rank bound is 2.
    pub fn coarsened_grid(w: usize, h: usize) -> Result<Self> {
        let (rows, cols) = (2 * w + 1, 2 * h + 1);
        let graph = generate::grid(2 * w, 2 * h)?;
        let table = MedianTable::new(&graph)?;
        let embed: Vec<usize> = (0..rows * cols).filter(|v| (v / cols + v % cols) % 2 == 0).collect();
        let mut point_of = vec![usize::MAX; rows * cols];
        for (p, &v) in embed.iter().enumerate() {
            point_of[v] = p;
        }
        let project: Vec<usize> = (0..rows * cols)
            .map(|v| {
                if point_of[v] != usize::MAX {
                    return point_of[v];
                }
                let (i, j) = ((v / cols) as isize, (v % cols) as isize);
                [(i - 1, j), (i, j - 1), (i, j + 1), (i + 1, j)]
                    .into_iter()
                    .find(|&(a, b)| a >= 0 && b >= 0 && (a as usize) < rows && (b as usize) < cols)
                    .map(|(a, b)| point_of[a as usize * cols + b as usize])
                    .expect("odd vertex has a kept neighbour")
            })
            .collect();
        let n = embed.len();
        let metric: Vec<Rational> = (0..n * n)
            .map(|i| Rational::from_integer(graph.distance(embed[i / n], embed[i % n]) as i64))
            .collect();
        let raw: Vec<u16> = (0..n * n * n)
            .map(|i| {
                let (x, y, z) = (i / (n * n), (i / n) % n, i % n);
                project[table.get(embed[x], embed[y], embed[z])] as u16
            })
            .collect();
        let mut inst = Self::new(n, &metric, raw, Some(2))?;
        inst.ambient = Some(Ambient {
            graph,
            table,
            embed,
            project,
        });
        Ok(inst)
    }

    pub fn with_rank_bound(mut self, rank: usize) -> Self {
        self.rank_bound = Some(rank);
        self
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn rank_bound(&self) -> Option<usize> {
        self.rank_bound
    }

    pub fn ambient(&self) -> Option<&Ambient> {
        self.ambient.as_ref()
    }

    pub fn median_table(&self) -> &MedianTable {
        &self.mu
    }

    /// Scaled distance `ρ(x,y) · scale`.
    #[inline]
    fn d(&self, x: usize, y: usize) -> i64 {
        self.dist[x * self.n + y]
    }

    pub fn distance(&self, x: usize, y: usize) -> Rational {
        Rational::new(self.d(x, y), self.scale)
    }

    #[inline]
    pub fn mu(&self, x: usize, y: usize, z: usize) -> usize {
        self.mu.get(x, y, z)
    }

    /// `true` when every distance is an integer.
    pub fn is_integral(&self) -> bool {
        self.scale == 1
    }

    pub fn diameter(&self) -> Rational {
        Rational::new(self.dist.iter().copied().max().unwrap_or(0), self.scale)
    }

    /// Largest scaled distance `≤ τ`, i.e. `⌊τ · scale⌋`.
    fn threshold(&self, tau: Rational) -> i64 {
        let num = *tau.numer() as i128 * self.scale as i128;
        num.div_euclid(*tau.denom() as i128).clamp(i64::MIN as i128, i64::MAX as i128) as i64
    }

    pub fn check_point(&self, x: usize) -> Result<()> {
        if x < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: x, count: self.n })
        }
    }

    /// `ρ(μ(a,b,x), x) ≤ τ`.
    pub fn in_coarse_interval(&self, a: usize, b: usize, x: usize, tau: Rational) -> bool {
        self.d(self.mu(a, b, x), x) <= self.threshold(tau)
    }

    /// `[a,b]_τ = {x : ρ(μ(a,b,x), x) ≤ τ}`.
    pub fn coarse_interval(&self, a: usize, b: usize, tau: Rational) -> VertexSet {
        let cap = self.threshold(tau);
        VertexSet::from_iter(self.n, (0..self.n).filter(|&x| self.d(self.mu(a, b, x), x) <= cap))
    }

    /// Closed ball `B(x, radius)`.
    pub fn ball(&self, x: usize, radius: Rational) -> VertexSet {
        let cap = self.threshold(radius);
        VertexSet::from_iter(self.n, (0..self.n).filter(|&y| self.d(x, y) <= cap))
    }

    /// Largest deviation from argument symmetry and from `μ(a,a,b) = a`.
    pub fn m1_m2_defects(&self) -> (Rational, Rational) {
        let n = self.n;
        let mut m1 = 0;
        let mut m2 = 0;
        for a in 0..n {
            for b in 0..n {
                m2 = m2.max(self.d(self.mu(a, a, b), a));
                for c in 0..n {
                    let m = self.mu(a, b, c);
                    m1 = m1.max(self.d(m, self.mu(b, c, a))).max(self.d(m, self.mu(b, a, c)));
                }
            }
        }
        (Rational::new(m1, self.scale), Rational::new(m2, self.scale))
    }
}

/// Measured parameters of an instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoarseParams {
    pub k: Rational,
    pub h0: Rational,
    pub gamma: Rational,
    pub lambda: Rational,
    /// `H(5)` proxy, when the instance has an ambient median graph.
    pub h5: Option<Rational>,
    pub rank: usize,
    /// Whether every tuple was visited (otherwise a seeded sample was).
    pub exhaustive: bool,
}

impl CoarseParams {
    /// Parameters of an exact median structure of the given rank.
    pub fn exact(rank: usize) -> Self {
        CoarseParams {
            k: Rational::from_integer(1),
            h0: Rational::zero(),
            gamma: Rational::zero(),
            lambda: Rational::zero(),
            h5: Some(Rational::zero()),
            rank,
            exhaustive: true,
        }
    }

    /// `3K(3K+2)H(5) + (3K+2)H(0)`, if `H(5)` is known.
    pub fn gamma_formula(&self) -> Option<Rational> {
        let three_k = self.k * 3;
        self.h5
            .map(|h5| three_k * (three_k + 2) * h5 + (three_k + 2) * self.h0)
    }
}

/// Knobs for [`estimate_params`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimateConfig {
    pub exhaustive_limit: usize,
    /// Candidate `K` values run from 1 to `k_max` in steps of `k_step`.
    pub k_max: Rational,
    pub k_step: Rational,
    /// Largest acceptable `H(0)`; defaults to a quarter of the diameter.
    pub h0_cap: Option<Rational>,
    /// Sampled mode: number of base triples for the `(K, H(0))` fit, each
    /// perturbed `perturbations` times within `perturb_radius`.
    pub triples: usize,
    pub perturbations: usize,
    /// Defaults to twice the smallest positive distance.
    pub perturb_radius: Option<Rational>,
    /// Sampled mode: 5-tuples for `γ`.
    pub five_tuples: usize,
    /// Subsets sampled for the `H(5)` proxy.
    pub h5_subsets: usize,
    pub seed: u64,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        EstimateConfig {
            exhaustive_limit: EXHAUSTIVE_LIMIT,
            k_max: Rational::from_integer(8),
            k_step: Rational::new(1, 4),
            h0_cap: None,
            triples: 20_000,
            perturbations: 64,
            perturb_radius: None,
            five_tuples: 2_000_000,
            h5_subsets: 500,
            seed: 0x636f_6172_7365,
        }
    }
}

/// Fits `(K, H(0))` to (C1), then measures `γ`, `λ` and the `H(5)` proxy.
///
/// `K` is the smallest grid value whose required `H(0)` is within the cap;
/// `H(0)` is then the least constant making (C1) hold on every evaluated
/// sextuple. `γ` is the largest (M3) defect over 5-tuples and `λ` the least
/// value with `μ(x,y,z) ∈ [x,y]_λ` for all triples.
pub fn estimate_params(inst: &CoarseMedianInstance, config: &EstimateConfig) -> Result<CoarseParams> {
    let exhaustive = inst.n <= config.exhaustive_limit;
    let fit = if exhaustive {
        C1Fit::Exhaustive
    } else {
        C1Fit::Sampled(sample_sextuples(inst, config))
    };
    let cap = config.h0_cap.unwrap_or(inst.diameter() / 4);
    let mut k = Rational::from_integer(1);
    let mut best = None;
    while k <= config.k_max {
        let h0 = fit.required_h0(inst, k);
        if h0 <= cap {
            best = Some((k, h0));
            break;
        }
        best = best.or(Some((k, h0))).map(|(bk, bh)| if h0 < bh { (k, h0) } else { (bk, bh) });
        k += config.k_step;
    }
    let (k, h0) = match best {
        Some((k, h0)) if h0 <= cap => (k, h0),
        other => {
            return Err(Error::NotCoarseMedian {
                k_max: config.k_max.to_string(),
                best_h0: other.map(|(_, h)| h.to_string()).unwrap_or_default(),
                cap: cap.to_string(),
            })
        }
    };
    let gamma = if exhaustive {
        gamma_exhaustive(inst)
    } else {
        gamma_sampled(inst, config.five_tuples, config.seed)
    };
    let lambda = lambda_exhaustive(inst);
    let h5 = inst
        .ambient
        .as_ref()
        .map(|_| h_proxy(inst, 5, config.h5_subsets, config.seed));
    let rank = inst.rank_bound.ok_or_else(|| {
        Error::PreconditionViolation("instance has no rank bound and no ambient graph".into())
    })?;
    Ok(CoarseParams {
        k,
        h0,
        gamma,
        lambda,
        h5,
        rank,
        exhaustive,
    })
}

enum C1Fit {
    Exhaustive,
    /// `(Σ distances of arguments, distance of medians)`, scaled.
    Sampled(Vec<(i64, i64)>),
}

impl C1Fit {
    fn required_h0(&self, inst: &CoarseMedianInstance, k: Rational) -> Rational {
        // work in units of 1/(scale · denom(k)) so every term is an integer
        let (kn, kd) = (*k.numer(), *k.denom());
        let worst = match self {
            C1Fit::Exhaustive => c1_max_plus(inst, kn, kd),
            C1Fit::Sampled(pairs) => pairs.iter().map(|&(sum, gap)| kd * gap - kn * sum).max().unwrap_or(0),
        };
        Rational::new(worst.max(0), inst.scale * kd)
    }
}

/// `max over sextuples of kd·ρ(μ(a,b,c), μ(a',b',c')) − kn·(ρ(a,a')+ρ(b,b')+ρ(c,c'))`
/// in scaled units, by eliminating one primed argument at a time (max-plus
/// products), `O(n⁵)` instead of `O(n⁶)`.
fn c1_max_plus(inst: &CoarseMedianInstance, kn: i64, kd: i64) -> i64 {
    let n = inst.n;
    let n2 = n * n;
    let n3 = n2 * n;
    // g0[a][b][c][q] = kd · ρ(μ(a,b,c), q)
    let mut g0 = vec![0i64; n3 * n];
    for abc in 0..n3 {
        let m = inst.mu.get(abc / n2, (abc / n) % n, abc % n);
        let row = &inst.dist[m * n..(m + 1) * n];
        for q in 0..n {
            g0[abc * n + q] = kd * row[q];
        }
    }
    // replace a by a'
    let mut g1 = vec![i64::MIN; n3 * n];
    g1.par_chunks_mut(n3).enumerate().for_each(|(a2, out)| {
        for a in 0..n {
            let w = kn * inst.d(a, a2);
            let src = &g0[a * n3..(a + 1) * n3];
            for (o, &s) in out.iter_mut().zip(src) {
                *o = (*o).max(s - w);
            }
        }
    });
    drop(g0);
    // replace b by b'
    let mut g2 = vec![i64::MIN; n3 * n];
    g2.par_chunks_mut(n2).enumerate().for_each(|(a2b2, out)| {
        let (a2, b2) = (a2b2 / n, a2b2 % n);
        for b in 0..n {
            let w = kn * inst.d(b, b2);
            let start = (a2 * n + b) * n2;
            let src = &g1[start..start + n2];
            for (o, &s) in out.iter_mut().zip(src) {
                *o = (*o).max(s - w);
            }
        }
    });
    drop(g1);
    // replace c by c' and evaluate at q = μ(a',b',c')
    (0..n3)
        .into_par_iter()
        .map(|abc2| {
            let (a2, b2, c2) = (abc2 / n2, (abc2 / n) % n, abc2 % n);
            let q = inst.mu.get(a2, b2, c2);
            (0..n)
                .map(|c| g2[((a2 * n + b2) * n + c) * n + q] - kn * inst.d(c, c2))
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

fn smallest_positive_distance(inst: &CoarseMedianInstance) -> i64 {
    inst.dist.iter().copied().filter(|&d| d > 0).min().unwrap_or(1)
}

fn sample_sextuples(inst: &CoarseMedianInstance, config: &EstimateConfig) -> Vec<(i64, i64)> {
    let n = inst.n;
    let radius = config
        .perturb_radius
        .map(|r| inst.threshold(r))
        .unwrap_or_else(|| 2 * smallest_positive_distance(inst));
    let near: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| inst.d(x, y) <= radius).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut out = Vec::with_capacity(config.triples * (config.perturbations + 1));
    let mut record = |a: usize, b: usize, c: usize, a2: usize, b2: usize, c2: usize| {
        let sum = inst.d(a, a2) + inst.d(b, b2) + inst.d(c, c2);
        let gap = inst.d(inst.mu(a, b, c), inst.mu(a2, b2, c2));
        out.push((sum, gap));
    };
    for _ in 0..config.triples {
        let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        for _ in 0..config.perturbations {
            let pick = |x: usize, rng: &mut ChaCha8Rng| near[x][rng.gen_range(0..near[x].len())];
            let (a2, b2, c2) = (pick(a, &mut rng), pick(b, &mut rng), pick(c, &mut rng));
            record(a, b, c, a2, b2, c2);
        }
        let (a2, b2, c2) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
        record(a, b, c, a2, b2, c2);
    }
    out
}

fn m3_defect(inst: &CoarseMedianInstance, [x, y, z, v, w]: [usize; 5]) -> i64 {
    let lhs = inst.mu(x, y, inst.mu(z, v, w));
    let rhs = inst.mu(inst.mu(x, y, z), inst.mu(x, y, v), w);
    inst.d(lhs, rhs)
}

fn gamma_exhaustive(inst: &CoarseMedianInstance) -> Rational {
    let n = inst.n;
    let worst = (0..n * n)
        .into_par_iter()
        .map(|xy| {
            let (x, y) = (xy / n, xy % n);
            let mut worst = 0;
            for z in 0..n {
                let p = inst.mu(x, y, z);
                for v in 0..n {
                    let q = inst.mu(x, y, v);
                    for w in 0..n {
                        let lhs = inst.mu(x, y, inst.mu(z, v, w));
                        let rhs = inst.mu(p, q, w);
                        worst = worst.max(inst.d(lhs, rhs));
                    }
                }
            }
            worst
        })
        .max()
        .unwrap_or(0);
    Rational::new(worst, inst.scale)
}

fn gamma_sampled(inst: &CoarseMedianInstance, samples: usize, seed: u64) -> Rational {
    let n = inst.n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5);
    let worst = (0..samples)
        .map(|_| {
            let t = [(); 5].map(|_| rng.gen_range(0..n));
            m3_defect(inst, t)
        })
        .max()
        .unwrap_or(0);
    Rational::new(worst, inst.scale)
}

fn lambda_exhaustive(inst: &CoarseMedianInstance) -> Rational {
    let n = inst.n;
    let mut worst = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let m = inst.mu(x, y, z);
                worst = worst.max(inst.d(inst.mu(x, y, m), m));
            }
        }
    }
    Rational::new(worst, inst.scale)
}

/// Measured `H(p)` proxy: for seeded random subsets `A` of size `p`, take
/// `Π` = median closure of `A` in the ambient graph, `π` = embedding and
/// `σ` = projection, and return the largest of the two approximation
/// defects over all sampled `A` and all triples of `Π`. Zero without an
/// ambient graph.
pub fn h_proxy(inst: &CoarseMedianInstance, p: usize, subsets: usize, seed: u64) -> Rational {
    let Some(amb) = inst.ambient.as_ref() else {
        return Rational::zero();
    };
    let n = inst.n;
    let size = p.min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc2);
    let mut worst = 0;
    for _ in 0..subsets {
        let chosen = rand::seq::index::sample(&mut rng, n, size);
        let seedset = VertexSet::from_iter(amb.graph.vertex_count(), chosen.iter().map(|a| amb.embed[a]));
        for a in chosen.iter() {
            worst = worst.max(inst.d(a, amb.project[amb.embed[a]]));
        }
        let pi = median_closure(&amb.table, &seedset).to_vec();
        for &x in &pi {
            for &y in &pi {
                for &z in &pi {
                    let via_pi = amb.project[amb.table.get(x, y, z)];
                    let direct = inst.mu(amb.project[x], amb.project[y], amb.project[z]);
                    worst = worst.max(inst.d(via_pi, direct));
                }
            }
        }
    }
    Rational::new(worst, inst.scale)
}

/// `L₁(r)`, `L₂(r)` and `L₃(r,t)` for given parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LConstants {
    pub r: Rational,
    pub t: Rational,
    pub l1: Rational,
    pub l2: Rational,
    pub l3: Rational,
}

pub fn l_constants(params: &CoarseParams, r: Rational, t: Rational, d: usize) -> LConstants {
    let k = params.k;
    let one = Rational::from_integer(1);
    let l1 = (k + one) * r + k * params.lambda + params.gamma + params.h0 * 2;
    let l2 = (k + 2) * r + params.h0;
    let three_k_d = num_traits::pow(k * 3, d);
    let l3 = three_k_d * r * t + r;
    LConstants { r, t, l1, l2, l3 }
}

fn consts(params: &CoarseParams, r: Rational, t: Rational) -> LConstants {
    l_constants(params, r, t, params.rank)
}

/// Outcome of a containment check: the first point violating it, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentCheck {
    pub holds: bool,
    pub witness: Option<usize>,
}

/// For `x ∈ [a,b]_λ`: is `[a,x]_r ⊆ [a,b]_{L₁(r)}`?
pub fn check_interval_containment(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    a: usize,
    b: usize,
    x: usize,
    r: Rational,
) -> Result<ContainmentCheck> {
    for p in [a, b, x] {
        inst.check_point(p)?;
    }
    if !inst.in_coarse_interval(a, b, x, params.lambda) {
        return Err(Error::PreconditionViolation(format!(
            "{x} is not in [{a}, {b}] at tolerance λ = {}",
            params.lambda
        )));
    }
    let l1 = consts(params, r, Rational::zero()).l1;
    let outer = inst.coarse_interval(a, b, l1);
    let witness = inst.coarse_interval(a, x, r).iter().find(|&z| !outer.contains(z));
    Ok(ContainmentCheck {
        holds: witness.is_none(),
        witness,
    })
}

/// Searches `h ∈ [a,b]_{L₁(r)}` with `ρ(a,h) ≤ L₃(r,t)` such that
/// `B(a, rt) ∩ [a,b]_κ ⊆ [a,h]_{L₂(r)}`, candidates in order of increasing
/// `ρ(a,h)` then id.
///
/// `None` means no such `h` at this scale; scales `r ≤ 0` or `t ≤ 0` are
/// outside the search domain and also give `None`.
pub fn find_deep_point(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    a: usize,
    b: usize,
    r: Rational,
    t: Rational,
    kappa: Rational,
) -> Result<Option<usize>> {
    inst.check_point(a)?;
    inst.check_point(b)?;
    if r <= Rational::zero() || t <= Rational::zero() {
        return Ok(None);
    }
    let c = consts(params, r, t);
    let mut target = inst.ball(a, r * t);
    target.intersect_with(&inst.coarse_interval(a, b, kappa));
    let target = target.to_vec();
    let reach = inst.threshold(c.l3);
    let l2 = inst.threshold(c.l2);
    let mut candidates: Vec<usize> = inst
        .coarse_interval(a, b, c.l1)
        .iter()
        .filter(|&h| inst.d(a, h) <= reach)
        .collect();
    candidates.sort_by_key(|&h| (inst.d(a, h), h));
    Ok(candidates
        .into_iter()
        .find(|&h| target.iter().all(|&z| inst.d(inst.mu(a, h, z), z) <= l2)))
}

/// Distance `ρ(h, μ(m,b,h))` against `K(L₁(r)+L₂(r)) + 2H(0) + γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchCheck {
    pub p: usize,
    pub distance: Rational,
    pub bound: Rational,
    pub holds: bool,
}

/// For `m ∈ [a,h]_{L₂(r)}` and `h ∈ [a,b]_{L₁(r)}`, measures how far
/// `p = μ(m,b,h)` is from `h`.
pub fn check_switch_bound(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    (a, b, h, m): (usize, usize, usize, usize),
    r: Rational,
) -> Result<SwitchCheck> {
    for x in [a, b, h, m] {
        inst.check_point(x)?;
    }
    let c = consts(params, r, Rational::zero());
    if !inst.in_coarse_interval(a, h, m, c.l2) {
        return Err(Error::PreconditionViolation(format!("{m} is not in [{a}, {h}] at tolerance L2")));
    }
    if !inst.in_coarse_interval(a, b, h, c.l1) {
        return Err(Error::PreconditionViolation(format!("{h} is not in [{a}, {b}] at tolerance L1")));
    }
    let p = inst.mu(m, b, h);
    let distance = inst.distance(h, p);
    let bound = params.k * (c.l1 + c.l2) + params.h0 * 2 + params.gamma;
    Ok(SwitchCheck {
        p,
        distance,
        bound,
        holds: distance <= bound,
    })
}

/// Outcome of a sweep: how many admissible tuples were checked and the
/// first failure, if any.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn merge(mut self, other: SweepReport) -> SweepReport {
        self.checked += other.checked;
        self.violations += other.violations;
        self.first_violation = self.first_violation.or(other.first_violation);
        self
    }
}

/// Interval containment for every `(a, b)` in `pairs`, every admissible
/// `x ∈ [a,b]_λ` and every scale in `scales`.
pub fn sweep_interval_containment(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    pairs: &[(usize, usize)],
    scales: &[Rational],
) -> SweepReport {
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut rep = SweepReport::default();
            for &r in scales {
                let outer = inst.coarse_interval(a, b, consts(params, r, Rational::zero()).l1);
                for x in inst.coarse_interval(a, b, params.lambda).iter() {
                    rep.checked += 1;
                    if let Some(z) = inst.coarse_interval(a, x, r).iter().find(|&z| !outer.contains(z)) {
                        rep.violations += 1;
                        rep.first_violation
                            .get_or_insert_with(|| format!("a={a}, b={b}, x={x}, r={r}: z={z}"));
                    }
                }
            }
            rep
        })
        .reduce(SweepReport::default, SweepReport::merge)
}

/// Switch bound for every `(a, b)` in `pairs`, every `h ∈ [a,b]_{L₁(r)}`,
/// every `m ∈ [a,h]_{L₂(r)}` and every scale in `scales`.
pub fn sweep_switch_bound(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    pairs: &[(usize, usize)],
    scales: &[Rational],
) -> SweepReport {
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut rep = SweepReport::default();
            for &r in scales {
                let c = consts(params, r, Rational::zero());
                let bound = inst.threshold(params.k * (c.l1 + c.l2) + params.h0 * 2 + params.gamma);
                for h in inst.coarse_interval(a, b, c.l1).iter() {
                    for m in inst.coarse_interval(a, h, c.l2).iter() {
                        rep.checked += 1;
                        let p = inst.mu(m, b, h);
                        if inst.d(h, p) > bound {
                            rep.violations += 1;
                            rep.first_violation
                                .get_or_insert_with(|| format!("a={a}, b={b}, h={h}, m={m}, r={r}: p={p}"));
                        }
                    }
                }
            }
            rep
        })
        .reduce(SweepReport::default, SweepReport::merge)
}

/// Result of the exact (C2) verification on a median graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C2Report {
    /// Median closure of `A`; `π` and `σ` are the inclusions.
    pub pi: VertexSet,
    /// Largest of the two approximation defects.
    pub h_p: u32,
    pub pi_rank: usize,
    pub graph_rank: usize,
}

/// Takes `Π` to be the median closure of `A`, checks it is closed, measures
/// both approximation defects for the inclusion maps and compares the rank
/// of `Π` (walls of `Π` are the non-trivial restrictions of hyperplanes)
/// with the rank of the graph.
pub fn verify_c2_exact(complex: &CubeComplex, table: &MedianTable, set: &VertexSet) -> Result<C2Report> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let graph = complex.graph();
    let pi = median_closure(table, set);
    let members = pi.to_vec();
    let mut h_p = 0;
    for &x in &members {
        for &y in &members {
            for &z in &members {
                let m = table.get(x, y, z);
                if !pi.contains(m) {
                    return Err(Error::ConditionViolation {
                        property: "median closure is closed".into(),
                        witness: format!("({x}, {y}, {z}) -> {m}"),
                    });
                }
                // μ_Π is μ restricted to Π; σ is the inclusion
                h_p = h_p.max(graph.distance(m, graph.median(x, y, z)?));
            }
        }
    }
    // π and σ are inclusions, so ρ(a, σπa) = 0 for every a in A
    let mut walls: BTreeSet<Vec<usize>> = BTreeSet::new();
    for h in complex.hyperplanes() {
        let side = h.plus.intersection(&pi);
        if !side.is_empty() && side != pi {
            let a = side.to_vec();
            let b = pi.difference(&side).to_vec();
            walls.insert(a.min(b));
        }
    }
    let walls: Vec<VertexSet> = walls
        .into_iter()
        .map(|w| VertexSet::from_iter(graph.vertex_count(), w))
        .collect();
    let m = walls.len();
    let mut adj = vec![vec![false; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let (wi, wj) = (&walls[i], &walls[j]);
            let (ci, cj) = (pi.difference(wi), pi.difference(wj));
            let crossing = wi.intersects(wj) && wi.intersects(&cj) && ci.intersects(wj) && ci.intersects(&cj);
            adj[i][j] = crossing;
            adj[j][i] = crossing;
        }
    }
    Ok(C2Report {
        pi,
        h_p,
        pi_rank: crate::clique::max_clique(&adj).len(),
        graph_rank: complex.rank(),
    })
}

/// `l_t = (t·r − H(0)) / 3K`.
pub fn level_of(params: &CoarseParams, t: Rational, r: Rational) -> Rational {
    (t * r - params.h0) / (params.k * 3)
}

/// `S(x, k, l_t) = {h_y : y ∈ B(x,k)}` where `h_y` is the deep point for
/// `(a, b) = (y, x₀)` at scale `r` with `κ = λ`. Requires `k ≤ 3 l_t`.
pub fn witness_set_coarse(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    basepoint: usize,
    x: usize,
    k: Rational,
    t: Rational,
    r: Rational,
) -> Result<VertexSet> {
    inst.check_point(x)?;
    if k > level_of(params, t, r) * 3 {
        return Err(Error::PreconditionViolation(format!(
            "k = {k} exceeds 3 l_t = {}",
            level_of(params, t, r) * 3
        )));
    }
    let mut out = VertexSet::empty(inst.n);
    for y in inst.ball(x, k).iter() {
        out.insert(deep_point_or_error(inst, params, y, basepoint, r, t)?);
    }
    Ok(out)
}

fn deep_point_or_error(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    y: usize,
    basepoint: usize,
    r: Rational,
    t: Rational,
) -> Result<usize> {
    find_deep_point(inst, params, y, basepoint, r, t, params.lambda)?.ok_or_else(|| Error::NotFound {
        what: format!("deep point for ({y}, {basepoint}) at r = {r}, t = {t}"),
    })
}

/// The per-`y` bookkeeping that bounds `|S(x,k,l_t)|`: each `h_y` has a
/// partner `p_y` near `[x, x₀]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessChain {
    pub y: usize,
    pub h_y: usize,
    /// `μ(x, y, x₀)`.
    pub m_y: usize,
    /// `ρ(y, m_y) ≤ t·r`.
    pub m_y_close: bool,
    /// `m_y ∈ [y, h_y]_{L₂(r)}`.
    pub m_y_in_interval: bool,
    /// `μ(m_y, x₀, h_y)`.
    pub p_y: usize,
    /// `ρ(h_y, p_y)` within the switch bound.
    pub p_y_close: bool,
    /// `p_y ∈ [x, x₀]_{L₁(λ)}`.
    pub p_y_in_interval: bool,
}

impl WitnessChain {
    pub fn holds(&self) -> bool {
        self.m_y_close && self.m_y_in_interval && self.p_y_close && self.p_y_in_interval
    }
}

pub fn witness_chain(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    basepoint: usize,
    x: usize,
    y: usize,
    t: Rational,
    r: Rational,
) -> Result<WitnessChain> {
    let h_y = deep_point_or_error(inst, params, y, basepoint, r, t)?;
    let c = consts(params, r, t);
    let m_y = inst.mu(x, y, basepoint);
    let rho_y_m = inst.distance(y, m_y);
    let m_y_close = rho_y_m <= t * r;
    let m_y_in_interval = inst.in_coarse_interval(y, h_y, m_y, c.l2);
    let p_y = inst.mu(m_y, basepoint, h_y);
    let bound = params.k * (c.l1 + c.l2) + params.h0 * 2 + params.gamma;
    let p_y_close = inst.distance(h_y, p_y) <= bound;
    let l1_lambda = consts(params, params.lambda, Rational::zero()).l1;
    let p_y_in_interval = inst.in_coarse_interval(x, basepoint, p_y, l1_lambda);
    Ok(WitnessChain {
        y,
        h_y,
        m_y,
        m_y_close,
        m_y_in_interval,
        p_y,
        p_y_close,
        p_y_in_interval,
    })
}

/// Smallest integer scale `r ∈ 1..=r_max` at which the deep-point search
/// succeeds for every pair in `pairs`.
pub fn discover_scale(
    inst: &CoarseMedianInstance,
    params: &CoarseParams,
    t: Rational,
    kappa: Rational,
    pairs: &[(usize, usize)],
    r_max: u32,
) -> Result<Option<u32>> {
    for r in 1..=r_max {
        let rr = Rational::from_integer(r as i64);
        let all = pairs
            .par_iter()
            .map(|&(a, b)| find_deep_point(inst, params, a, b, rr, t, kappa).map(|h| h.is_some()))
            .collect::<Result<Vec<bool>>>()?;
        if all.into_iter().all(|ok| ok) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Witness-set provider built from deep points on a coarse median instance
/// with integral metric.
///
/// Level `n` uses the smallest integer scale `r ≥ r_min` with `l_t ≥ n`,
/// i.e. `3Kn + H(0) ≤ t·r`, so every `k ≤ 3n` is admissible.
pub struct CoarseProvider<'a> {
    inst: &'a CoarseMedianInstance,
    params: CoarseParams,
    basepoint: usize,
    t: Rational,
    levels: Vec<(u32, Rational)>,
    /// For each level, `h_y` for every point `y`.
    deep: Vec<Vec<usize>>,
}

impl<'a> CoarseProvider<'a> {
    pub fn new(
        inst: &'a CoarseMedianInstance,
        params: CoarseParams,
        basepoint: usize,
        t: Rational,
        r_min: Rational,
        levels: &[u32],
    ) -> Result<Self> {
        inst.check_point(basepoint)?;
        if !inst.is_integral() {
            return Err(Error::PreconditionViolation(
                "coarse witness sets need an integral metric".into(),
            ));
        }
        if t <= Rational::zero() {
            return Err(Error::PreconditionViolation("t must be positive".into()));
        }
        let mut scales = Vec::new();
        let mut deep = Vec::new();
        for &n in levels {
            let needed = (params.k * 3 * Rational::from_integer(n as i64) + params.h0) / t;
            let r = Rational::from_integer(needed.max(r_min).ceil().to_integer().max(1));
            let table = (0..inst.n)
                .into_par_iter()
                .map(|y| deep_point_or_error(inst, &params, y, basepoint, r, t))
                .collect::<Result<Vec<usize>>>()?;
            scales.push((n, r));
            deep.push(table);
        }
        Ok(CoarseProvider {
            inst,
            params,
            basepoint,
            t,
            levels: scales,
            deep,
        })
    }

    pub fn params(&self) -> &CoarseParams {
        &self.params
    }

    pub fn t(&self) -> Rational {
        self.t
    }

    /// `(level, scale r)` pairs.
    pub fn scales(&self) -> &[(u32, Rational)] {
        &self.levels
    }

    /// `h_y` at the given level.
    pub fn deep_point(&self, level: u32, y: usize) -> Option<usize> {
        let i = self.levels.iter().position(|&(n, _)| n == level)?;
        Some(self.deep[i][y])
    }
}

impl WitnessProvider for CoarseProvider<'_> {
    fn name(&self) -> &str {
        "coarse"
    }

    fn point_count(&self) -> usize {
        self.inst.n
    }

    fn basepoint(&self) -> usize {
        self.basepoint
    }

    fn distance(&self, x: usize, y: usize) -> u32 {
        self.inst.d(x, y).to_u32().expect("integral metric fits u32")
    }

    fn levels(&self) -> Vec<u32> {
        self.levels.iter().map(|&(n, _)| n).collect()
    }

    fn witness_sets(&self, x: usize, level: u32) -> Result<Vec<VertexSet>> {
        self.inst.check_point(x)?;
        let i = self
            .levels
            .iter()
            .position(|&(n, _)| n == level)
            .ok_or_else(|| Error::PreconditionViolation(format!("level {level} not provided")))?;
        let kmax = 3 * level as i64;
        let mut by_radius = vec![Vec::new(); kmax as usize + 1];
        for y in 0..self.inst.n {
            let d = self.inst.d(x, y);
            if d <= kmax {
                by_radius[d as usize].push(y);
            }
        }
        let mut current = VertexSet::empty(self.inst.n);
        let mut out = Vec::with_capacity(kmax as usize);
        for (radius, ys) in by_radius.iter().enumerate() {
            for &y in ys {
                current.insert(self.deep[i][y]);
            }
            if radius >= 1 {
                out.push(current.clone());
            }
        }
        Ok(out)
    }
}

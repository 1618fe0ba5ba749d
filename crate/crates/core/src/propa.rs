//! Property A certificates from witness-set providers.
//!
//! A [`WitnessProvider`] assigns to every point `x`, level `n` and
//! `k ∈ {1,…,3n}` a finite set `S(x,k,n)`. From these the engine forms
//!
//! ```text
//! ξₙ(x) = (1/n) Σ_{k=n+1}^{2n} χ_{S(x,k,n)}
//! ```
//!
//! with `χ_A` the normalised characteristic function of `A`, checks the
//! nesting and support conditions on a sample, and certifies the chain
//!
//! ```text
//! ‖ξₙ(x)−ξₙ(y)‖ ≤ (1/n)Σ‖χ_{S(x,k,n)}−χ_{S(y,k,n)}‖
//!               ≤ 2(1 − (1/n)Σ |S(x,k−m,n)|/|S(x,k+m,n)|)
//!               ≤ 2(1 − (Π |S(x,k−m,n)|/|S(x,k+m,n)|)^{1/n})
//!               ≤ 2(1 − p(n)^{−2m/n})
//! ```
//!
//! for every sampled pair at distance `m`. All comparisons are exact; the
//! irrational `n`-th roots are never formed, each step involving one is
//! decided by raising both sides to the `n`-th power.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cube::{CubeComplex, NcpCache};
use crate::error::{Error, Result};
use crate::graph::MedianGraph;
use crate::set::VertexSet;

/// Finitely supported map from points to positive rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparseL1Vector {
    entries: BTreeMap<usize, BigRational>,
}

impl SparseL1Vector {
    pub fn get(&self, v: usize) -> BigRational {
        self.entries.get(&v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> &BTreeMap<usize, BigRational> {
        &self.entries
    }

    pub fn norm(&self) -> BigRational {
        self.entries.values().fold(BigRational::zero(), |acc, v| acc + v.abs())
    }

    pub fn l1_distance(&self, other: &SparseL1Vector) -> BigRational {
        let keys: BTreeSet<usize> = self.support().chain(other.support()).collect();
        keys.into_iter()
            .fold(BigRational::zero(), |acc, v| acc + (self.get(v) - other.get(v)).abs())
    }

    fn add_scaled(&mut self, set: &VertexSet, weight: &BigRational) {
        for v in set.iter() {
            let slot = self.entries.entry(v).or_insert_with(BigRational::zero);
            *slot += weight;
        }
    }
}

/// Normalised characteristic function `χ_A`: `1/|A|` on each member.
pub fn chi(set: &VertexSet) -> Result<SparseL1Vector> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut out = SparseL1Vector::default();
    out.add_scaled(set, &BigRational::new(BigInt::one(), BigInt::from(set.len())));
    Ok(out)
}

/// `2(1 − |A∩B| / max{|A|,|B|})`, the ℓ¹ distance of `χ_A` and `χ_B`.
pub fn chi_distance(a: &VertexSet, b: &VertexSet) -> Result<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let common = a.intersection_len(b);
    let larger = a.len().max(b.len());
    Ok(BigRational::from_integer(2.into())
        * (BigRational::one() - BigRational::new(common.into(), larger.into())))
}

/// Source of witness sets `S(x, k, n)`.
pub trait WitnessProvider: Sync {
    fn name(&self) -> &str;

    fn point_count(&self) -> usize;

    fn basepoint(&self) -> usize;

    /// Integral metric on the points.
    fn distance(&self, x: usize, y: usize) -> u32;

    /// Levels `n` the provider defines sets for.
    fn levels(&self) -> Vec<u32>;

    /// `S(x,k,n)` for `k = 1..=3n`, at index `k-1`.
    fn witness_sets(&self, x: usize, level: u32) -> Result<Vec<VertexSet>>;

    fn check_level(&self, level: u32) -> Result<()> {
        if level >= 1 && self.levels().contains(&level) {
            Ok(())
        } else {
            Err(Error::PreconditionViolation(format!(
                "level {level} is not provided by {}",
                self.name()
            )))
        }
    }
}

/// `ξₙ(x) = (1/n) Σ_{k=n+1}^{2n} χ_{S(x,k,n)}`, exactly.
pub fn xi<P: WitnessProvider + ?Sized>(provider: &P, x: usize, n: u32) -> Result<SparseL1Vector> {
    provider.check_level(n)?;
    let sets = provider.witness_sets(x, n)?;
    xi_from_sets(&sets, n)
}

fn xi_from_sets(sets: &[VertexSet], n: u32) -> Result<SparseL1Vector> {
    let mut out = SparseL1Vector::default();
    for k in n + 1..=2 * n {
        let s = &sets[(k - 1) as usize];
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        out.add_scaled(s, &BigRational::new(BigInt::one(), BigInt::from(s.len() as u64 * n as u64)));
    }
    Ok(out)
}

/// `‖ξₙ(x) − ξₙ(y)‖₁`.
pub fn variation<P: WitnessProvider + ?Sized>(provider: &P, x: usize, y: usize, n: u32) -> Result<BigRational> {
    Ok(xi(provider, x, n)?.l1_distance(&xi(provider, y, n)?))
}

/// Witness-set provider for a median graph: `S(x,k,l)` collects the `3l`-th
/// vertex of the normal cube path to the basepoint from every `y` in
/// `B(x,k)`.
pub struct Cat0Provider<'g> {
    graph: &'g MedianGraph,
    paths: NcpCache,
    rank: usize,
    levels: Vec<u32>,
}

impl<'g> Cat0Provider<'g> {
    pub fn new(complex: &CubeComplex<'g>, basepoint: usize, levels: Vec<u32>) -> Result<Self> {
        Ok(Cat0Provider {
            graph: complex.graph(),
            paths: complex.paths_to(basepoint)?,
            rank: complex.rank(),
            levels,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn paths(&self) -> &NcpCache {
        &self.paths
    }
}

impl WitnessProvider for Cat0Provider<'_> {
    fn name(&self) -> &str {
        "cat0"
    }

    fn point_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn basepoint(&self) -> usize {
        self.paths.basepoint()
    }

    fn distance(&self, x: usize, y: usize) -> u32 {
        self.graph.distance(x, y)
    }

    fn levels(&self) -> Vec<u32> {
        self.levels.clone()
    }

    fn witness_sets(&self, x: usize, level: u32) -> Result<Vec<VertexSet>> {
        self.graph.check_vertex(x)?;
        let kmax = 3 * level;
        let step = 3 * level as usize;
        let row = self.graph.distances().row(x);
        let mut by_radius = vec![Vec::new(); kmax as usize + 1];
        for (y, &d) in row.iter().enumerate() {
            if d <= kmax {
                by_radius[d as usize].push(y);
            }
        }
        let mut current = VertexSet::empty(self.point_count());
        let mut out = Vec::with_capacity(kmax as usize);
        for (radius, ys) in by_radius.iter().enumerate() {
            for &y in ys {
                current.insert(self.paths.vertex_at(y, step));
            }
            if radius >= 1 {
                out.push(current.clone());
            }
        }
        Ok(out)
    }
}

/// Measured support radius, nesting checks and size bounds for one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionsReport {
    pub provider: String,
    pub n: u32,
    pub sample_size: usize,
    /// Max over sampled `x` and `k` of the distance from `x` to members of
    /// `S(x,k,n)`.
    pub support_radius: u32,
    /// Max of `|S(x,k,n)|`.
    pub p_n: usize,
    /// Max of `|S(x,k,n)|` for each `k = 1..=3n` separately.
    pub p_by_k: Vec<usize>,
    pub pairs_checked: usize,
    pub inclusions_checked: usize,
    /// Sets equal to `{basepoint}`.
    pub saturated_sets: usize,
}

/// Witness sets for one level over the points that were needed.
struct LevelSets {
    sets: BTreeMap<usize, Vec<VertexSet>>,
}

impl LevelSets {
    fn compute<P: WitnessProvider + ?Sized>(provider: &P, n: u32, points: &BTreeSet<usize>) -> Result<Self> {
        let computed: Result<Vec<(usize, Vec<VertexSet>)>> = points
            .par_iter()
            .map(|&x| {
                let sets = provider.witness_sets(x, n)?;
                if let Some(k) = sets.iter().position(VertexSet::is_empty) {
                    return Err(Error::ConditionViolation {
                        property: "witness sets are non-empty".into(),
                        witness: format!("x={x}, k={}, n={n}", k + 1),
                    });
                }
                Ok((x, sets))
            })
            .collect();
        Ok(LevelSets {
            sets: computed?.into_iter().collect(),
        })
    }

    /// `S(x,k,n)`, k counted from 1.
    fn get(&self, x: usize, k: u32) -> &VertexSet {
        &self.sets[&x][(k - 1) as usize]
    }

    fn p(&self) -> usize {
        self.sets.values().flatten().map(VertexSet::len).max().unwrap_or(0)
    }
}

fn points_within<P: WitnessProvider + ?Sized>(provider: &P, sample: &[usize], radius: u32) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for &x in sample {
        out.extend((0..provider.point_count()).filter(|&y| provider.distance(x, y) <= radius));
    }
    out
}

fn check_sample<P: WitnessProvider + ?Sized>(provider: &P, sample: &[usize]) -> Result<()> {
    if sample.is_empty() {
        return Err(Error::PreconditionViolation("sample is empty".into()));
    }
    if let Some(&x) = sample.iter().find(|&&x| x >= provider.point_count()) {
        return Err(Error::VertexOutOfRange {
            vertex: x,
            count: provider.point_count(),
        });
    }
    Ok(())
}

/// Checks support, nesting and size conditions at level `n` on `sample`.
///
/// Nesting is checked for every sampled `x`, every `y` with `ρ(x,y) = m ≤ n`
/// and every `k ∈ {n+1,…,2n}`:
/// `S(x,k−m,n) ⊆ S(x,k,n) ∩ S(y,k,n)` and
/// `S(x,k,n) ∪ S(y,k,n) ⊆ S(x,k+m,n)`.
pub fn verify_conditions<P: WitnessProvider + ?Sized>(provider: &P, n: u32, sample: &[usize]) -> Result<ConditionsReport> {
    provider.check_level(n)?;
    check_sample(provider, sample)?;
    let needed = points_within(provider, sample, n);
    let sets = LevelSets::compute(provider, n, &needed)?;
    verify_with_sets(provider, n, sample, &sets)
}

fn verify_with_sets<P: WitnessProvider + ?Sized>(
    provider: &P,
    n: u32,
    sample: &[usize],
    sets: &LevelSets,
) -> Result<ConditionsReport> {
    let kmax = 3 * n;
    let mut support_radius = 0;
    for &x in sample {
        for k in 1..=kmax {
            for z in sets.get(x, k).iter() {
                support_radius = support_radius.max(provider.distance(x, z));
            }
        }
    }
    let pair_counts: Result<Vec<(usize, usize)>> = sample
        .par_iter()
        .map(|&x| {
            let mut pairs = 0;
            let mut inclusions = 0;
            for y in 0..provider.point_count() {
                let m = provider.distance(x, y);
                if m > n {
                    continue;
                }
                pairs += 1;
                for k in n + 1..=2 * n {
                    let (sx, sy) = (sets.get(x, k), sets.get(y, k));
                    let inner = sets.get(x, k - m);
                    let outer = sets.get(x, k + m);
                    if !(inner.is_subset(sx) && inner.is_subset(sy)) {
                        return Err(Error::ConditionViolation {
                            property: "witness-set nesting S(x,k-m) within S(x,k) and S(y,k)".into(),
                            witness: format!("x={x}, y={y}, k={k}, n={n}, m={m}"),
                        });
                    }
                    if !(sx.is_subset(outer) && sy.is_subset(outer)) {
                        return Err(Error::ConditionViolation {
                            property: "witness-set nesting S(x,k), S(y,k) within S(x,k+m)".into(),
                            witness: format!("x={x}, y={y}, k={k}, n={n}, m={m}"),
                        });
                    }
                    inclusions += 4;
                }
            }
            Ok((pairs, inclusions))
        })
        .collect();
    let (pairs_checked, inclusions_checked) = pair_counts?
        .into_iter()
        .fold((0, 0), |(a, b), (p, i)| (a + p, b + i));

    let mut p_by_k = vec![0; kmax as usize];
    let mut saturated_sets = 0;
    for family in sets.sets.values() {
        for (i, s) in family.iter().enumerate() {
            p_by_k[i] = p_by_k[i].max(s.len());
            if s.len() == 1 && s.contains(provider.basepoint()) {
                saturated_sets += 1;
            }
        }
    }
    Ok(ConditionsReport {
        provider: provider.name().to_string(),
        n,
        sample_size: sample.len(),
        support_radius,
        p_n: sets.p(),
        p_by_k,
        pairs_checked,
        inclusions_checked,
        saturated_sets,
    })
}

/// One `(n, m)` row of a certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateRow {
    pub m: u32,
    /// Max of `‖ξₙ(x)−ξₙ(y)‖` over sampled pairs with `ρ(x,y) = m`.
    pub sup_variation: BigRational,
    /// Max over the same pairs of `2(1 − (1/n)Σ_k |S(x,k−m,n)|/|S(x,k+m,n)|)`.
    pub amgm_bound: BigRational,
    /// `2(1 − p(n)^{−2m/n})`, for display only.
    pub p_bound_float: f64,
    pub pairs: usize,
}

/// Certified variation bounds at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct PropACertificate {
    pub provider: String,
    pub basepoint: usize,
    pub n: u32,
    pub support_radius: u32,
    pub p_n: usize,
    pub rows: Vec<CertificateRow>,
}

/// Integer vector with a shared denominator: `ξₙ(x) = numerators / denominator`.
struct ScaledXi {
    entries: Vec<(usize, BigInt)>,
}

fn lcm_of_sizes(sets: &LevelSets, n: u32) -> BigInt {
    let sizes: BTreeSet<usize> = sets
        .sets
        .values()
        .flat_map(|family| family[n as usize..2 * n as usize].iter().map(VertexSet::len))
        .collect();
    sizes.into_iter().fold(BigInt::one(), |acc, s| acc.lcm(&BigInt::from(s)))
}

fn scaled_xi(sets: &[VertexSet], n: u32, lcm: &BigInt) -> ScaledXi {
    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
    for s in &sets[n as usize..2 * n as usize] {
        let weight = lcm / BigInt::from(s.len());
        for v in s.iter() {
            *acc.entry(v).or_insert_with(BigInt::zero) += &weight;
        }
    }
    ScaledXi {
        entries: acc.into_iter().collect(),
    }
}

fn scaled_l1(a: &ScaledXi, b: &ScaledXi) -> BigInt {
    let (mut i, mut j) = (0, 0);
    let mut total = BigInt::zero();
    while i < a.entries.len() || j < b.entries.len() {
        let ka = a.entries.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let kb = b.entries.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ka == kb {
            total += (&a.entries[i].1 - &b.entries[j].1).abs();
            i += 1;
            j += 1;
        } else if ka < kb {
            total += &a.entries[i].1;
            i += 1;
        } else {
            total += &b.entries[j].1;
            j += 1;
        }
    }
    total
}

fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

/// Decides `2(1 − q) ≤ 2(1 − p^{−2m/n})`, i.e. `q^n · p^{2m} ≥ 1`, exactly.
fn below_p_bound(q: &BigRational, n: u32, p: usize, m: u32) -> bool {
    if q.is_negative() {
        return false;
    }
    let lhs = num_traits::pow(q.clone(), n as usize) * BigRational::from_integer(num_traits::pow(BigInt::from(p), 2 * m as usize));
    lhs >= BigRational::one()
}

pub fn p_bound_float(p: usize, n: u32, m: u32) -> f64 {
    2.0 * (1.0 - (p as f64).powf(-2.0 * m as f64 / n as f64))
}

/// Per-pair record of the proof chain, exposed for diagnostics and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct PairChain {
    pub x: usize,
    pub y: usize,
    pub variation: BigRational,
    pub mean_chi_distance: BigRational,
    pub arithmetic_bound: BigRational,
}

fn violation(property: &str, x: usize, y: usize, n: u32, m: u32) -> Error {
    Error::ConditionViolation {
        property: property.into(),
        witness: format!("x={x}, y={y}, n={n}, m={m}"),
    }
}

/// Checks every link of the chain for one pair; `p` is the measured `p(n)`.
fn certify_pair(
    sets: &LevelSets,
    xis: &BTreeMap<usize, ScaledXi>,
    denominator: &BigInt,
    (x, y): (usize, usize),
    n: u32,
    m: u32,
    p: usize,
) -> Result<PairChain> {
    let variation = BigRational::new(scaled_l1(&xis[&x], &xis[&y]), denominator.clone());

    let mut chi_sum = BigRational::zero();
    let mut ratio_sum = BigRational::zero();
    let mut ratio_product = BigRational::one();
    for k in n + 1..=2 * n {
        let term = chi_distance(sets.get(x, k), sets.get(y, k))?;
        let ratio = rational(sets.get(x, k - m).len(), sets.get(x, k + m).len());
        if term > two() * (BigRational::one() - &ratio) {
            return Err(violation("per-k bound from nesting", x, y, n, m));
        }
        chi_sum += term;
        ratio_sum += &ratio;
        ratio_product *= ratio;
    }
    let level = BigRational::from_integer(n.into());
    let mean_chi_distance = chi_sum / &level;
    let mean_ratio = ratio_sum / &level;
    let arithmetic_bound = two() * (BigRational::one() - &mean_ratio);

    if variation > mean_chi_distance {
        return Err(violation("triangle inequality for the averaged vectors", x, y, n, m));
    }
    if mean_chi_distance > arithmetic_bound {
        return Err(violation("average of per-k bounds", x, y, n, m));
    }
    if num_traits::pow(mean_ratio, n as usize) < ratio_product {
        return Err(violation("arithmetic mean dominates geometric mean", x, y, n, m));
    }
    let size = |j: u32| BigInt::from(sets.get(x, j).len());
    let telescoped_num: BigInt = (n + 1 - m..=n + m).map(size).product();
    let telescoped_den: BigInt = (2 * n + 1 - m..=2 * n + m).map(size).product();
    if ratio_product != BigRational::new(telescoped_num, telescoped_den) {
        return Err(violation("telescoping product identity", x, y, n, m));
    }
    let p_power = BigRational::from_integer(num_traits::pow(BigInt::from(p), 2 * m as usize));
    if &ratio_product * p_power < BigRational::one() {
        return Err(violation("product bounded below by p(n)^(-2m)", x, y, n, m));
    }
    let slack = (two() - &variation) / two();
    if !below_p_bound(&slack, n, p, m) {
        return Err(violation("variation below 2(1 - p(n)^(-2m/n))", x, y, n, m));
    }
    Ok(PairChain {
        x,
        y,
        variation,
        mean_chi_distance,
        arithmetic_bound,
    })
}

/// Certificates for each level in `levels` and each distance in
/// `distances`, over all pairs `(x, y)` with `x` in `sample` and
/// `ρ(x, y) = m`.
///
/// Requires `m ≤ n`, which keeps every index `k ± m` inside `1..=3n`.
pub fn certify<P: WitnessProvider + ?Sized>(
    provider: &P,
    levels: &[u32],
    distances: &[u32],
    sample: &[usize],
) -> Result<Vec<PropACertificate>> {
    check_sample(provider, sample)?;
    levels
        .iter()
        .map(|&n| certify_level(provider, n, distances, sample).map(|(c, _)| c))
        .collect()
}

/// Like [`certify`] for one level, also returning every pair's chain.
pub fn certify_level<P: WitnessProvider + ?Sized>(
    provider: &P,
    n: u32,
    distances: &[u32],
    sample: &[usize],
) -> Result<(PropACertificate, Vec<PairChain>)> {
    provider.check_level(n)?;
    check_sample(provider, sample)?;
    if let Some(&m) = distances.iter().find(|&&m| m > n) {
        return Err(Error::PreconditionViolation(format!(
            "certificate needs m <= n, got m = {m}, n = {n}"
        )));
    }
    let needed = points_within(provider, sample, n);
    let sets = LevelSets::compute(provider, n, &needed)?;
    let report = verify_with_sets(provider, n, sample, &sets)?;
    let p = report.p_n;

    let lcm = lcm_of_sizes(&sets, n);
    let denominator = &lcm * BigInt::from(n);
    let mut involved = BTreeSet::new();
    let mut pairs_by_m: BTreeMap<u32, Vec<(usize, usize)>> = distances.iter().map(|&m| (m, Vec::new())).collect();
    for &x in sample {
        for y in 0..provider.point_count() {
            let d = provider.distance(x, y);
            if let Some(list) = pairs_by_m.get_mut(&d) {
                list.push((x, y));
                involved.insert(x);
                involved.insert(y);
            }
        }
    }
    let xis: BTreeMap<usize, ScaledXi> = involved
        .par_iter()
        .map(|&v| (v, scaled_xi(&sets.sets[&v], n, &lcm)))
        .collect();

    let mut rows = Vec::new();
    let mut chains = Vec::new();
    for &m in distances {
        let pairs = &pairs_by_m[&m];
        let results: Result<Vec<PairChain>> = pairs
            .par_iter()
            .map(|&pair| certify_pair(&sets, &xis, &denominator, pair, n, m, p))
            .collect();
        let results = results?;
        let sup_variation = results.iter().map(|c| &c.variation).max().cloned().unwrap_or_else(BigRational::zero);
        let amgm_bound = results
            .iter()
            .map(|c| &c.arithmetic_bound)
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero);
        if sup_variation > amgm_bound || !below_p_bound(&((two() - &amgm_bound) / two()), n, p, m) {
            return Err(Error::ConditionViolation {
                property: "certificate row ordering".into(),
                witness: format!("n={n}, m={m}"),
            });
        }
        rows.push(CertificateRow {
            m,
            sup_variation,
            amgm_bound,
            p_bound_float: p_bound_float(p, n, m),
            pairs: pairs.len(),
        });
        chains.extend(results);
    }
    Ok((
        PropACertificate {
            provider: provider.name().to_string(),
            basepoint: provider.basepoint(),
            n,
            support_radius: report.support_radius,
            p_n: p,
            rows,
        },
        chains,
    ))
}

/// `true` when, for distance `m`, `sup_variation` does not increase as the
/// level grows.
pub fn sup_variation_non_increasing(certificates: &[PropACertificate], m: u32) -> bool {
    let mut by_level: Vec<(u32, &BigRational)> = certificates
        .iter()
        .filter_map(|c| c.rows.iter().find(|r| r.m == m).map(|r| (c.n, &r.sup_variation)))
        .collect();
    by_level.sort_by_key(|&(n, _)| n);
    by_level.windows(2).all(|w| w[1].1 <= w[0].1)
}

/// Exact rational rendered as `num/den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalString(pub BigRational);

impl fmt::Display for RationalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRowJson {
    pub m: u32,
    pub sup_variation: String,
    pub amgm_bound: String,
    pub p_bound_float: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: u32,
    pub provider: String,
    pub basepoint: usize,
    pub support_radius: u32,
    pub p_n: usize,
    pub rows: Vec<CertificateRowJson>,
}

impl From<&PropACertificate> for CertificateJson {
    fn from(c: &PropACertificate) -> Self {
        CertificateJson {
            n: c.n,
            provider: c.provider.clone(),
            basepoint: c.basepoint,
            support_radius: c.support_radius,
            p_n: c.p_n,
            rows: c
                .rows
                .iter()
                .map(|r| CertificateRowJson {
                    m: r.m,
                    sup_variation: RationalString(r.sup_variation.clone()).to_string(),
                    amgm_bound: RationalString(r.amgm_bound.clone()).to_string(),
                    p_bound_float: r.p_bound_float,
                })
                .collect(),
        }
    }
}

/// Header of the CSV mirror.
pub const CSV_COLUMNS: [&str; 10] = [
    "provider",
    "n",
    "m",
    "sup_variation_num",
    "sup_variation_den",
    "amgm_num",
    "amgm_den",
    "p_n",
    "p_bound_float",
    "support_radius",
];

/// CSV mirror of a list of certificates, one row per `(n, m)`.
pub fn certificates_csv(certificates: &[PropACertificate]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    writer.write_record(CSV_COLUMNS).map_err(csv_err)?;
    for c in certificates {
        for r in &c.rows {
            writer
                .write_record([
                    c.provider.clone(),
                    c.n.to_string(),
                    r.m.to_string(),
                    r.sup_variation.numer().to_string(),
                    r.sup_variation.denom().to_string(),
                    r.amgm_bound.numer().to_string(),
                    r.amgm_bound.denom().to_string(),
                    c.p_n.to_string(),
                    r.p_bound_float.to_string(),
                    c.support_radius.to_string(),
                ])
                .map_err(csv_err)?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn r(a: i64, b: i64) -> BigRational {
        rational(a, b)
    }

    #[test]
    fn chi_examples() {
        let one = chi(&VertexSet::singleton(5, 3)).unwrap();
        assert_eq!(one.get(3), r(1, 1));
        let a = VertexSet::from_iter(5, [1, 2]);
        let b = VertexSet::from_iter(5, [2, 3]);
        let ca = chi(&a).unwrap();
        assert_eq!(ca.get(1), r(1, 2));
        assert_eq!(ca.norm(), r(1, 1));
        assert_eq!(ca.l1_distance(&chi(&b).unwrap()), r(1, 1));
        assert_eq!(chi_distance(&a, &b).unwrap(), r(1, 1));
        assert_eq!(chi(&VertexSet::empty(5)), Err(Error::EmptySet));
    }

    #[test]
    fn xi_on_grid_is_unit_and_matches_scaled_route() {
        let g = generate::grid(6, 6).unwrap();
        let cc = CubeComplex::new(&g).unwrap();
        let provider = Cat0Provider::new(&cc, 0, vec![1, 2]).unwrap();
        for x in [0, 10, 48] {
            for n in [1, 2] {
                assert_eq!(xi(&provider, x, n).unwrap().norm(), r(1, 1));
            }
        }
        // n = 1 is a single characteristic vector
        let sets = provider.witness_sets(20, 1).unwrap();
        assert_eq!(xi(&provider, 20, 1).unwrap(), chi(&sets[1]).unwrap());
        assert!(xi(&provider, 20, 3).is_err());

        let sample = [40, 41, 47, 48];
        let (_, chains) = certify_level(&provider, 2, &[1], &sample).unwrap();
        for c in chains {
            assert_eq!(c.variation, variation(&provider, c.x, c.y, 2).unwrap());
        }
        assert_eq!(variation(&provider, 5, 5, 2).unwrap(), r(0, 1));
    }

    #[test]
    fn below_p_bound_is_exact() {
        // p = 4, n = 2, m = 1: bound is 2(1 - 1/4) = 3/2
        assert!(below_p_bound(&((two() - r(3, 2)) / two()), 2, 4, 1));
        assert!(!below_p_bound(&((two() - r(3, 2) - r(1, 1000)) / two()), 2, 4, 1));
        assert!(below_p_bound(&r(1, 1), 3, 1, 0));
    }

    #[test]
    fn m_zero_rows_vanish() {
        let g = generate::grid(5, 5).unwrap();
        let cc = CubeComplex::new(&g).unwrap();
        let provider = Cat0Provider::new(&cc, 0, vec![2]).unwrap();
        let certs = certify(&provider, &[2], &[0], &[30, 35]).unwrap();
        let row = &certs[0].rows[0];
        assert!(row.sup_variation.is_zero() && row.amgm_bound.is_zero());
        assert_eq!(row.p_bound_float, 0.0);
    }

    #[test]
    fn m_above_n_rejected() {
        let g = generate::grid(3, 3).unwrap();
        let cc = CubeComplex::new(&g).unwrap();
        let provider = Cat0Provider::new(&cc, 0, vec![1]).unwrap();
        assert!(matches!(
            certify(&provider, &[1], &[2], &[5]),
            Err(Error::PreconditionViolation(_))
        ));
    }

    struct Constant {
        n: usize,
    }

    impl WitnessProvider for Constant {
        fn name(&self) -> &str {
            "constant"
        }
        fn point_count(&self) -> usize {
            self.n
        }
        fn basepoint(&self) -> usize {
            0
        }
        fn distance(&self, x: usize, y: usize) -> u32 {
            x.abs_diff(y) as u32
        }
        fn levels(&self) -> Vec<u32> {
            vec![1, 2, 3]
        }
        fn witness_sets(&self, _x: usize, level: u32) -> Result<Vec<VertexSet>> {
            Ok(vec![VertexSet::singleton(self.n, 0); 3 * level as usize])
        }
    }

    #[test]
    fn singleton_provider_forces_zero_variation() {
        let p = Constant { n: 10 };
        let certs = certify(&p, &[2, 3], &[1, 2], &[4, 5, 6]).unwrap();
        for c in &certs {
            assert_eq!(c.p_n, 1);
            for row in &c.rows {
                assert!(row.sup_variation.is_zero());
                assert_eq!(row.p_bound_float, 0.0);
            }
        }
        assert!(sup_variation_non_increasing(&certs, 1));
        // identical sets: xi is the common chi
        assert_eq!(xi(&p, 3, 2).unwrap(), chi(&VertexSet::singleton(10, 0)).unwrap());
    }

    struct Broken;

    impl WitnessProvider for Broken {
        fn name(&self) -> &str {
            "broken"
        }
        fn point_count(&self) -> usize {
            6
        }
        fn basepoint(&self) -> usize {
            0
        }
        fn distance(&self, x: usize, y: usize) -> u32 {
            x.abs_diff(y) as u32
        }
        fn levels(&self) -> Vec<u32> {
            vec![2]
        }
        fn witness_sets(&self, x: usize, level: u32) -> Result<Vec<VertexSet>> {
            // depends on x itself, not on its ball: nesting fails
            Ok(vec![VertexSet::singleton(6, x); 3 * level as usize])
        }
    }

    #[test]
    fn nesting_violation_reported_with_witness() {
        match verify_conditions(&Broken, 2, &[2]) {
            Err(Error::ConditionViolation { property, witness }) => {
                assert!(property.contains("nesting"));
                assert!(witness.contains("x=2"));
            }
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn csv_has_fixed_columns() {
        let p = Constant { n: 6 };
        let certs = certify(&p, &[2], &[0, 1], &[3]).unwrap();
        let csv = certificates_csv(&certs).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(lines.count(), 2);
        let json = serde_json::to_value(CertificateJson::from(&certs[0])).unwrap();
        assert_eq!(json["rows"][1]["sup_variation"], "0/1");
    }
}

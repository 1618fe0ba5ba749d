//! Measures the coarse median parameters of a checkerboard-coarsened grid
//! and finds the scale at which deep points exist.
//!
//!     cargo run --release --example coarse_grid -- 7

use std::time::Instant;

use mediancert::coarse::{self, CoarseMedianInstance, EstimateConfig, Rational};

fn main() -> mediancert::Result<()> {
    let half: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let inst = CoarseMedianInstance::coarsened_grid(half, half)?;
    println!("points: {}, diameter: {}", inst.point_count(), inst.diameter());
    let (m1, m2) = inst.m1_m2_defects();
    println!("M1 defect {m1}, M2 defect {m2}");

    let start = Instant::now();
    let params = coarse::estimate_params(&inst, &EstimateConfig::default())?;
    println!(
        "K = {}, H(0) = {}, gamma = {}, lambda = {}, H(5) proxy = {:?}, exhaustive = {} ({:.1?})",
        params.k, params.h0, params.gamma, params.lambda, params.h5, params.exhaustive, start.elapsed()
    );
    if let Some(g) = params.gamma_formula() {
        println!("gamma from H(5): {g}");
    }

    let n = inst.point_count();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let one = Rational::from_integer(1);
    let start = Instant::now();
    let r = coarse::discover_scale(&inst, &params, one, params.lambda, &pairs, 8)?;
    println!("smallest r with deep points for all {} pairs at t = 1: {r:?} ({:.1?})", pairs.len(), start.elapsed());
    Ok(())
}

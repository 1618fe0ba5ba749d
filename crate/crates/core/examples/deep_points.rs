//! Deep points in a coarse median instance and the per-point bookkeeping
//! behind the coarse witness sets.
//!
//!     cargo run --release --example deep_points

use mediancert::coarse::{self, CoarseMedianInstance, EstimateConfig, Rational};

fn main() -> mediancert::Result<()> {
    let inst = CoarseMedianInstance::coarsened_grid(5, 5)?;
    let params = coarse::estimate_params(&inst, &EstimateConfig::default())?;
    let q = Rational::from_integer;
    let (a, b) = (inst.point_count() - 1, 0);
    for (r, t) in [(1, 1), (2, 4), (3, 6)] {
        let c = coarse::l_constants(&params, q(r), q(t), params.rank);
        let h = coarse::find_deep_point(&inst, &params, a, b, q(r), q(t), params.lambda)?;
        println!("r = {r}, t = {t}: L1 = {}, L2 = {}, L3 = {}, h = {h:?}", c.l1, c.l2, c.l3);
    }
    let (t, r) = (q(4), q(3));
    let x = 60;
    let s = coarse::witness_set_coarse(&inst, &params, b, x, q(2), t, r)?;
    println!("S({x}, 2) = {s:?}");
    for y in inst.ball(x, q(2)).iter() {
        let chain = coarse::witness_chain(&inst, &params, b, x, y, t, r)?;
        println!("  y = {y}: h_y = {}, m_y = {}, p_y = {}, holds: {}", chain.h_y, chain.m_y, chain.p_y, chain.holds());
    }
    Ok(())
}

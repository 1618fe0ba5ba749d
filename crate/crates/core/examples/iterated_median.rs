//! Iterated medians, generator reduction and exact deep points.
//!
//!     cargo run --example iterated_median

use mediancert::cube::CubeComplex;
use mediancert::generate;

fn main() -> mediancert::Result<()> {
    let g = generate::grid(6, 6)?;
    let rank = CubeComplex::new(&g)?.rank();
    let b = 0;
    let xs = [48, 20, 36, 44, 13];
    let m = g.iterated_median(&xs, b)?;
    let kept = g.reduce_generators(&xs, b, rank)?;
    println!("mu({xs:?}; {b}) = {m}; reduced to {kept:?} (rank {rank})");
    for window in [[0, 1], [1, 2]] {
        let set = g.interval(xs[window[0]], xs[window[1]]);
        let deep = g.deep_point_exact(b, 48, &set, rank)?;
        println!(
            "C = [{}, {}]: deep point {} from generators {:?}",
            xs[window[0]], xs[window[1]], deep.point, deep.generators
        );
    }
    Ok(())
}

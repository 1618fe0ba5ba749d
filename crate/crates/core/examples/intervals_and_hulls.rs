//! Intervals, joins and convex hulls in a grid.
//!
//!     cargo run --example intervals_and_hulls

use mediancert::generate;
use mediancert::set::VertexSet;

fn main() -> mediancert::Result<()> {
    // 5x5 vertices, id = 5*i + j
    let g = generate::grid(4, 4)?;
    println!("[0, 12] = {:?}", g.interval(0, 12));
    let a = VertexSet::from_iter(25, [7, 11, 13]);
    println!("J(A) = {:?}", g.join(&a));
    let (hull, steps) = g.hull_with_steps(&a)?;
    println!("hull(A) = {:?} after {steps} extra join steps, convex: {}", hull, g.is_convex(&hull));
    let l_shape = VertexSet::from_iter(25, [0, 1, 5]);
    println!("{:?} convex: {}", l_shape, g.is_convex(&l_shape));
    Ok(())
}

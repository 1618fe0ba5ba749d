//! Hyperplanes (edge classes), their half-spaces and the rank.
//!
//!     cargo run --example hyperplanes

use mediancert::cube::CubeComplex;
use mediancert::generate;

fn main() -> mediancert::Result<()> {
    let g = generate::staircase(3)?;
    let cc = CubeComplex::new(&g)?;
    for h in cc.hyperplanes() {
        println!("H{}: {} edges, sides {:?} | {:?}", h.id, h.edges.len(), h.minus, h.plus);
    }
    println!("crossing pairs:");
    for i in 0..cc.len() {
        for j in i + 1..cc.len() {
            if cc.crosses(i, j) {
                println!("  H{i} x H{j}");
            }
        }
    }
    println!("rank {}", cc.rank());
    for d in 1..=5 {
        let q = generate::hypercube(d)?;
        println!("Q{d}: {} hyperplanes, rank {}", CubeComplex::new(&q)?.len(), CubeComplex::new(&q)?.rank());
    }
    Ok(())
}

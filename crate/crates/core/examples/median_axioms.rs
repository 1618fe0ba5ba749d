//! Builds a few median graphs and checks the median axioms on every tuple.
//!
//!     cargo run --release --example median_axioms

use mediancert::generate::{self, GraphKind};
use mediancert::median::MedianTable;

fn main() -> mediancert::Result<()> {
    let kinds = [
        GraphKind::Hypercube { dim: 4 },
        GraphKind::Grid { width: 4, height: 3 },
        GraphKind::Tree { branching: 3, depth: 2 },
        GraphKind::Staircase { size: 4 },
        GraphKind::MedianClosure { points: 6, dim: 6 },
    ];
    for kind in kinds {
        let g = generate::generate(kind, 7, 256)?;
        let t = MedianTable::new(&g)?;
        println!(
            "{kind:?}: {} vertices, {} edges, diameter {}; M1 {:?} M2 {:?} M3 {:?}",
            g.vertex_count(),
            g.edge_count(),
            g.diameter(),
            t.m1_violation(),
            t.m2_violation(),
            t.m3_violation(),
        );
    }
    let q3 = generate::hypercube(3)?;
    println!("median(001, 010, 100) in Q3 = {:03b}", q3.median(0b001, 0b010, 0b100)?);
    Ok(())
}

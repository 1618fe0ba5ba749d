//! Normal cube paths and the witness sets built from them.
//!
//!     cargo run --example normal_cube_path

use mediancert::cube::{witness_set_cat0, CubeComplex};
use mediancert::generate;

fn main() -> mediancert::Result<()> {
    let g = generate::grid(8, 8)?;
    let cc = CubeComplex::new(&g)?;
    let path = cc.normal_cube_path(80, 2)?;
    println!("80 -> 2: {} cubes, vertices {:?}", path.len(), path.vertices);
    for (i, step) in path.steps.iter().enumerate() {
        println!("  step {i}: crosses {step:?}");
    }
    let paths = cc.paths_to(0)?;
    for (k, l) in [(1, 1), (3, 1), (6, 2)] {
        let s = witness_set_cat0(&g, &paths, 60, k, l)?;
        println!("S(60, {k}, {l}) = {s:?}");
    }
    Ok(())
}

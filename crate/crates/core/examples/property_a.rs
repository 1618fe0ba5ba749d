//! Exact Property A certificates on a grid, printed as CSV.
//!
//!     cargo run --release --example property_a -- 30

use mediancert::cube::CubeComplex;
use mediancert::generate;
use mediancert::propa::{self, Cat0Provider};

fn main() -> mediancert::Result<()> {
    let side: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(30);
    let g = generate::grid(side, side)?;
    let cc = CubeComplex::new(&g)?;
    let levels = vec![2, 4, 8];
    let provider = Cat0Provider::new(&cc, 0, levels.clone())?;
    let far = 5 * side as u32 / 6;
    let sample: Vec<usize> = (0..g.vertex_count()).filter(|&x| g.distance(x, 0) >= far).collect();
    println!("{} sampled points at distance >= {far} from the corner", sample.len());

    for &n in &levels {
        let report = propa::verify_conditions(&provider, n, &sample)?;
        println!(
            "n = {n}: support radius {}, p(n) = {}, {} nesting inclusions checked",
            report.support_radius, report.p_n, report.inclusions_checked
        );
    }
    let certs = propa::certify(&provider, &levels, &[1, 2], &sample)?;
    print!("{}", propa::certificates_csv(&certs)?);
    for m in [1, 2] {
        println!("m = {m}: sup variation non-increasing in n: {}", propa::sup_variation_non_increasing(&certs, m));
    }
    Ok(())
}

//! Graph and instance text formats.
//!
//!     cargo run --example file_formats

use mediancert::coarse::CoarseMedianInstance;
use mediancert::generate;
use mediancert::io;

fn main() -> mediancert::Result<()> {
    let g = generate::tree(2, 2)?;
    let text = io::write_graph(g.graph());
    print!("{text}");
    assert_eq!(&io::parse_graph(&text)?, g.graph());

    let inst = CoarseMedianInstance::coarsened_grid(1, 1)?;
    let text = io::write_instance(&inst);
    println!("coarse instance: {} lines, first ones:", text.lines().count());
    for line in text.lines().take(6) {
        println!("  {line}");
    }
    let back = io::parse_instance(&text, None)?;
    assert_eq!(io::write_instance(&back), text);

    // a missing section is filled in from a graph
    let path = generate::path(4)?;
    let inst = io::parse_instance("points 4\nrank 1\n", Some(&path))?;
    println!("path instance: mu(0, 3, 2) = {}", inst.mu(0, 3, 2));
    Ok(())
}

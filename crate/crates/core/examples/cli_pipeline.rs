//! Drives the command surface as a library: generate, validate, certify.
//!
//!     cargo run --release --example cli_pipeline

use mediancert::generate::GraphKind;
use mediancert::harness::{run, Command, GenSpec, ProviderKind, RunConfig};

fn main() -> mediancert::Result<()> {
    let dir = tempfile::tempdir()?;
    let graph = dir.path().join("grid.txt");

    let mut cfg = RunConfig::new(Command::Gen(GenSpec::Graph(GraphKind::Grid { width: 10, height: 10 })));
    cfg.output = Some(graph.clone());
    assert_eq!(run(&cfg).code, 0);

    for command in [Command::Validate, Command::Rank, Command::Ncp { from: 120, to: 0 }] {
        let mut cfg = RunConfig::new(command.clone());
        cfg.input = Some(graph.clone());
        let out = run(&cfg);
        println!("{command:?} -> exit {}\n{}", out.code, out.stdout);
    }

    for provider in [ProviderKind::Cat0, ProviderKind::Coarse] {
        let mut cfg = RunConfig::new(Command::Propa);
        cfg.input = Some(graph.clone());
        cfg.provider = provider;
        cfg.n_list = vec![2, 4];
        cfg.t = 4;
        cfg.output = Some(dir.path().join(format!("{provider:?}")));
        let out = run(&cfg);
        println!("{provider:?}: exit {}", out.code);
        print!("{}", std::fs::read_to_string(dir.path().join(format!("{provider:?}.csv")))?);
    }
    Ok(())
}

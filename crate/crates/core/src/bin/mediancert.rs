use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mediancert::generate::GraphKind;
use mediancert::harness::{self, Command, GenSpec, ProviderKind, RunConfig};

#[derive(Parser)]
#[command(name = "mediancert", version, about = "Median graph checks and Property A certificates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; for `propa`, the prefix of the .json and .csv pair.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Max vertices for exhaustive sweeps.
    #[arg(long, global = true, default_value_t = 256)]
    budget: usize,
    #[arg(long, global = true)]
    sample: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    basepoint: usize,
    #[arg(long, global = true, value_delimiter = ',', num_args = 1.., default_values_t = [2, 4, 8])]
    n: Vec<u32>,
    #[arg(long, global = true, value_delimiter = ',', num_args = 1.., default_values_t = [1, 2])]
    m: Vec<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Provider::Cat0)]
    provider: Provider,
    #[arg(long, global = true, default_value_t = 1)]
    t: u32,
    #[arg(long, global = true)]
    r: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Provider {
    Cat0,
    Coarse,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph file (or a coarse instance file).
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Check that the input graph is a median graph.
    Validate,
    /// List hyperplanes with their half-spaces.
    Hyperplanes,
    /// Print the rank (largest set of pairwise crossing hyperplanes).
    Rank,
    /// Normal cube path between two vertices.
    Ncp {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
    /// Emit Property A certificates as JSON and CSV.
    Propa,
    /// Coarse parameters and interval sweeps.
    CoarseCheck,
    /// Search a deep point for the pair (from, to).
    DeepPoint {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Hypercube { dim: usize },
    Grid { width: usize, height: usize },
    Tree { branching: usize, depth: usize },
    Staircase { size: usize },
    MedianClosure { points: usize, dim: usize },
    CoarsenedGrid { w: usize, h: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Gen { kind } => Command::Gen(match kind {
            GenKind::Hypercube { dim } => GenSpec::Graph(GraphKind::Hypercube { dim }),
            GenKind::Grid { width, height } => GenSpec::Graph(GraphKind::Grid { width, height }),
            GenKind::Tree { branching, depth } => GenSpec::Graph(GraphKind::Tree { branching, depth }),
            GenKind::Staircase { size } => GenSpec::Graph(GraphKind::Staircase { size }),
            GenKind::MedianClosure { points, dim } => GenSpec::Graph(GraphKind::MedianClosure { points, dim }),
            GenKind::CoarsenedGrid { w, h } => GenSpec::CoarsenedGrid { w, h },
        }),
        Cmd::Validate => Command::Validate,
        Cmd::Hyperplanes => Command::Hyperplanes,
        Cmd::Rank => Command::Rank,
        Cmd::Ncp { from, to } => Command::Ncp { from, to },
        Cmd::Propa => Command::Propa,
        Cmd::CoarseCheck => Command::CoarseCheck,
        Cmd::DeepPoint { from, to } => Command::DeepPoint { from, to },
    };
    let c = cli.common;
    let config = RunConfig {
        command,
        input: c.input,
        output: c.output,
        seed: c.seed,
        budget: c.budget,
        sample: c.sample,
        basepoint: c.basepoint,
        n_list: c.n,
        m_list: c.m,
        provider: match c.provider {
            Provider::Cat0 => ProviderKind::Cat0,
            Provider::Coarse => ProviderKind::Coarse,
        },
        t: c.t,
        r: c.r,
        threads: None,
    };
    let outcome = harness::run(&config);
    print!("{}", outcome.stdout);
    if outcome.code == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(outcome.code.clamp(1, 255) as u8)
    }
}

use std::path::Path;

use mediancert::generate::{self, GraphKind};
use mediancert::harness::{run, Command, GenSpec, ProviderKind, RunConfig};
use mediancert::io;
use proptest::prelude::*;
use serde_json::Value;

fn kind() -> impl Strategy<Value = GraphKind> {
    prop_oneof![
        (1usize..6).prop_map(|dim| GraphKind::Hypercube { dim }),
        (0usize..8, 0usize..8).prop_map(|(width, height)| GraphKind::Grid { width, height }),
        (1usize..4, 0usize..4).prop_map(|(branching, depth)| GraphKind::Tree { branching, depth }),
        (0usize..7).prop_map(|size| GraphKind::Staircase { size }),
        (1usize..8, 2usize..7).prop_map(|(points, dim)| GraphKind::MedianClosure { points: points.min(1 << dim), dim }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_files_round_trip(kind in kind(), seed in any::<u64>()) {
        let Ok(g) = generate::generate(kind, seed, 200) else { return Ok(()); };
        let text = io::write_graph(g.graph());
        let back = io::parse_graph(&text).unwrap();
        prop_assert_eq!(&back, g.graph());
        prop_assert_eq!(io::write_graph(&back), text);
    }
}

fn config(command: Command, input: Option<&Path>) -> RunConfig {
    let mut cfg = RunConfig::new(command);
    cfg.input = input.map(Path::to_path_buf);
    cfg
}

fn report(stdout: &str) -> Value {
    serde_json::from_str(stdout).unwrap()
}

#[test]
fn propa_artifacts_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let mut gen = config(Command::Gen(GenSpec::Graph(GraphKind::MedianClosure { points: 8, dim: 7 })), None);
    gen.seed = 11;
    gen.output = Some(graph.clone());
    assert_eq!(run(&gen).code, 0);

    let mut outputs = Vec::new();
    for (i, threads) in [1, 2].into_iter().enumerate() {
        let mut cfg = config(Command::Propa, Some(&graph));
        cfg.n_list = vec![1, 2];
        cfg.m_list = vec![1];
        cfg.sample = Some(12);
        cfg.seed = 5;
        cfg.threads = Some(threads);
        cfg.output = Some(dir.path().join(format!("run{i}")));
        assert_eq!(run(&cfg).code, 0);
        let json = std::fs::read(dir.path().join(format!("run{i}.json"))).unwrap();
        let csv = std::fs::read(dir.path().join(format!("run{i}.csv"))).unwrap();
        outputs.push((json, csv));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert!(csv.starts_with(
        "provider,n,m,sup_variation_num,sup_variation_den,amgm_num,amgm_den,p_n,p_bound_float,support_radius\n"
    ));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn validate_reports_witnesses() {
    let dir = tempfile::tempdir().unwrap();
    let k23 = dir.path().join("k23.txt");
    std::fs::write(&k23, "vertices 5\ne 0 2\ne 0 3\ne 0 4\ne 1 2\ne 1 3\ne 1 4\n").unwrap();
    let out = run(&config(Command::Validate, Some(&k23)));
    assert_eq!(out.code, 1);
    let r = report(&out.stdout);
    assert_eq!(r["status"], "fail");
    assert_eq!(r["candidates"], 2);

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "vertices 2\ne 0 7\n").unwrap();
    let out = run(&config(Command::Validate, Some(&bad)));
    assert_eq!(out.code, 1);
    assert_eq!(report(&out.stdout)["property"], "vertex id range");

    let out = run(&config(Command::Rank, None));
    assert_eq!(out.code, 1);
}

#[test]
fn graph_commands() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.txt");
    let mut gen = config(Command::Gen(GenSpec::Graph(GraphKind::Grid { width: 2, height: 2 })), None);
    gen.output = Some(grid.clone());
    run(&gen);

    let out = run(&config(Command::Hyperplanes, Some(&grid)));
    assert_eq!(report(&out.stdout).as_array().unwrap().len(), 4);
    let out = run(&config(Command::Ncp { from: 0, to: 8 }, Some(&grid)));
    let r = report(&out.stdout);
    assert_eq!(r["vertices"], serde_json::json!([0, 4, 8]));
    assert_eq!(r["length"], 2);
    let out = run(&config(Command::Ncp { from: 0, to: 9 }, Some(&grid)));
    assert_eq!(out.code, 1);
}

#[test]
fn coarse_commands() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("cg.txt");
    let mut gen = config(Command::Gen(GenSpec::CoarsenedGrid { w: 2, h: 2 }), None);
    gen.output = Some(inst.clone());
    assert_eq!(run(&gen).code, 0);

    let out = run(&config(Command::CoarseCheck, Some(&inst)));
    assert_eq!(out.code, 0, "{}", out.stdout);
    let r = report(&out.stdout);
    assert_eq!(r["params"]["k"], "1");
    assert_eq!(r["switch_bound"]["violations"], 0);

    let mut dp = config(Command::DeepPoint { from: 12, to: 0 }, Some(&inst));
    dp.t = 4;
    dp.r = Some(2);
    let out = run(&dp);
    assert_eq!(out.code, 0, "{}", out.stdout);
    dp.r = Some(0);
    let out = run(&dp);
    assert_eq!(out.code, 1);
    assert_eq!(report(&out.stdout)["property"], "deep point existence");

    let mut propa = config(Command::Propa, Some(&inst));
    propa.provider = ProviderKind::Coarse;
    propa.n_list = vec![2];
    propa.m_list = vec![2];
    propa.t = 4;
    let out = run(&propa);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let certs = report(&out.stdout);
    assert_eq!(certs[0]["provider"], "coarse");
}

//! Command surface: loads inputs, runs one subcommand, writes artifacts and
//! produces a report. The `mediancert` binary is a thin clap wrapper.
//!
//! Every failure report is JSON with `"status": "fail"`, the name of the
//! violated property and the offending tuple where there is one.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::coarse::{self, CoarseMedianInstance, CoarseParams, CoarseProvider, EstimateConfig, Rational};
use crate::cube::CubeComplex;
use crate::error::{Error, Result};
use crate::generate::{self, GraphKind};
use crate::graph::{find_median_violation_within, DistanceTable, Graph, MedianGraph};
use crate::io;
use crate::propa::{self, CertificateJson, Cat0Provider, PropACertificate, WitnessProvider};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "MEDIANCERT_THREADS";

/// Largest instance `gen` will build.
pub const GENERATE_LIMIT: usize = 1 << 20;

/// Largest scale tried when discovering `r_t`.
pub const SCALE_SEARCH_CAP: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderKind {
    Cat0,
    Coarse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenSpec {
    Graph(GraphKind),
    /// Checkerboard instance on the `(2w+1) × (2h+1)` grid.
    CoarsenedGrid { w: usize, h: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Gen(GenSpec),
    Validate,
    Hyperplanes,
    Rank,
    Ncp { from: usize, to: usize },
    Propa,
    CoarseCheck,
    DeepPoint { from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<PathBuf>,
    /// Output file, or for `propa` the prefix of `.json` and `.csv`.
    pub output: Option<PathBuf>,
    pub seed: u64,
    /// Max vertices for exhaustive sweeps; larger inputs are sampled.
    pub budget: usize,
    /// Number of sampled points (`propa`) or pairs (`coarse-check`).
    pub sample: Option<usize>,
    pub basepoint: usize,
    pub n_list: Vec<u32>,
    pub m_list: Vec<u32>,
    pub provider: ProviderKind,
    pub t: u32,
    pub r: Option<u32>,
    /// Falls back to `MEDIANCERT_THREADS`, then to rayon's default.
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            input: None,
            output: None,
            seed: 0,
            budget: 256,
            sample: None,
            basepoint: 0,
            n_list: vec![2, 4, 8],
            m_list: vec![1, 2],
            provider: ProviderKind::Cat0,
            t: 1,
            r: None,
            threads: None,
        }
    }
}

/// Exit code plus what goes to standard output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

impl Outcome {
    fn ok(stdout: impl Into<String>) -> Self {
        Outcome {
            code: 0,
            stdout: stdout.into(),
        }
    }

    fn json(code: i32, value: &impl Serialize) -> Self {
        let mut stdout = serde_json::to_string_pretty(value).expect("report serializes");
        stdout.push('\n');
        Outcome { code, stdout }
    }
}

/// Machine-readable report for an error.
pub fn failure_report(err: &Error) -> Value {
    let mut report = json!({
        "status": "fail",
        "property": err.property(),
        "message": err.to_string(),
    });
    if let Error::MedianViolation { x, y, z, candidates } = err {
        report["witness"] = json!([x, y, z]);
        report["candidates"] = json!(candidates);
    }
    report
}

fn thread_count(config: &RunConfig) -> Option<usize> {
    config.threads.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&t: &usize| t > 0)
    })
}

/// Runs one subcommand. Never panics on bad input: errors become a failure
/// report with a nonzero exit code.
pub fn run(config: &RunConfig) -> Outcome {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_count(config) {
        builder = builder.num_threads(t);
    }
    let result = match builder.build() {
        Ok(pool) => pool.install(|| dispatch(config)),
        Err(e) => Err(Error::Io(e.to_string())),
    };
    result.unwrap_or_else(|err| Outcome::json(1, &failure_report(&err)))
}

fn dispatch(config: &RunConfig) -> Result<Outcome> {
    match &config.command {
        Command::Gen(spec) => gen(config, *spec),
        Command::Validate => validate(config),
        Command::Hyperplanes => {
            let g = load_median_graph(config)?;
            let cc = CubeComplex::new(&g)?;
            let planes: Vec<Value> = cc
                .hyperplanes()
                .iter()
                .map(|h| json!({"id": h.id, "edges": h.edges, "minus": h.minus.to_vec(), "plus": h.plus.to_vec()}))
                .collect();
            Ok(Outcome::json(0, &planes))
        }
        Command::Rank => {
            let g = load_median_graph(config)?;
            Ok(Outcome::ok(format!("{}\n", CubeComplex::new(&g)?.rank())))
        }
        &Command::Ncp { from, to } => {
            let g = load_median_graph(config)?;
            let path = CubeComplex::new(&g)?.normal_cube_path(from, to)?;
            Ok(Outcome::json(
                0,
                &json!({"from": from, "to": to, "length": path.len(), "vertices": path.vertices, "steps": path.steps}),
            ))
        }
        Command::Propa => propa_cmd(config),
        Command::CoarseCheck => coarse_check(config),
        &Command::DeepPoint { from, to } => deep_point(config, from, to),
    }
}

fn write_output(config: &RunConfig, text: String) -> Result<Outcome> {
    match &config.output {
        Some(path) => {
            io::write_atomic(path, text.as_bytes())?;
            Ok(Outcome::ok(""))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn gen(config: &RunConfig, spec: GenSpec) -> Result<Outcome> {
    let text = match spec {
        GenSpec::Graph(kind) => io::write_graph(generate::generate(kind, config.seed, GENERATE_LIMIT)?.graph()),
        GenSpec::CoarsenedGrid { w, h } => io::write_instance(&CoarseMedianInstance::coarsened_grid(w, h)?),
    };
    write_output(config, text)
}

fn input_text(config: &RunConfig) -> Result<String> {
    let path = config
        .input
        .as_deref()
        .ok_or_else(|| Error::PreconditionViolation("--input is required".into()))?;
    io::read_to_string(path)
}

fn load_median_graph(config: &RunConfig) -> Result<MedianGraph> {
    let graph = io::parse_graph(&input_text(config)?)?;
    let check = is_median_graph(&graph, config.budget);
    if let Some(vertex) = check.unreachable {
        return Err(Error::Disconnected { vertex });
    }
    if let Some(([x, y, z], candidates)) = check.witness {
        return Err(Error::MedianViolation { x, y, z, candidates });
    }
    MedianGraph::new(graph)
}

/// Median test with the first failing triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MedianCheck {
    pub is_median: bool,
    /// `false` when only a seeded sample of triples was checked.
    pub exhaustive: bool,
    /// Failing triple and its number of median candidates.
    pub witness: Option<([usize; 3], usize)>,
    /// Set when the graph is disconnected.
    pub unreachable: Option<usize>,
}

/// Checks that every triple has exactly one vertex in
/// `[x,y] ∩ [y,z] ∩ [z,x]`: all triples when the graph has at most
/// `exhaustive_limit` vertices, a seeded sample otherwise.
pub fn is_median_graph(graph: &Graph, exhaustive_limit: usize) -> MedianCheck {
    let exhaustive = graph.vertex_count() <= exhaustive_limit;
    if graph.vertex_count() == 0 {
        return MedianCheck {
            is_median: false,
            exhaustive,
            witness: None,
            unreachable: None,
        };
    }
    let dist = DistanceTable::from_graph(graph);
    if let Some(v) = dist.first_unreachable() {
        return MedianCheck {
            is_median: false,
            exhaustive,
            witness: None,
            unreachable: Some(v),
        };
    }
    let witness = find_median_violation_within(graph, &dist, exhaustive_limit).map(|(x, y, z, c)| ([x, y, z], c));
    MedianCheck {
        is_median: witness.is_none(),
        exhaustive,
        witness,
        unreachable: None,
    }
}

fn validate(config: &RunConfig) -> Result<Outcome> {
    let graph = io::parse_graph(&input_text(config)?)?;
    let check = is_median_graph(&graph, config.budget);
    if let Some(vertex) = check.unreachable {
        return Err(Error::Disconnected { vertex });
    }
    if let Some(([x, y, z], candidates)) = check.witness {
        return Err(Error::MedianViolation { x, y, z, candidates });
    }
    Ok(Outcome::json(
        0,
        &json!({
            "status": "ok",
            "median": true,
            "exhaustive": check.exhaustive,
            "vertices": graph.vertex_count(),
            "edges": graph.edge_count(),
        }),
    ))
}

/// A graph file becomes its exact instance; an instance file is read as is.
fn load_instance(config: &RunConfig) -> Result<CoarseMedianInstance> {
    let text = input_text(config)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("vertices") {
        let g = load_median_graph(config)?;
        CoarseMedianInstance::from_median_graph(&g)
    } else {
        io::parse_instance(&text, None)
    }
}

fn estimate(inst: &CoarseMedianInstance, config: &RunConfig) -> Result<CoarseParams> {
    let cfg = EstimateConfig {
        seed: config.seed,
        ..EstimateConfig::default()
    };
    coarse::estimate_params(inst, &cfg)
}

fn sample_points(n: usize, sample: Option<usize>, seed: u64) -> Vec<usize> {
    match sample {
        Some(s) if s < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = rand::seq::index::sample(&mut rng, n, s).into_vec();
            v.sort_unstable();
            v
        }
        _ => (0..n).collect(),
    }
}

fn sample_pairs(n: usize, sample: Option<usize>, seed: u64) -> Vec<(usize, usize)> {
    sample_points(n * n, sample, seed)
        .into_iter()
        .map(|i| (i / n, i % n))
        .collect()
}

fn emit_certificates(config: &RunConfig, certs: &[PropACertificate]) -> Result<Outcome> {
    let json: Vec<CertificateJson> = certs.iter().map(CertificateJson::from).collect();
    let mut text = serde_json::to_string_pretty(&json).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    match &config.output {
        Some(prefix) => {
            let csv = propa::certificates_csv(certs)?;
            io::write_atomic(&with_extension(prefix, "json"), text.as_bytes())?;
            io::write_atomic(&with_extension(prefix, "csv"), csv.as_bytes())?;
            Ok(Outcome::ok(""))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn certify_with<P: WitnessProvider>(provider: &P, config: &RunConfig) -> Result<Vec<PropACertificate>> {
    let sample = sample_points(provider.point_count(), config.sample, config.seed);
    propa::certify(provider, &config.n_list, &config.m_list, &sample)
}

fn propa_cmd(config: &RunConfig) -> Result<Outcome> {
    let certs = match config.provider {
        ProviderKind::Cat0 => {
            let g = load_median_graph(config)?;
            g.check_vertex(config.basepoint)?;
            let cc = CubeComplex::new(&g)?;
            let provider = Cat0Provider::new(&cc, config.basepoint, config.n_list.clone())?;
            certify_with(&provider, config)?
        }
        ProviderKind::Coarse => {
            let inst = load_instance(config)?;
            let params = estimate(&inst, config)?;
            let r_min = Rational::from_integer(config.r.unwrap_or(1) as i64);
            let provider = CoarseProvider::new(
                &inst,
                params,
                config.basepoint,
                Rational::from_integer(config.t as i64),
                r_min,
                &config.n_list,
            )?;
            certify_with(&provider, config)?
        }
    };
    emit_certificates(config, &certs)
}

fn coarse_check(config: &RunConfig) -> Result<Outcome> {
    let inst = load_instance(config)?;
    let params = estimate(&inst, config)?;
    let (m1, m2) = inst.m1_m2_defects();
    let n = inst.point_count();
    let pairs = if n <= config.budget && config.sample.is_none() {
        sample_pairs(n, None, config.seed)
    } else {
        sample_pairs(n, Some(config.sample.unwrap_or(config.budget)), config.seed)
    };
    let scales: Vec<Rational> = (1..=config.r.unwrap_or(2)).map(|r| Rational::from_integer(r as i64)).collect();
    let containment = coarse::sweep_interval_containment(&inst, &params, &pairs, &scales);
    let switch = coarse::sweep_switch_bound(&inst, &params, &pairs, &scales);
    let formula = params.gamma_formula();
    let gamma_dominated = formula.map(|f| params.gamma <= f);
    let t = Rational::from_integer(config.t as i64);
    let r_t = coarse::discover_scale(&inst, &params, t, params.lambda, &pairs, SCALE_SEARCH_CAP)?;
    let passed = containment.passed() && switch.passed() && gamma_dominated != Some(false);
    let q = |x: Rational| x.to_string();
    let report = json!({
        "status": if passed { "ok" } else { "fail" },
        "property": if passed { Value::Null } else { json!("coarse interval bounds") },
        "points": n,
        "m1_defect": q(m1),
        "m2_defect": q(m2),
        "params": {
            "k": q(params.k),
            "h0": q(params.h0),
            "gamma": q(params.gamma),
            "lambda": q(params.lambda),
            "h5": params.h5.map(q),
            "rank": params.rank,
            "exhaustive": params.exhaustive,
        },
        "gamma_formula": formula.map(q),
        "gamma_dominated": gamma_dominated,
        "pairs": pairs.len(),
        "scales": scales.iter().map(|&r| q(r)).collect::<Vec<_>>(),
        "interval_containment": containment,
        "switch_bound": switch,
        "t": config.t,
        "r_t": r_t,
    });
    Ok(Outcome::json(if passed { 0 } else { 1 }, &report))
}

fn deep_point(config: &RunConfig, from: usize, to: usize) -> Result<Outcome> {
    let inst = load_instance(config)?;
    let params = estimate(&inst, config)?;
    let r = Rational::from_integer(config.r.unwrap_or(1) as i64);
    let t = Rational::from_integer(config.t as i64);
    let c = coarse::l_constants(&params, r, t, params.rank);
    let h = coarse::find_deep_point(&inst, &params, from, to, r, t, params.lambda)?;
    let constants = json!({"l1": c.l1.to_string(), "l2": c.l2.to_string(), "l3": c.l3.to_string()});
    match h {
        Some(h) => Ok(Outcome::json(
            0,
            &json!({"status": "ok", "a": from, "b": to, "r": r.to_string(), "t": config.t, "h": h,
                    "distance": inst.distance(from, h).to_string(), "constants": constants}),
        )),
        None => Ok(Outcome::json(
            1,
            &json!({"status": "fail", "property": "deep point existence", "a": from, "b": to,
                    "r": r.to_string(), "t": config.t, "constants": constants}),
        )),
    }
}

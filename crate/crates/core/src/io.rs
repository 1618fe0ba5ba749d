//! Text formats.
//!
//! Graph file:
//!
//! ```text
//! # comment
//! vertices 4
//! e 0 1
//! e 1 2
//! ```
//!
//! Instance file:
//!
//! ```text
//! points 3
//! rank 1
//! metric explicit
//! d 0 1 1/2
//! ...
//! mu explicit
//! m 0 1 2 1
//! ...
//! ```
//!
//! The metric section lists every pair `i < j` once and the `mu` section
//! every ordered triple. A missing section is taken from a graph supplied
//! alongside the instance.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::coarse::{CoarseMedianInstance, Rational};
use crate::error::{Error, Result};
use crate::graph::{Graph, MedianGraph};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Meaningful lines with their 1-based numbers; comments and blanks dropped.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then(|| (i + 1, body.split_whitespace().collect()))
    })
}

fn num<T: std::str::FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, format!("bad number {tok:?}")))
}

fn header(line: usize, toks: &[&str], key: &str) -> Result<usize> {
    match toks {
        [k, n] if *k == key => num(line, n),
        _ => Err(parse_err(line, format!("expected \"{key} N\""))),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut it = lines(text);
    let (line, toks) = it.next().ok_or_else(|| parse_err(0, "empty graph file"))?;
    let n = header(line, &toks, "vertices")?;
    let mut edges = Vec::new();
    for (line, toks) in it {
        match toks.as_slice() {
            ["e", u, v] => {
                let (u, v): (usize, usize) = (num(line, u)?, num(line, v)?);
                edges.push((u, v));
            }
            _ => return Err(parse_err(line, "expected \"e u v\"")),
        }
    }
    Graph::new(n, edges)
}

/// Canonical form: header then edges in sorted `u < v` order.
pub fn write_graph(graph: &Graph) -> String {
    let mut out = format!("vertices {}\n", graph.vertex_count());
    for &(u, v) in graph.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

fn parse_rational(line: usize, tok: &str) -> Result<Rational> {
    let q = match tok.split_once('/') {
        Some((a, b)) => {
            let den: i64 = num(line, b)?;
            if den == 0 {
                return Err(parse_err(line, "zero denominator"));
            }
            Rational::new(num(line, a)?, den)
        }
        None => Rational::from_integer(num(line, tok)?),
    };
    Ok(q)
}

/// Reads an instance file; `graph` fills in missing sections.
pub fn parse_instance(text: &str, graph: Option<&MedianGraph>) -> Result<CoarseMedianInstance> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Metric,
        Mu,
    }
    let mut it = lines(text);
    let (line, toks) = it.next().ok_or_else(|| parse_err(0, "empty instance file"))?;
    let n = header(line, &toks, "points")?;
    if let Some(g) = graph {
        if g.vertex_count() != n {
            return Err(parse_err(line, format!("graph has {} vertices, instance has {n} points", g.vertex_count())));
        }
    }
    if n > u16::MAX as usize {
        return Err(parse_err(line, "too many points"));
    }
    let mut rank = None;
    let mut metric: Option<Vec<Option<Rational>>> = None;
    let mut mu: Option<Vec<Option<u16>>> = None;
    let mut section = Section::None;
    let check = |line: usize, v: usize| {
        if v < n {
            Ok(v)
        } else {
            Err(parse_err(line, format!("point {v} out of range")))
        }
    };
    for (line, toks) in it {
        match toks.as_slice() {
            ["rank", r] => rank = Some(num(line, r)?),
            ["metric", "explicit"] => {
                section = Section::Metric;
                metric = Some(vec![None; n * n]);
            }
            ["mu", "explicit"] => {
                section = Section::Mu;
                mu = Some(vec![None; n * n * n]);
            }
            ["d", i, j, q] if section == Section::Metric => {
                let (i, j) = (check(line, num(line, i)?)?, check(line, num(line, j)?)?);
                if i >= j {
                    return Err(parse_err(line, "metric lines need i < j"));
                }
                let table = metric.as_mut().expect("metric section open");
                if table[i * n + j].is_some() {
                    return Err(parse_err(line, format!("duplicate distance for ({i}, {j})")));
                }
                let q = parse_rational(line, q)?;
                table[i * n + j] = Some(q);
                table[j * n + i] = Some(q);
            }
            ["m", i, j, k, v] if section == Section::Mu => {
                let mut idx = [0usize; 3];
                for (slot, t) in idx.iter_mut().zip([i, j, k]) {
                    *slot = check(line, num(line, t)?)?;
                }
                let [i, j, k] = idx;
                let v = check(line, num(line, v)?)?;
                let table = mu.as_mut().expect("mu section open");
                if table[(i * n + j) * n + k].replace(v as u16).is_some() {
                    return Err(parse_err(line, format!("duplicate median for ({i}, {j}, {k})")));
                }
            }
            _ => return Err(parse_err(line, "unrecognised line")),
        }
    }
    let metric: Vec<Rational> = match metric {
        Some(table) => (0..n * n)
            .map(|idx| match table[idx] {
                Some(q) => Ok(q),
                None if idx / n == idx % n => Ok(Rational::from_integer(0)),
                None => Err(parse_err(0, format!("missing distance for ({}, {})", idx / n, idx % n))),
            })
            .collect::<Result<_>>()?,
        None => {
            let g = graph.ok_or_else(|| parse_err(0, "no metric section and no graph"))?;
            (0..n * n)
                .map(|i| Rational::from_integer(g.distance(i / n, i % n) as i64))
                .collect()
        }
    };
    let mu: Vec<u16> = match mu {
        Some(table) => table
            .into_iter()
            .enumerate()
            .map(|(idx, v)| {
                v.ok_or_else(|| {
                    parse_err(0, format!("missing median for ({}, {}, {})", idx / (n * n), (idx / n) % n, idx % n))
                })
            })
            .collect::<Result<_>>()?,
        None => {
            let g = graph.ok_or_else(|| parse_err(0, "no mu section and no graph"))?;
            let mut out = Vec::with_capacity(n * n * n);
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        out.push(g.median(x, y, z)? as u16);
                    }
                }
            }
            out
        }
    };
    CoarseMedianInstance::new(n, &metric, mu, rank)
}

/// Canonical form with both sections written out.
pub fn write_instance(inst: &CoarseMedianInstance) -> String {
    let n = inst.point_count();
    let mut out = format!("points {n}\n");
    if let Some(r) = inst.rank_bound() {
        writeln!(out, "rank {r}").unwrap();
    }
    out.push_str("metric explicit\n");
    for i in 0..n {
        for j in i + 1..n {
            let q = inst.distance(i, j);
            if q.is_integer() {
                writeln!(out, "d {i} {j} {}", q.numer()).unwrap();
            } else {
                writeln!(out, "d {i} {j} {}/{}", q.numer(), q.denom()).unwrap();
            }
        }
    }
    out.push_str("mu explicit\n");
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                writeln!(out, "m {i} {j} {k} {}", inst.mu(i, j, k)).unwrap();
            }
        }
    }
    out
}

/// Writes via a temporary file in the target directory and renames it into
/// place, so the file is either complete or absent.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn graph_round_trip() {
        let g = generate::grid(2, 3).unwrap();
        let text = write_graph(g.graph());
        assert_eq!(&parse_graph(&text).unwrap(), g.graph());
        let messy = "# a path\nvertices 3\n\ne 2 1  # reversed\ne 0 1\n";
        assert_eq!(write_graph(&parse_graph(messy).unwrap()), "vertices 3\ne 0 1\ne 1 2\n");
    }

    #[test]
    fn graph_errors() {
        assert!(parse_graph("vertices 2\ne 0 0\n").is_err());
        assert!(parse_graph("vertices 2\ne 0 5\n").is_err());
        assert!(parse_graph("vertices 2\ne 0 1\ne 1 0\n").is_err());
        assert!(matches!(parse_graph("edges 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("vertices 2\nf 0 1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn instance_round_trip_and_defaults() {
        let inst = CoarseMedianInstance::coarsened_grid(1, 1).unwrap();
        let text = write_instance(&inst);
        let back = parse_instance(&text, None).unwrap();
        assert_eq!(write_instance(&back), text);

        let g = generate::path(3).unwrap();
        let from_graph = parse_instance("points 3\nrank 1\n", Some(&g)).unwrap();
        assert_eq!(from_graph.mu(0, 2, 1), 1);
        assert_eq!(from_graph.distance(0, 2), Rational::from_integer(2));

        let half = "points 2\nmetric explicit\nd 0 1 1/2\nmu explicit\nm 0 0 0 0\n";
        assert!(matches!(parse_instance(half, None), Err(Error::Parse { .. })));
    }

    #[test]
    fn atomic_write() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}

//! Text formats for instances and set systems, and the random generator.
//!
//! Instances:
//!
//! ```text
//! # comment
//! p mhv 3 2 1
//! e 1 2
//! c 1 2
//! ```
//!
//! Set systems: `u <n>`, then `s <elements...>` per set, optionally followed
//! by `w <weight>`.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HappyError, Result};
use crate::model::{Color, Graph, Instance, Precoloring, ProblemKind, Vertex};
use crate::reductions::SetSystem;

/// Non-blank, non-comment lines with their 1-based line numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split_whitespace().collect()))
        }
    })
}

fn number<T: FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token.parse().map_err(|_| {
        HappyError::parse(
            line,
            format!("{what} must be a non-negative integer, got {token:?}"),
        )
    })
}

fn arity(line: usize, fields: &[&str], expected: usize) -> Result<()> {
    if fields.len() != expected {
        return Err(HappyError::parse(
            line,
            format!(
                "{:?} record takes {} fields, got {}",
                fields[0],
                expected - 1,
                fields.len() - 1
            ),
        ));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = records(text);
    let Some((hline, header)) = lines.next() else {
        return Err(HappyError::parse(
            1,
            "missing header line `p <mhv|mhe> <n> <ell> <k>`",
        ));
    };
    if header[0] != "p" {
        return Err(HappyError::parse(
            hline,
            format!(
                "expected header `p <mhv|mhe> <n> <ell> <k>`, got {:?} record",
                header[0]
            ),
        ));
    }
    arity(hline, &header, 5)?;
    let kind: ProblemKind = header[1]
        .parse()
        .map_err(|_| HappyError::parse(hline, format!("unknown problem kind {:?}", header[1])))?;
    let n: usize = number(hline, header[2], "n")?;
    let ell: Color = number(hline, header[3], "ell")?;
    let k: u64 = number(hline, header[4], "k")?;
    if ell == 0 {
        return Err(HappyError::parse(hline, "ell must be at least 1"));
    }

    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut colors: Vec<Option<Color>> = vec![None; n];
    let vertex = |line: usize, token: &str| -> Result<Vertex> {
        let v: Vertex = number(line, token, "vertex")?;
        if v == 0 || v > n {
            return Err(HappyError::parse(
                line,
                format!("vertex {v} outside 1..={n}"),
            ));
        }
        Ok(v)
    };
    for (line, fields) in lines {
        match fields[0] {
            "p" => return Err(HappyError::parse(line, "repeated header")),
            "e" => {
                arity(line, &fields, 3)?;
                let u = vertex(line, fields[1])?;
                let v = vertex(line, fields[2])?;
                if u == v {
                    return Err(HappyError::parse(line, format!("self-loop at vertex {u}")));
                }
                let key = (u.min(v), u.max(v));
                if !seen.insert(key) {
                    return Err(HappyError::parse(
                        line,
                        format!("duplicate edge ({}, {})", key.0, key.1),
                    ));
                }
                edges.push(key);
            }
            "c" => {
                arity(line, &fields, 3)?;
                let v = vertex(line, fields[1])?;
                let c: Color = number(line, fields[2], "color")?;
                if c == 0 || c > ell {
                    return Err(HappyError::parse(
                        line,
                        format!("color {c} outside 1..={ell}"),
                    ));
                }
                if colors[v - 1].replace(c).is_some() {
                    return Err(HappyError::parse(
                        line,
                        format!("vertex {v} is colored twice"),
                    ));
                }
            }
            other => {
                return Err(HappyError::parse(
                    line,
                    format!("unknown record type {other:?}"),
                ))
            }
        }
    }
    let graph = Graph::new(n, edges)?;
    let pairs = colors
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.map(|c| (i + 1, c)));
    let precoloring = Precoloring::new(n, ell, pairs)?;
    Instance::new(kind, graph, precoloring, k)
}

/// Canonical text: header, edges in sorted order, then color records by
/// vertex.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "p {} {} {} {}",
        instance.kind,
        instance.n(),
        instance.ell(),
        instance.k
    );
    for &(u, v) in instance.graph.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    for (v, c) in instance.precoloring.assigned() {
        let _ = writeln!(out, "c {v} {c}");
    }
    out
}

pub fn parse_set_system(text: &str) -> Result<SetSystem> {
    let mut lines = records(text);
    let Some((uline, header)) = lines.next() else {
        return Err(HappyError::parse(1, "missing universe line `u <n>`"));
    };
    if header[0] != "u" {
        return Err(HappyError::parse(uline, "expected universe line `u <n>`"));
    }
    arity(uline, &header, 2)?;
    let n: usize = number(uline, header[1], "universe size")?;
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut weights: Vec<Option<u64>> = Vec::new();
    let mut last_was_set = false;
    for (line, fields) in lines {
        match fields[0] {
            "s" => {
                if fields.len() < 2 {
                    return Err(HappyError::parse(line, "empty set"));
                }
                let mut set = Vec::with_capacity(fields.len() - 1);
                for token in &fields[1..] {
                    let e: usize = number(line, token, "element")?;
                    if e == 0 || e > n {
                        return Err(HappyError::parse(
                            line,
                            format!("element {e} outside 1..={n}"),
                        ));
                    }
                    if set.contains(&e) {
                        return Err(HappyError::parse(line, format!("element {e} repeated")));
                    }
                    set.push(e);
                }
                sets.push(set);
                weights.push(None);
                last_was_set = true;
            }
            "w" => {
                arity(line, &fields, 2)?;
                if !last_was_set {
                    return Err(HappyError::parse(
                        line,
                        "weight must directly follow a set line",
                    ));
                }
                let w: u64 = number(line, fields[1], "weight")?;
                if w == 0 {
                    return Err(HappyError::parse(line, "weights must be positive"));
                }
                *weights.last_mut().expect("a set precedes") = Some(w);
                last_was_set = false;
            }
            "u" => return Err(HappyError::parse(line, "repeated universe line")),
            other => {
                return Err(HappyError::parse(
                    line,
                    format!("unknown record type {other:?}"),
                ))
            }
        }
    }
    let system = SetSystem::new(n, sets)?;
    if weights.iter().any(Option::is_some) {
        system.with_weights(weights.into_iter().map(|w| w.unwrap_or(1)).collect())
    } else {
        Ok(system)
    }
}

pub fn serialize_set_system(system: &SetSystem) -> String {
    let mut out = format!("u {}\n", system.universe_size);
    for (j, set) in system.sets.iter().enumerate() {
        out.push('s');
        for e in set {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
        if let Some(w) = &system.weights {
            let _ = writeln!(out, "w {}", w[j]);
        }
    }
    out
}

/// Random instance: each pair becomes an edge with probability
/// `edge_probability`, each vertex is precolored with probability
/// `precolor_fraction` by a uniform color. Target `k = 0`.
pub fn generate_random(
    n: usize,
    ell: Color,
    edge_probability: f64,
    precolor_fraction: f64,
    seed: u64,
    kind: ProblemKind,
) -> Result<Instance> {
    if n == 0 {
        return Err(HappyError::invalid("n must be at least 1"));
    }
    if ell == 0 {
        return Err(HappyError::invalid("ell must be at least 1"));
    }
    for (name, p) in [
        ("edge probability", edge_probability),
        ("precolor fraction", precolor_fraction),
    ] {
        if !(0.0..=1.0).contains(&p) {
            return Err(HappyError::invalid(format!("{name} {p} outside [0, 1]")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    let mut pairs = Vec::new();
    for v in 1..=n {
        if rng.gen_bool(precolor_fraction) {
            pairs.push((v, rng.gen_range(1..=ell)));
        }
    }
    let graph = Graph::new(n, edges)?;
    let precoloring = Precoloring::new(n, ell, pairs)?;
    Instance::new(kind, graph, precoloring, 0)
}

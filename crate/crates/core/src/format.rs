//! Plain-text file formats: canonical instances, tour files and `key = value` files.
//!
//! Canonical instance layout (LF line endings, whitespace separated):
//!
//! ```text
//! PAIRS n
//! CAPACITY Q
//! METRIC ROUNDED|EXACT
//! id role pair_index x y load      # one line per node, ids 0..=2n
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Instance, MetricMode, ModelError, NodeId, NodeRole, Point};
use crate::scalar::Scalar;
use crate::tsplib::DistanceKind;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("only coordinate instances can be written in the canonical format")]
    NotCoordinateBased,
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

pub fn metric_token(kind: DistanceKind) -> &'static str {
    match kind {
        DistanceKind::TsplibRounded => "ROUNDED",
        DistanceKind::ExactEuclidean => "EXACT",
    }
}

pub fn parse_metric_token(token: &str) -> Option<DistanceKind> {
    match token.to_ascii_uppercase().as_str() {
        "ROUNDED" => Some(DistanceKind::TsplibRounded),
        "EXACT" => Some(DistanceKind::ExactEuclidean),
        _ => None,
    }
}

/// Serializes a coordinate-based instance in the canonical format.
pub fn write_instance<S: Scalar>(instance: &Instance<S>) -> Result<String, FormatError> {
    let kind = instance.metric().distance_kind().ok_or(FormatError::NotCoordinateBased)?;
    let coords = instance.coords().ok_or(FormatError::NotCoordinateBased)?;
    let mut out = String::new();
    let _ = writeln!(out, "PAIRS {}", instance.pairs());
    let _ = writeln!(out, "CAPACITY {}", instance.capacity());
    let _ = writeln!(out, "METRIC {}", metric_token(kind));
    for (id, p) in coords.iter().enumerate() {
        let (role, pair) = match instance.role(id) {
            NodeRole::Depot => ("depot", 0),
            NodeRole::Pickup(k) => ("pickup", k),
            NodeRole::Delivery(k) => ("delivery", k),
        };
        let _ = writeln!(out, "{id} {role} {pair} {} {} {}", p.x, p.y, instance.load(id));
    }
    Ok(out)
}

/// Reads the canonical format. Node lines may come in any order but every id in
/// `0..=2n` must appear once with the role and pair index its id implies, and each
/// delivery must carry the negated load of its pickup.
pub fn parse_instance<S: Scalar>(text: &str) -> Result<Instance<S>, FormatError> {
    let mut pairs: Option<usize> = None;
    let mut capacity: Option<S> = None;
    let mut metric: Option<DistanceKind> = None;
    let mut nodes: Vec<Option<(Point<S>, S)>> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "PAIRS" => {
                let n = field::<usize>(&fields, 1, line_no, "PAIRS")?;
                pairs = Some(n);
                nodes = vec![None; 2 * n + 1];
            }
            "CAPACITY" => capacity = Some(S::of(field::<f64>(&fields, 1, line_no, "CAPACITY")?)),
            "METRIC" => {
                let token = fields.get(1).ok_or_else(|| syntax(line_no, "METRIC needs a value"))?;
                metric = Some(parse_metric_token(token).ok_or_else(|| syntax(line_no, format!("unknown metric {token}")))?);
            }
            _ => {
                let n = pairs.ok_or_else(|| syntax(line_no, "node line before PAIRS header"))?;
                if fields.len() != 6 {
                    return Err(syntax(line_no, "expected `id role pair_index x y load`"));
                }
                let id = field::<usize>(&fields, 0, line_no, "id")?;
                let pair = field::<usize>(&fields, 2, line_no, "pair_index")?;
                let x = field::<f64>(&fields, 3, line_no, "x")?;
                let y = field::<f64>(&fields, 4, line_no, "y")?;
                let load = field::<f64>(&fields, 5, line_no, "load")?;
                if id > 2 * n {
                    return Err(syntax(line_no, format!("node id {id} out of range for {n} pairs")));
                }
                let expected = if id == 0 {
                    ("depot", 0)
                } else if id <= n {
                    ("pickup", id)
                } else {
                    ("delivery", id - n)
                };
                if (fields[1], pair) != expected {
                    return Err(syntax(
                        line_no,
                        format!("node {id} must be `{} {}`, found `{} {pair}`", expected.0, expected.1, fields[1]),
                    ));
                }
                if nodes[id].is_some() {
                    return Err(syntax(line_no, format!("node {id} listed twice")));
                }
                nodes[id] = Some((Point::new(S::of(x), S::of(y)), S::of(load)));
            }
        }
    }

    let pairs = pairs.ok_or_else(|| syntax(last_line, "missing PAIRS header"))?;
    let capacity = capacity.ok_or_else(|| syntax(last_line, "missing CAPACITY header"))?;
    let metric = metric.ok_or_else(|| syntax(last_line, "missing METRIC header"))?;
    let mut points = Vec::with_capacity(nodes.len());
    let mut loads = Vec::with_capacity(nodes.len());
    for (id, node) in nodes.into_iter().enumerate() {
        let (p, q) = node.ok_or_else(|| syntax(last_line, format!("node {id} missing")))?;
        points.push(p);
        loads.push(q);
    }
    if loads[0] != S::zero() {
        return Err(syntax(last_line, "depot load must be 0"));
    }
    for k in 1..=pairs {
        if loads[k] + loads[pairs + k] != S::zero() {
            return Err(syntax(last_line, format!("pair {k}: delivery load must negate pickup load")));
        }
    }
    Ok(Instance::from_points("", points, &loads[1..=pairs], capacity, metric)?)
}

fn field<T: std::str::FromStr>(fields: &[&str], at: usize, line: usize, what: &str) -> Result<T, FormatError> {
    let raw = fields.get(at).ok_or_else(|| syntax(line, format!("missing {what}")))?;
    raw.parse().map_err(|_| syntax(line, format!("bad {what} {raw:?}")))
}

/// One node id per line, first and last equal.
pub fn write_tour(sequence: &[NodeId]) -> String {
    let mut out = String::new();
    for id in sequence {
        let _ = writeln!(out, "{id}");
    }
    out
}

/// Reads a tour file; blank lines and `#` comments are skipped. Closure is checked by the
/// validator, not here.
pub fn parse_tour(text: &str) -> Result<Vec<NodeId>, FormatError> {
    let mut seq = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        seq.push(line.parse().map_err(|_| syntax(i + 1, format!("bad node id {line:?}")))?);
    }
    Ok(seq)
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>, FormatError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| syntax(i + 1, "expected `key = value`"))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Metric mode label used in reports.
pub fn metric_label(mode: MetricMode) -> &'static str {
    match mode {
        MetricMode::TsplibRounded => "rounded",
        MetricMode::ExactEuclidean => "exact",
        MetricMode::ExplicitMatrix => "explicit",
    }
}

//! Edge-list serialization and weight-table parsing.
//!
//! Text: one `u v\n` line per edge, decimal, 0-indexed.
//! Binary: consecutive little-endian `u64` pairs.
//! Both keep the edge order of the graph (seed edges first).

use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::weight::{TailRule, WeightFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFormat {
    Text,
    Binary,
}

pub fn write_edges(g: &Graph, format: EdgeFormat) -> Vec<u8> {
    let mut out = Vec::new();
    write_edges_to(g, format, &mut out).expect("writing to a Vec cannot fail");
    out
}

pub fn write_edges_to<W: Write>(g: &Graph, format: EdgeFormat, mut out: W) -> std::io::Result<()> {
    match format {
        EdgeFormat::Text => {
            for &(u, v) in g.edges() {
                writeln!(out, "{u} {v}")?;
            }
        }
        EdgeFormat::Binary => {
            for &(u, v) in g.edges() {
                out.write_all(&(u as u64).to_le_bytes())?;
                out.write_all(&(v as u64).to_le_bytes())?;
            }
        }
    }
    out.flush()
}

pub fn read_edges(bytes: &[u8], format: EdgeFormat) -> Result<Graph> {
    let edges = match format {
        EdgeFormat::Text => parse_text(bytes)?,
        EdgeFormat::Binary => parse_binary(bytes)?,
    };
    Graph::from_edges(edges)
}

fn parse_text(bytes: &[u8]) -> Result<Vec<(NodeId, NodeId)>> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        Error::parse_at_offset(e.valid_up_to(), "edge list is not valid UTF-8")
    })?;
    let mut edges = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        let mut fields = line.split_ascii_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse_at_line(lineno, format!("expected \"u v\", got {line:?}")));
        };
        let id = |s: &str| {
            s.parse::<NodeId>()
                .map_err(|_| Error::parse_at_line(lineno, format!("bad node id {s:?}")))
        };
        edges.push((id(a)?, id(b)?));
    }
    Ok(edges)
}

fn parse_binary(bytes: &[u8]) -> Result<Vec<(NodeId, NodeId)>> {
    if !bytes.len().is_multiple_of(16) {
        return Err(Error::parse_at_offset(
            bytes.len() - bytes.len() % 16,
            "trailing bytes after the last complete edge",
        ));
    }
    bytes
        .chunks_exact(16)
        .enumerate()
        .map(|(k, chunk)| {
            let id = |half: &[u8], offset: usize| {
                let raw = u64::from_le_bytes(half.try_into().expect("8-byte half"));
                NodeId::try_from(raw)
                    .map_err(|_| Error::parse_at_offset(offset, format!("node id {raw} too large")))
            };
            Ok((id(&chunk[..8], 16 * k)?, id(&chunk[8..], 16 * k + 8)?))
        })
        .collect()
}

/// Parses a `degree,weight` CSV with contiguous degrees `1..=k`.
/// A leading `degree,weight` header line is accepted.
pub fn parse_weight_table(text: &str, tail: TailRule) -> Result<WeightFunction> {
    let mut values = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = line.trim();
        if line.is_empty() || (k == 0 && line.eq_ignore_ascii_case("degree,weight")) {
            continue;
        }
        let (d, w) = line
            .split_once(',')
            .ok_or_else(|| Error::parse_at_line(lineno, "expected \"degree,weight\""))?;
        let d: usize = d
            .trim()
            .parse()
            .map_err(|_| Error::parse_at_line(lineno, format!("bad degree {d:?}")))?;
        let w: f64 = w
            .trim()
            .parse()
            .map_err(|_| Error::parse_at_line(lineno, format!("bad weight {w:?}")))?;
        if d != values.len() + 1 {
            return Err(Error::parse_at_line(
                lineno,
                format!("expected degree {}, got {d}", values.len() + 1),
            ));
        }
        values.push(w);
    }
    WeightFunction::table(values, tail)
}

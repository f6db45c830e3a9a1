//! Text and JSON readers and writers for simplices and groups.
//!
//! Group text: a header line "n q" (coordinates, common denominator), then
//! one generator row of n numerators per line. Writers emit the stored
//! normalized generators, so the denominator is the group exponent.
//!
//! Simplex text: one vertex of integer coordinates per line, no header.
//!
//! JSON: self-describing objects, {"len", "den", "generators"} for groups
//! and {"dim", "vertices"} for simplices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::SimplexGroup;
use crate::simplex::LatticeSimplex;

/// Either kind of input object.
#[derive(Clone, Debug)]
pub enum ParsedInput {
    Simplex(LatticeSimplex),
    Group(SimplexGroup),
}

fn tokens<T: std::str::FromStr>(line: &str, what: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| Error::Parse(format!("bad {what} token {t:?}")))
        })
        .collect()
}

pub fn parse_group_text(text: &str) -> Result<SimplexGroup> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty group input".into()))?;
    let head: Vec<u64> = tokens(header, "header")?;
    let [n, q] = head[..] else {
        return Err(Error::Parse(format!(
            "group header needs exactly two numbers, got {header:?}"
        )));
    };
    if n == 0 || q == 0 {
        return Err(Error::Parse(
            "group header entries must be positive".into(),
        ));
    }
    let mut gens: Vec<Vec<u64>> = Vec::new();
    for line in lines {
        let row: Vec<u64> = tokens(line, "generator")?;
        if row.len() as u64 != n {
            return Err(Error::Parse(format!(
                "generator row has {} entries, header says {n}",
                row.len()
            )));
        }
        gens.push(row);
    }
    if gens.is_empty() {
        if q == 1 {
            return Ok(SimplexGroup::trivial(n as usize));
        }
        return Err(Error::Parse(
            "group with no generator rows must have denominator 1".into(),
        ));
    }
    SimplexGroup::from_generators(q, &gens)
}

pub fn write_group_text(g: &SimplexGroup) -> String {
    let mut out = format!("{} {}\n", g.len(), g.exponent());
    for gen in g.generators() {
        let row: Vec<String> = gen.coords().iter().map(u64::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_simplex_text(text: &str) -> Result<LatticeSimplex> {
    let mut vertices: Vec<Vec<i64>> = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        vertices.push(tokens(line, "vertex")?);
    }
    if vertices.is_empty() {
        return Err(Error::Parse("empty simplex input".into()));
    }
    LatticeSimplex::new(vertices)
}

pub fn write_simplex_text(s: &LatticeSimplex) -> String {
    let mut out = String::new();
    for v in s.vertices() {
        let row: Vec<String> = v.iter().map(i64::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    len: usize,
    den: u64,
    generators: Vec<Vec<u64>>,
}

#[derive(Serialize, Deserialize)]
struct SimplexJson {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

pub fn parse_group_json(text: &str) -> Result<SimplexGroup> {
    let raw: GroupJson = serde_json::from_str(text)?;
    if raw.len == 0 {
        return Err(Error::Parse("group len must be positive".into()));
    }
    if let Some(bad) = raw.generators.iter().find(|g| g.len() != raw.len) {
        return Err(Error::Parse(format!(
            "generator row has {} entries, len says {}",
            bad.len(),
            raw.len
        )));
    }
    if raw.generators.is_empty() {
        if raw.den == 1 {
            return Ok(SimplexGroup::trivial(raw.len));
        }
        return Err(Error::Parse(
            "group with no generators must have denominator 1".into(),
        ));
    }
    SimplexGroup::from_generators(raw.den, &raw.generators)
}

pub fn write_group_json(g: &SimplexGroup) -> Result<String> {
    let raw = GroupJson {
        len: g.len(),
        den: g.exponent(),
        generators: g
            .generators()
            .iter()
            .map(|e| e.coords().to_vec())
            .collect(),
    };
    Ok(serde_json::to_string(&raw)?)
}

pub fn parse_simplex_json(text: &str) -> Result<LatticeSimplex> {
    let raw: SimplexJson = serde_json::from_str(text)?;
    if let Some(bad) = raw.vertices.iter().find(|v| v.len() != raw.dim) {
        return Err(Error::Parse(format!(
            "vertex has {} coordinates, dim says {}",
            bad.len(),
            raw.dim
        )));
    }
    LatticeSimplex::new(raw.vertices)
}

pub fn write_simplex_json(s: &LatticeSimplex) -> Result<String> {
    let raw = SimplexJson {
        dim: s.dim(),
        vertices: s.vertices().to_vec(),
    };
    Ok(serde_json::to_string(&raw)?)
}

/// Parse a simplex from either format, chosen by the leading character.
pub fn parse_simplex_any(text: &str) -> Result<LatticeSimplex> {
    if text.trim_start().starts_with('{') {
        parse_simplex_json(text)
    } else {
        parse_simplex_text(text)
    }
}

/// Parse a group from either format, chosen by the leading character.
pub fn parse_group_any(text: &str) -> Result<SimplexGroup> {
    if text.trim_start().starts_with('{') {
        parse_group_json(text)
    } else {
        parse_group_text(text)
    }
}

/// True when the text lines have the group shape: a two-number header
/// followed by rows of exactly n numerators each.
fn has_group_shape(text: &str) -> bool {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let Some(header) = lines.next() else {
        return false;
    };
    let Ok(head) = tokens::<u64>(header, "header") else {
        return false;
    };
    let [n, q] = head[..] else { return false };
    if n == 0 || q == 0 {
        return false;
    }
    let mut rows = 0usize;
    for line in lines {
        let Ok(row) = tokens::<u64>(line, "generator") else {
            return false;
        };
        if row.len() as u64 != n {
            return false;
        }
        rows += 1;
    }
    rows >= 1 || q == 1
}

/// Parse either kind of input. JSON objects are self-describing. Plain text
/// is read as a group when it has the group shape, otherwise as a simplex;
/// a file of non-negative two-column vertices whose first line could pass
/// for a header is therefore read as a group, and a caller who means a
/// simplex must say so.
pub fn parse_auto(text: &str) -> Result<ParsedInput> {
    if text.trim_start().starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let Some(object) = value.as_object() else {
            return Err(Error::Parse("JSON input must be an object".into()));
        };
        if object.contains_key("generators") {
            return Ok(ParsedInput::Group(parse_group_json(text)?));
        }
        if object.contains_key("vertices") {
            return Ok(ParsedInput::Simplex(parse_simplex_json(text)?));
        }
        return Err(Error::Parse(
            "JSON object has neither \"generators\" nor \"vertices\"".into(),
        ));
    }
    if has_group_shape(text) {
        Ok(ParsedInput::Group(parse_group_text(text)?))
    } else {
        Ok(ParsedInput::Simplex(parse_simplex_text(text)?))
    }
}

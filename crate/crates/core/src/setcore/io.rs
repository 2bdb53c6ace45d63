//! Family file formats.
//!
//! Text (`.fam`):
//!
//! ```text
//! # comment
//! n=5 k=2
//! 1 2
//! 1 3
//! ```
//!
//! The header is `n=<int> k=<int|*>` (`*` marks a non-uniform family). Each
//! following line is one set as strictly increasing integers; the empty set is
//! written `{}`. Blank lines and `#` comments are ignored.
//!
//! JSON: `{"n": 5, "k": 2, "sets": [[1, 2], [1, 3]]}` with `k` null when non-uniform.
//!
//! Serialization emits members in canonical order, so both formats round-trip
//! byte for byte.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};

use super::family::SetFamily;
use super::kset::{KSet, MAX_UNIVERSE};

pub const EMPTY_SET_TOKEN: &str = "{}";

pub fn parse_family(text: &str) -> Result<SetFamily> {
    let mut header: Option<(usize, Option<usize>)> = None;
    let mut members = Vec::new();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((n, k)) = header else {
            header = Some(parse_header(line, line_no)?);
            continue;
        };
        let set = parse_set_line(line, line_no, n)?;
        if let Some(k) = k {
            if set.len() != k {
                return parse_err(
                    Some(line_no),
                    format!("set has {} elements, header says k={k}", set.len()),
                );
            }
        }
        if !seen.insert(set) {
            return parse_err(Some(line_no), format!("duplicate set {set}"));
        }
        members.push(set);
    }

    let Some((n, k)) = header else {
        return parse_err(None, "missing header line `n=<int> k=<int|*>`");
    };
    SetFamily::new(n, k, members)
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, Option<usize>)> {
    let bad = || Error::Parse {
        line: Some(line_no),
        message: format!("malformed header '{line}', expected `n=<int> k=<int|*>`"),
    };
    let mut parts = line.split_whitespace();
    let n_part = parts.next().ok_or_else(bad)?;
    let k_part = parts.next().ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    let n: usize = n_part.strip_prefix("n=").and_then(|v| v.parse().ok()).ok_or_else(bad)?;
    let k_text = k_part.strip_prefix("k=").ok_or_else(bad)?;
    let k = if k_text == "*" {
        None
    } else {
        Some(k_text.parse::<usize>().map_err(|_| bad())?)
    };
    if n == 0 || n > MAX_UNIVERSE {
        return parse_err(Some(line_no), format!("universe n={n} outside 1..={MAX_UNIVERSE}"));
    }
    if let Some(k) = k {
        if k > n {
            return parse_err(Some(line_no), format!("k={k} exceeds n={n}"));
        }
    }
    Ok((n, k))
}

fn parse_set_line(line: &str, line_no: usize, n: usize) -> Result<KSet> {
    if line == EMPTY_SET_TOKEN {
        return KSet::empty(n);
    }
    let mut elements = Vec::new();
    for token in line.split_whitespace() {
        let x: usize = token.parse().map_err(|_| Error::Parse {
            line: Some(line_no),
            message: format!("'{token}' is not an element"),
        })?;
        if x == 0 || x > n {
            return parse_err(Some(line_no), format!("element {x} outside [1, {n}]"));
        }
        if let Some(&prev) = elements.last() {
            if x <= prev {
                return parse_err(
                    Some(line_no),
                    format!("elements must be strictly increasing ({prev} then {x})"),
                );
            }
        }
        elements.push(x);
    }
    KSet::from_elements(n, elements)
}

pub fn serialize_family(family: &SetFamily) -> String {
    let mut out = String::new();
    let k = family
        .uniformity()
        .map(|k| k.to_string())
        .unwrap_or_else(|| "*".to_string());
    writeln!(out, "n={} k={k}", family.universe()).unwrap();
    for set in family {
        if set.is_empty() {
            out.push_str(EMPTY_SET_TOKEN);
        } else {
            for (i, x) in set.elements().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                write!(out, "{x}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    k: Option<usize>,
    sets: Vec<Vec<usize>>,
}

pub fn family_to_json(family: &SetFamily) -> String {
    let doc = FamilyJson {
        n: family.universe(),
        k: family.uniformity(),
        sets: family.iter().map(|s| s.to_vec()).collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn family_from_json(text: &str) -> Result<SetFamily> {
    let doc: FamilyJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: Some(e.line()),
        message: e.to_string(),
    })?;
    if doc.n == 0 || doc.n > MAX_UNIVERSE {
        return parse_err(None, format!("universe n={} outside 1..={MAX_UNIVERSE}", doc.n));
    }
    let mut seen = HashSet::new();
    let mut members = Vec::with_capacity(doc.sets.len());
    for (i, elements) in doc.sets.iter().enumerate() {
        if let Some(&x) = elements.iter().find(|&&x| x == 0 || x > doc.n) {
            return parse_err(None, format!("set #{i}: element {x} outside [1, {}]", doc.n));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return parse_err(None, format!("set #{i}: elements must be strictly increasing"));
        }
        if let Some(k) = doc.k {
            if elements.len() != k {
                return parse_err(None, format!("set #{i}: size {} but k={k}", elements.len()));
            }
        }
        let set = KSet::from_elements(doc.n, elements.iter().copied())?;
        if !seen.insert(set) {
            return parse_err(None, format!("set #{i}: duplicate set {set}"));
        }
        members.push(set);
    }
    SetFamily::new(doc.n, doc.k, members)
}

/// Reads either format, choosing JSON when the first non-blank character is `{`
/// on a line that is not the empty-set token.
pub fn parse_any(text: &str) -> Result<SetFamily> {
    if text.trim_start().starts_with("{\"") || text.trim_start().starts_with("{ ") {
        family_from_json(text)
    } else {
        parse_family(text)
    }
}

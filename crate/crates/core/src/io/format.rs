//! The `pcsv1` document format.
//!
//! ```text
//! pcsv1
//! # comment
//! 0 a0 at=0,0
//! 0 a1 at=1,0
//! 1 e d1_0=a0 d1_1=a1
//! ```
//!
//! One record per line: degree, id, then `key=value` attributes sorted by
//! key. Face keys are `d<i>_<k>`; the optional `at=<x>,<y>` attribute is a
//! layout position. `#` starts a comment; blank lines are ignored.
//! [`serialize`] writes records sorted by `(degree, id)`, so its output is
//! canonical.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::IoError;
use crate::complex::{CellRef, CellTable, Complex, ComplexError};

pub const HEADER: &str = "pcsv1";

fn syntax(line: usize, column: usize, message: impl Into<String>) -> IoError {
    IoError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..pos]));
                start = None;
            }
            (false, None) => start = Some(pos),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(s, t)| (line[..s].chars().count() + 1, t))
        .collect()
}

fn face_key(key: &str) -> Option<(usize, usize)> {
    let rest = key.strip_prefix('d')?;
    let (i, k) = rest.split_once('_')?;
    if i.is_empty() || !i.bytes().all(|b| b.is_ascii_digit()) || i.starts_with('0') {
        return None;
    }
    let k = match k {
        "0" => 0,
        "1" => 1,
        _ => return None,
    };
    Some((i.parse().ok()?, k))
}

fn position(value: &str) -> Option<(i64, i64)> {
    let (x, y) = value.split_once(',')?;
    Some((x.parse().ok()?, y.parse().ok()?))
}

/// Parses a `pcsv1` document and validates the complex it describes.
pub fn parse(text: &str) -> Result<Complex, IoError> {
    let mut table = CellTable::default();
    let mut header_seen = false;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        if toks.is_empty() {
            continue;
        }
        if !header_seen {
            if toks.len() != 1 || toks[0].1 != HEADER {
                return Err(syntax(
                    line_no,
                    toks[0].0,
                    format!("expected header `{HEADER}`"),
                ));
            }
            header_seen = true;
            continue;
        }
        let (dcol, dtok) = toks[0];
        if !dtok.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax(
                line_no,
                dcol,
                format!("expected a degree, found `{dtok}`"),
            ));
        }
        let dim: usize = dtok
            .parse()
            .map_err(|_| syntax(line_no, dcol, format!("degree `{dtok}` out of range")))?;
        let Some(&(_, id)) = toks.get(1) else {
            return Err(syntax(line_no, dcol + dtok.len(), "missing cell id"));
        };
        if id.contains('=') {
            return Err(syntax(
                line_no,
                toks[1].0,
                format!("expected a cell id, found `{id}`"),
            ));
        }
        let mut faces: BTreeMap<(usize, usize), String> = BTreeMap::new();
        let mut at = None;
        for &(col, tok) in &toks[2..] {
            let Some((key, value)) = tok.split_once('=') else {
                return Err(syntax(
                    line_no,
                    col,
                    format!("expected key=value, found `{tok}`"),
                ));
            };
            if key == "at" {
                if at.is_some() {
                    return Err(syntax(line_no, col, "duplicate key `at`"));
                }
                at = Some(position(value).ok_or_else(|| {
                    syntax(line_no, col, format!("expected at=<x>,<y>, found `{tok}`"))
                })?);
                continue;
            }
            let Some((i, k)) = face_key(key) else {
                return Err(syntax(line_no, col, format!("unknown key `{key}`")));
            };
            if i > dim {
                return Err(syntax(
                    line_no,
                    col,
                    format!("face key `{key}` on a cell of degree {dim}"),
                ));
            }
            if value.is_empty() {
                return Err(syntax(line_no, col, format!("empty value for `{key}`")));
            }
            if faces.insert((i, k), value.to_string()).is_some() {
                return Err(syntax(line_no, col, format!("duplicate key `{key}`")));
            }
        }
        let mut face_table = Vec::with_capacity(dim);
        for i in 1..=dim {
            let mut pair = [String::new(), String::new()];
            for (k, slot) in pair.iter_mut().enumerate() {
                *slot = faces.remove(&(i, k)).ok_or_else(|| {
                    syntax(
                        line_no,
                        toks[1].0,
                        format!("cell {id} is missing face key d{i}_{k}"),
                    )
                })?;
            }
            face_table.push(pair);
        }
        if let Some(pos) = at {
            table.layout.insert(CellRef::new(dim, id), pos);
        }
        table.push(dim, id, face_table);
    }
    if !header_seen {
        return Err(syntax(1, 1, format!("missing header `{HEADER}`")));
    }
    Complex::from_table(table).map_err(|e| match e {
        ComplexError::Invalid(report) => IoError::ValidationFailed(report),
        other => unreachable!("from_table only reports validation failures: {other}"),
    })
}

/// Writes the canonical document for `p`.
pub fn serialize(p: &Complex) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for cell in p.cells() {
        let mut attrs: Vec<String> = Vec::new();
        if let Some((x, y)) = p.layout().get(&cell) {
            attrs.push(format!("at={x},{y}"));
        }
        let faces = p.faces(cell.degree, &cell.id).expect("cell exists");
        for (idx, pair) in faces.iter().enumerate() {
            for (k, target) in pair.iter().enumerate() {
                attrs.push(format!("d{}_{}={}", idx + 1, k, target));
            }
        }
        attrs.sort();
        write!(out, "{} {}", cell.degree, cell.id).expect("string write");
        for a in attrs {
            out.push(' ');
            out.push_str(&a);
        }
        out.push('\n');
    }
    out
}

//! Graphviz export.

use std::fmt::Write;

use super::IoError;
use crate::complex::{CellRef, Complex};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Renders the 1-skeleton as a digraph. Vertex positions are pinned when
/// the complex carries a layout. Each square is listed in a comment and
/// drawn as a plaintext node tied to its corners by dashed lines.
pub fn export_dot(p: &Complex) -> Result<String, IoError> {
    if let Some(dim) = p.dimension() {
        if dim > 2 {
            return Err(IoError::DimensionUnsupported(dim));
        }
    }
    let mut out = String::from("digraph complex {\n");
    for v in p.vertices() {
        write!(out, "  {} [label={}", quote(v), quote(v)).unwrap();
        if let Some((x, y)) = p.layout().get(&CellRef::vertex(v)) {
            write!(out, ", pos=\"{x},{y}!\"").unwrap();
        }
        out.push_str("];\n");
    }
    for e in p.edges() {
        let src = p.endpoint(e, 0).expect("edge source");
        let dst = p.endpoint(e, 1).expect("edge target");
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(src),
            quote(dst),
            quote(e)
        )
        .unwrap();
    }
    for s in p.squares() {
        let f = |i, k| p.face(2, s, i, k).expect("square faces");
        writeln!(
            out,
            "  // square {}: [{} {} {} {}]",
            s,
            f(1, 0),
            f(1, 1),
            f(2, 0),
            f(2, 1)
        )
        .unwrap();
        let node = quote(&format!("square:{s}"));
        writeln!(out, "  {node} [shape=plaintext, label={}];", quote(s)).unwrap();
        // corners: source and target of the left and right edges
        for side in [f(1, 0), f(1, 1)] {
            for k in 0..2 {
                let corner = p.endpoint(side, k).expect("edge endpoint");
                writeln!(
                    out,
                    "  {node} -> {} [style=dashed, dir=none, constraint=false];",
                    quote(corner)
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

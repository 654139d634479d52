//! CSV, JSON and SVG encodings of a [`RegionGrid`].
//!
//! All three are pure functions of the grid and header, so output is
//! byte-for-byte reproducible.

use std::fmt::Write;

use capra_l0::RegionGrid;
use serde_json::{json, Map, Value};

use crate::output::num;

/// Fill colours for sparsity classes 0, 1, 2.
const CLASS_COLORS: [&str; 3] = ["#2ca02c", "#d62728", "#1f77b4"];
const MEMBER_COLOR: &str = "#d62728";
const TARGET_PIXELS: usize = 600;

fn coord(v: f64) -> Value {
    json!(num(v).parse::<f64>().expect("formatted number reparses"))
}

/// `# header`, then `y1,y2,member` (or `y1,y2,class_mask`), one row per cell
/// in storage order.
pub fn csv(grid: &RegionGrid, header: &str) -> String {
    let mut out = format!("# {header}\n");
    match &grid.classes {
        Some(classes) => {
            out.push_str("y1,y2,class_mask\n");
            for ((_, _, y1, y2, _), mask) in grid.cells().zip(classes) {
                let _ = writeln!(out, "{},{},{mask}", num(y1), num(y2));
            }
        }
        None => {
            out.push_str("y1,y2,member\n");
            for (_, _, y1, y2, member) in grid.cells() {
                let _ = writeln!(out, "{},{},{}", num(y1), num(y2), u8::from(member));
            }
        }
    }
    out
}

/// Axes plus row-major flags; `member[j][i]` is the cell `(y1[i], y2[j])`.
pub fn json(grid: &RegionGrid, meta: &[(&str, String)]) -> String {
    let mut header = Map::new();
    header.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    for (k, v) in meta {
        header.insert((*k).into(), json!(v));
    }
    let y1: Vec<Value> = (0..grid.n1).map(|i| coord(grid.coord(i, 0).0)).collect();
    let y2: Vec<Value> = (0..grid.n2).map(|j| coord(grid.coord(0, j).1)).collect();
    let rows = |f: &dyn Fn(usize) -> u8| -> Vec<Vec<u8>> {
        (0..grid.n2).map(|j| (0..grid.n1).map(|i| f(j * grid.n1 + i)).collect()).collect()
    };
    let mut doc = Map::new();
    doc.insert("format".into(), json!("capra-region"));
    doc.insert("header".into(), Value::Object(header));
    doc.insert("n1".into(), json!(grid.n1));
    doc.insert("n2".into(), json!(grid.n2));
    doc.insert("y1".into(), Value::Array(y1));
    doc.insert("y2".into(), Value::Array(y2));
    doc.insert("member".into(), json!(rows(&|c| u8::from(grid.member[c]))));
    if let Some(classes) = &grid.classes {
        doc.insert("class_mask".into(), json!(rows(&|c| classes[c])));
    }
    let mut text = serde_json::to_string(&Value::Object(doc)).expect("region documents always serialize");
    text.push('\n');
    text
}

// Horizontal runs `(row, start, len)` of cells where `keep` holds; rows are
// flipped so that y2 increases upwards.
fn runs(grid: &RegionGrid, keep: impl Fn(usize) -> bool) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for j in 0..grid.n2 {
        let row = grid.n2 - 1 - j;
        let mut i = 0;
        while i < grid.n1 {
            if keep(j * grid.n1 + i) {
                let start = i;
                while i < grid.n1 && keep(j * grid.n1 + i) {
                    i += 1;
                }
                out.push((row, start, i - start));
            } else {
                i += 1;
            }
        }
    }
    out
}

fn layer(svg: &mut String, color: &str, opacity: f64, cells: &[(usize, usize, usize)]) {
    let _ = writeln!(svg, r#"<g fill="{color}" fill-opacity="{opacity}">"#);
    for (row, start, len) in cells {
        let _ = writeln!(svg, r#"<rect x="{start}" y="{row}" width="{len}" height="1"/>"#);
    }
    svg.push_str("</g>\n");
}

/// SVG 1.1 image in cell units: one unit square per lattice point, centred
/// on it, with the coordinate axes drawn when they cross the window.
pub fn svg(grid: &RegionGrid, header: &str) -> String {
    let scale = TARGET_PIXELS.div_ceil(grid.n1.max(grid.n2)).max(1);
    let (w, h) = (grid.n1, grid.n2);
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(svg, "<!-- {header} -->");
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w * scale,
        h * scale
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##);
    match &grid.classes {
        Some(classes) => {
            for (l, color) in CLASS_COLORS.iter().enumerate() {
                layer(&mut svg, color, 0.6, &runs(grid, |c| classes[c] >> l & 1 == 1));
            }
        }
        None => layer(&mut svg, MEMBER_COLOR, 1.0, &runs(grid, |c| grid.member[c])),
    }
    let win = grid.window;
    let stroke = 1.0 / scale as f64;
    if win.lo1 <= 0.0 && 0.0 <= win.hi1 {
        let x = num(-win.lo1 / grid.step + 0.5);
        let _ = writeln!(
            svg,
            r##"<line x1="{x}" y1="0" x2="{x}" y2="{h}" stroke="#555555" stroke-width="{stroke}"/>"##
        );
    }
    if win.lo2 <= 0.0 && 0.0 <= win.hi2 {
        let y = num(h as f64 - 0.5 + win.lo2 / grid.step);
        let _ = writeln!(
            svg,
            r##"<line x1="0" y1="{y}" x2="{w}" y2="{y}" stroke="#555555" stroke-width="{stroke}"/>"##
        );
    }
    svg.push_str("</svg>\n");
    svg
}

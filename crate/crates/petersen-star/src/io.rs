//! File formats: the coloring JSON schema, Graphviz DOT export (with a
//! parseable label per edge so exports round-trip), and the sweep CSV row.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{Color, PartialColoring, MAX_COLOR};
use crate::construct::ColoringReport;
use crate::graph::{EdgeGraph, GpGraph, GraphError};
use crate::verify::Violation;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {u}-{v} does not exist in GP({n},{k})")]
    UnknownEdge { u: usize, v: usize, n: usize, k: usize },
    #[error("edge {u}-{v} listed twice")]
    DuplicateEdge { u: usize, v: usize },
    #[error("color {0} out of range 0..={MAX_COLOR}")]
    ColorRange(Color),
}

/// `{"n":…, "k":…, "edges":[{"u":…, "v":…, "color":…}]}`, edges in
/// canonical sorted order; unassigned edges are omitted.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ColoringFile {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeEntry {
    pub u: usize,
    pub v: usize,
    pub color: Color,
}

/// Report serialization: the coloring schema plus the construction
/// metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<EdgeEntry>,
    pub method: String,
    pub faithful: bool,
    pub repair_log: Vec<RepairEntryFile>,
    pub colors_used: usize,
    pub c0_offpalette_edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepairEntryFile {
    pub u: usize,
    pub v: usize,
    pub from: Option<Color>,
    pub to: Color,
}

/// Violations as printed by the verify command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationsFile {
    pub n: usize,
    pub k: usize,
    pub violations: Vec<ViolationEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub kind: String,
    pub edges: Vec<[usize; 2]>,
    pub colors: Option<(Color, Color)>,
}

pub fn coloring_to_file(g: &GpGraph, coloring: &PartialColoring) -> ColoringFile {
    let edges = coloring
        .assigned_edges()
        .map(|(e, c)| {
            let (u, v) = g.endpoints(e);
            EdgeEntry { u, v, color: c }
        })
        .collect();
    // assigned_edges iterates by edge id, which is the canonical order
    ColoringFile {
        n: g.n(),
        k: g.k(),
        edges,
    }
}

/// Rebuilds the graph and the coloring from the schema.
pub fn coloring_from_file(file: &ColoringFile) -> Result<(GpGraph, PartialColoring), IoError> {
    let g = GpGraph::build(file.n, file.k)?;
    let mut coloring = PartialColoring::for_graph(&g);
    let mut index = std::collections::BTreeMap::new();
    for (id, e) in g.edges().iter().enumerate() {
        index.insert((e.u, e.v), id);
    }
    for entry in &file.edges {
        if entry.color > MAX_COLOR {
            return Err(IoError::ColorRange(entry.color));
        }
        let key = (entry.u.min(entry.v), entry.u.max(entry.v));
        let id = *index.get(&key).ok_or(IoError::UnknownEdge {
            u: entry.u,
            v: entry.v,
            n: file.n,
            k: file.k,
        })?;
        if coloring.is_assigned(id) {
            return Err(IoError::DuplicateEdge { u: entry.u, v: entry.v });
        }
        coloring.set(id, entry.color).expect("fresh edge");
    }
    Ok((g, coloring))
}

pub fn report_to_file(g: &GpGraph, report: &ColoringReport) -> ReportFile {
    let base = coloring_to_file(g, &report.coloring);
    ReportFile {
        n: base.n,
        k: base.k,
        edges: base.edges,
        method: report.method.as_str().to_string(),
        faithful: report.faithful,
        repair_log: report
            .repair_log
            .iter()
            .map(|r| {
                let (u, v) = g.endpoints(r.edge);
                RepairEntryFile {
                    u,
                    v,
                    from: r.from,
                    to: r.to,
                }
            })
            .collect(),
        colors_used: report.colors_used,
        c0_offpalette_edges: report
            .c0_offpalette_edges
            .iter()
            .map(|&e| {
                let (u, v) = g.endpoints(e);
                [u, v]
            })
            .collect(),
    }
}

pub fn violations_to_file(g: &GpGraph, violations: &[Violation]) -> ViolationsFile {
    ViolationsFile {
        n: g.n(),
        k: g.k(),
        violations: violations
            .iter()
            .map(|v| ViolationEntry {
                kind: format!("{:?}", v.kind),
                edges: v
                    .witness
                    .iter()
                    .map(|&e| {
                        let (a, b) = g.endpoints(e);
                        [a, b]
                    })
                    .collect(),
                colors: v.colors,
            })
            .collect(),
    }
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

/// Fixed pen-color table: color id -> hex. Presentation only; the `label`
/// attribute carries the color id so DOT files re-import losslessly.
pub const DOT_PEN_COLORS: [&str; 6] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628",
];

fn vertex_name(g: &GpGraph, v: usize) -> String {
    if v < g.n() {
        format!("u{v}")
    } else {
        format!("v{}", v - g.n())
    }
}

/// Graphviz export; colored edges carry `label="<color id>"` and a pen
/// color from [`DOT_PEN_COLORS`].
pub fn to_dot(g: &GpGraph, coloring: Option<&PartialColoring>) -> String {
    let mut out = String::new();
    out.push_str(&format!("graph \"GP({},{})\" {{\n", g.n(), g.k()));
    out.push_str("  layout=circo;\n  node [shape=circle, fontsize=10];\n");
    for (id, e) in g.edges().iter().enumerate() {
        let name_u = vertex_name(g, e.u);
        let name_v = vertex_name(g, e.v);
        match coloring.and_then(|c| c.get(id)) {
            Some(c) => {
                let pen = DOT_PEN_COLORS
                    .get(c as usize)
                    .copied()
                    .unwrap_or("#999999");
                out.push_str(&format!(
                    "  {name_u} -- {name_v} [label=\"{c}\", color=\"{pen}\", penwidth=2];\n"
                ));
            }
            None => {
                out.push_str(&format!(
                    "  {name_u} -- {name_v} [style=dashed, color=\"#bbbbbb\"];\n"
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Parses a DOT file produced by [`to_dot`] back into the graph and the
/// coloring.
pub fn from_dot(text: &str) -> Result<(GpGraph, PartialColoring), IoError> {
    let header = text
        .lines()
        .find(|l| l.contains("graph"))
        .ok_or_else(|| IoError::Parse("missing graph header".into()))?;
    let name_start = header
        .find("GP(")
        .ok_or_else(|| IoError::Parse("graph name must be GP(n,k)".into()))?;
    let rest = &header[name_start + 3..];
    let close = rest
        .find(')')
        .ok_or_else(|| IoError::Parse("unterminated GP(n,k) name".into()))?;
    let mut parts = rest[..close].split(',');
    let n: usize = parts
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| IoError::Parse("bad n in graph name".into()))?;
    let k: usize = parts
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| IoError::Parse("bad k in graph name".into()))?;

    let g = GpGraph::build(n, k)?;
    let mut coloring = PartialColoring::for_graph(&g);
    let mut index = std::collections::BTreeMap::new();
    for (id, e) in g.edges().iter().enumerate() {
        index.insert((e.u, e.v), id);
    }

    let parse_vertex = |tok: &str| -> Result<usize, IoError> {
        let tok = tok.trim();
        let (layer, num) = tok.split_at(1);
        let idx: usize = num
            .parse()
            .map_err(|_| IoError::Parse(format!("bad vertex token {tok:?}")))?;
        match layer {
            "u" => Ok(idx),
            "v" => Ok(n + idx),
            _ => Err(IoError::Parse(format!("bad vertex token {tok:?}"))),
        }
    };

    for line in text.lines() {
        let line = line.trim();
        if !line.contains("--") {
            continue;
        }
        let (lhs, rhs) = line.split_once("--").unwrap();
        let attrs = rhs.split_once('[').map(|(_, a)| a).unwrap_or("");
        let u = parse_vertex(lhs)?;
        let v = parse_vertex(rhs.split('[').next().unwrap_or(""))?;
        let key = (u.min(v), u.max(v));
        let id = *index.get(&key).ok_or(IoError::UnknownEdge {
            u,
            v,
            n,
            k,
        })?;
        if let Some(pos) = attrs.find("label=\"") {
            let tail = &attrs[pos + 7..];
            let end = tail
                .find('"')
                .ok_or_else(|| IoError::Parse("unterminated label".into()))?;
            let c: Color = tail[..end]
                .parse()
                .map_err(|_| IoError::Parse("non-numeric label".into()))?;
            if c > MAX_COLOR {
                return Err(IoError::ColorRange(c));
            }
            if coloring.is_assigned(id) {
                return Err(IoError::DuplicateEdge { u, v });
            }
            coloring.set(id, c).expect("fresh edge");
        }
    }
    Ok((g, coloring))
}

// ---------------------------------------------------------------------------
// Sweep CSV
// ---------------------------------------------------------------------------

/// One row of the sweep table.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub t: usize,
    pub method: String,
    pub colors_used: usize,
    pub faithful: bool,
    pub verified: bool,
    pub runtime_ms: u128,
}

pub const SWEEP_CSV_HEADER: &str = "n,k,d,t,method,colors_used,faithful,verified,runtime_ms";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.d,
            self.t,
            self.method,
            self.colors_used,
            self.faithful,
            self.verified,
            self.runtime_ms
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::dispatch;

    #[test]
    fn json_round_trip() {
        let g = GpGraph::build(9, 3).unwrap();
        let report = dispatch(&g).unwrap();
        let file = coloring_to_file(&g, &report.coloring);
        let json = serde_json::to_string_pretty(&file).unwrap();
        let parsed: ColoringFile = serde_json::from_str(&json).unwrap();
        let (_, coloring) = coloring_from_file(&parsed).unwrap();
        assert_eq!(coloring, report.coloring);
    }

    #[test]
    fn json_rejects_unknown_edge() {
        let file = ColoringFile {
            n: 9,
            k: 3,
            edges: vec![EdgeEntry { u: 0, v: 5, color: 1 }],
        };
        assert!(matches!(
            coloring_from_file(&file),
            Err(IoError::UnknownEdge { .. })
        ));
    }

    #[test]
    fn dot_round_trip() {
        let g = GpGraph::build(10, 2).unwrap();
        let report = dispatch(&g).unwrap();
        let dot = to_dot(&g, Some(&report.coloring));
        let (g2, coloring) = from_dot(&dot).unwrap();
        assert_eq!(g2.n(), 10);
        assert_eq!(g2.k(), 2);
        assert_eq!(coloring, report.coloring);
    }

    #[test]
    fn dot_partial_skips_unassigned() {
        let g = GpGraph::build(6, 2).unwrap();
        let mut col = PartialColoring::for_graph(&g);
        col.set(0, 3).unwrap();
        let dot = to_dot(&g, Some(&col));
        let (_, parsed) = from_dot(&dot).unwrap();
        assert_eq!(parsed, col);
    }
}

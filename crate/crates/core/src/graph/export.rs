use std::fmt::Write as _;
use std::str::FromStr;

use super::OrthoGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
    /// One `u v` line per edge, vertices written as sign strings.
    EdgeList,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            "edges" | "edge-list" | "edgelist" => Ok(ExportFormat::EdgeList),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

/// Serializes the graph deterministically. Vertices are labelled by their
/// `+`/`-` string.
pub fn export_graph(g: &OrthoGraph, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::Dot => to_dot(g).into_bytes(),
        ExportFormat::Json => serde_json::to_vec_pretty(g).expect("graph serializes"),
        ExportFormat::EdgeList => {
            let mut out = String::new();
            for (i, j) in g.edges() {
                writeln!(out, "{} {}", g.vertex(i), g.vertex(j)).unwrap();
            }
            out.into_bytes()
        }
    }
}

fn to_dot(g: &OrthoGraph) -> String {
    let mut out = String::new();
    writeln!(out, "graph sh_order_{} {{", 4 * g.k()).unwrap();
    for v in g.vertices() {
        writeln!(out, "  \"{v}\";").unwrap();
    }
    for (i, j) in g.edges() {
        writeln!(out, "  \"{}\" -- \"{}\";", g.vertex(i), g.vertex(j)).unwrap();
    }
    out.push_str("}\n");
    out
}

impl OrthoGraph {
    /// Reads a graph written by [`export_graph`] in JSON form and checks its
    /// invariants.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let g: OrthoGraph = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        g.validate()?;
        Ok(g)
    }
}

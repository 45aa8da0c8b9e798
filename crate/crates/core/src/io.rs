//! JSON and DOT documents for graphs.
//!
//! JSON output is canonical: keys in the order `n`, `chords`, `tcl`, `ears`,
//! `name`; chords as sorted `[u, v]` pairs with `u < v`; no whitespace. The
//! schema ships as `schema/graph.schema.json`. Vertex indices are 0-based.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{MopError, MopGraph};

pub const GRAPH_SCHEMA: &str = include_str!("../schema/graph.schema.json");

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed graph document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid graph: {0}")]
    Invalid(#[from] MopError),
    #[error("document declares {field}={declared} but the graph has {actual}")]
    MetadataMismatch {
        field: &'static str,
        declared: u64,
        actual: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub n: usize,
    pub chords: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tcl: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ears: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl GraphDocument {
    pub fn from_graph(g: &MopGraph, include_metadata: bool) -> GraphDocument {
        GraphDocument {
            n: g.n(),
            chords: g.chords().iter().map(|c| [c.u(), c.v()]).collect(),
            tcl: include_metadata.then(|| g.tcl().get()),
            ears: include_metadata.then(|| g.count_ears()),
            name: None,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> GraphDocument {
        self.name = Some(name.into());
        self
    }

    /// Validates the chords and any declared metadata.
    pub fn to_graph(&self) -> Result<MopGraph, IoError> {
        let g = MopGraph::new(self.n, self.chords.iter().map(|&[u, v]| (u, v)))?;
        if let Some(declared) = self.tcl {
            let actual = g.tcl().get();
            if declared != actual {
                return Err(IoError::MetadataMismatch {
                    field: "tcl",
                    declared,
                    actual,
                });
            }
        }
        if let Some(declared) = self.ears {
            let actual = g.count_ears();
            if declared != actual {
                return Err(IoError::MetadataMismatch {
                    field: "ears",
                    declared: declared as u64,
                    actual: actual as u64,
                });
            }
        }
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph documents always serialize")
    }
}

pub fn to_json(g: &MopGraph, include_metadata: bool) -> String {
    GraphDocument::from_graph(g, include_metadata).to_json()
}

pub fn from_json(text: &str) -> Result<MopGraph, IoError> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    doc.to_graph()
}

const CHORD_COLOR: &str = "#1f5fbf";

/// Rounds to four decimals and clears negative zero so output is stable.
fn coord(x: f64) -> f64 {
    (x * 1e4).round() / 1e4 + 0.0
}

/// A DOT graph with vertices pinned on a circle (vertex 0 at the top, labels
/// increasing clockwise), solid cycle edges and dashed chords.
pub fn to_dot(g: &MopGraph) -> String {
    let n = g.n();
    let radius = (n as f64 * 0.25).max(1.5);
    let mut out = String::new();
    let _ = writeln!(out, "graph mop_{n} {{");
    out.push_str("  layout=neato;\n");
    out.push_str("  node [shape=circle, fontsize=10, width=0.3, fixedsize=true];\n");
    for v in 0..n {
        let angle = std::f64::consts::FRAC_PI_2 - std::f64::consts::TAU * v as f64 / n as f64;
        let (x, y) = (coord(radius * angle.cos()), coord(radius * angle.sin()));
        let _ = writeln!(out, "  {v} [pos=\"{x:.4},{y:.4}!\"];");
    }
    for v in 0..n {
        let _ = writeln!(out, "  {v} -- {} [style=solid, penwidth=2];", (v + 1) % n);
    }
    for c in g.chords() {
        let _ = writeln!(out, "  {} -- {} [style=dashed, color=\"{CHORD_COLOR}\"];", c.u(), c.v());
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_greedy, build_shell};
    use crate::graph::ChordDefect;

    #[test]
    fn json_examples() {
        assert_eq!(
            to_json(&build_shell(6), false),
            r#"{"n":6,"chords":[[0,2],[0,3],[0,4]]}"#
        );
        assert_eq!(
            to_json(&build_greedy(6).graph, true),
            r#"{"n":6,"chords":[[0,2],[0,4],[2,4]],"tcl":6,"ears":3}"#
        );
        assert_eq!(to_json(&build_shell(3), false), r#"{"n":3,"chords":[]}"#);
    }

    #[test]
    fn from_json_errors() {
        assert!(matches!(
            from_json(r#"{"n":6,"chords":[[0,2],[1,3],[0,4]]}"#),
            Err(IoError::Invalid(MopError::CrossingChords { .. }))
        ));
        assert!(matches!(
            from_json(r#"{"n":6,"chords":[[0,2]]}"#),
            Err(IoError::Invalid(MopError::ChordCountMismatch { expected: 3, found: 1 }))
        ));
        assert!(matches!(from_json(r#"{"n":6,"chords":"#), Err(IoError::Parse(_))));
        assert!(matches!(
            from_json(r#"{"n":6,"chords":[[0,2,4]]}"#),
            Err(IoError::Parse(_))
        ));
        assert!(matches!(
            from_json(r#"{"n":6,"chords":[],"extra":1}"#),
            Err(IoError::Parse(_))
        ));
        assert!(matches!(
            from_json(r#"{"n":5,"chords":[[0,2],[0,2]]}"#),
            Err(IoError::Invalid(MopError::InvalidChord {
                defect: ChordDefect::Duplicate,
                ..
            }))
        ));
        assert!(matches!(
            from_json(r#"{"n":6,"chords":[[0,2],[0,3],[0,4]],"tcl":6}"#),
            Err(IoError::MetadataMismatch {
                field: "tcl",
                declared: 6,
                actual: 7
            })
        ));
    }

    #[test]
    fn from_json_accepts_metadata_and_names() {
        let doc = GraphDocument::from_graph(&build_shell(7), true).with_name("shell");
        let text = doc.to_json();
        assert_eq!(
            text,
            r#"{"n":7,"chords":[[0,2],[0,3],[0,4],[0,5]],"tcl":10,"ears":2,"name":"shell"}"#
        );
        assert_eq!(from_json(&text).unwrap(), build_shell(7));
    }

    #[test]
    fn dot_structure() {
        let dot = to_dot(&build_shell(6));
        assert_eq!(dot.matches("pos=").count(), 6);
        assert_eq!(dot.matches("style=solid").count(), 6);
        assert_eq!(dot.matches("style=dashed").count(), 3);
        assert!(dot.contains("0 [pos=\"0.0000,1.5000!\"]"));
        assert!(!dot.contains("-0.0000"));
        assert_eq!(dot, to_dot(&build_shell(6)));
    }

    #[test]
    fn schema_names_the_document_keys() {
        let schema: serde_json::Value = serde_json::from_str(GRAPH_SCHEMA).unwrap();
        let props = schema["properties"].as_object().unwrap();
        for key in ["n", "chords", "tcl", "ears", "name"] {
            assert!(props.contains_key(key), "schema lacks {key}");
        }
        assert_eq!(schema["required"], serde_json::json!(["n", "chords"]));
        assert_eq!(schema["additionalProperties"], serde_json::json!(false));
    }
}

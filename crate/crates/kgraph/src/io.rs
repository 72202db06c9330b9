//! The `.kgraph` document format (canonical JSON) and DOT export.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::KGraph;
use crate::skeleton::{EdgeSpec, Skeleton, SkeletonError, Square, SquareTable};

/// On-disk description of a skeleton plus square table. Unknown fields are
/// rejected; serialisation is canonical (lists sorted by id), so documents
/// round-trip byte-identically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KGraphDocument {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDocument>,
    /// Each square as `[outer_lo, inner_lo, outer_hi, inner_hi]` edge ids.
    pub squares: Vec<[String; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub id: String,
    /// 1-based colour.
    pub colour: usize,
    pub source: String,
    pub range: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error("square references unknown edge id {0:?}")]
    UnknownEdgeId(String),
}

/// Parse a document into skeleton and square table, ready for validation.
pub fn parse(text: &str) -> Result<(Skeleton, SquareTable), IoError> {
    let doc: KGraphDocument = serde_json::from_str(text).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let specs = doc
        .edges
        .iter()
        .map(|e| EdgeSpec::new(&e.id, e.colour, &e.source, &e.range))
        .collect();
    let skeleton = Skeleton::new(doc.k, doc.vertices, specs)?;
    let mut squares = Vec::with_capacity(doc.squares.len());
    for [ol, il, oh, ih] in &doc.squares {
        let ix = |id: &String| {
            skeleton
                .edge_by_id(id)
                .ok_or_else(|| IoError::UnknownEdgeId(id.clone()))
        };
        squares.push(Square {
            outer_lo: ix(ol)?,
            inner_lo: ix(il)?,
            outer_hi: ix(oh)?,
            inner_hi: ix(ih)?,
        });
    }
    Ok((skeleton, SquareTable::new(squares)))
}

/// The canonical document of a validated graph.
pub fn document(g: &KGraph) -> KGraphDocument {
    let sk = g.skeleton();
    let edges = sk
        .edges()
        .iter()
        .map(|e| EdgeDocument {
            id: e.id.clone(),
            colour: e.colour + 1,
            source: sk.vertex_id(e.source).to_string(),
            range: sk.vertex_id(e.range).to_string(),
        })
        .collect();
    let squares = g
        .squares()
        .squares()
        .iter()
        .map(|sq| {
            [
                sk.edge_id(sq.outer_lo).to_string(),
                sk.edge_id(sq.inner_lo).to_string(),
                sk.edge_id(sq.outer_hi).to_string(),
                sk.edge_id(sq.inner_hi).to_string(),
            ]
        })
        .collect();
    KGraphDocument {
        k: g.k(),
        vertices: sk.vertex_ids().to_vec(),
        edges,
        squares,
    }
}

/// Canonical text form: pretty JSON with a trailing newline.
pub fn serialise(g: &KGraph) -> String {
    let mut text =
        serde_json::to_string_pretty(&document(g)).expect("document serialisation is total");
    text.push('\n');
    text
}

const DOT_STYLES: [&str; 3] = ["solid", "dashed", "dotted"];

/// Graphviz rendering: one style per colour (solid, dashed, dotted,
/// repeating), edges drawn from source to range, in id order.
pub fn export_dot(g: &KGraph) -> String {
    let sk = g.skeleton();
    let mut out = String::from("digraph kgraph {\n");
    for v in sk.vertex_ids() {
        out.push_str(&format!("  \"{v}\";\n"));
    }
    for e in sk.edges() {
        let style = DOT_STYLES[e.colour % DOT_STYLES.len()];
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\", style={}];\n",
            sk.vertex_id(e.source),
            sk.vertex_id(e.range),
            e.id,
            style,
        ));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::KGraph;

    #[test]
    fn round_trip_fixtures() {
        for g in [
            fixtures::g1(),
            fixtures::g2(),
            fixtures::g3(),
            fixtures::g3_extended(),
            fixtures::g4(),
            fixtures::g5(),
        ] {
            let text = serialise(&g);
            let (sk, squares) = parse(&text).unwrap();
            let reparsed = KGraph::validate(sk, squares).unwrap();
            assert_eq!(serialise(&reparsed), text);
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"k": 1, "vertices": ["v"], "edges": [], "squares": [], "extra": 1}"#;
        assert!(matches!(parse(text), Err(IoError::Syntax { .. })));
    }

    #[test]
    fn empty_vertex_list_is_a_valid_graph() {
        let text = r#"{"k": 1, "vertices": [], "edges": [], "squares": []}"#;
        let (sk, squares) = parse(text).unwrap();
        let g = KGraph::validate(sk, squares).unwrap();
        assert_eq!(g.skeleton().vertex_count(), 0);
    }

    #[test]
    fn unknown_edge_in_square() {
        let text = r#"{
            "k": 2,
            "vertices": ["v"],
            "edges": [],
            "squares": [["a", "b", "c", "d"]]
        }"#;
        assert_eq!(parse(text).unwrap_err(), IoError::UnknownEdgeId("a".into()));
    }

    #[test]
    fn colour_out_of_range_reported() {
        let text = r#"{
            "k": 1,
            "vertices": ["v"],
            "edges": [{"id": "e", "colour": 2, "source": "v", "range": "v"}],
            "squares": []
        }"#;
        assert!(matches!(
            parse(text),
            Err(IoError::Skeleton(SkeletonError::ColourOutOfRange { .. }))
        ));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse("{\n  \"k\": 2,\n  oops\n}").unwrap_err();
        match err {
            IoError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn dot_export_counts() {
        let g1 = fixtures::g1();
        let dot = export_dot(&g1);
        assert_eq!(dot.matches(" -> ").count(), 17);
        assert_eq!(dot.matches("style=solid").count(), 9);
        assert_eq!(dot.matches("style=dashed").count(), 8);

        let g2 = fixtures::g2();
        let dot = export_dot(&g2);
        assert_eq!(dot.matches(" -> ").count(), 2);
        assert_eq!(dot.matches("style=solid").count(), 1);
        assert_eq!(dot.matches("style=dashed").count(), 1);

        let empty = crate::graph::build_from_directed_graph(vec![], vec![]).unwrap();
        assert_eq!(export_dot(&empty), "digraph kgraph {\n}\n");
    }
}

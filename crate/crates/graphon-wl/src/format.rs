//! JSON documents for step graphons, multigraphs, bi-labeled graphs and tree
//! decompositions.
//!
//! Rationals are written as strings, `"p/q"` or `"p"`. Vertex indices are
//! 0-based.

use graphon_wl_core::bilabeled::BiLabeledGraph;
use graphon_wl_core::treedecomp::TreeDecomposition;
use graphon_wl_core::{Error, MultiGraph, Rational, Result, StepGraphon};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphonDoc {
    masses: Vec<String>,
    weights: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    edges: Vec<(usize, usize, u32)>,
    #[serde(rename = "in", default, skip_serializing_if = "Option::is_none")]
    inputs: Option<Vec<usize>>,
    #[serde(rename = "out", default, skip_serializing_if = "Option::is_none")]
    outputs: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionDoc {
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
    #[serde(default)]
    root: Option<usize>,
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::MalformedDocument(e.to_string())
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(malformed)
}

fn rational(s: &str) -> Result<Rational> {
    s.parse().map_err(|_| malformed(format!("not a rational: {s:?}")))
}

pub fn parse_step_graphon(text: &str) -> Result<StepGraphon> {
    let doc: GraphonDoc = from_json(text)?;
    let masses = doc.masses.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>()?;
    let weights = doc
        .weights
        .iter()
        .map(|row| row.iter().map(|s| rational(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    StepGraphon::new(masses, weights)
}

pub fn step_graphon_to_json(w: &StepGraphon) -> String {
    let doc = GraphonDoc {
        masses: w.masses().iter().map(Rational::to_string).collect(),
        weights: w.weight_rows().iter().map(|row| row.iter().map(Rational::to_string).collect()).collect(),
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

fn graph_of(doc: &GraphDoc) -> Result<MultiGraph> {
    MultiGraph::new(doc.n, doc.edges.iter().copied())
}

fn graph_doc(g: &MultiGraph) -> GraphDoc {
    GraphDoc { n: g.vertex_count(), edges: g.edges().to_vec(), inputs: None, outputs: None }
}

pub fn parse_multigraph(text: &str) -> Result<MultiGraph> {
    let doc: GraphDoc = from_json(text)?;
    if doc.inputs.is_some() || doc.outputs.is_some() {
        return Err(malformed("labels are only allowed on bi-labeled graphs"));
    }
    graph_of(&doc)
}

pub fn multigraph_to_json(g: &MultiGraph) -> String {
    serde_json::to_string(&graph_doc(g)).expect("plain data serializes")
}

/// Missing `"in"` or `"out"` mean no labels of that kind.
pub fn parse_bilabeled(text: &str) -> Result<BiLabeledGraph> {
    let doc: GraphDoc = from_json(text)?;
    let g = graph_of(&doc)?;
    BiLabeledGraph::new(g, doc.inputs.unwrap_or_default(), doc.outputs.unwrap_or_default())
}

pub fn bilabeled_to_json(b: &BiLabeledGraph) -> String {
    let doc = GraphDoc {
        inputs: Some(b.inputs().to_vec()),
        outputs: Some(b.outputs().to_vec()),
        ..graph_doc(b.graph())
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

pub fn parse_tree_decomposition(text: &str) -> Result<TreeDecomposition> {
    let doc: DecompositionDoc = from_json(text)?;
    Ok(TreeDecomposition::new(doc.bags, doc.tree_edges, doc.root))
}

pub fn tree_decomposition_to_json(td: &TreeDecomposition) -> String {
    let doc = DecompositionDoc { bags: td.bags.clone(), tree_edges: td.tree_edges.clone(), root: td.root };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// A step graphon document, or a multigraph document read as the uniform
/// step graphon of a simple graph.
pub fn parse_graphon_or_graph(text: &str) -> Result<StepGraphon> {
    match parse_step_graphon(text) {
        Ok(w) => Ok(w),
        Err(Error::MalformedDocument(first)) => match parse_multigraph(text) {
            Ok(g) => StepGraphon::from_graph(&g),
            Err(Error::MalformedDocument(_)) => Err(Error::MalformedDocument(first)),
            Err(e) => Err(e),
        },
        Err(e) => Err(e),
    }
}

/// A multigraph document, or a step graphon document that encodes a simple graph.
pub fn parse_graph_or_graphon(text: &str) -> Result<MultiGraph> {
    match parse_multigraph(text) {
        Ok(g) => Ok(g),
        Err(Error::MalformedDocument(first)) => match parse_step_graphon(text) {
            Ok(w) => w.to_graph(),
            Err(Error::MalformedDocument(_)) => Err(Error::MalformedDocument(first)),
            Err(e) => Err(e),
        },
        Err(e) => Err(e),
    }
}

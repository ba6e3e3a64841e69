//! File formats: graphs and collections as JSON, graphs as DOT.
//!
//! A set literal is either `{"vertex": "v", "edges": ["a","b"]}` or
//! `{"vertex": "v", "paths": [["a","b"],["a"]]}`; the vertex may be
//! omitted when the members pin it down.  A collection literal is
//! `{"members": [...]}` where each member is a set literal or, as a
//! shorthand for edge sets, a bare array of edge names.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::collections::{EdgeCollection, PathCollection};
use crate::error::{Error, Result};
use crate::exhaustive::{EdgeSet, PathSet};
use crate::graph::{GraphData, KGraph};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetSpec {
    Edges {
        #[serde(skip_serializing_if = "Option::is_none")]
        vertex: Option<String>,
        edges: Vec<String>,
    },
    Paths {
        #[serde(skip_serializing_if = "Option::is_none")]
        vertex: Option<String>,
        paths: Vec<Vec<String>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemberSpec {
    Bare(Vec<String>),
    Set(SetSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CollectionSpec {
    pub members: Vec<MemberSpec>,
}

pub fn load_graph(path: &FsPath) -> Result<(GraphData, KGraph)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<(GraphData, KGraph)> {
    let data: GraphData = serde_json::from_str(text)
        .map_err(|e| Error::Precondition(format!("graph JSON: {e}")))?;
    let graph = data.build().map_err(Error::Invalid)?;
    Ok((data, graph))
}

pub fn save_graph(path: &FsPath, data: &GraphData) -> Result<()> {
    let text = serde_json::to_string_pretty(data).expect("graph data serializes");
    fs::write(path, text)
        .map_err(|e| Error::Precondition(format!("cannot write {}: {e}", path.display())))
}

fn lookup_vertex(g: &KGraph, name: &str) -> Result<crate::graph::VertexId> {
    g.vertex(name)
        .ok_or_else(|| Error::UnknownVertex(name.to_string()))
}

fn lookup_edge(g: &KGraph, name: &str) -> Result<crate::graph::EdgeId> {
    g.edge(name).ok_or_else(|| Error::UnknownEdge(name.to_string()))
}

pub fn parse_edge_set(g: &KGraph, spec: &SetSpec) -> Result<EdgeSet> {
    match spec {
        SetSpec::Edges { vertex, edges } => {
            let ids: BTreeSet<_> = edges
                .iter()
                .map(|n| lookup_edge(g, n))
                .collect::<Result<_>>()?;
            match vertex {
                Some(v) => EdgeSet::new(g, lookup_vertex(g, v)?, ids),
                None => EdgeSet::from_edges(g, ids),
            }
        }
        SetSpec::Paths { .. } => Err(Error::Precondition(
            "expected a set of edges, found a set of paths".into(),
        )),
    }
}

pub fn parse_path_set(g: &KGraph, spec: &SetSpec) -> Result<PathSet> {
    match spec {
        SetSpec::Edges { .. } => Ok(parse_edge_set(g, spec)?.to_path_set(g)),
        SetSpec::Paths { vertex, paths } => {
            let mut set = BTreeSet::new();
            for word in paths {
                let ids: Vec<_> = word
                    .iter()
                    .map(|n| lookup_edge(g, n))
                    .collect::<Result<_>>()?;
                set.insert(g.path_from_word(&ids, None)?);
            }
            match vertex {
                Some(v) => PathSet::new(g, lookup_vertex(g, v)?, set),
                None => PathSet::from_paths(g, set),
            }
        }
    }
}

fn member_to_set_spec(m: &MemberSpec) -> SetSpec {
    match m {
        MemberSpec::Bare(edges) => SetSpec::Edges {
            vertex: None,
            edges: edges.clone(),
        },
        MemberSpec::Set(s) => s.clone(),
    }
}

pub fn parse_edge_collection(g: &KGraph, text: &str) -> Result<EdgeCollection> {
    let spec: CollectionSpec = serde_json::from_str(text)
        .map_err(|e| Error::Precondition(format!("collection JSON: {e}")))?;
    let mut members = BTreeSet::new();
    for m in &spec.members {
        members.insert(parse_edge_set(g, &member_to_set_spec(m))?);
    }
    Ok(EdgeCollection::new(members))
}

pub fn parse_path_collection(g: &KGraph, text: &str) -> Result<PathCollection> {
    let spec: CollectionSpec = serde_json::from_str(text)
        .map_err(|e| Error::Precondition(format!("collection JSON: {e}")))?;
    let mut members = BTreeSet::new();
    for m in &spec.members {
        members.insert(parse_path_set(g, &member_to_set_spec(m))?);
    }
    Ok(PathCollection::new(members))
}

pub fn parse_set_literal(g: &KGraph, text: &str) -> Result<SetSpec> {
    serde_json::from_str(text)
        .map_err(|e| Error::Precondition(format!("set JSON: {e}")))
        .and_then(|spec: SetSpec| {
            // Surface name errors early.
            parse_path_set(g, &spec)?;
            Ok(spec)
        })
}

pub fn edge_set_spec(g: &KGraph, set: &EdgeSet) -> SetSpec {
    SetSpec::Edges {
        vertex: Some(g.vertex_name(set.vertex()).to_string()),
        edges: set.names(g),
    }
}

pub fn path_set_spec(g: &KGraph, set: &PathSet) -> SetSpec {
    SetSpec::Paths {
        vertex: Some(g.vertex_name(set.vertex()).to_string()),
        paths: set
            .paths()
            .iter()
            .map(|p| p.edges().iter().map(|&e| g.edge_name(e).to_string()).collect())
            .collect(),
    }
}

pub fn edge_collection_spec(g: &KGraph, coll: &EdgeCollection) -> CollectionSpec {
    CollectionSpec {
        members: coll
            .members()
            .iter()
            .map(|s| MemberSpec::Set(edge_set_spec(g, s)))
            .collect(),
    }
}

pub fn path_collection_spec(g: &KGraph, coll: &PathCollection) -> CollectionSpec {
    CollectionSpec {
        members: coll
            .members()
            .iter()
            .map(|s| MemberSpec::Set(path_set_spec(g, s)))
            .collect(),
    }
}

const DOT_COLOURS: [&str; 6] = ["black", "red3", "blue3", "forestgreen", "darkorange", "purple"];
const DOT_STYLES: [&str; 3] = ["solid", "dashed", "dotted"];

/// GraphViz rendering with one colour and line style per edge colour.
pub fn export_dot(g: &KGraph) -> String {
    let mut out = String::from("digraph kgraph {\n  rankdir=LR;\n  node [shape=circle];\n");
    for v in g.vertices() {
        out.push_str(&format!("  \"{}\";\n", g.vertex_name(v)));
    }
    for e in g.edges() {
        let c = g.color(e);
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\", color=\"{}\", style=\"{}\", dir=back];\n",
            g.vertex_name(g.source(e)),
            g.vertex_name(g.range(e)),
            g.edge_name(e),
            DOT_COLOURS[(c - 1) % DOT_COLOURS.len()],
            DOT_STYLES[(c - 1) % DOT_STYLES.len()],
        ));
    }
    out.push_str("}\n");
    out
}

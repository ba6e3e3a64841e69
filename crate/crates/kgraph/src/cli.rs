//! The command-line surface.
//!
//! Reports are JSON on stdout; logs go to stderr.  Exit code 0 means
//! every requested check passed, 1 means a mathematical check was
//! refuted and the report carries a certificate, 2 means the request
//! itself could not be run (unreadable file, bad literal, violated
//! precondition).
//!
//! Set and collection arguments take a JSON literal or `@file`.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::boundary::{boundary_paths, verify_ck, verify_tck, BoundaryRep};
use crate::collections::{
    check_efficient, describe_efficiency_violation, edge_satiation, enumerate_efficient,
    enumerate_satiated, hat_contains, min_edge_sets, min_path_sets, satiate, to_efficient,
    to_satiated, EdgeCollection, EfficiencyViolation, Limits, PathCollection,
};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::exhaustive::{
    avoiding_path_edges, enumerate_fe_edge_sets, ext_path, is_exhaustive_general,
    ExhaustiveVerdict,
};
use crate::fixtures;
use crate::graph::{GraphData, KGraph};
use crate::ideals::{enumerate_ideal_labels, intersect_toeplitz, toeplitz_collection};
use crate::io;
use crate::path::Path;
use crate::random::{random_kgraph, RandomSpec};

#[derive(Parser)]
#[command(
    name = "kgraph",
    version,
    about = "Exact combinatorics for finitely aligned higher-rank graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a graph file against the k-graph axioms.
    Validate { graph: PathBuf },

    /// Basic facts: rank, sizes, acyclicity, sources.
    Props { graph: PathBuf },

    /// Enumerate the finite exhaustive edge sets at one or all vertices.
    Fe {
        graph: PathBuf,
        /// Restrict to this vertex.
        #[arg(long)]
        vertex: Option<String>,
        /// Refuse vertices with more outgoing edges than this.
        #[arg(long, default_value_t = 16)]
        max_edges: usize,
    },

    /// Decide exhaustiveness of one set, with an avoiding witness on failure.
    Exhaustive {
        graph: PathBuf,
        /// Set literal or @file.
        #[arg(long)]
        set: String,
        /// Degree bound for the search on cyclic graphs with sources, e.g. "2,2".
        #[arg(long)]
        bound: Option<String>,
    },

    /// The extension set Ext(p; E) of a path against an exhaustive edge set.
    Ext {
        graph: PathBuf,
        /// Comma-separated edge names, or a vertex name for the identity path.
        #[arg(long)]
        path: String,
        /// Edge set literal or @file.
        #[arg(long)]
        set: String,
    },

    /// Check the efficiency conditions for a collection of edge sets.
    EfficientCheck {
        graph: PathBuf,
        #[arg(long)]
        collection: String,
    },

    /// The edge satiation: every exhaustive edge superset of a member.
    Hat {
        graph: PathBuf,
        #[arg(long)]
        collection: String,
    },

    /// The inclusion-minimal members of a collection.
    Min {
        graph: PathBuf,
        #[arg(long)]
        collection: String,
        /// Keep only members that are sets of edges before minimising.
        #[arg(long)]
        edges_only: bool,
    },

    /// The satiation closure of a collection of path sets (acyclic graphs).
    Satiate {
        graph: PathBuf,
        #[arg(long)]
        collection: String,
    },

    /// Enumerate efficient and satiated collections and verify the bijection.
    BijectionVerify { graph: PathBuf },

    /// Enumerate the boundary paths relative to a collection (acyclic graphs).
    Boundary {
        graph: PathBuf,
        #[arg(long, default_value = r#"{"members":[]}"#)]
        collection: String,
    },

    /// Build the boundary representation and verify (TCK1)-(TCK3) and (CK).
    RepVerify {
        graph: PathBuf,
        #[arg(long, default_value = r#"{"members":[]}"#)]
        collection: String,
    },

    /// Decide hat membership through the boundary representation and
    /// compare with the combinatorial answer.
    HatOracle {
        graph: PathBuf,
        #[arg(long)]
        collection: String,
        #[arg(long)]
        set: String,
    },

    /// Enumerate the gauge-invariant ideal labels (H, B).
    Ideals {
        graph: PathBuf,
        #[arg(long, default_value = r#"{"members":[]}"#)]
        collection: String,
    },

    /// The Toeplitz-type collection of a colour set, optionally
    /// intersected with a second one; the result is checked efficient.
    Toeplitz {
        graph: PathBuf,
        /// Comma-separated colours, e.g. "1,2".
        #[arg(long)]
        colors: String,
        /// Second colour set; the report covers the intersection label.
        #[arg(long)]
        intersect_with: Option<String>,
    },

    /// Generate a random k-graph, deterministic per seed.
    Gen {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        vertices: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to strictly upper-triangular (acyclic) skeletons.
        #[arg(long)]
        acyclic: bool,
        /// Write the graph here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Export the skeleton as Graphviz DOT.
    ExportDot {
        graph: PathBuf,
        /// Write the DOT text here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Print a named fixture graph, or list the catalog.
    Fixture {
        name: Option<String>,
        /// List the available fixtures.
        #[arg(long)]
        list: bool,
        /// Write the graph here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Outcome {
    report: Option<Value>,
    code: i32,
}

fn pass(report: Value) -> Outcome {
    Outcome {
        report: Some(report),
        code: 0,
    }
}

fn refuted(report: Value) -> Outcome {
    Outcome {
        report: Some(report),
        code: 1,
    }
}

fn undecided(report: Value) -> Outcome {
    Outcome {
        report: Some(report),
        code: 2,
    }
}

/// Raw non-JSON output (DOT text, graph files) already printed by the
/// handler.
fn quiet() -> Outcome {
    Outcome {
        report: None,
        code: 0,
    }
}

/// Prints to stdout, shrugging off a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn emit_report(report: &Value) {
    emit(&serde_json::to_string_pretty(report).expect("report"));
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(out) => {
            if let Some(report) = &out.report {
                emit_report(report);
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            emit_report(&json!({ "ok": false, "error": e.to_string() }));
            2
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<Outcome> {
    match cmd {
        Cmd::Validate { graph } => cmd_validate(&graph),
        Cmd::Props { graph } => cmd_props(&graph),
        Cmd::Fe {
            graph,
            vertex,
            max_edges,
        } => cmd_fe(&graph, vertex.as_deref(), max_edges),
        Cmd::Exhaustive { graph, set, bound } => cmd_exhaustive(&graph, &set, bound.as_deref()),
        Cmd::Ext { graph, path, set } => cmd_ext(&graph, &path, &set),
        Cmd::EfficientCheck { graph, collection } => cmd_efficient_check(&graph, &collection),
        Cmd::Hat { graph, collection } => cmd_hat(&graph, &collection),
        Cmd::Min {
            graph,
            collection,
            edges_only,
        } => cmd_min(&graph, &collection, edges_only),
        Cmd::Satiate { graph, collection } => cmd_satiate(&graph, &collection),
        Cmd::BijectionVerify { graph } => cmd_bijection_verify(&graph),
        Cmd::Boundary { graph, collection } => cmd_boundary(&graph, &collection),
        Cmd::RepVerify { graph, collection } => cmd_rep_verify(&graph, &collection),
        Cmd::HatOracle {
            graph,
            collection,
            set,
        } => cmd_hat_oracle(&graph, &collection, &set),
        Cmd::Ideals { graph, collection } => cmd_ideals(&graph, &collection),
        Cmd::Toeplitz {
            graph,
            colors,
            intersect_with,
        } => cmd_toeplitz(&graph, &colors, intersect_with.as_deref()),
        Cmd::Gen {
            k,
            vertices,
            density,
            seed,
            acyclic,
            out,
        } => cmd_gen(k, vertices, density, seed, acyclic, out.as_deref()),
        Cmd::ExportDot { graph, out } => cmd_export_dot(&graph, out.as_deref()),
        Cmd::Fixture { name, list, out } => cmd_fixture(name.as_deref(), list, out.as_deref()),
    }
}

/// Resolves `@file` indirection for literal arguments.
fn read_literal(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("cannot read {path}: {e}"))),
        None => Ok(text.to_string()),
    }
}

/// A path argument: a vertex name for an identity path, otherwise a
/// comma-separated word of edge names.
fn parse_path_arg(g: &KGraph, text: &str) -> Result<Path> {
    let t = text.trim();
    if let Some(v) = g.vertex(t) {
        return Ok(g.vertex_path(v));
    }
    let word: Vec<_> = t
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| g.edge(name).ok_or_else(|| Error::UnknownEdge(name.to_string())))
        .collect::<Result<_>>()?;
    if word.is_empty() {
        return Err(Error::Precondition(format!("cannot read a path from {t:?}")));
    }
    g.path_from_word(&word, None)
}

fn parse_degree_arg(g: &KGraph, text: &str) -> Result<Degree> {
    let coords: Vec<u32> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("bad degree coordinate {t:?}")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != g.rank() {
        return Err(Error::Precondition(format!(
            "degree {text:?} has {} coordinates, the graph has rank {}",
            coords.len(),
            g.rank()
        )));
    }
    Ok(Degree::new(coords))
}

fn parse_colours_arg(g: &KGraph, text: &str) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for t in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let c: usize = t
            .parse()
            .map_err(|_| Error::Precondition(format!("bad colour {t:?}")))?;
        if c == 0 || c > g.rank() {
            return Err(Error::Precondition(format!("colour {c} is out of range")));
        }
        out.insert(c);
    }
    Ok(out)
}

/// The boundary-path commands are only meaningful for efficient
/// collections; anything else is rejected as a precondition failure.
fn require_efficient(g: &KGraph, coll: &EdgeCollection) -> Result<()> {
    match check_efficient(g, coll)? {
        None => Ok(()),
        Some(v) => Err(Error::Precondition(format!(
            "collection is not efficient: {}",
            describe_efficiency_violation(g, &v)
        ))),
    }
}

fn edge_set_value(g: &KGraph, set: &crate::exhaustive::EdgeSet) -> Value {
    serde_json::to_value(io::edge_set_spec(g, set)).expect("set spec")
}

fn path_set_value(g: &KGraph, set: &crate::exhaustive::PathSet) -> Value {
    serde_json::to_value(io::path_set_spec(g, set)).expect("set spec")
}

fn edge_collection_value(g: &KGraph, coll: &EdgeCollection) -> Value {
    serde_json::to_value(io::edge_collection_spec(g, coll)).expect("collection spec")
}

fn path_collection_value(g: &KGraph, coll: &PathCollection) -> Value {
    serde_json::to_value(io::path_collection_spec(g, coll)).expect("collection spec")
}

fn cmd_validate(path: &FsPath) -> Result<Outcome> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))?;
    let data: GraphData = serde_json::from_str(&text)
        .map_err(|e| Error::Precondition(format!("graph JSON: {e}")))?;
    match data.build() {
        Ok(g) => Ok(pass(json!({
            "ok": true,
            "rank": g.rank(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "squares": data.squares.len(),
        }))),
        Err(report) => Ok(refuted(json!({
            "ok": false,
            "issues": report.issues.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
        }))),
    }
}

fn cmd_props(path: &FsPath) -> Result<Outcome> {
    let (data, g) = io::load_graph(path)?;
    let props = g.properties();
    let sources: Vec<_> = g
        .sources()
        .into_iter()
        .map(|v| g.vertex_name(v).to_string())
        .collect();
    Ok(pass(json!({
        "ok": true,
        "rank": g.rank(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "squares": data.squares.len(),
        "row_finite": props.row_finite,
        "finitely_aligned": props.finitely_aligned,
        "acyclic": props.acyclic,
        "has_sources": props.has_sources,
        "sources": sources,
        "cycle_vertex": g.find_cycle_vertex().map(|v| g.vertex_name(v).to_string()),
    })))
}

fn cmd_fe(path: &FsPath, vertex: Option<&str>, max_edges: usize) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let targets: Vec<_> = match vertex {
        Some(name) => vec![g
            .vertex(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))?],
        None => g.vertices().collect(),
    };
    let mut by_vertex = serde_json::Map::new();
    let mut total = 0;
    for v in targets {
        let sets = enumerate_fe_edge_sets(&g, v, max_edges)?;
        total += sets.len();
        by_vertex.insert(
            g.vertex_name(v).to_string(),
            Value::Array(sets.iter().map(|s| edge_set_value(&g, s)).collect()),
        );
    }
    Ok(pass(json!({ "ok": true, "total": total, "sets": by_vertex })))
}

fn cmd_exhaustive(path: &FsPath, set: &str, bound: Option<&str>) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let spec = io::parse_set_literal(&g, &read_literal(set)?)?;
    if let io::SetSpec::Edges { .. } = spec {
        let set = io::parse_edge_set(&g, &spec)?;
        return Ok(match avoiding_path_edges(&g, &set)? {
            None => pass(json!({ "ok": true, "exhaustive": true })),
            Some(w) => refuted(json!({
                "ok": false,
                "exhaustive": false,
                "witness": g.path_name(&w),
            })),
        });
    }
    let set = io::parse_path_set(&g, &spec)?;
    let bound = bound.map(|b| parse_degree_arg(&g, b)).transpose()?;
    Ok(match is_exhaustive_general(&g, &set, bound.as_ref())? {
        ExhaustiveVerdict::Exhaustive => pass(json!({ "ok": true, "exhaustive": true })),
        ExhaustiveVerdict::NotExhaustive { witness } => refuted(json!({
            "ok": false,
            "exhaustive": false,
            "witness": g.path_name(&witness),
        })),
        ExhaustiveVerdict::Unknown { searched } => undecided(json!({
            "ok": false,
            "exhaustive": "unknown",
            "searched": format!("{searched}"),
        })),
    })
}

fn cmd_ext(path: &FsPath, path_arg: &str, set: &str) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let p = parse_path_arg(&g, path_arg)?;
    let set = io::parse_edge_set(&g, &io::parse_set_literal(&g, &read_literal(set)?)?)?;
    let ext = ext_path(&g, &p, &set)?;
    Ok(pass(json!({
        "ok": true,
        "path": g.path_name(&p),
        "ext": edge_set_value(&g, &ext),
    })))
}

fn cmd_efficient_check(path: &FsPath, collection: &str) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let coll = io::parse_edge_collection(&g, &read_literal(collection)?)?;
    match check_efficient(&g, &coll) {
        Ok(None) => Ok(pass(json!({
            "ok": true,
            "efficient": true,
            "members": coll.len(),
        }))),
        Ok(Some(v)) => {
            let kind = match v {
                EfficiencyViolation::NotAntichain { .. } => "antichain",
                EfficiencyViolation::Extension { .. } => "extension",
                EfficiencyViolation::Substitution { .. } => "substitution",
            };
            Ok(refuted(json!({
                "ok": false,
                "efficient": false,
                "violated": kind,
                "certificate": describe_efficiency_violation(&g, &v),
            })))
        }
        Err(Error::NotExhaustive { vertex, witness }) => Ok(refuted(json!({
            "ok": false,
            "efficient": false,
            "violated": "membership",
            "certificate": format!(
                "member at {vertex} is not exhaustive (avoided by {witness})"
            ),
        }))),
        Err(e) => Err(e),
    }
}

fn cmd_hat(path: &FsPath, collection: &str) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let coll = io::parse_edge_collection(&g, &read_literal(collection)?)?;
    let hat = edge_satiation(&g, &coll, &Limits::default())?;
    Ok(pass(json!({
        "ok": true,
        "count": hat.len(),
        "members": hat.iter().map(|s| edge_set_value(&g, s)).collect::<Vec<_>>(),
    })))
}

fn cmd_min(path: &FsPath, collection: &str, edges_only: bool) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let coll = io::parse_path_collection(&g, &read_literal(collection)?)?;
    let report = if edges_only {
        let minimal = min_edge_sets(&coll.edge_members());
        json!({
            "ok": true,
            "count": minimal.len(),
            "members": minimal.iter().map(|s| edge_set_value(&g, s)).collect::<Vec<_>>(),
        })
    } else {
        let members: Vec<_> = coll.members().iter().cloned().collect();
        let minimal = min_path_sets(&members);
        json!({
            "ok": true,
            "count": minimal.len(),
            "members": minimal.iter().map(|s| path_set_value(&g, s)).collect::<Vec<_>>(),
        })
    };
    Ok(pass(report))
}

fn cmd_satiate(path: &FsPath, collection: &str) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let coll = io::parse_path_collection(&g, &read_literal(collection)?)?;
    let closed = satiate(&g, &coll, &Limits::default())?;
    Ok(pass(json!({
        "ok": true,
        "count": closed.len(),
        "collection": path_collection_value(&g, &closed),
    })))
}

fn cmd_bijection_verify(path: &FsPath) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let limits = Limits::default();
    let efficient = enumerate_efficient(&g, &limits)?;
    let satiated = enumerate_satiated(&g, &limits)?;
    let satiated_set: BTreeSet<_> = satiated.iter().map(|c| c.members().clone()).collect();
    let mut images = BTreeSet::new();
    for e in &efficient {
        let closure = to_satiated(&g, e, &limits)?;
        if !satiated_set.contains(closure.members()) {
            return Ok(refuted(json!({
                "ok": false,
                "certificate": "a satiation closure is missing from the satiated enumeration",
                "collection": edge_collection_value(&g, e),
            })));
        }
        let back = to_efficient(&g, &closure, &limits)?;
        if back.members() != e.members() {
            return Ok(refuted(json!({
                "ok": false,
                "certificate": "minimising the closure does not return the collection",
                "collection": edge_collection_value(&g, e),
            })));
        }
        images.insert(closure.members().clone());
    }
    if images.len() != efficient.len() || efficient.len() != satiated.len() {
        return Ok(refuted(json!({
            "ok": false,
            "certificate": "count mismatch",
            "efficient": efficient.len(),
            "satiated": satiated.len(),
            "images": images.len(),
        })));
    }
    Ok(pass(json!({
        "ok": true,
        "efficient": efficient.len(),
        "satiated": satiated.len(),
        "summary": format!("efficient = satiated = {}", efficient.len()),
    })))
}

fn cmd_boundary(path: &FsPath, collection: &str) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let coll = io::parse_edge_collection(&g, &read_literal(collection)?)?;
    require_efficient(&g, &coll)?;
    let paths = boundary_paths(&g, &coll)?;
    Ok(pass(json!({
        "ok": true,
        "count": paths.len(),
        "paths": paths.iter().map(|p| g.path_name(p)).collect::<Vec<_>>(),
    })))
}

fn cmd_rep_verify(path: &FsPath, collection: &str) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let coll = io::parse_edge_collection(&g, &read_literal(collection)?)?;
    require_efficient(&g, &coll)?;
    let rep = BoundaryRep::new(&g, &coll)?;
    let mut failures = verify_tck(&g, &rep)?;
    failures.extend(verify_ck(&g, &rep, &coll));
    if failures.is_empty() {
        Ok(pass(json!({ "ok": true, "dimension": rep.dim() })))
    } else {
        Ok(refuted(json!({
            "ok": false,
            "dimension": rep.dim(),
            "failures": failures,
        })))
    }
}

fn cmd_hat_oracle(path: &FsPath, collection: &str, set: &str) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let coll = io::parse_edge_collection(&g, &read_literal(collection)?)?;
    let set = io::parse_edge_set(&g, &io::parse_set_literal(&g, &read_literal(set)?)?)?;
    require_efficient(&g, &coll)?;
    let rep = BoundaryRep::new(&g, &coll)?;
    let mut failures = verify_tck(&g, &rep)?;
    failures.extend(verify_ck(&g, &rep, &coll));
    if !failures.is_empty() {
        return Ok(refuted(json!({
            "ok": false,
            "certificate": "the boundary representation fails its axioms",
            "failures": failures,
        })));
    }
    let support = rep.ck_product_support_edges(&set);
    let by_matrix = support.is_empty();
    let by_closure = hat_contains(&g, &coll, &set)?;
    if by_matrix != by_closure {
        return Ok(refuted(json!({
            "ok": false,
            "certificate": "matrix and combinatorial verdicts disagree",
            "matrix": by_matrix,
            "combinatorial": by_closure,
            "surviving_basis": support
                .iter()
                .map(|&j| g.path_name(&rep.basis()[j]))
                .collect::<Vec<_>>(),
        })));
    }
    Ok(pass(json!({ "ok": true, "in_hat": by_matrix })))
}

fn cmd_ideals(path: &FsPath, collection: &str) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let coll = io::parse_edge_collection(&g, &read_literal(collection)?)?;
    require_efficient(&g, &coll)?;
    let labels = enumerate_ideal_labels(&g, &coll, &Limits::default())?;
    let rendered: Vec<Value> = labels
        .iter()
        .map(|l| {
            json!({
                "h": l.h.iter().map(|&v| g.vertex_name(v).to_string()).collect::<Vec<_>>(),
                "b": l.b.members().iter().map(|s| {
                    json!({ "edges": s.names(&g) })
                }).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(pass(json!({ "ok": true, "count": labels.len(), "labels": rendered })))
}

fn cmd_toeplitz(path: &FsPath, colors: &str, intersect_with: Option<&str>) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let k1 = parse_colours_arg(&g, colors)?;
    let (colours, coll) = match intersect_with {
        Some(text) => {
            let k2 = parse_colours_arg(&g, text)?;
            intersect_toeplitz(&g, &k1, &k2)?
        }
        None => (k1.clone(), toeplitz_collection(&g, &k1)?),
    };
    if let Some(v) = check_efficient(&g, &coll)? {
        return Ok(refuted(json!({
            "ok": false,
            "certificate": describe_efficiency_violation(&g, &v),
        })));
    }
    Ok(pass(json!({
        "ok": true,
        "colors": colours.iter().copied().collect::<Vec<_>>(),
        "efficient": true,
        "collection": edge_collection_value(&g, &coll),
    })))
}

fn cmd_gen(
    k: usize,
    vertices: usize,
    density: f64,
    seed: u64,
    acyclic: bool,
    out: Option<&FsPath>,
) -> Result<Outcome> {
    let spec = RandomSpec {
        k,
        vertices,
        density,
        seed,
        acyclic,
    };
    let (data, g) = random_kgraph(&spec)?;
    eprintln!(
        "generated a {}-graph with {} vertices and {} edges",
        g.rank(),
        g.vertex_count(),
        g.edge_count()
    );
    match out {
        Some(path) => {
            io::save_graph(path, &data)?;
            Ok(pass(json!({
                "ok": true,
                "written": path.display().to_string(),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
            })))
        }
        None => {
            emit(&serde_json::to_string_pretty(&data).expect("graph"));
            Ok(quiet())
        }
    }
}

fn cmd_export_dot(path: &FsPath, out: Option<&FsPath>) -> Result<Outcome> {
    let (_, g) = io::load_graph(path)?;
    let dot = io::export_dot(&g);
    match out {
        Some(target) => {
            fs::write(target, dot).map_err(|e| {
                Error::Precondition(format!("cannot write {}: {e}", target.display()))
            })?;
            Ok(pass(json!({ "ok": true, "written": target.display().to_string() })))
        }
        None => {
            emit(dot.trim_end());
            Ok(quiet())
        }
    }
}

fn cmd_fixture(name: Option<&str>, list: bool, out: Option<&FsPath>) -> Result<Outcome> {
    if list {
        let catalog: Vec<Value> = fixtures::corpus_acyclic()
            .iter()
            .chain(fixtures::corpus_cyclic().iter())
            .map(|f| {
                json!({
                    "name": f.name,
                    "note": f.note,
                    "rank": f.graph.rank(),
                    "vertices": f.graph.vertex_count(),
                    "edges": f.graph.edge_count(),
                })
            })
            .collect();
        return Ok(pass(json!({ "ok": true, "fixtures": catalog })));
    }
    let name = name.ok_or_else(|| {
        Error::Precondition("a fixture name is required unless --list is given".into())
    })?;
    let g = fixtures::fixture(name).ok_or_else(|| {
        Error::Precondition(format!(
            "unknown fixture {name:?}; available: {}",
            fixtures::fixture_names().join(", ")
        ))
    })?;
    let data = g.to_data();
    match out {
        Some(path) => {
            io::save_graph(path, &data)?;
            Ok(pass(json!({ "ok": true, "written": path.display().to_string() })))
        }
        None => {
            emit(&serde_json::to_string_pretty(&data).expect("graph"));
            Ok(quiet())
        }
    }
}

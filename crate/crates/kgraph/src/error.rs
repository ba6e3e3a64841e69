//! Crate-wide error type.

use crate::degree::Degree;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not composable: first path has source {source_vertex}, second has range {range_vertex}")]
    NotComposable { source_vertex: String, range_vertex: String },

    #[error("degree {wanted} is not dominated by the path degree {have}")]
    DegreeNotDominated { wanted: Degree, have: Degree },

    #[error("paths have different ranges: {0} vs {1}")]
    RangeMismatch(String, String),

    #[error("edge {edge} has range {actual}, expected {expected}")]
    MixedRanges {
        edge: String,
        expected: String,
        actual: String,
    },

    #[error("set at vertex {vertex} is not exhaustive (avoided by {witness})")]
    NotExhaustive { vertex: String, witness: String },

    #[error("operation requires an acyclic graph (skeleton has a directed cycle through {0})")]
    CyclicGraph(String),

    #[error("operation requires a graph with no sources (vertex {0} is a source)")]
    HasSources(String),

    #[error("degree bound required: unbounded path enumeration on a cyclic graph")]
    BoundRequired,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),

    #[error("unknown edge {0:?}")]
    UnknownEdge(String),

    #[error("not a member: {0}")]
    NotAMember(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("graph failed validation:\n{0}")]
    Invalid(crate::graph::ValidationReport),

    #[error("could not generate a graph: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

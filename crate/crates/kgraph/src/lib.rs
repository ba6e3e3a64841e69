//! Exact combinatorics for finite higher-rank graphs.
//!
//! The crate models finite k-coloured graphs whose factorisation squares
//! present a rank-k graph (a k-graph): a small category with a degree
//! functor satisfying the unique factorisation property.  On top of the
//! path engine it implements the combinatorics used to present the
//! associated relative Cuntz-Krieger algebras by finitely many relations:
//!
//! * exhaustive sets of paths and edges, decided exactly (the edge case
//!   works on cyclic graphs through a finite avoidance automaton);
//! * efficient collections of edge sets and their edge satiations;
//! * satiated collections of path sets, the satiation closure, and the
//!   bijection between efficient and satiated collections;
//! * boundary paths and an exact integer matrix representation used to
//!   verify the Toeplitz-Cuntz-Krieger and Cuntz-Krieger relations;
//! * hereditary/saturated vertex sets and gauge-invariant ideal labels.
//!
//! Everything is exact: sets are ordered containers, matrices have
//! integer entries, and every check either proves its verdict or returns
//! a certificate.

pub mod boundary;
pub mod cli;
pub mod collections;
pub mod degree;
pub mod error;
pub mod exhaustive;
pub mod fixtures;
pub mod graph;
pub mod ideals;
pub mod io;
pub mod path;
pub mod random;

pub use degree::Degree;
pub use error::{Error, Result};
pub use graph::{EdgeId, GraphData, GraphProperties, KGraph, ValidationIssue, ValidationReport, VertexId};
pub use path::Path;

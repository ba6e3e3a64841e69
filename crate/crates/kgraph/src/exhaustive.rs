//! Exhaustive sets, extension sets and substitution.
//!
//! A finite set `E` of nonidentity paths with common range `v` is
//! exhaustive when every path in `vΛ` has a common extension with some
//! member.  Sets of edges get an exact decision procedure on every
//! graph (cyclic or not) via a finite automaton over avoidance states;
//! sets of general paths get an exact answer on acyclic graphs and on
//! graphs without sources, and a bounded search elsewhere.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, KGraph, VertexId};
use crate::path::Path;

/// A finite set of edges with common range.  May be empty (an empty
/// set is never exhaustive but is a legal value).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSet {
    vertex: VertexId,
    edges: BTreeSet<EdgeId>,
}

impl EdgeSet {
    pub fn new(g: &KGraph, vertex: VertexId, edges: BTreeSet<EdgeId>) -> Result<EdgeSet> {
        for &e in &edges {
            if g.range(e) != vertex {
                return Err(Error::MixedRanges {
                    edge: g.edge_name(e).to_string(),
                    expected: g.vertex_name(vertex).to_string(),
                    actual: g.vertex_name(g.range(e)).to_string(),
                });
            }
        }
        Ok(EdgeSet { vertex, edges })
    }

    /// Infers the common range from the members; `edges` must be nonempty.
    pub fn from_edges(g: &KGraph, edges: BTreeSet<EdgeId>) -> Result<EdgeSet> {
        let first = *edges.iter().next().ok_or(Error::Precondition(
            "cannot infer the vertex of an empty edge set".into(),
        ))?;
        EdgeSet::new(g, g.range(first), edges)
    }

    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn edges(&self) -> &BTreeSet<EdgeId> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.vertex == other.vertex && self.edges.is_subset(&other.edges)
    }

    pub fn to_path_set(&self, g: &KGraph) -> PathSet {
        PathSet {
            vertex: self.vertex,
            paths: self.edges.iter().map(|&e| g.edge_path(e)).collect(),
        }
    }

    pub fn names(&self, g: &KGraph) -> Vec<String> {
        self.edges.iter().map(|&e| g.edge_name(e).to_string()).collect()
    }
}

/// A finite set of nonidentity paths with common range.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathSet {
    vertex: VertexId,
    paths: BTreeSet<Path>,
}

impl PathSet {
    pub fn new(g: &KGraph, vertex: VertexId, paths: BTreeSet<Path>) -> Result<PathSet> {
        for p in &paths {
            if p.range() != vertex {
                return Err(Error::MixedRanges {
                    edge: g.path_name(p),
                    expected: g.vertex_name(vertex).to_string(),
                    actual: g.vertex_name(p.range()).to_string(),
                });
            }
            if p.is_vertex() {
                return Err(Error::Precondition(format!(
                    "identity path at {} is not allowed as a member",
                    g.vertex_name(vertex)
                )));
            }
        }
        Ok(PathSet { vertex, paths })
    }

    pub fn from_paths(g: &KGraph, paths: BTreeSet<Path>) -> Result<PathSet> {
        let first = paths.iter().next().ok_or(Error::Precondition(
            "cannot infer the vertex of an empty path set".into(),
        ))?;
        let vertex = first.range();
        PathSet::new(g, vertex, paths)
    }

    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn paths(&self) -> &BTreeSet<Path> {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn is_subset(&self, other: &PathSet) -> bool {
        self.vertex == other.vertex && self.paths.is_subset(&other.paths)
    }

    /// Some edge set when every member is a single edge.
    pub fn as_edge_set(&self) -> Option<EdgeSet> {
        let mut edges = BTreeSet::new();
        for p in &self.paths {
            edges.insert(p.as_edge()?);
        }
        Some(EdgeSet {
            vertex: self.vertex,
            edges,
        })
    }

    pub fn names(&self, g: &KGraph) -> Vec<String> {
        self.paths.iter().map(|p| g.path_name(p)).collect()
    }
}

/// Outcome of an exhaustiveness test on a set of general paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExhaustiveVerdict {
    /// Exhaustive, exactly.
    Exhaustive,
    /// Not exhaustive; `witness` has no common extension with any member.
    NotExhaustive { witness: Path },
    /// No avoiding path of degree at most `searched`, but the graph has
    /// cycles and sources, so no finite bound is conclusive.
    Unknown { searched: Degree },
}

impl ExhaustiveVerdict {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self, ExhaustiveVerdict::Exhaustive)
    }
}

/// Per-colour avoidance bookkeeping for the edge-set automaton.  For a
/// path `λ` from `v` to `w` and a tracked colour `i`, the state is
/// either `None`, meaning the colour-`i` prefix of any extension of `λ`
/// is already fixed and is not a member, or a map sending each edge
/// `g` in `wΛ` of colour `i` to the member that `λg` pulls back onto,
/// with non-witnessing edges absent.
type ColourState = Option<BTreeMap<EdgeId, EdgeId>>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct AvoidState {
    vertex: VertexId,
    tracks: Vec<ColourState>,
}

const MAX_AUTOMATON_STATES: usize = 1 << 20;

/// Searches for a path avoiding every member of `set`, meaning the
/// colour-`i` prefix never lands in the set for any tracked colour.
/// Returns `None` when the set is exhaustive.  Exact on every finite
/// graph: the state space is finite, and the state of a path
/// determines the states of all its extensions.
pub fn avoiding_path_edges(g: &KGraph, set: &EdgeSet) -> Result<Option<Path>> {
    let cs: BTreeSet<usize> = set.edges.iter().map(|&e| g.color(e)).collect();
    // An empty set is avoided by the identity path.
    if cs.is_empty() {
        return Ok(Some(g.vertex_path(set.vertex)));
    }
    let colours: Vec<usize> = cs.into_iter().collect();

    let initial = AvoidState {
        vertex: set.vertex,
        tracks: colours
            .iter()
            .map(|&c| {
                Some(
                    set.edges
                        .iter()
                        .filter(|&&e| g.color(e) == c)
                        .map(|&e| (e, e))
                        .collect::<BTreeMap<_, _>>(),
                )
            })
            .collect(),
    };

    let avoiding = |s: &AvoidState| {
        s.tracks
            .iter()
            .all(|t| t.as_ref().map_or(true, |m| m.is_empty()))
    };

    let mut parents: HashMap<AvoidState, Option<(AvoidState, EdgeId)>> = HashMap::new();
    parents.insert(initial.clone(), None);
    let mut queue = VecDeque::from([initial]);

    while let Some(state) = queue.pop_front() {
        if avoiding(&state) {
            // Rebuild the avoiding word by walking the parent chain.
            let mut word = Vec::new();
            let mut cur = state;
            while let Some(Some((prev, e))) = parents.get(&cur).cloned() {
                word.push(e);
                cur = prev;
            }
            word.reverse();
            return Ok(Some(g.path_from_word(&word, Some(set.vertex))?));
        }
        'next_edge: for &h in g.edges_at(state.vertex) {
            let hc = g.color(h);
            let mut tracks = Vec::with_capacity(state.tracks.len());
            for (idx, track) in state.tracks.iter().enumerate() {
                let c = colours[idx];
                let next = match track {
                    None => None,
                    Some(map) => {
                        if c == hc {
                            if map.contains_key(&h) {
                                // The colour-c prefix of every extension
                                // through h is a member: prune.
                                continue 'next_edge;
                            }
                            None
                        } else {
                            let mut next = BTreeMap::new();
                            for g2 in g.edges_at_color(g.source(h), c) {
                                let (pulled, _) = g.swap(h, g2);
                                if let Some(&member) = map.get(&pulled) {
                                    next.insert(g2, member);
                                }
                            }
                            Some(next)
                        }
                    }
                };
                tracks.push(next);
            }
            let next_state = AvoidState {
                vertex: g.source(h),
                tracks,
            };
            if !parents.contains_key(&next_state) {
                if parents.len() >= MAX_AUTOMATON_STATES {
                    return Err(Error::ResourceLimit(
                        "avoidance automaton exceeded the state budget".into(),
                    ));
                }
                parents.insert(next_state.clone(), Some((state.clone(), h)));
                queue.push_back(next_state);
            }
        }
    }
    Ok(None)
}

/// Exact exhaustiveness for a set of edges, on any finite graph.
pub fn is_exhaustive_edges(g: &KGraph, set: &EdgeSet) -> Result<bool> {
    Ok(avoiding_path_edges(g, set)?.is_none())
}

fn avoids(g: &KGraph, p: &Path, set: &PathSet) -> bool {
    set.paths.iter().all(|m| !g.compatible(p, m))
}

/// Exhaustiveness for a set of general paths.
///
/// * Acyclic graph: the full path list is finite, so the answer is
///   exact.
/// * Graph without sources: avoidance is preserved by extension and
///   every path extends to degree `m* = join of the member degrees`,
///   so truncating shows that an avoider exists iff one of degree
///   at most `m*` exists.  Exact, `bound` is ignored.
/// * Otherwise the search runs up to `bound` and a clean sweep is
///   reported as `Unknown`; a missing bound is an error.
pub fn is_exhaustive_general(
    g: &KGraph,
    set: &PathSet,
    bound: Option<&Degree>,
) -> Result<ExhaustiveVerdict> {
    if set.paths.is_empty() {
        return Ok(ExhaustiveVerdict::NotExhaustive {
            witness: g.vertex_path(set.vertex),
        });
    }
    let search = |limit: Option<&Degree>| -> Result<Option<Path>> {
        Ok(g.paths_from(set.vertex, limit)?
            .into_iter()
            .find(|p| avoids(g, p, set)))
    };
    if g.is_acyclic() {
        return Ok(match search(None)? {
            Some(witness) => ExhaustiveVerdict::NotExhaustive { witness },
            None => ExhaustiveVerdict::Exhaustive,
        });
    }
    if g.sources().is_empty() {
        let mut m_star = Degree::zero(g.rank());
        for p in &set.paths {
            m_star = m_star.join(p.degree());
        }
        return Ok(match search(Some(&m_star))? {
            Some(witness) => ExhaustiveVerdict::NotExhaustive { witness },
            None => ExhaustiveVerdict::Exhaustive,
        });
    }
    let bound = bound.ok_or(Error::BoundRequired)?;
    Ok(match search(Some(bound))? {
        Some(witness) => ExhaustiveVerdict::NotExhaustive { witness },
        None => ExhaustiveVerdict::Unknown {
            searched: bound.clone(),
        },
    })
}

/// The extension set of an edge `f` not in `E`: the edges `g` in
/// `s(f)Λ` of the other colours whose square partner against `f` is a
/// member.  Requires `E` exhaustive at `r(f)`; the result is then
/// exhaustive at `s(f)`.
pub fn ext_edge(g: &KGraph, f: EdgeId, set: &EdgeSet) -> Result<EdgeSet> {
    if g.range(f) != set.vertex {
        return Err(Error::Precondition(format!(
            "edge {} does not start at the vertex of the set",
            g.edge_name(f)
        )));
    }
    if set.contains(f) {
        return Err(Error::Precondition(format!(
            "edge {} is a member of the set",
            g.edge_name(f)
        )));
    }
    if let Some(witness) = avoiding_path_edges(g, set)? {
        return Err(Error::NotExhaustive {
            vertex: g.vertex_name(set.vertex).to_string(),
            witness: g.path_name(&witness),
        });
    }
    let mut edges = BTreeSet::new();
    for e2 in g.edges_at(g.source(f)) {
        if g.color(*e2) != g.color(f) {
            let (pulled, _) = g.swap(f, *e2);
            if set.contains(pulled) {
                edges.insert(*e2);
            }
        }
    }
    let out = EdgeSet {
        vertex: g.source(f),
        edges,
    };
    debug_assert!(is_exhaustive_edges(g, &out)?);
    Ok(out)
}

/// The extension set of a path: `ext_edge` iterated along a normal
/// form of `p`.  Requires `E` exhaustive and `p` not to extend any
/// member, which guarantees the precondition of every intermediate
/// step.
pub fn ext_path(g: &KGraph, p: &Path, set: &EdgeSet) -> Result<EdgeSet> {
    if p.range() != set.vertex {
        return Err(Error::Precondition(
            "path and set have different ranges".into(),
        ));
    }
    for &e in &set.edges {
        let c = g.color(e);
        if p.degree().get(c) >= 1 && g.prefix(p, &Degree::basis(g.rank(), c))?.as_edge() == Some(e)
        {
            return Err(Error::Precondition(format!(
                "path {} extends the member {}",
                g.path_name(p),
                g.edge_name(e)
            )));
        }
    }
    let mut current = set.clone();
    for &letter in p.edges() {
        current = ext_edge(g, letter, &current)?;
    }
    Ok(current)
}

/// Substitution: replace the member `e` by the heads `(e f)(0, d(f))`
/// over all `f` in `F`.  For `f` of the colour of `e` the head is `e`
/// itself; for the other colours it is the square partner.  Requires
/// `e` in `E` and `F` exhaustive at `s(e)`; the result is exhaustive.
pub fn substitute(g: &KGraph, set: &EdgeSet, e: EdgeId, f_set: &EdgeSet) -> Result<EdgeSet> {
    if !set.contains(e) {
        return Err(Error::NotAMember(g.edge_name(e).to_string()));
    }
    if f_set.vertex != g.source(e) {
        return Err(Error::Precondition(format!(
            "substitution set does not live at the source of {}",
            g.edge_name(e)
        )));
    }
    if let Some(witness) = avoiding_path_edges(g, f_set)? {
        return Err(Error::NotExhaustive {
            vertex: g.vertex_name(f_set.vertex).to_string(),
            witness: g.path_name(&witness),
        });
    }
    let mut edges = set.edges.clone();
    edges.remove(&e);
    for &f in &f_set.edges {
        if g.color(f) == g.color(e) {
            edges.insert(e);
        } else {
            let (pulled, _) = g.swap(e, f);
            edges.insert(pulled);
        }
    }
    let out = EdgeSet {
        vertex: set.vertex,
        edges,
    };
    debug_assert!(
        !is_exhaustive_edges(g, set)? || is_exhaustive_edges(g, &out)?,
        "substitution must preserve exhaustiveness"
    );
    Ok(out)
}

/// All exhaustive sets of edges at `v`, decided exactly through the
/// automaton.  `2^|vΛ^1|` subsets are scanned; `max_edges` caps the
/// width.
pub fn enumerate_fe_edge_sets(g: &KGraph, v: VertexId, max_edges: usize) -> Result<Vec<EdgeSet>> {
    let edges = g.edges_at(v);
    if edges.len() > max_edges {
        return Err(Error::ResourceLimit(format!(
            "vertex {} has {} edges, over the enumeration cap {}",
            g.vertex_name(v),
            edges.len(),
            max_edges
        )));
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << edges.len()) {
        let subset: BTreeSet<EdgeId> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let set = EdgeSet {
            vertex: v,
            edges: subset,
        };
        if is_exhaustive_edges(g, &set)? {
            out.push(set);
        }
    }
    Ok(out)
}

/// Shape statistics of a path set: the largest total degree of a
/// member and, per total degree `l`, the number of distinct degrees
/// realised by members.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeStats {
    pub l_max: u32,
    pub degrees_by_level: Vec<(u32, usize)>,
}

pub fn fe_stats(set: &PathSet) -> FeStats {
    let l_max = set.paths.iter().map(|p| p.degree().total()).max().unwrap_or(0);
    let mut degrees: BTreeMap<u32, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for p in &set.paths {
        degrees
            .entry(p.degree().total())
            .or_default()
            .insert(p.degree().coords().to_vec());
    }
    FeStats {
        l_max,
        degrees_by_level: (0..=l_max)
            .map(|l| (l, degrees.get(&l).map_or(0, |s| s.len())))
            .collect(),
    }
}

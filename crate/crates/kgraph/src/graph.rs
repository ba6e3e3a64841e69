//! Finite k-coloured graphs with factorisation squares.
//!
//! A graph of rank `k` is a finite set of vertices, a finite set of
//! coloured edges (colours `1..=k`, each edge pointing from its `source`
//! to its `range`), and one factorisation square for every composable
//! pair of edges of distinct colours.  A square records that the
//! two-coloured path `e.f` (colour of `e` below colour of `f`) equals
//! the path `f2.e2` traversing the colours in the other order.  Squares
//! are stored once, keyed by the lower-colour-first pair; the other
//! traversal directions are derived.
//!
//! For rank at least three the squares must additionally satisfy the
//! cube-consistency condition: rewriting any composable triple of edges
//! of three distinct colours to colour-sorted form gives the same result
//! along both maximal rewrite orders.  Validation checks all of this and
//! reports every defect found.

use crate::degree::Degree;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> VertexId {
        VertexId(i as u32)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Raw graph description as read from or written to a file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphData {
    pub k: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeData>,
    #[serde(default)]
    pub squares: Vec<SquareData>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeData {
    pub id: String,
    pub color: usize,
    pub range: String,
    pub source: String,
}

/// One factorisation square `[[e, f], [f2, e2]]` meaning `e.f = f2.e2`,
/// where `color(e) = color(e2) < color(f) = color(f2)`.
pub type SquareData = [[String; 2]; 2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationIssue {
    BadRank,
    DuplicateVertex(String),
    DuplicateEdge(String),
    UnknownVertex { edge: String, vertex: String },
    BadColor { edge: String, color: usize },
    UnknownEdgeInSquare { square: usize, edge: String },
    MalformedSquare { square: usize, reason: String },
    SquareListedTwice { pair: (String, String) },
    MissingSquare { pair: (String, String) },
    DuplicateSquareValue { pair: (String, String) },
    MissingSquareValue { pair: (String, String) },
    CubeInconsistency { triple: (String, String, String) },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            BadRank => write!(f, "rank k must be at least 1"),
            DuplicateVertex(v) => write!(f, "duplicate vertex id {v:?}"),
            DuplicateEdge(e) => write!(f, "duplicate edge id {e:?}"),
            UnknownVertex { edge, vertex } => {
                write!(f, "edge {edge:?} references unknown vertex {vertex:?}")
            }
            BadColor { edge, color } => {
                write!(f, "edge {edge:?} has colour {color} outside 1..=k")
            }
            UnknownEdgeInSquare { square, edge } => {
                write!(f, "square #{square} references unknown edge {edge:?}")
            }
            MalformedSquare { square, reason } => write!(f, "square #{square}: {reason}"),
            SquareListedTwice { pair } => {
                write!(f, "composable pair ({}, {}) has two squares", pair.0, pair.1)
            }
            MissingSquare { pair } => write!(
                f,
                "composable pair ({}, {}) has no factorisation square",
                pair.0, pair.1
            ),
            DuplicateSquareValue { pair } => write!(
                f,
                "pair ({}, {}) appears as the factored side of two squares",
                pair.0, pair.1
            ),
            MissingSquareValue { pair } => write!(
                f,
                "composable pair ({}, {}) never appears as the factored side of a square",
                pair.0, pair.1
            ),
            CubeInconsistency { triple } => write!(
                f,
                "cube condition fails on the composable triple ({}, {}, {})",
                triple.0, triple.1, triple.2
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.issues.is_empty() {
            write!(f, "ok")
        } else {
            for (i, issue) in self.issues.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "- {issue}")?;
            }
            Ok(())
        }
    }
}

/// A validated k-coloured graph with a complete, bijective square
/// structure (and, for k >= 3, a consistent one).  All path operations
/// rely on these invariants, so a `KGraph` can only be obtained through
/// [`GraphData::build`].
pub struct KGraph {
    k: usize,
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    edge_names: Vec<String>,
    edge_index: HashMap<String, EdgeId>,
    colors: Vec<usize>,
    ranges: Vec<VertexId>,
    sources: Vec<VertexId>,
    /// Edges with range `v`, sorted by (colour, id).
    edges_at: Vec<Vec<EdgeId>>,
    square_fwd: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
    square_bwd: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)>,
}

impl GraphData {
    /// Validate the description and assemble the lookup tables.  All
    /// defects are reported, not just the first.
    pub fn build(&self) -> Result<KGraph, ValidationReport> {
        let mut issues = Vec::new();
        if self.k == 0 {
            issues.push(ValidationIssue::BadRank);
            return Err(ValidationReport { issues });
        }

        let mut vertex_index = HashMap::new();
        let mut vertex_names = Vec::new();
        for name in &self.vertices {
            if vertex_index.contains_key(name) {
                issues.push(ValidationIssue::DuplicateVertex(name.clone()));
                continue;
            }
            vertex_index.insert(name.clone(), VertexId(vertex_names.len() as u32));
            vertex_names.push(name.clone());
        }

        let mut edge_index = HashMap::new();
        let mut edge_names = Vec::new();
        let mut colors = Vec::new();
        let mut ranges = Vec::new();
        let mut sources = Vec::new();
        for e in &self.edges {
            if edge_index.contains_key(&e.id) {
                issues.push(ValidationIssue::DuplicateEdge(e.id.clone()));
                continue;
            }
            if e.color < 1 || e.color > self.k {
                issues.push(ValidationIssue::BadColor {
                    edge: e.id.clone(),
                    color: e.color,
                });
                continue;
            }
            let (r, s) = match (vertex_index.get(&e.range), vertex_index.get(&e.source)) {
                (Some(&r), Some(&s)) => (r, s),
                (r, _) => {
                    let missing = if r.is_none() { &e.range } else { &e.source };
                    issues.push(ValidationIssue::UnknownVertex {
                        edge: e.id.clone(),
                        vertex: missing.clone(),
                    });
                    continue;
                }
            };
            edge_index.insert(e.id.clone(), EdgeId(edge_names.len() as u32));
            edge_names.push(e.id.clone());
            colors.push(e.color);
            ranges.push(r);
            sources.push(s);
        }
        if !issues.is_empty() {
            // Square checks would cascade off broken ids; stop here.
            return Err(ValidationReport { issues });
        }

        let mut square_fwd: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)> = HashMap::new();
        let mut square_bwd: HashMap<(EdgeId, EdgeId), (EdgeId, EdgeId)> = HashMap::new();
        for (idx, sq) in self.squares.iter().enumerate() {
            let mut ids = [EdgeId(0); 4];
            let mut ok = true;
            for (slot, name) in [&sq[0][0], &sq[0][1], &sq[1][0], &sq[1][1]]
                .into_iter()
                .enumerate()
            {
                match edge_index.get(name) {
                    Some(&id) => ids[slot] = id,
                    None => {
                        issues.push(ValidationIssue::UnknownEdgeInSquare {
                            square: idx,
                            edge: name.clone(),
                        });
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let [e, f, f2, e2] = ids;
            let reason = if colors[e.0 as usize] >= colors[f.0 as usize] {
                Some("key pair must be ordered lower colour first".to_string())
            } else if colors[f2.0 as usize] != colors[f.0 as usize]
                || colors[e2.0 as usize] != colors[e.0 as usize]
            {
                Some("factored side must swap the key colours".to_string())
            } else if sources[e.0 as usize] != ranges[f.0 as usize] {
                Some("key pair is not composable".to_string())
            } else if sources[f2.0 as usize] != ranges[e2.0 as usize] {
                Some("factored side is not composable".to_string())
            } else if ranges[f2.0 as usize] != ranges[e.0 as usize] {
                Some("factored side has a different range".to_string())
            } else if sources[e2.0 as usize] != sources[f.0 as usize] {
                Some("factored side has a different source".to_string())
            } else {
                None
            };
            if let Some(reason) = reason {
                issues.push(ValidationIssue::MalformedSquare { square: idx, reason });
                continue;
            }
            if square_fwd.contains_key(&(e, f)) {
                issues.push(ValidationIssue::SquareListedTwice {
                    pair: (edge_names[e.0 as usize].clone(), edge_names[f.0 as usize].clone()),
                });
                continue;
            }
            square_fwd.insert((e, f), (f2, e2));
            if square_bwd.contains_key(&(f2, e2)) {
                issues.push(ValidationIssue::DuplicateSquareValue {
                    pair: (
                        edge_names[f2.0 as usize].clone(),
                        edge_names[e2.0 as usize].clone(),
                    ),
                });
                continue;
            }
            square_bwd.insert((f2, e2), (e, f));
        }

        // The keys must cover every composable ascending pair exactly once
        // and the factored sides every composable descending pair.
        let n_edges = edge_names.len();
        for a in 0..n_edges {
            for b in 0..n_edges {
                let (a_id, b_id) = (EdgeId(a as u32), EdgeId(b as u32));
                if sources[a] != ranges[b] || colors[a] == colors[b] {
                    continue;
                }
                if colors[a] < colors[b] {
                    if !square_fwd.contains_key(&(a_id, b_id)) {
                        issues.push(ValidationIssue::MissingSquare {
                            pair: (edge_names[a].clone(), edge_names[b].clone()),
                        });
                    }
                } else if !square_bwd.contains_key(&(a_id, b_id)) {
                    issues.push(ValidationIssue::MissingSquareValue {
                        pair: (edge_names[a].clone(), edge_names[b].clone()),
                    });
                }
            }
        }

        let mut edges_at: Vec<Vec<EdgeId>> = vec![Vec::new(); vertex_names.len()];
        for e in 0..n_edges {
            edges_at[ranges[e].0 as usize].push(EdgeId(e as u32));
        }
        for list in &mut edges_at {
            list.sort_by_key(|e| (colors[e.0 as usize], e.0));
        }

        let graph = KGraph {
            k: self.k,
            vertex_names,
            vertex_index,
            edge_names,
            edge_index,
            colors,
            ranges,
            sources,
            edges_at,
            square_fwd,
            square_bwd,
        };

        if issues.is_empty() && graph.k >= 3 {
            graph.check_cubes(&mut issues);
        }
        if issues.is_empty() {
            Ok(graph)
        } else {
            Err(ValidationReport { issues })
        }
    }
}

impl KGraph {
    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_names.len() as u32).map(EdgeId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edge_names[e.0 as usize]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn color(&self, e: EdgeId) -> usize {
        self.colors[e.0 as usize]
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.ranges[e.0 as usize]
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.sources[e.0 as usize]
    }

    /// The edges with range `v` (the set written `vE^1`), sorted by
    /// (colour, id).
    pub fn edges_at(&self, v: VertexId) -> &[EdgeId] {
        &self.edges_at[v.0 as usize]
    }

    /// The edges of one colour with range `v`.
    pub fn edges_at_color(&self, v: VertexId, color: usize) -> Vec<EdgeId> {
        self.edges_at(v)
            .iter()
            .copied()
            .filter(|&e| self.color(e) == color)
            .collect()
    }

    /// Exchange the colour order of a composable two-coloured word
    /// `a.b`: returns the pair `(c, d)` with `c.d = a.b` and the colours
    /// swapped.  Panics on same-colour or non-composable input; the
    /// square tables are total on everything else by validation.
    pub fn swap(&self, a: EdgeId, b: EdgeId) -> (EdgeId, EdgeId) {
        debug_assert_eq!(self.source(a), self.range(b));
        let (ca, cb) = (self.color(a), self.color(b));
        assert_ne!(ca, cb, "swap of a same-colour pair");
        let table = if ca < cb { &self.square_fwd } else { &self.square_bwd };
        *table
            .get(&(a, b))
            .unwrap_or_else(|| panic!("missing square for ({}, {})", self.edge_name(a), self.edge_name(b)))
    }

    /// Serialise back to a raw description (canonical order).
    pub fn to_data(&self) -> GraphData {
        let mut squares: Vec<SquareData> = Vec::new();
        let mut keys: Vec<_> = self.square_fwd.iter().collect();
        keys.sort_by_key(|((e, f), _)| (e.0, f.0));
        for ((e, f), (f2, e2)) in keys {
            squares.push([
                [self.edge_name(*e).to_string(), self.edge_name(*f).to_string()],
                [self.edge_name(*f2).to_string(), self.edge_name(*e2).to_string()],
            ]);
        }
        GraphData {
            k: self.k,
            vertices: self.vertex_names.clone(),
            edges: (0..self.edge_names.len())
                .map(|i| EdgeData {
                    id: self.edge_names[i].clone(),
                    color: self.colors[i],
                    range: self.vertex_names[self.ranges[i].0 as usize].clone(),
                    source: self.vertex_names[self.sources[i].0 as usize].clone(),
                })
                .collect(),
            squares,
        }
    }

    /// Cube consistency: for every composable triple of edges with
    /// strictly descending colours, the two maximal rewrite orders to
    /// colour-sorted form must agree.  These triples are the only words
    /// where the rewrite relation branches, so their agreement makes the
    /// whole rewriting system confluent.
    fn check_cubes(&self, issues: &mut Vec<ValidationIssue>) {
        for x in self.edges() {
            for &y in self.edges_at(self.source(x)) {
                if self.color(y) >= self.color(x) {
                    continue;
                }
                for &z in self.edges_at(self.source(y)) {
                    if self.color(z) >= self.color(y) {
                        continue;
                    }
                    if !self.cube_commutes(x, y, z) {
                        issues.push(ValidationIssue::CubeInconsistency {
                            triple: (
                                self.edge_name(x).to_string(),
                                self.edge_name(y).to_string(),
                                self.edge_name(z).to_string(),
                            ),
                        });
                    }
                }
            }
        }
    }

    /// Both reduction orders of a strictly colour-descending word
    /// `[x, y, z]`.  After the first swap every later step is forced.
    fn cube_commutes(&self, x: EdgeId, y: EdgeId, z: EdgeId) -> bool {
        // Branch 1: swap positions 0-1 first.
        let (y1, x1) = self.swap(x, y);
        let (z1, x2) = self.swap(x1, z);
        let (z2, y2) = self.swap(y1, z1);
        let left = [z2, y2, x2];
        // Branch 2: swap positions 1-2 first.
        let (z3, y3) = self.swap(y, z);
        let (z4, x3) = self.swap(x, z3);
        let (y4, x4) = self.swap(x3, y3);
        let right = [z4, y4, x4];
        left == right
    }
}

impl fmt::Debug for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "KGraph(k={}, |V|={}, |E|={})",
            self.k,
            self.vertex_count(),
            self.edge_count()
        )
    }
}

/// Basic shape flags of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphProperties {
    pub row_finite: bool,
    pub has_sources: bool,
    pub acyclic: bool,
    pub finitely_aligned: bool,
}

impl KGraph {
    /// Whether the skeleton (all colours) has a directed cycle.  An
    /// acyclic graph has finitely many paths.
    pub fn is_acyclic(&self) -> bool {
        self.find_cycle_vertex().is_none()
    }

    /// Some vertex on a directed skeleton cycle, if any.
    pub fn find_cycle_vertex(&self) -> Option<VertexId> {
        // Iterative DFS over the "range -> source" step relation.
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            White,
            Grey,
            Black,
        }
        let mut mark = vec![Mark::White; self.vertex_count()];
        for root in self.vertices() {
            if mark[root.0 as usize] != Mark::White {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            mark[root.0 as usize] = Mark::Grey;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < self.edges_at(v).len() {
                    let w = self.source(self.edges_at(v)[*i]);
                    *i += 1;
                    match mark[w.0 as usize] {
                        Mark::Grey => return Some(w),
                        Mark::White => {
                            mark[w.0 as usize] = Mark::Grey;
                            stack.push((w, 0));
                        }
                        Mark::Black => {}
                    }
                } else {
                    mark[v.0 as usize] = Mark::Black;
                    stack.pop();
                }
            }
        }
        None
    }

    /// Vertices `w` reachable from `v` by a path (i.e. `vEw` nonempty),
    /// including `v` itself.
    pub fn reachable_from(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(u) = stack.pop() {
            for &e in self.edges_at(u) {
                let w = self.source(e);
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// A vertex `v` is a source when some degree `m` admits no path of
    /// degree `m` out of `v`.  Equivalently, the one-step relation
    /// "there is a path of degree (1,...,1) from u to w" admits no
    /// arbitrarily long walk from `v`, i.e. `v` reaches no cycle of that
    /// relation.
    pub fn sources(&self) -> BTreeSet<VertexId> {
        let n = self.vertex_count();
        let mut step: Vec<BTreeSet<VertexId>> = Vec::with_capacity(n);
        for v in self.vertices() {
            let ones = Degree::ones(self.k);
            let targets = self
                .paths_of_degree(v, &ones)
                .into_iter()
                .map(|p| p.source())
                .collect();
            step.push(targets);
        }
        // After round i, can_walk[v] says "v starts a walk of length i" in
        // the step relation.  A graph on n vertices admits a length n+1
        // walk from v exactly when v reaches a cycle, which is exactly
        // when walks from v are unbounded.
        let mut can_walk = vec![true; n];
        for _ in 0..=n {
            let prev = can_walk.clone();
            for v in 0..n {
                can_walk[v] = step[v].iter().any(|w| prev[w.0 as usize]);
            }
        }
        self.vertices()
            .filter(|v| !can_walk[v.0 as usize])
            .collect()
    }

    pub fn properties(&self) -> GraphProperties {
        GraphProperties {
            // Every vertex receives finitely many edges of each colour:
            // automatic for a finite edge set.
            row_finite: true,
            has_sources: !self.sources().is_empty(),
            acyclic: self.is_acyclic(),
            // Finitely many paths of each degree, hence all minimal
            // common extension sets are finite.
            finitely_aligned: true,
        }
    }
}

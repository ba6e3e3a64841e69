//! Paths and the factorisation engine.
//!
//! A path is stored in colour-sorted normal form: all colour-1 edges
//! first (nearest the range), then colour-2, and so on.  Every morphism
//! has exactly one such word, so paths compare and hash structurally.
//! Reordering a word across colours walks through factorisation squares;
//! validation guarantees the squares are bijective (and cube-consistent
//! for rank three and up), which makes the rewriting confluent, so any
//! swap strategy reaches the same sorted word.
//!
//! `factor` splits a path at a degree `m <= d(p)`: the letters of the
//! first block are pulled to the front colour by colour through square
//! swaps, after which the remainder is re-sorted.  Uniqueness of
//! factorisations means the result does not depend on the pulling
//! strategy.

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, KGraph, VertexId};
use std::cmp::Ordering;
use std::fmt;

/// A path in colour-sorted normal form.  Obtain one through the
/// `KGraph` methods, never by assembling fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Path {
    range: VertexId,
    source: VertexId,
    degree: Degree,
    edges: Vec<EdgeId>,
}

impl Path {
    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    /// The normal-form word.
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    /// Single-edge paths expose their edge.
    pub fn as_edge(&self) -> Option<EdgeId> {
        if self.edges.len() == 1 {
            Some(self.edges[0])
        } else {
            None
        }
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Path {
    /// Sort key (range, degree, word); degree lexicographically.  This
    /// is the basis order of the boundary-path representation.
    fn cmp(&self, other: &Self) -> Ordering {
        self.range
            .cmp(&other.range)
            .then_with(|| self.degree.lex_cmp(&other.degree))
            .then_with(|| self.edges.cmp(&other.edges))
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path(v{} {:?} {:?})", self.range.0, self.degree, self.edges)
    }
}

impl KGraph {
    /// The degree-zero path at `v`.
    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path {
            range: v,
            source: v,
            degree: Degree::zero(self.rank()),
            edges: Vec::new(),
        }
    }

    /// The length-one path traversing `e`.
    pub fn edge_path(&self, e: EdgeId) -> Path {
        Path {
            range: self.range(e),
            source: self.source(e),
            degree: Degree::basis(self.rank(), self.color(e)),
            edges: vec![e],
        }
    }

    /// Human-readable form `v` or `a.b.c`.
    pub fn path_name(&self, p: &Path) -> String {
        if p.is_vertex() {
            self.vertex_name(p.range).to_string()
        } else {
            p.edges
                .iter()
                .map(|&e| self.edge_name(e))
                .collect::<Vec<_>>()
                .join(".")
        }
    }

    /// Build a path from an arbitrary composable word (e.g. parsed from
    /// a file) and normalise it.
    pub fn path_from_word(&self, word: &[EdgeId], range_if_empty: Option<VertexId>) -> Result<Path> {
        if word.is_empty() {
            let v = range_if_empty.ok_or_else(|| {
                Error::Precondition("empty word needs an explicit vertex".to_string())
            })?;
            return Ok(self.vertex_path(v));
        }
        for pair in word.windows(2) {
            if self.source(pair[0]) != self.range(pair[1]) {
                return Err(Error::NotComposable {
                    source_vertex: self.vertex_name(self.source(pair[0])).to_string(),
                    range_vertex: self.vertex_name(self.range(pair[1])).to_string(),
                });
            }
        }
        Ok(self.sorted_path(self.range(word[0]), self.normalize_word(word.to_vec())))
    }

    /// Wrap an already colour-sorted composable word.
    fn sorted_path(&self, range: VertexId, edges: Vec<EdgeId>) -> Path {
        debug_assert!(edges.windows(2).all(|p| self.color(p[0]) <= self.color(p[1])));
        debug_assert!(edges.windows(2).all(|p| self.source(p[0]) == self.range(p[1])));
        debug_assert!(edges.first().map_or(true, |&e| self.range(e) == range));
        let source = edges.last().map_or(range, |&e| self.source(e));
        let mut counts = vec![0u32; self.rank()];
        for &e in &edges {
            counts[self.color(e) - 1] += 1;
        }
        Path {
            range,
            source,
            degree: Degree::new(counts),
            edges,
        }
    }

    /// Deterministic bubble sort through the squares.  Each swap removes
    /// one colour inversion, so the loop terminates; confluence makes
    /// the result independent of the sweep order.
    fn normalize_word(&self, mut w: Vec<EdgeId>) -> Vec<EdgeId> {
        loop {
            let mut swapped = false;
            for t in 0..w.len().saturating_sub(1) {
                if self.color(w[t]) > self.color(w[t + 1]) {
                    let (c, d) = self.swap(w[t], w[t + 1]);
                    w[t] = c;
                    w[t + 1] = d;
                    swapped = true;
                }
            }
            if !swapped {
                return w;
            }
        }
    }

    /// Concatenation `p.q`; requires `s(p) = r(q)`.
    pub fn compose(&self, p: &Path, q: &Path) -> Result<Path> {
        if p.source != q.range {
            return Err(Error::NotComposable {
                source_vertex: self.vertex_name(p.source).to_string(),
                range_vertex: self.vertex_name(q.range).to_string(),
            });
        }
        let mut word = p.edges.clone();
        word.extend_from_slice(&q.edges);
        Ok(self.sorted_path(p.range, self.normalize_word(word)))
    }

    /// Split `p` as `head.tail` with `d(head) = m`.  The head letters
    /// are pulled to the front one colour at a time; by uniqueness of
    /// factorisations the outcome is the pair `(p(0,m), p(m,d(p)))`.
    pub fn factor(&self, p: &Path, m: &Degree) -> Result<(Path, Path)> {
        if !m.le(&p.degree) {
            return Err(Error::DegreeNotDominated {
                wanted: m.clone(),
                have: p.degree.clone(),
            });
        }
        let mut rest = p.edges.clone();
        let mut head = Vec::with_capacity(m.total() as usize);
        for color in 1..=self.rank() {
            for _ in 0..m.get(color) {
                let mut t = rest
                    .iter()
                    .position(|&e| self.color(e) == color)
                    .expect("degree accounting guarantees a letter of this colour");
                while t > 0 {
                    let (c, d) = self.swap(rest[t - 1], rest[t]);
                    rest[t - 1] = c;
                    rest[t] = d;
                    t -= 1;
                }
                head.push(rest.remove(0));
            }
        }
        let head_path = self.sorted_path(p.range, head);
        let tail_path = self.sorted_path(head_path.source, self.normalize_word(rest));
        Ok((head_path, tail_path))
    }

    /// The prefix `p(0, m)`.
    pub fn prefix(&self, p: &Path, m: &Degree) -> Result<Path> {
        Ok(self.factor(p, m)?.0)
    }

    /// The segment `p(a, b)` for `a <= b <= d(p)`.
    pub fn segment(&self, p: &Path, a: &Degree, b: &Degree) -> Result<Path> {
        if !a.le(b) {
            return Err(Error::DegreeNotDominated {
                wanted: a.clone(),
                have: b.clone(),
            });
        }
        let (head, _) = self.factor(p, b)?;
        Ok(self.factor(&head, a)?.1)
    }

    /// The vertex `p(n) = s(p(0,n))` visited at position `n`.
    pub fn vertex_at(&self, p: &Path, n: &Degree) -> Result<VertexId> {
        Ok(self.factor(p, n)?.0.source)
    }

    /// All paths of degree exactly `n` with range `v`, i.e. the set
    /// `vE^n`, enumerated as colour-sorted words (each such word is the
    /// normal form of a distinct path, so no deduplication is needed).
    pub fn paths_of_degree(&self, v: VertexId, n: &Degree) -> Vec<Path> {
        assert_eq!(n.rank(), self.rank());
        let mut out = Vec::new();
        let mut word: Vec<EdgeId> = Vec::with_capacity(n.total() as usize);
        self.extend_sorted(v, v, n, 1, &mut word, &mut |word, _| {
            out.push(self.sorted_path(v, word.to_vec()));
            true
        });
        out
    }

    /// Depth-first enumeration of colour-sorted words: `remaining` holds
    /// the number of letters still owed per colour, `color` the lowest
    /// colour still allowed.  `emit` sees every completed word and may
    /// return `false` to stop the whole enumeration.
    fn extend_sorted(
        &self,
        _range: VertexId,
        at: VertexId,
        remaining: &Degree,
        color: usize,
        word: &mut Vec<EdgeId>,
        emit: &mut impl FnMut(&[EdgeId], VertexId) -> bool,
    ) -> bool {
        let next_color = (color..=self.rank()).find(|&c| remaining.get(c) > 0);
        let Some(c) = next_color else {
            return emit(word, at);
        };
        let mut rem = remaining.coords().to_vec();
        rem[c - 1] -= 1;
        let rem = Degree::new(rem);
        for &e in self.edges_at(at) {
            if self.color(e) != c {
                continue;
            }
            word.push(e);
            let keep_going = self.extend_sorted(_range, self.source(e), &rem, c, word, emit);
            word.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// All paths with range `v` of degree at most `bound` (every degree
    /// when `bound` is `None`).  Unbounded enumeration requires an
    /// acyclic graph; on cyclic graphs it is rejected rather than left
    /// to run forever.
    pub fn paths_from(&self, v: VertexId, bound: Option<&Degree>) -> Result<Vec<Path>> {
        if bound.is_none() {
            if let Some(w) = self.find_cycle_vertex() {
                return Err(Error::CyclicGraph(self.vertex_name(w).to_string()));
            }
        }
        let mut out = vec![self.vertex_path(v)];
        let mut frontier = vec![self.vertex_path(v)];
        // Grow sorted words one letter at a time, never dropping below
        // the colour of the last letter; this hits every normal form
        // exactly once.
        while let Some(p) = frontier.pop() {
            let min_color = p.edges.last().map_or(1, |&e| self.color(e));
            for &e in self.edges_at(p.source) {
                if self.color(e) < min_color {
                    continue;
                }
                if let Some(b) = bound {
                    if p.degree.get(self.color(e)) + 1 > b.get(self.color(e)) {
                        continue;
                    }
                }
                let mut edges = p.edges.clone();
                edges.push(e);
                let q = self.sorted_path(v, edges);
                out.push(q.clone());
                frontier.push(q);
            }
        }
        out.sort();
        Ok(out)
    }

    /// All paths in the graph, across every range vertex.
    pub fn all_paths(&self, bound: Option<&Degree>) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        for v in self.vertices() {
            out.extend(self.paths_from(v, bound)?);
        }
        out.sort();
        Ok(out)
    }

    /// Minimal common extensions: the paths `t` of degree
    /// `d(p) v d(q)` with `t(0, d(p)) = p` and `t(0, d(q)) = q`.
    /// Empty when the ranges differ.
    pub fn mce(&self, p: &Path, q: &Path) -> Vec<Path> {
        if p.range != q.range {
            return Vec::new();
        }
        let target = p.degree.join(&q.degree);
        let gap = target
            .minus(&p.degree)
            .expect("join dominates both arguments");
        let mut out = Vec::new();
        for ext in self.paths_of_degree(p.source, &gap) {
            let t = self.compose(p, &ext).expect("extension starts at s(p)");
            let head = self.prefix(&t, &q.degree).expect("degree dominated by join");
            if head == *q {
                out.push(t);
            }
        }
        out.sort();
        out
    }

    /// The pairs `(p', q')` with `p.p' = q.q'` a minimal common
    /// extension.
    pub fn lambda_min(&self, p: &Path, q: &Path) -> Vec<(Path, Path)> {
        let mut out = Vec::new();
        for t in self.mce(p, q) {
            let (_, p_ext) = self.factor(&t, &p.degree).expect("prefix of its own mce");
            let (_, q_ext) = self.factor(&t, &q.degree).expect("prefix of its own mce");
            out.push((p_ext, q_ext));
        }
        out.sort();
        out
    }

    /// Whether `p` and `q` admit any common extension.
    pub fn compatible(&self, p: &Path, q: &Path) -> bool {
        !self.mce(p, q).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphData;

    fn loops11() -> KGraph {
        // Single vertex, one loop of each colour, flip square a.b = b.a.
        let data: GraphData = serde_json::from_str(
            r#"{
                "k": 2,
                "vertices": ["v"],
                "edges": [
                    {"id": "a", "color": 1, "range": "v", "source": "v"},
                    {"id": "b", "color": 2, "range": "v", "source": "v"}
                ],
                "squares": [[["a", "b"], ["b", "a"]]]
            }"#,
        )
        .unwrap();
        data.build().unwrap()
    }

    fn omega11() -> KGraph {
        let data: GraphData = serde_json::from_str(
            r#"{
                "k": 2,
                "vertices": ["00", "10", "01", "11"],
                "edges": [
                    {"id": "a", "color": 1, "range": "00", "source": "10"},
                    {"id": "h", "color": 1, "range": "01", "source": "11"},
                    {"id": "b", "color": 2, "range": "00", "source": "01"},
                    {"id": "g", "color": 2, "range": "10", "source": "11"}
                ],
                "squares": [[["a", "g"], ["b", "h"]]]
            }"#,
        )
        .unwrap();
        data.build().unwrap()
    }

    #[test]
    fn compose_sorts_the_word() {
        let g = loops11();
        let a = g.edge_path(g.edge("a").unwrap());
        let b = g.edge_path(g.edge("b").unwrap());
        let ba = g.compose(&b, &a).unwrap();
        assert_eq!(g.path_name(&ba), "a.b");
        let ab = g.compose(&a, &b).unwrap();
        assert_eq!(ab, ba);
    }

    #[test]
    fn factor_pulls_the_requested_colours() {
        let g = loops11();
        let a = g.edge_path(g.edge("a").unwrap());
        let b = g.edge_path(g.edge("b").unwrap());
        let ab = g.compose(&a, &b).unwrap();
        let (head, tail) = g.factor(&ab, &Degree::new(vec![0, 1])).unwrap();
        assert_eq!(g.path_name(&head), "b");
        assert_eq!(g.path_name(&tail), "a");
        let (head, tail) = g.factor(&ab, &Degree::new(vec![1, 0])).unwrap();
        assert_eq!(g.path_name(&head), "a");
        assert_eq!(g.path_name(&tail), "b");
    }

    #[test]
    fn factor_rejects_undominated_degree() {
        let g = loops11();
        let a = g.edge_path(g.edge("a").unwrap());
        assert!(matches!(
            g.factor(&a, &Degree::new(vec![0, 1])),
            Err(Error::DegreeNotDominated { .. })
        ));
    }

    #[test]
    fn factorisation_in_the_square_graph() {
        let g = omega11();
        let a = g.edge_path(g.edge("a").unwrap());
        let gg = g.edge_path(g.edge("g").unwrap());
        let full = g.compose(&a, &gg).unwrap();
        assert_eq!(g.path_name(&full), "a.g");
        // The colour-2 prefix of the full square is b.
        let (head, tail) = g.factor(&full, &Degree::new(vec![0, 1])).unwrap();
        assert_eq!(g.path_name(&head), "b");
        assert_eq!(g.path_name(&tail), "h");
    }

    #[test]
    fn path_counts_match_products() {
        let g = omega11();
        let v = g.vertex("00").unwrap();
        assert_eq!(g.paths_of_degree(v, &Degree::new(vec![1, 1])).len(), 1);
        assert_eq!(g.paths_of_degree(v, &Degree::new(vec![1, 0])).len(), 1);
        assert_eq!(g.paths_of_degree(v, &Degree::new(vec![2, 0])).len(), 0);
        // Nine morphisms in the unit square graph.
        assert_eq!(g.all_paths(None).unwrap().len(), 9);
    }

    #[test]
    fn unbounded_enumeration_rejected_on_cycles() {
        let g = loops11();
        assert!(matches!(g.all_paths(None), Err(Error::CyclicGraph(_))));
        let bounded = g
            .paths_from(g.vertex("v").unwrap(), Some(&Degree::new(vec![2, 1])))
            .unwrap();
        // Words a^i b^j with i <= 2, j <= 1.
        assert_eq!(bounded.len(), 6);
    }

    #[test]
    fn mce_of_the_two_loop_colours() {
        let g = loops11();
        let a = g.edge_path(g.edge("a").unwrap());
        let b = g.edge_path(g.edge("b").unwrap());
        let m = g.mce(&a, &b);
        assert_eq!(m.len(), 1);
        assert_eq!(g.path_name(&m[0]), "a.b");
        let pairs = g.lambda_min(&a, &b);
        assert_eq!(pairs.len(), 1);
        assert_eq!(g.path_name(&pairs[0].0), "b");
        assert_eq!(g.path_name(&pairs[0].1), "a");
    }

    #[test]
    fn mce_with_distinct_ranges_is_empty() {
        let g = omega11();
        let a = g.edge_path(g.edge("a").unwrap());
        let h = g.edge_path(g.edge("h").unwrap());
        assert!(g.mce(&a, &h).is_empty());
    }
}

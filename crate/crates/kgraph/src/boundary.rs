//! Boundary paths and the representation they carry.
//!
//! Relative to a collection of exhaustive edge sets, a path `x` is a
//! boundary path when at every position `n` of its degree grid and for
//! every member set at the vertex there, one of the member edges
//! occurs in `x` right after `n`.  On an acyclic graph the boundary
//! paths form a finite basis, and `S_λ(e_x) = e_{λx}` (when the
//! composite is again a boundary path) defines operators given by
//! partial injections of the basis.  All verification is integer
//! arithmetic on those maps, so every identity is checked exactly.

use std::collections::HashMap;

use crate::collections::EdgeCollection;
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::exhaustive::{avoiding_path_edges, EdgeSet, PathSet};
use crate::graph::{EdgeId, KGraph, VertexId};
use crate::path::Path;

/// A partial injection of basis indices: `map[j]` is the image of
/// basis vector `j`, when defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMap(Vec<Option<usize>>);

impl PartialMap {
    pub fn identity(n: usize) -> PartialMap {
        PartialMap((0..n).map(Some).collect())
    }

    pub fn zero(n: usize) -> PartialMap {
        PartialMap(vec![None; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn image_of(&self, j: usize) -> Option<usize> {
        self.0[j]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Option::is_none)
    }

    /// `self` applied after `other`.
    pub fn compose(&self, other: &PartialMap) -> PartialMap {
        PartialMap(
            other
                .0
                .iter()
                .map(|v| v.and_then(|m| self.0[m]))
                .collect(),
        )
    }

    /// The adjoint, defined because the map is injective.
    pub fn adjoint(&self) -> PartialMap {
        let mut inv = vec![None; self.0.len()];
        for (j, v) in self.0.iter().enumerate() {
            if let Some(m) = *v {
                assert!(inv[m].is_none(), "adjoint of a non-injective map");
                inv[m] = Some(j);
            }
        }
        PartialMap(inv)
    }

    /// The diagonal 0/1 support of `self . self*` (the range).
    pub fn range_support(&self) -> Vec<bool> {
        let mut out = vec![false; self.0.len()];
        for v in self.0.iter().flatten() {
            out[*v] = true;
        }
        out
    }
}

/// Decides whether `x` is a boundary path relative to `coll`.
pub fn is_boundary_path(g: &KGraph, coll: &EdgeCollection, x: &Path) -> Result<bool> {
    for n in x.degree().grid() {
        let w = g.vertex_at(x, &n)?;
        for set in coll.at_vertex(w) {
            let mut hit = false;
            for &e in set.edges() {
                let step = Degree::basis(g.rank(), g.color(e));
                let end = n.plus(&step);
                if end.le(x.degree()) && g.segment(x, &n, &end)?.as_edge() == Some(e) {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All boundary paths of an acyclic graph relative to `coll`, sorted.
/// The members must be exhaustive; every vertex then has at least one
/// boundary path.
pub fn boundary_paths(g: &KGraph, coll: &EdgeCollection) -> Result<Vec<Path>> {
    for set in coll.members() {
        if let Some(witness) = avoiding_path_edges(g, set)? {
            return Err(Error::NotExhaustive {
                vertex: g.vertex_name(set.vertex()).to_string(),
                witness: g.path_name(&witness),
            });
        }
    }
    let mut out = Vec::new();
    for x in g.all_paths(None)? {
        if is_boundary_path(g, coll, &x)? {
            out.push(x);
        }
    }
    out.sort();
    for v in g.vertices() {
        assert!(
            out.iter().any(|x| x.range() == v),
            "every vertex carries a boundary path; {} has none",
            g.vertex_name(v)
        );
    }
    Ok(out)
}

/// The boundary-path representation: a finite basis indexed by the
/// boundary paths, and the partial injections the paths act by.
pub struct BoundaryRep<'g> {
    g: &'g KGraph,
    basis: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl<'g> BoundaryRep<'g> {
    pub fn new(g: &'g KGraph, coll: &EdgeCollection) -> Result<BoundaryRep<'g>> {
        let basis = boundary_paths(g, coll)?;
        let index = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        Ok(BoundaryRep { g, basis, index })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    pub fn s_path(&self, p: &Path) -> PartialMap {
        let mut map = vec![None; self.basis.len()];
        for (j, x) in self.basis.iter().enumerate() {
            if x.range() == p.source() {
                let y = self.g.compose(p, x).expect("ranges match");
                map[j] = self.index.get(&y).copied();
            }
        }
        PartialMap(map)
    }

    pub fn s_vertex(&self, v: VertexId) -> PartialMap {
        self.s_path(&self.g.vertex_path(v))
    }

    pub fn s_edge(&self, e: EdgeId) -> PartialMap {
        self.s_path(&self.g.edge_path(e))
    }

    /// The diagonal of `∏_{e in set} (S_v - S_e S_e*)`: basis paths at
    /// the vertex on which every factor survives.  The product is the
    /// zero operator exactly when no basis path remains.
    pub fn ck_product_support_edges(&self, set: &EdgeSet) -> Vec<usize> {
        let supports: Vec<Vec<bool>> = set
            .edges()
            .iter()
            .map(|&e| self.s_edge(e).range_support())
            .collect();
        (0..self.basis.len())
            .filter(|&j| {
                self.basis[j].range() == set.vertex() && supports.iter().all(|s| !s[j])
            })
            .collect()
    }

    /// As [`Self::ck_product_support_edges`] for a set of paths.
    pub fn ck_product_support_paths(&self, set: &PathSet) -> Vec<usize> {
        let supports: Vec<Vec<bool>> = set
            .paths()
            .iter()
            .map(|p| self.s_path(p).range_support())
            .collect();
        (0..self.basis.len())
            .filter(|&j| {
                self.basis[j].range() == set.vertex() && supports.iter().all(|s| !s[j])
            })
            .collect()
    }

    /// The matrix side of the hat test: the relation for `set` holds
    /// in the representation.
    pub fn ck_relation_holds_edges(&self, set: &EdgeSet) -> bool {
        self.ck_product_support_edges(set).is_empty()
    }

    pub fn ck_relation_holds_paths(&self, set: &PathSet) -> bool {
        self.ck_product_support_paths(set).is_empty()
    }
}

/// Verifies the three Toeplitz relations on the representation, over
/// every pair of morphisms.  Returns the list of failures, described.
pub fn verify_tck(g: &KGraph, rep: &BoundaryRep) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let paths = g.all_paths(None)?;
    let n = rep.dim();

    // (TCK1): the vertex operators are orthogonal projections summing
    // to the identity.
    let mut sum = PartialMap::zero(n);
    for v in g.vertices() {
        let s = rep.s_vertex(v);
        for j in 0..n {
            match s.image_of(j) {
                None => {}
                Some(m) if m == j => {
                    if sum.image_of(j).is_some() {
                        failures.push(format!(
                            "vertex projections overlap at basis path {}",
                            g.path_name(&rep.basis()[j])
                        ));
                    } else {
                        sum = PartialMap(
                            (0..n).map(|i| if i == j { Some(j) } else { sum.image_of(i) }).collect(),
                        );
                    }
                }
                Some(_) => failures.push(format!(
                    "vertex operator of {} is not diagonal",
                    g.vertex_name(v)
                )),
            }
        }
    }
    if sum != PartialMap::identity(n) {
        failures.push("vertex projections do not sum to the identity".into());
    }

    // (TCK2): multiplicativity over composable pairs.
    for p in &paths {
        for q in &paths {
            if p.source() != q.range() {
                continue;
            }
            let pq = g.compose(p, q)?;
            if rep.s_path(p).compose(&rep.s_path(q)) != rep.s_path(&pq) {
                failures.push(format!(
                    "S({}) S({}) differs from S({})",
                    g.path_name(p),
                    g.path_name(q),
                    g.path_name(&pq)
                ));
            }
        }
    }

    // (TCK3): S(p)* S(q) equals the sum over the minimal common
    // extensions.  The sum has pairwise-orthogonal nonzero terms, so
    // it is compared as a multiset of matrix units.
    for p in &paths {
        for q in &paths {
            let lhs = rep.s_path(p).adjoint().compose(&rep.s_path(q));
            let mut rhs: HashMap<usize, Vec<usize>> = HashMap::new();
            for (a, b) in g.lambda_min(p, q) {
                let term = rep.s_path(&a).compose(&rep.s_path(&b).adjoint());
                for j in 0..n {
                    if let Some(m) = term.image_of(j) {
                        rhs.entry(j).or_default().push(m);
                    }
                }
            }
            for j in 0..n {
                let want = lhs.image_of(j);
                let got = rhs.get(&j).cloned().unwrap_or_default();
                let ok = match want {
                    None => got.is_empty(),
                    Some(m) => got == vec![m],
                };
                if !ok {
                    failures.push(format!(
                        "S({})* S({}) mismatches the minimal-extension sum at {}",
                        g.path_name(p),
                        g.path_name(q),
                        g.path_name(&rep.basis()[j])
                    ));
                }
            }
        }
    }
    Ok(failures)
}

/// Verifies the relation `∏_{e in E}(S_v - S_e S_e*) = 0` for every
/// member of the collection.
pub fn verify_ck(g: &KGraph, rep: &BoundaryRep, coll: &EdgeCollection) -> Vec<String> {
    let mut failures = Vec::new();
    for set in coll.members() {
        let support = rep.ck_product_support_edges(set);
        if let Some(&j) = support.first() {
            failures.push(format!(
                "relation for {{{}}} fails: basis path {} survives",
                set.names(g).join(","),
                g.path_name(&rep.basis()[j])
            ));
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::{edge_satiation, hat_contains, EdgeCollection, Limits};
    use crate::exhaustive::enumerate_fe_edge_sets;
    use crate::fixtures::{omega, product_2graph, line_1graph};
    use std::collections::BTreeSet;

    fn edge_set(g: &KGraph, names: &[&str]) -> EdgeSet {
        EdgeSet::from_edges(g, names.iter().map(|n| g.edge(n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn all_morphisms_are_boundary_paths_without_relations() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        let b = boundary_paths(&g, &EdgeCollection::empty()).unwrap();
        assert_eq!(b.len(), 9);
    }

    #[test]
    fn corner_relation_prunes_the_short_paths() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        let coll =
            EdgeCollection::new([edge_set(&g, &["c1_0_0", "c2_0_0"])].into_iter().collect());
        let b = boundary_paths(&g, &coll).unwrap();
        // The corner vertex path is no longer a boundary path; the
        // other eight morphisms survive.
        assert_eq!(b.len(), 8);
        assert!(b.iter().all(|x| !(x.is_vertex() && x.range() == g.vertex("0_0").unwrap())));
    }

    #[test]
    fn tck_holds_for_the_empty_and_corner_collections() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        for coll in [
            EdgeCollection::empty(),
            EdgeCollection::new([edge_set(&g, &["c1_0_0", "c2_0_0"])].into_iter().collect()),
        ] {
            let rep = BoundaryRep::new(&g, &coll).unwrap();
            assert!(verify_tck(&g, &rep).unwrap().is_empty());
            assert!(verify_ck(&g, &rep, &coll).is_empty());
        }
    }

    #[test]
    fn tck_holds_on_a_product_graph() {
        let g = product_2graph(&line_1graph(3), &line_1graph(2));
        let coll = EdgeCollection::empty();
        let rep = BoundaryRep::new(&g, &coll).unwrap();
        assert!(verify_tck(&g, &rep).unwrap().is_empty());
    }

    #[test]
    fn matrix_hat_test_matches_the_combinatorial_one() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        let coll =
            EdgeCollection::new([edge_set(&g, &["c1_0_0", "c2_0_0"])].into_iter().collect());
        let rep = BoundaryRep::new(&g, &coll).unwrap();
        for v in g.vertices() {
            let edges = g.edges_at(v);
            for mask in 0u64..(1 << edges.len()) {
                let subset: BTreeSet<EdgeId> = edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let set = EdgeSet::new(&g, v, subset).unwrap();
                assert_eq!(
                    rep.ck_relation_holds_edges(&set),
                    hat_contains(&g, &coll, &set).unwrap(),
                    "at {} with {:?}",
                    g.vertex_name(v),
                    set.names(&g),
                );
            }
        }
    }

    #[test]
    fn hat_members_satisfy_the_relation() {
        let g = omega(2, &Degree::new(vec![2, 1]));
        let v = g.vertex("0_0").unwrap();
        for base in enumerate_fe_edge_sets(&g, v, 8).unwrap() {
            let coll = EdgeCollection::new([base].into_iter().collect());
            let rep = BoundaryRep::new(&g, &coll).unwrap();
            for up in edge_satiation(&g, &coll, &Limits::default()).unwrap() {
                assert!(rep.ck_relation_holds_edges(&up));
            }
        }
    }
}

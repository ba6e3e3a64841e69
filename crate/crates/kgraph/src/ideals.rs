//! Hereditary vertex sets, quotient graphs and ideal labels.
//!
//! A hereditary set of vertices is closed under walking from ranges to
//! sources.  Deleting a hereditary set `H` leaves a graph on the other
//! vertices, and a collection on the original graph restricts to the
//! quotient by dropping the members rooted in `H` and the member edges
//! pointing into `H`.  An ideal label is a hereditary set together
//! with an efficient collection on the quotient that dominates the
//! restricted collection; the Toeplitz labels are the special family
//! built from unions of full colour sets.

use std::collections::BTreeSet;

use crate::collections::{hat_contains, enumerate_efficient, EdgeCollection, Limits};
use crate::error::{Error, Result};
use crate::exhaustive::EdgeSet;
use crate::graph::{GraphData, KGraph, VertexId};

/// Closed under range-to-source reachability.
pub fn is_hereditary(g: &KGraph, h: &BTreeSet<VertexId>) -> bool {
    h.iter()
        .all(|&v| g.reachable_from(v).iter().all(|w| h.contains(w)))
}

/// The smallest hereditary set containing the seed.
pub fn hereditary_closure(g: &KGraph, seed: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let mut out = BTreeSet::new();
    for &v in seed {
        out.extend(g.reachable_from(v));
    }
    out
}

/// All hereditary subsets of the vertices.
pub fn enumerate_hereditary(g: &KGraph) -> Vec<BTreeSet<VertexId>> {
    let vs: Vec<VertexId> = g.vertices().collect();
    assert!(vs.len() <= 24, "hereditary sweep is for desk-size graphs");
    let mut out = Vec::new();
    for mask in 0u64..(1 << vs.len()) {
        let h: BTreeSet<VertexId> = vs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        if is_hereditary(g, &h) {
            out.push(h);
        }
    }
    out
}

/// Whether no vertex outside `H` carries a member of `coll` all of
/// whose sources lie in `H`.
pub fn is_saturated(g: &KGraph, coll: &EdgeCollection, h: &BTreeSet<VertexId>) -> bool {
    for set in coll.members() {
        if h.contains(&set.vertex()) || set.is_empty() {
            continue;
        }
        if set.edges().iter().all(|&e| h.contains(&g.source(e))) {
            return false;
        }
    }
    true
}

/// The graph left after deleting a hereditary set: the vertices
/// outside `H` and the edges whose source survives.  Names carry over.
pub fn quotient_graph(g: &KGraph, h: &BTreeSet<VertexId>) -> Result<KGraph> {
    if !is_hereditary(g, h) {
        return Err(Error::Precondition("vertex set is not hereditary".into()));
    }
    let data = g.to_data();
    let keep_v = |name: &str| !h.contains(&g.vertex(name).expect("known vertex"));
    let keep_e = |name: &str| {
        let e = g.edge(name).expect("known edge");
        !h.contains(&g.source(e))
    };
    let quotient = GraphData {
        k: data.k,
        vertices: data.vertices.iter().filter(|v| keep_v(v)).cloned().collect(),
        edges: data
            .edges
            .iter()
            .filter(|e| keep_e(&e.id))
            .cloned()
            .collect(),
        squares: data
            .squares
            .iter()
            .filter(|sq| sq.iter().flatten().all(|id| keep_e(id)))
            .cloned()
            .collect(),
    };
    quotient
        .build()
        .map_err(|report| Error::Precondition(format!(
            "quotient failed validation, which the factorisation property rules out: {report}"
        )))
}

/// The restriction of a collection to the quotient by `H`: members
/// rooted outside `H`, each with its edges into `H` removed.
pub fn restrict_collection(
    g: &KGraph,
    quotient: &KGraph,
    coll: &EdgeCollection,
    h: &BTreeSet<VertexId>,
) -> Result<Vec<EdgeSet>> {
    let mut out = Vec::new();
    for set in coll.members() {
        if h.contains(&set.vertex()) {
            continue;
        }
        let v = quotient
            .vertex(g.vertex_name(set.vertex()))
            .expect("vertex survives the quotient");
        let edges = set
            .edges()
            .iter()
            .filter(|&&e| !h.contains(&g.source(e)))
            .map(|&e| quotient.edge(g.edge_name(e)).expect("edge survives"))
            .collect();
        out.push(EdgeSet::new(quotient, v, edges)?);
    }
    Ok(out)
}

/// An ideal label: a hereditary set together with an efficient
/// collection on the quotient dominating the restricted collection.
#[derive(Debug, Clone)]
pub struct IdealLabel {
    pub h: BTreeSet<VertexId>,
    pub b: EdgeCollection,
}

/// All ideal labels of `(g, coll)`.  For each hereditary `H` the
/// quotient is formed, and the efficient collections `B` there with
/// every restricted member in the hat of `B` are collected.
pub fn enumerate_ideal_labels(
    g: &KGraph,
    coll: &EdgeCollection,
    limits: &Limits,
) -> Result<Vec<IdealLabel>> {
    let mut out = Vec::new();
    for h in enumerate_hereditary(g) {
        let quotient = quotient_graph(g, &h)?;
        let restricted = restrict_collection(g, &quotient, coll, &h)?;
        for b in enumerate_efficient(&quotient, limits)? {
            let mut dominated = true;
            for e in &restricted {
                if !hat_contains(&quotient, &b, e)? {
                    dominated = false;
                    break;
                }
            }
            if dominated {
                out.push(IdealLabel { h: h.clone(), b });
            }
        }
    }
    Ok(out)
}

/// The Toeplitz collection of a set of colours: at every vertex the
/// union of the full colour-`i` edge sets over `i` in `K`.  Needs a
/// graph without sources so that the members are exhaustive.
pub fn toeplitz_collection(g: &KGraph, colours: &BTreeSet<usize>) -> Result<EdgeCollection> {
    if let Some(&v) = g.sources().iter().next() {
        return Err(Error::HasSources(g.vertex_name(v).to_string()));
    }
    for &c in colours {
        if c == 0 || c > g.rank() {
            return Err(Error::Precondition(format!("colour {c} is out of range")));
        }
    }
    let mut members = BTreeSet::new();
    if colours.is_empty() {
        return Ok(EdgeCollection::new(members));
    }
    for v in g.vertices() {
        let edges: BTreeSet<_> = colours
            .iter()
            .flat_map(|&c| g.edges_at_color(v, c))
            .collect();
        members.insert(EdgeSet::new(g, v, edges)?);
    }
    Ok(EdgeCollection::new(members))
}

/// The label of the intersection of two Toeplitz-type ideals: the
/// union of the colour sets.
pub fn intersect_toeplitz(
    g: &KGraph,
    k1: &BTreeSet<usize>,
    k2: &BTreeSet<usize>,
) -> Result<(BTreeSet<usize>, EdgeCollection)> {
    let union: BTreeSet<usize> = k1.union(k2).copied().collect();
    Ok((union.clone(), toeplitz_collection(g, &union)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BoundaryRep;
    use crate::collections::check_efficient;
    use crate::degree::Degree;
    use crate::fixtures::{line_1graph, loops, omega};

    #[test]
    fn hereditary_sets_of_a_line() {
        let g = line_1graph(3);
        // Hereditary sets are the down-closed tails: {}, {v2}, {v1,v2}, all.
        let hs = enumerate_hereditary(&g);
        assert_eq!(hs.len(), 4);
    }

    #[test]
    fn quotient_of_the_unit_grid_by_a_corner() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        let h: BTreeSet<VertexId> = [g.vertex("1_1").unwrap()].into_iter().collect();
        let q = quotient_graph(&g, &h).unwrap();
        assert_eq!(q.vertex_count(), 3);
        // Only the two edges out of the corner survive.
        assert_eq!(q.edge_count(), 2);
        assert!(q.to_data().squares.is_empty());
    }

    #[test]
    fn toeplitz_count_on_single_loops() {
        let g = loops(1, 1);
        let labels =
            enumerate_ideal_labels(&g, &EdgeCollection::empty(), &Limits::default()).unwrap();
        assert_eq!(labels.len(), 6);
        // Five collections on the whole graph, one on the empty quotient.
        assert_eq!(labels.iter().filter(|l| l.h.is_empty()).count(), 5);
        assert_eq!(labels.iter().filter(|l| !l.h.is_empty()).count(), 1);
    }

    #[test]
    fn toeplitz_collections_are_efficient_on_loop_graphs() {
        let g = loops(2, 3);
        for colours in [
            BTreeSet::from([1]),
            BTreeSet::from([2]),
            BTreeSet::from([1, 2]),
        ] {
            let coll = toeplitz_collection(&g, &colours).unwrap();
            assert!(check_efficient(&g, &coll).unwrap().is_none(), "{colours:?}");
        }
    }

    #[test]
    fn toeplitz_intersection_takes_the_colour_union() {
        let g = loops(2, 3);
        let (k, coll) =
            intersect_toeplitz(&g, &BTreeSet::from([1]), &BTreeSet::from([2])).unwrap();
        assert_eq!(k, BTreeSet::from([1, 2]));
        assert_eq!(coll, toeplitz_collection(&g, &BTreeSet::from([1, 2])).unwrap());
    }

    #[test]
    fn toeplitz_needs_no_sources() {
        let g = line_1graph(2);
        assert!(matches!(
            toeplitz_collection(&g, &BTreeSet::from([1])),
            Err(Error::HasSources(_))
        ));
    }

    #[test]
    fn saturation_detects_swallowed_members() {
        let g = line_1graph(2);
        let e = EdgeSet::from_edges(&g, [g.edge("e1").unwrap()].into_iter().collect()).unwrap();
        let coll = EdgeCollection::new([e].into_iter().collect());
        let h: BTreeSet<VertexId> = [g.vertex("v1").unwrap()].into_iter().collect();
        assert!(is_hereditary(&g, &h));
        // The member at v0 points entirely into H, so H is not saturated.
        assert!(!is_saturated(&g, &coll, &h));
        assert!(is_saturated(&g, &coll, &BTreeSet::new()));
    }

    #[test]
    fn label_round_trip_through_the_quotient_representation() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        let limits = Limits::default();
        let coll = EdgeCollection::empty();
        for label in enumerate_ideal_labels(&g, &coll, &limits).unwrap() {
            let quotient = quotient_graph(&g, &label.h).unwrap();
            let rep = BoundaryRep::new(&quotient, &label.b).unwrap();
            // Recover the collection: minimal exhaustive edge sets
            // whose relation the representation satisfies.
            let mut satisfied = Vec::new();
            for v in quotient.vertices() {
                for set in
                    crate::exhaustive::enumerate_fe_edge_sets(&quotient, v, 16).unwrap()
                {
                    if rep.ck_relation_holds_edges(&set) {
                        satisfied.push(set);
                    }
                }
            }
            let recovered = crate::collections::min_edge_sets(&satisfied);
            let want: Vec<_> = label.b.members().iter().cloned().collect();
            assert_eq!(recovered, want, "H = {:?}", label.h);
        }
    }
}

//! Built-in graph families and the test corpus.
//!
//! Everything here is deterministic.  The families:
//!
//! * `omega(k, m)`: the grid graph whose vertices are the degrees
//!   `n <= m` and whose morphisms are the pairs `n1 <= n2`; the model
//!   example of an acyclic k-graph.
//! * `loops(m, n)`: one vertex, `m` colour-1 loops and `n` colour-2
//!   loops, with flip squares `a.b = b.a`.  (`loops_with_squares` takes
//!   an arbitrary bijection instead.)
//! * small 1-graphs (lines, forks, cycles, bouquets) and products of
//!   two 1-graphs, which give acyclic 2-graphs with canonical squares.
//!
//! `corpus_acyclic` collects the acyclic graphs the verification suite
//! sweeps; `e3_failure_search` hunts through small twisted loop graphs
//! for a collection violating the substitution condition.

use crate::degree::Degree;
use crate::graph::{EdgeData, GraphData, KGraph};

/// Vertices `n <= m`, one edge `n -> n + e_i` per colour step, squares
/// from the grid structure.  Vertex names are the coordinates joined
/// with underscores; edge names are `c<i>_<vertex>`.
pub fn omega(k: usize, m: &Degree) -> KGraph {
    assert_eq!(m.rank(), k);
    let grid: Vec<Degree> = m.grid().collect();
    let vname = |n: &Degree| {
        n.coords()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("_")
    };
    let ename = |i: usize, n: &Degree| format!("c{}_{}", i, vname(n));
    let mut edges = Vec::new();
    for n in &grid {
        for i in 1..=k {
            let up = n.plus(&Degree::basis(k, i));
            if up.le(m) {
                edges.push(EdgeData {
                    id: ename(i, n),
                    color: i,
                    range: vname(n),
                    source: vname(&up),
                });
            }
        }
    }
    let mut squares = Vec::new();
    for n in &grid {
        for i in 1..=k {
            for j in (i + 1)..=k {
                let ni = n.plus(&Degree::basis(k, i));
                let nj = n.plus(&Degree::basis(k, j));
                let nij = ni.plus(&Degree::basis(k, j));
                if nij.le(m) {
                    // e_i at n, then e_j at n+e_i equals e_j at n, then e_i at n+e_j.
                    squares.push([
                        [ename(i, n), ename(j, &ni)],
                        [ename(j, n), ename(i, &nj)],
                    ]);
                }
            }
        }
    }
    GraphData {
        k,
        vertices: grid.iter().map(vname).collect(),
        edges,
        squares,
    }
    .build()
    .expect("grid graph is always valid")
}

fn loop_edge_names(prefix: &str, count: usize) -> Vec<String> {
    if count == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=count).map(|i| format!("{prefix}{i}")).collect()
    }
}

/// One vertex `v`, `m` colour-1 loops (`a`, or `a1..am`) and `n`
/// colour-2 loops (`b`, or `b1..bn`), with the flip squares
/// `a_i.b_j = b_j.a_i`.
pub fn loops(m: usize, n: usize) -> KGraph {
    let flip: Vec<(usize, usize)> = (0..m * n)
        .map(|idx| (idx / n, idx % n))
        .map(|(i, j)| (j, i))
        .collect();
    loops_with_squares(m, n, &flip)
}

/// As [`loops`], but with an arbitrary complete square assignment: entry
/// `i * n + j` of `assignment` is the pair `(l, t)` declaring
/// `a_i . b_j = b_l . a_t` (all indices zero-based).  The assignment
/// must be a bijection onto the `(l, t)` pairs; defects surface as a
/// validation panic.
pub fn loops_with_squares(m: usize, n: usize, assignment: &[(usize, usize)]) -> KGraph {
    assert_eq!(assignment.len(), m * n);
    let a = loop_edge_names("a", m);
    let b = loop_edge_names("b", n);
    let mut edges = Vec::new();
    for name in &a {
        edges.push(EdgeData {
            id: name.clone(),
            color: 1,
            range: "v".into(),
            source: "v".into(),
        });
    }
    for name in &b {
        edges.push(EdgeData {
            id: name.clone(),
            color: 2,
            range: "v".into(),
            source: "v".into(),
        });
    }
    let mut squares = Vec::new();
    for i in 0..m {
        for j in 0..n {
            let (l, t) = assignment[i * n + j];
            squares.push([
                [a[i].clone(), b[j].clone()],
                [b[l].clone(), a[t].clone()],
            ]);
        }
    }
    GraphData {
        k: 2,
        vertices: vec!["v".into()],
        edges,
        squares,
    }
    .build()
    .expect("square assignment must be a bijection")
}

/// A 1-graph described by its edge list `(id, range, source)`.
pub fn one_graph(vertices: &[&str], edges: &[(&str, &str, &str)]) -> KGraph {
    GraphData {
        k: 1,
        vertices: vertices.iter().map(|s| s.to_string()).collect(),
        edges: edges
            .iter()
            .map(|(id, r, s)| EdgeData {
                id: id.to_string(),
                color: 1,
                range: r.to_string(),
                source: s.to_string(),
            })
            .collect(),
        squares: Vec::new(),
    }
    .build()
    .expect("1-graphs have no square conditions")
}

/// Directed line `v0 <- v1 <- ... <- v{n-1}` (ranges on the left).
pub fn line_1graph(n: usize) -> KGraph {
    assert!(n >= 1);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (1..n)
        .map(|i| EdgeData {
            id: format!("e{i}"),
            color: 1,
            range: format!("v{}", i - 1),
            source: format!("v{i}"),
        })
        .collect();
    GraphData {
        k: 1,
        vertices,
        edges,
        squares: Vec::new(),
    }
    .build()
    .unwrap()
}

/// Directed cycle on `n` vertices (single colour).
pub fn cycle_1graph(n: usize) -> KGraph {
    assert!(n >= 1);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..n)
        .map(|i| EdgeData {
            id: format!("e{i}"),
            color: 1,
            range: format!("v{i}"),
            source: format!("v{}", (i + 1) % n),
        })
        .collect();
    GraphData {
        k: 1,
        vertices,
        edges,
        squares: Vec::new(),
    }
    .build()
    .unwrap()
}

/// One vertex with `l` loops of the single colour.
pub fn bouquet_1graph(l: usize) -> KGraph {
    let edges = (1..=l)
        .map(|i| EdgeData {
            id: format!("e{i}"),
            color: 1,
            range: "v".into(),
            source: "v".into(),
        })
        .collect();
    GraphData {
        k: 1,
        vertices: vec!["v".into()],
        edges,
        squares: Vec::new(),
    }
    .build()
    .unwrap()
}

/// Product of two 1-graphs: vertices are pairs, colour 1 moves in the
/// first factor, colour 2 in the second, and the squares are the
/// canonical commuting ones.  Names are joined with `|`.
pub fn product_2graph(g1: &KGraph, g2: &KGraph) -> KGraph {
    assert_eq!(g1.rank(), 1);
    assert_eq!(g2.rank(), 1);
    let pv = |u: &str, w: &str| format!("{u}|{w}");
    let mut vertices = Vec::new();
    for u in g1.vertices() {
        for w in g2.vertices() {
            vertices.push(pv(g1.vertex_name(u), g2.vertex_name(w)));
        }
    }
    let mut edges = Vec::new();
    for e in g1.edges() {
        for w in g2.vertices() {
            edges.push(EdgeData {
                id: pv(g1.edge_name(e), g2.vertex_name(w)),
                color: 1,
                range: pv(g1.vertex_name(g1.range(e)), g2.vertex_name(w)),
                source: pv(g1.vertex_name(g1.source(e)), g2.vertex_name(w)),
            });
        }
    }
    for u in g1.vertices() {
        for f in g2.edges() {
            edges.push(EdgeData {
                id: pv(g1.vertex_name(u), g2.edge_name(f)),
                color: 2,
                range: pv(g1.vertex_name(u), g2.vertex_name(g2.range(f))),
                source: pv(g1.vertex_name(u), g2.vertex_name(g2.source(f))),
            });
        }
    }
    let mut squares = Vec::new();
    for e in g1.edges() {
        for f in g2.edges() {
            // (e, r(f)) then (s(e), f)  =  (r(e), f) then (e, s(f)).
            squares.push([
                [
                    pv(g1.edge_name(e), g2.vertex_name(g2.range(f))),
                    pv(g1.vertex_name(g1.source(e)), g2.edge_name(f)),
                ],
                [
                    pv(g1.vertex_name(g1.range(e)), g2.edge_name(f)),
                    pv(g1.edge_name(e), g2.vertex_name(g2.source(f))),
                ],
            ]);
        }
    }
    GraphData {
        k: 2,
        vertices,
        edges,
        squares,
    }
    .build()
    .expect("product squares are complete by construction")
}

/// A named graph with a short description of where it comes from.
pub struct Fixture {
    pub name: &'static str,
    pub note: &'static str,
    pub graph: KGraph,
}

/// The acyclic sweep corpus: rank at most 2, at most 6 vertices.
pub fn corpus_acyclic() -> Vec<Fixture> {
    let fx = |name, note, graph| Fixture { name, note, graph };
    vec![
        fx("omega-2-1-1", "unit grid square", omega(2, &Degree::new(vec![1, 1]))),
        fx("omega-2-2-1", "2-by-1 grid", omega(2, &Degree::new(vec![2, 1]))),
        fx("omega-1-1", "single arrow as a grid", omega(1, &Degree::new(vec![1]))),
        fx("omega-1-3", "length-3 line as a grid", omega(1, &Degree::new(vec![3]))),
        fx("line-2", "two-vertex line", line_1graph(2)),
        fx("line-4", "four-vertex line", line_1graph(4)),
        fx("line-6", "six-vertex line", line_1graph(6)),
        fx(
            "fork",
            "one vertex feeding two leaves",
            one_graph(&["r", "x", "y"], &[("p", "r", "x"), ("q", "r", "y")]),
        ),
        fx(
            "double-arrow",
            "two parallel edges",
            one_graph(&["u", "w"], &[("p", "u", "w"), ("q", "u", "w")]),
        ),
        fx(
            "diamond",
            "two length-2 routes to a sink",
            one_graph(
                &["t", "l", "r", "b"],
                &[("tl", "t", "l"), ("tr", "t", "r"), ("lb", "l", "b"), ("rb", "r", "b")],
            ),
        ),
        fx(
            "caterpillar",
            "line with two extra leaves",
            one_graph(
                &["v0", "v1", "v2", "x", "y"],
                &[
                    ("e1", "v0", "v1"),
                    ("e2", "v1", "v2"),
                    ("lx", "v0", "x"),
                    ("ly", "v1", "y"),
                ],
            ),
        ),
        fx(
            "tree",
            "depth-two tree, unbalanced",
            one_graph(
                &["r", "a", "b", "c", "d"],
                &[("e1", "r", "a"), ("e2", "r", "b"), ("e3", "a", "c"), ("e4", "a", "d")],
            ),
        ),
        fx(
            "triple-arrow",
            "three parallel edges",
            one_graph(&["u", "w"], &[("p", "u", "w"), ("q", "u", "w"), ("s", "u", "w")]),
        ),
        fx(
            "broom",
            "two arrows into a fork",
            one_graph(
                &["a", "b", "c", "d"],
                &[("e1", "a", "b"), ("e2", "b", "c"), ("e3", "b", "d")],
            ),
        ),
        fx("prod-2x2", "product of two short lines", product_2graph(&line_1graph(2), &line_1graph(2))),
        fx("prod-3x2", "product line3 x line2", product_2graph(&line_1graph(3), &line_1graph(2))),
        fx("prod-2x3", "product line2 x line3", product_2graph(&line_1graph(2), &line_1graph(3))),
        fx(
            "prod-fork-line",
            "product fork x line2",
            product_2graph(
                &one_graph(&["r", "x", "y"], &[("p", "r", "x"), ("q", "r", "y")]),
                &line_1graph(2),
            ),
        ),
        fx(
            "prod-double-line",
            "product double-arrow x line2",
            product_2graph(
                &one_graph(&["u", "w"], &[("p", "u", "w"), ("q", "u", "w")]),
                &line_1graph(2),
            ),
        ),
        fx(
            "prod-line-double",
            "product line2 x double-arrow",
            product_2graph(
                &line_1graph(2),
                &one_graph(&["u", "w"], &[("p", "u", "w"), ("q", "u", "w")]),
            ),
        ),
        fx("isolated", "single vertex, no edges", one_graph(&["v"], &[])),
        fx(
            "two-components",
            "arrow plus isolated vertex",
            one_graph(&["u", "w", "z"], &[("p", "u", "w")]),
        ),
    ]
}

/// Cyclic fixtures used where exact edge-level checks suffice.
pub fn corpus_cyclic() -> Vec<Fixture> {
    let fx = |name, note, graph| Fixture { name, note, graph };
    vec![
        fx("loops-1-1", "one loop of each colour", loops(1, 1)),
        fx("loops-2-1", "two colour-1 loops, one colour-2 loop", loops(2, 1)),
        fx("loops-1-2", "one colour-1 loop, two colour-2 loops", loops(1, 2)),
        fx("loops-2-3", "two colour-1 loops, three colour-2 loops", loops(2, 3)),
        fx("cycle-3", "directed 3-cycle", cycle_1graph(3)),
        fx("bouquet-2", "two loops, one colour", bouquet_1graph(2)),
        fx(
            "loops-twisted",
            "twisted squares where substitution closure fails",
            loops_with_squares(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]),
        ),
    ]
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// Scans small loop graphs over all square assignments for a
/// collection of the two full-colour edge sets that fails the
/// substitution condition.  The scan order is fixed, so the result is
/// deterministic; the flip assignments never fail, and the first hit
/// is a twisted two-by-two graph.
pub fn e3_failure_fixture() -> (KGraph, crate::collections::EdgeCollection) {
    use crate::collections::{check_efficient, EdgeCollection, EfficiencyViolation};
    use crate::exhaustive::EdgeSet;
    for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
        for perm in permutations(m * n) {
            let assignment: Vec<(usize, usize)> =
                perm.iter().map(|&u| (u / m, u % m)).collect();
            let g = loops_with_squares(m, n, &assignment);
            let v = g.vertex("v").unwrap();
            let colour = |c: usize| {
                EdgeSet::new(&g, v, g.edges_at_color(v, c).into_iter().collect()).unwrap()
            };
            let coll = EdgeCollection::new([colour(1), colour(2)].into_iter().collect());
            if let Some(EfficiencyViolation::Substitution { .. }) =
                check_efficient(&g, &coll).unwrap()
            {
                return (g, coll);
            }
        }
    }
    unreachable!("the scan space contains substitution failures");
}

pub fn fixture(name: &str) -> Option<KGraph> {
    corpus_acyclic()
        .into_iter()
        .chain(corpus_cyclic())
        .find(|f| f.name == name)
        .map(|f| f.graph)
}

pub fn fixture_names() -> Vec<&'static str> {
    corpus_acyclic()
        .iter()
        .map(|f| f.name)
        .chain(corpus_cyclic().iter().map(|f| f.name))
        .collect()
}

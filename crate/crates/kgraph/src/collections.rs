//! Efficient and satiated collections.
//!
//! A collection of exhaustive edge sets is *efficient* when it is an
//! antichain that is stable under extension and substitution up to
//! passing to members below.  A collection of exhaustive path sets is
//! *satiated* when it is closed under supersets, extension sets,
//! truncation and substitution.  The theory pairs the two notions off:
//! satiating an efficient collection and pruning a satiated collection
//! back to its minimal edge sets are mutually inverse.
//!
//! Satiation works on acyclic graphs, where every per-vertex path
//! universe is finite; sets are handled as bitmasks over that universe
//! and the closure runs as a worklist fixpoint.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::exhaustive::{
    avoiding_path_edges, enumerate_fe_edge_sets, is_exhaustive_edges, EdgeSet, ExhaustiveVerdict,
    PathSet,
};
use crate::graph::{EdgeId, KGraph, VertexId};
use crate::path::Path;

/// Resource guards for the enumeration routines.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Cap on `|vΛ^1|` wherever subsets of the edges at a vertex are scanned.
    pub max_edge_width: usize,
    /// Cap on the per-vertex path universe in the satiation context.
    pub max_universe_bits: usize,
    /// Cap on the number of sets a closure may accumulate.
    pub max_members: usize,
    /// Cap on candidate collections during enumeration.
    pub max_candidates: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_edge_width: 16,
            max_universe_bits: 20,
            max_members: 100_000,
            max_candidates: 1_000_000,
        }
    }
}

/// A finite collection of edge sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeCollection {
    members: BTreeSet<EdgeSet>,
}

impl EdgeCollection {
    pub fn new(members: BTreeSet<EdgeSet>) -> EdgeCollection {
        EdgeCollection { members }
    }

    pub fn empty() -> EdgeCollection {
        EdgeCollection::default()
    }

    pub fn members(&self) -> &BTreeSet<EdgeSet> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn at_vertex<'a>(&'a self, v: VertexId) -> impl Iterator<Item = &'a EdgeSet> {
        self.members.iter().filter(move |s| s.vertex() == v)
    }

    pub fn to_path_collection(&self, g: &KGraph) -> PathCollection {
        PathCollection {
            members: self.members.iter().map(|s| s.to_path_set(g)).collect(),
        }
    }
}

/// A finite collection of path sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathCollection {
    members: BTreeSet<PathSet>,
}

impl PathCollection {
    pub fn new(members: BTreeSet<PathSet>) -> PathCollection {
        PathCollection { members }
    }

    pub fn empty() -> PathCollection {
        PathCollection::default()
    }

    pub fn members(&self) -> &BTreeSet<PathSet> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The members all of whose paths are single edges, as edge sets.
    pub fn edge_members(&self) -> Vec<EdgeSet> {
        self.members.iter().filter_map(|s| s.as_edge_set()).collect()
    }
}

/// Why a collection fails to be efficient.
#[derive(Debug, Clone)]
pub enum EfficiencyViolation {
    /// Two comparable members.
    NotAntichain { smaller: EdgeSet, larger: EdgeSet },
    /// The extension set of `edge` against `member` has no member below it.
    Extension {
        member: EdgeSet,
        edge: EdgeId,
        extension: EdgeSet,
    },
    /// The substitution of `f_set` into `member` at `edge` has no member below it.
    Substitution {
        member: EdgeSet,
        edge: EdgeId,
        f_set: EdgeSet,
        substituted: EdgeSet,
    },
}

fn verify_members_exhaustive(g: &KGraph, coll: &EdgeCollection) -> Result<()> {
    for set in coll.members() {
        if let Some(witness) = avoiding_path_edges(g, set)? {
            return Err(Error::NotExhaustive {
                vertex: g.vertex_name(set.vertex()).to_string(),
                witness: g.path_name(&witness),
            });
        }
    }
    Ok(())
}

fn ext_edge_unchecked(g: &KGraph, f: EdgeId, set: &EdgeSet) -> EdgeSet {
    let mut edges = BTreeSet::new();
    for &e2 in g.edges_at(g.source(f)) {
        if g.color(e2) != g.color(f) {
            let (pulled, _) = g.swap(f, e2);
            if set.contains(pulled) {
                edges.insert(e2);
            }
        }
    }
    EdgeSet::new(g, g.source(f), edges).expect("edges share the source of f")
}

fn substitute_unchecked(g: &KGraph, set: &EdgeSet, e: EdgeId, f_set: &EdgeSet) -> EdgeSet {
    let mut edges = set.edges().clone();
    edges.remove(&e);
    for &f in f_set.edges() {
        if g.color(f) == g.color(e) {
            edges.insert(e);
        } else {
            let (pulled, _) = g.swap(e, f);
            edges.insert(pulled);
        }
    }
    EdgeSet::new(g, set.vertex(), edges).expect("substitution stays at the vertex of the set")
}

/// Checks the efficiency conditions directly: antichain, extension
/// sets dominate a member, substituted sets dominate a member.
/// Members must be exhaustive; the first failure is returned as a
/// certificate.
pub fn check_efficient(g: &KGraph, coll: &EdgeCollection) -> Result<Option<EfficiencyViolation>> {
    verify_members_exhaustive(g, coll)?;
    if let Some(v) = antichain_violation(coll) {
        return Ok(Some(v));
    }
    for set in coll.members() {
        for &f in g.edges_at(set.vertex()) {
            if set.contains(f) {
                continue;
            }
            let extension = ext_edge_unchecked(g, f, set);
            if !coll.members().iter().any(|m| m.is_subset(&extension)) {
                return Ok(Some(EfficiencyViolation::Extension {
                    member: set.clone(),
                    edge: f,
                    extension,
                }));
            }
        }
    }
    for set in coll.members() {
        for &e in set.edges() {
            for f_set in coll.at_vertex(g.source(e)) {
                let substituted = substitute_unchecked(g, set, e, f_set);
                if !coll.members().iter().any(|m| m.is_subset(&substituted)) {
                    return Ok(Some(EfficiencyViolation::Substitution {
                        member: set.clone(),
                        edge: e,
                        f_set: f_set.clone(),
                        substituted,
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn antichain_violation(coll: &EdgeCollection) -> Option<EfficiencyViolation> {
    for a in coll.members() {
        for b in coll.members() {
            if a != b && a.is_subset(b) {
                return Some(EfficiencyViolation::NotAntichain {
                    smaller: a.clone(),
                    larger: b.clone(),
                });
            }
        }
    }
    None
}

/// Membership in the up-closure: `set` is exhaustive and lies above a
/// member of `coll`.
pub fn hat_contains(g: &KGraph, coll: &EdgeCollection, set: &EdgeSet) -> Result<bool> {
    Ok(is_exhaustive_edges(g, set)?
        && coll.members().iter().any(|m| m.is_subset(set)))
}

/// The efficiency conditions phrased through the up-closure: the
/// extension and substituted sets must lie in the hat of the
/// collection.  Equivalent to [`check_efficient`]; kept separate so
/// the two can be played against each other.
pub fn check_efficient_hat(
    g: &KGraph,
    coll: &EdgeCollection,
) -> Result<Option<EfficiencyViolation>> {
    verify_members_exhaustive(g, coll)?;
    if let Some(v) = antichain_violation(coll) {
        return Ok(Some(v));
    }
    for set in coll.members() {
        for &f in g.edges_at(set.vertex()) {
            if set.contains(f) {
                continue;
            }
            let extension = ext_edge_unchecked(g, f, set);
            if !hat_contains(g, coll, &extension)? {
                return Ok(Some(EfficiencyViolation::Extension {
                    member: set.clone(),
                    edge: f,
                    extension,
                }));
            }
        }
    }
    for set in coll.members() {
        for &e in set.edges() {
            for f_set in coll.at_vertex(g.source(e)) {
                let substituted = substitute_unchecked(g, set, e, f_set);
                if !hat_contains(g, coll, &substituted)? {
                    return Ok(Some(EfficiencyViolation::Substitution {
                        member: set.clone(),
                        edge: e,
                        f_set: f_set.clone(),
                        substituted,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The up-closure of `coll` inside the exhaustive edge sets: every
/// exhaustive superset of a member.  Supersets of exhaustive sets are
/// again exhaustive, so this is the union of the superset cones.
pub fn edge_satiation(g: &KGraph, coll: &EdgeCollection, limits: &Limits) -> Result<Vec<EdgeSet>> {
    verify_members_exhaustive(g, coll)?;
    let mut out: BTreeSet<EdgeSet> = BTreeSet::new();
    for set in coll.members() {
        let v = set.vertex();
        let all = g.edges_at(v);
        if all.len() > limits.max_edge_width {
            return Err(Error::ResourceLimit(format!(
                "vertex {} has {} edges, over the cap {}",
                g.vertex_name(v),
                all.len(),
                limits.max_edge_width
            )));
        }
        let rest: Vec<EdgeId> = all.iter().copied().filter(|e| !set.contains(*e)).collect();
        for mask in 0u64..(1 << rest.len()) {
            let mut edges = set.edges().clone();
            for (i, &e) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    edges.insert(e);
                }
            }
            let sup = EdgeSet::new(g, v, edges)?;
            debug_assert!(is_exhaustive_edges(g, &sup)?);
            out.insert(sup);
        }
    }
    Ok(out.into_iter().collect())
}

/// The minimal elements of a family of edge sets under inclusion.
pub fn min_edge_sets(sets: &[EdgeSet]) -> Vec<EdgeSet> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| *t != **s && t.is_subset(s)))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// The minimal elements of a family of path sets under inclusion.
pub fn min_path_sets(sets: &[PathSet]) -> Vec<PathSet> {
    sets.iter()
        .filter(|s| !sets.iter().any(|t| *t != **s && t.is_subset(s)))
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Precomputed path data for the satiation machinery: per vertex the
/// list of nonidentity paths, the exhaustive subsets as bitmasks, and
/// tables for the closure rules.
pub struct SatContext<'g> {
    g: &'g KGraph,
    verts: Vec<VertexUniverse>,
}

struct VertexUniverse {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    /// Exhaustive masks, ascending.
    fe_masks: Vec<u64>,
    fe_set: HashSet<u64>,
    /// Bit `j` set when `paths[i]` extends `paths[j]`.
    extends: Vec<u64>,
    /// Source vertex of each path.
    src: Vec<VertexId>,
    /// `ext1[i][j]`: extension set of `paths[i]` against `{paths[j]}`
    /// as a mask at the source of `paths[i]`; `None` when `paths[i]`
    /// extends `paths[j]`.
    ext1: Vec<Vec<Option<u64>>>,
    /// `trunc[j]`: indices of the proper truncations of `paths[j]`.
    trunc: Vec<Vec<usize>>,
    /// `comp[j]`: for each index `m` in the universe at the source of
    /// `paths[j]`, the index of the composite here.
    comp: Vec<Vec<usize>>,
}

impl<'g> SatContext<'g> {
    pub fn new(g: &'g KGraph, limits: &Limits) -> Result<SatContext<'g>> {
        if !g.is_acyclic() {
            return Err(Error::CyclicGraph(
                "satiation needs the finite path universes of an acyclic graph".into(),
            ));
        }
        let mut verts = Vec::new();
        for v in g.vertices() {
            let mut paths: Vec<Path> = g
                .paths_from(v, None)?
                .into_iter()
                .filter(|p| !p.is_vertex())
                .collect();
            paths.sort();
            let n = paths.len();
            if n > limits.max_universe_bits {
                return Err(Error::ResourceLimit(format!(
                    "vertex {} carries {} paths, over the cap {}",
                    g.vertex_name(v),
                    n,
                    limits.max_universe_bits
                )));
            }
            let index: HashMap<Path, usize> =
                paths.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
            let mut compat = vec![0u64; n];
            for i in 0..n {
                for j in 0..n {
                    if g.compatible(&paths[i], &paths[j]) {
                        compat[i] |= 1 << j;
                    }
                }
            }
            let mut fe_masks = Vec::new();
            let mut fe_set = HashSet::new();
            for mask in 1u64..(1 << n) {
                if (0..n).all(|i| compat[i] & mask != 0) {
                    fe_masks.push(mask);
                    fe_set.insert(mask);
                }
            }
            let mut extends = vec![0u64; n];
            for i in 0..n {
                for j in 0..n {
                    let (pi, pj) = (&paths[i], &paths[j]);
                    if pj.degree().le(pi.degree()) && g.prefix(pi, pj.degree())? == *pj {
                        extends[i] |= 1 << j;
                    }
                }
            }
            let src: Vec<VertexId> = paths.iter().map(|p| p.source()).collect();
            verts.push(VertexUniverse {
                paths,
                index,
                fe_masks,
                fe_set,
                extends,
                src,
                ext1: Vec::new(),
                trunc: Vec::new(),
                comp: Vec::new(),
            });
        }
        let mut ctx = SatContext { g, verts };
        ctx.fill_tables()?;
        Ok(ctx)
    }

    fn fill_tables(&mut self) -> Result<()> {
        let g = self.g;
        for vi in 0..self.verts.len() {
            let n = self.verts[vi].paths.len();
            let mut ext1 = vec![vec![None; n]; n];
            let mut trunc = vec![Vec::new(); n];
            let mut comp = vec![Vec::new(); n];
            for i in 0..n {
                for j in 0..n {
                    if self.verts[vi].extends[i] >> j & 1 == 1 {
                        continue;
                    }
                    let (pi, pj) = (&self.verts[vi].paths[i], &self.verts[vi].paths[j]);
                    let tgt = &self.verts[pi.source().index()];
                    let mut mask = 0u64;
                    for (tail, _) in g.lambda_min(pi, pj) {
                        let idx = tgt.index.get(&tail).copied().ok_or_else(|| {
                            Error::Precondition("extension fell outside the universe".into())
                        })?;
                        mask |= 1 << idx;
                    }
                    ext1[i][j] = Some(mask);
                }
            }
            for j in 0..n {
                let pj = self.verts[vi].paths[j].clone();
                for m in pj.degree().grid() {
                    if m.is_zero() || m == *pj.degree() {
                        continue;
                    }
                    let head = g.prefix(&pj, &m)?;
                    trunc[j].push(self.verts[vi].index[&head]);
                }
                trunc[j].sort_unstable();
                trunc[j].dedup();
                let wv = &self.verts[pj.source().index()];
                let mut row = Vec::with_capacity(wv.paths.len());
                for mu in wv.paths.clone() {
                    let whole = g.compose(&pj, &mu)?;
                    row.push(self.verts[vi].index[&whole]);
                }
                comp[j] = row;
            }
            self.verts[vi].ext1 = ext1;
            self.verts[vi].trunc = trunc;
            self.verts[vi].comp = comp;
        }
        Ok(())
    }

    pub fn universe(&self, v: VertexId) -> &[Path] {
        &self.verts[v.index()].paths
    }

    pub fn fe_masks(&self, v: VertexId) -> &[u64] {
        &self.verts[v.index()].fe_masks
    }

    pub fn is_fe(&self, v: VertexId, mask: u64) -> bool {
        self.verts[v.index()].fe_set.contains(&mask)
    }

    /// All exhaustive path sets of the graph.
    pub fn fe_all(&self) -> Vec<PathSet> {
        let mut out = Vec::new();
        for v in self.g.vertices() {
            for &mask in self.fe_masks(v) {
                out.push(self.set_of(v, mask));
            }
        }
        out
    }

    pub fn mask_of(&self, set: &PathSet) -> Result<(VertexId, u64)> {
        let v = set.vertex();
        let uni = &self.verts[v.index()];
        let mut mask = 0u64;
        for p in set.paths() {
            let idx = uni.index.get(p).ok_or_else(|| {
                Error::Precondition(format!(
                    "path {} is not in the universe at {}",
                    self.g.path_name(p),
                    self.g.vertex_name(v)
                ))
            })?;
            mask |= 1 << idx;
        }
        Ok((v, mask))
    }

    pub fn set_of(&self, v: VertexId, mask: u64) -> PathSet {
        let uni = &self.verts[v.index()];
        let paths: BTreeSet<Path> = (0..uni.paths.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| uni.paths[i].clone())
            .collect();
        PathSet::new(self.g, v, paths).expect("universe paths share the vertex")
    }

    fn bits(mask: u64) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| mask >> i & 1 == 1)
    }

    /// Extension sets `Ext(λ; E)` over the whole universe at the
    /// vertex of `E`, for the paths that extend no member.
    fn rule_extension(&self, v: usize, mask: u64, out: &mut Vec<(VertexId, u64)>) {
        let uni = &self.verts[v];
        for i in 0..uni.paths.len() {
            if uni.extends[i] & mask != 0 {
                continue;
            }
            let mut ext = 0u64;
            for j in Self::bits(mask) {
                ext |= uni.ext1[i][j].expect("non-extending pairs carry extension masks");
            }
            out.push((uni.src[i], ext));
        }
    }

    /// Truncating a single member of `E`; the other truncation
    /// patterns are compositions of these.
    fn rule_truncation(&self, v: usize, mask: u64, out: &mut Vec<(VertexId, u64)>) {
        let uni = &self.verts[v];
        for j in Self::bits(mask) {
            for &t in &uni.trunc[j] {
                out.push((VertexId::from_index(v), mask & !(1 << j) | 1 << t));
            }
        }
    }

    /// Substituting one member of `E` by its composites with a set `F`
    /// at its source; the general rule is a composition of these.
    fn rule_substitution(
        &self,
        v: usize,
        mask: u64,
        fv: VertexId,
        fmask: u64,
        out: &mut Vec<(VertexId, u64)>,
    ) {
        let uni = &self.verts[v];
        for j in Self::bits(mask) {
            if uni.src[j] != fv {
                continue;
            }
            let mut new = mask & !(1 << j);
            for m in Self::bits(fmask) {
                new |= 1 << uni.comp[j][m];
            }
            out.push((VertexId::from_index(v), new));
        }
    }

    fn rule_supersets(&self, v: usize, mask: u64, out: &mut Vec<(VertexId, u64)>) {
        let full = (1u64 << self.verts[v].paths.len()) - 1;
        let mut s = mask;
        loop {
            s = (s + 1) | mask;
            if s > full {
                break;
            }
            out.push((VertexId::from_index(v), s));
        }
    }

    /// The satiation closure of the given sets.
    pub fn close(
        &self,
        seeds: &[(VertexId, u64)],
        limits: &Limits,
    ) -> Result<BTreeSet<(VertexId, u64)>> {
        let mut all: BTreeSet<(VertexId, u64)> = BTreeSet::new();
        let mut list: Vec<(VertexId, u64)> = Vec::new();
        let mut fresh: Vec<(VertexId, u64)> = Vec::new();
        for &s in seeds {
            if all.insert(s) {
                list.push(s);
                fresh.push(s);
            }
        }
        while !fresh.is_empty() {
            let mut produced = Vec::new();
            for &(v, m) in &fresh {
                self.rule_extension(v.index(), m, &mut produced);
                self.rule_truncation(v.index(), m, &mut produced);
                self.rule_supersets(v.index(), m, &mut produced);
            }
            let snapshot = list.clone();
            for &(v, m) in &fresh {
                for &(w, fm) in &snapshot {
                    self.rule_substitution(v.index(), m, w, fm, &mut produced);
                    self.rule_substitution(w.index(), fm, v, m, &mut produced);
                }
            }
            fresh.clear();
            for s in produced {
                debug_assert!(
                    self.is_fe(s.0, s.1),
                    "closure rules must stay inside the exhaustive sets"
                );
                if all.insert(s) {
                    if all.len() > limits.max_members {
                        return Err(Error::ResourceLimit(
                            "satiation closure exceeded the member budget".into(),
                        ));
                    }
                    list.push(s);
                    fresh.push(s);
                }
            }
        }
        Ok(all)
    }
}

/// Why a collection fails to be satiated.
#[derive(Debug, Clone)]
pub enum SatiationViolation {
    /// A superset of a member (within the exhaustive sets) is missing.
    Superset { member: PathSet, superset: PathSet },
    /// An extension set is missing.
    Extension {
        member: PathSet,
        path: Path,
        extension: PathSet,
    },
    /// A single-member truncation is missing.
    Truncation {
        member: PathSet,
        path: Path,
        cut: Degree,
        truncated: PathSet,
    },
    /// A single-member substitution is missing.
    Substitution {
        member: PathSet,
        path: Path,
        f_set: PathSet,
        substituted: PathSet,
    },
}

fn verify_path_members_exhaustive(g: &KGraph, coll: &PathCollection) -> Result<()> {
    for set in coll.members() {
        match crate::exhaustive::is_exhaustive_general(g, set, None)? {
            ExhaustiveVerdict::Exhaustive => {}
            ExhaustiveVerdict::NotExhaustive { witness } => {
                return Err(Error::NotExhaustive {
                    vertex: g.vertex_name(set.vertex()).to_string(),
                    witness: g.path_name(&witness),
                });
            }
            ExhaustiveVerdict::Unknown { .. } => {
                return Err(Error::Precondition(
                    "exhaustiveness of a member could not be decided".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Decides closure under the satiation rules.  Checking the
/// single-member forms of truncation and substitution suffices: a
/// general instance factors into single-member steps whose
/// intermediate stages closure would also contain.
pub fn is_satiated(
    g: &KGraph,
    coll: &PathCollection,
    limits: &Limits,
) -> Result<Option<SatiationViolation>> {
    verify_path_members_exhaustive(g, coll)?;
    let ctx = SatContext::new(g, limits)?;
    let mut masks: HashMap<VertexId, HashSet<u64>> = HashMap::new();
    let mut mask_list = Vec::new();
    for set in coll.members() {
        let (v, m) = ctx.mask_of(set)?;
        masks.entry(v).or_default().insert(m);
        mask_list.push((v, m));
    }
    let holds = |v: VertexId, m: u64| masks.get(&v).map_or(false, |s| s.contains(&m));
    for &(v, m) in &mask_list {
        let mut out = Vec::new();
        ctx.rule_supersets(v.index(), m, &mut out);
        for (w, s) in out {
            if !holds(w, s) {
                return Ok(Some(SatiationViolation::Superset {
                    member: ctx.set_of(v, m),
                    superset: ctx.set_of(w, s),
                }));
            }
        }
        let uni = &ctx.verts[v.index()];
        for i in 0..uni.paths.len() {
            if uni.extends[i] & m != 0 {
                continue;
            }
            let mut ext = 0u64;
            for j in SatContext::bits(m) {
                ext |= uni.ext1[i][j].expect("non-extending pairs carry extension masks");
            }
            if !holds(uni.src[i], ext) {
                return Ok(Some(SatiationViolation::Extension {
                    member: ctx.set_of(v, m),
                    path: uni.paths[i].clone(),
                    extension: ctx.set_of(uni.src[i], ext),
                }));
            }
        }
        for j in SatContext::bits(m) {
            let pj = uni.paths[j].clone();
            for n in pj.degree().grid() {
                if n.is_zero() || n == *pj.degree() {
                    continue;
                }
                let head = g.prefix(&pj, &n)?;
                let t = uni.index[&head];
                let new = m & !(1 << j) | 1 << t;
                if !holds(v, new) {
                    return Ok(Some(SatiationViolation::Truncation {
                        member: ctx.set_of(v, m),
                        path: pj,
                        cut: n,
                        truncated: ctx.set_of(v, new),
                    }));
                }
            }
        }
        for j in SatContext::bits(m) {
            let w = uni.src[j];
            if let Some(fset) = masks.get(&w) {
                for &fm in fset {
                    let mut new = m & !(1 << j);
                    for mm in SatContext::bits(fm) {
                        new |= 1 << uni.comp[j][mm];
                    }
                    if !holds(v, new) {
                        return Ok(Some(SatiationViolation::Substitution {
                            member: ctx.set_of(v, m),
                            path: uni.paths[j].clone(),
                            f_set: ctx.set_of(w, fm),
                            substituted: ctx.set_of(v, new),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// The satiation (closure under the four rules) of a collection of
/// exhaustive path sets.
pub fn satiate(g: &KGraph, coll: &PathCollection, limits: &Limits) -> Result<PathCollection> {
    verify_path_members_exhaustive(g, coll)?;
    let ctx = SatContext::new(g, limits)?;
    let mut seeds = Vec::new();
    for set in coll.members() {
        seeds.push(ctx.mask_of(set)?);
    }
    let closed = ctx.close(&seeds, limits)?;
    Ok(PathCollection {
        members: closed.into_iter().map(|(v, m)| ctx.set_of(v, m)).collect(),
    })
}

/// From efficient to satiated: satiate the collection, viewing edges
/// as paths.  The input is verified to be efficient.
pub fn to_satiated(g: &KGraph, coll: &EdgeCollection, limits: &Limits) -> Result<PathCollection> {
    if let Some(v) = check_efficient(g, coll)? {
        return Err(Error::Precondition(format!(
            "collection is not efficient: {}",
            describe_efficiency_violation(g, &v)
        )));
    }
    satiate(g, &coll.to_path_collection(g), limits)
}

/// From satiated to efficient: the minimal members that are sets of
/// edges.  The input is verified to be satiated and the output to be
/// efficient.
pub fn to_efficient(g: &KGraph, coll: &PathCollection, limits: &Limits) -> Result<EdgeCollection> {
    if is_satiated(g, coll, limits)?.is_some() {
        return Err(Error::Precondition("collection is not satiated".into()));
    }
    let edge_members = coll.edge_members();
    let out = EdgeCollection {
        members: min_edge_sets(&edge_members).into_iter().collect(),
    };
    match check_efficient(g, &out)? {
        None => Ok(out),
        Some(_) => Err(Error::Precondition(
            "pruning a satiated collection must give an efficient one".into(),
        )),
    }
}

pub fn describe_efficiency_violation(g: &KGraph, v: &EfficiencyViolation) -> String {
    match v {
        EfficiencyViolation::NotAntichain { smaller, larger } => format!(
            "member {{{}}} is contained in member {{{}}}",
            smaller.names(g).join(","),
            larger.names(g).join(",")
        ),
        EfficiencyViolation::Extension {
            member,
            edge,
            extension,
        } => format!(
            "extension of {} against {{{}}} gives {{{}}} at {}, with no member below it",
            g.edge_name(*edge),
            member.names(g).join(","),
            extension.names(g).join(","),
            g.vertex_name(extension.vertex()),
        ),
        EfficiencyViolation::Substitution {
            member,
            edge,
            f_set,
            substituted,
        } => format!(
            "substituting {{{}}} into {{{}}} at {} gives {{{}}}, with no member below it",
            f_set.names(g).join(","),
            member.names(g).join(","),
            g.edge_name(*edge),
            substituted.names(g).join(","),
        ),
    }
}

pub fn describe_satiation_violation(g: &KGraph, v: &SatiationViolation) -> String {
    match v {
        SatiationViolation::Superset { member, superset } => format!(
            "superset {{{}}} of member {{{}}} is missing",
            superset.names(g).join(","),
            member.names(g).join(",")
        ),
        SatiationViolation::Extension {
            member,
            path,
            extension,
        } => format!(
            "extension set {{{}}} of {} against {{{}}} is missing",
            extension.names(g).join(","),
            g.path_name(path),
            member.names(g).join(",")
        ),
        SatiationViolation::Truncation {
            member,
            path,
            cut,
            truncated,
        } => format!(
            "truncation of {} at {} in {{{}}} gives the missing set {{{}}}",
            g.path_name(path),
            cut,
            member.names(g).join(","),
            truncated.names(g).join(",")
        ),
        SatiationViolation::Substitution {
            member,
            path,
            f_set,
            substituted,
        } => format!(
            "substituting {{{}}} into {{{}}} at {} gives the missing set {{{}}}",
            f_set.names(g).join(","),
            member.names(g).join(","),
            g.path_name(path),
            substituted.names(g).join(",")
        ),
    }
}

fn antichains_of(sets: &[EdgeSet], limits: &Limits) -> Result<Vec<Vec<usize>>> {
    let n = sets.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    // Depth-first over "first undecided element": include it when it
    // is incomparable with everything chosen, or skip it.
    while let Some((next, chosen)) = stack.pop() {
        if next >= n {
            continue;
        }
        stack.push((next + 1, chosen.clone()));
        let ok = chosen
            .iter()
            .all(|&i| !sets[i].is_subset(&sets[next]) && !sets[next].is_subset(&sets[i]));
        if ok {
            let mut with = chosen;
            with.push(next);
            out.push(with.clone());
            if out.len() > limits.max_candidates {
                return Err(Error::ResourceLimit(
                    "antichain enumeration exceeded the candidate budget".into(),
                ));
            }
            stack.push((next + 1, with));
        }
    }
    Ok(out)
}

/// Every efficient collection of the graph, found by scanning
/// per-vertex antichains of exhaustive edge sets and filtering by the
/// efficiency conditions.
pub fn enumerate_efficient(g: &KGraph, limits: &Limits) -> Result<Vec<EdgeCollection>> {
    let mut per_vertex: Vec<Vec<Vec<EdgeSet>>> = Vec::new();
    let mut total: u128 = 1;
    for v in g.vertices() {
        let fe = enumerate_fe_edge_sets(g, v, limits.max_edge_width)?;
        let antichains = antichains_of(&fe, limits)?;
        total = total.saturating_mul(antichains.len() as u128);
        per_vertex.push(
            antichains
                .into_iter()
                .map(|idxs| idxs.into_iter().map(|i| fe[i].clone()).collect())
                .collect(),
        );
    }
    if total > limits.max_candidates as u128 {
        return Err(Error::ResourceLimit(format!(
            "{total} candidate collections, over the budget {}",
            limits.max_candidates
        )));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_vertex.len()];
    loop {
        let mut members = BTreeSet::new();
        for (vi, sel) in choice.iter().enumerate() {
            for set in &per_vertex[vi][*sel] {
                members.insert(set.clone());
            }
        }
        let coll = EdgeCollection { members };
        if check_efficient(g, &coll)?.is_none() {
            out.push(coll);
        }
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(out);
            }
            choice[pos] += 1;
            if choice[pos] < per_vertex[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Every satiated collection of the graph.  Satiated collections are
/// the closed sets of the satiation closure, which is generated from
/// the closure of the empty collection by adding one exhaustive set at
/// a time and closing again.
pub fn enumerate_satiated(g: &KGraph, limits: &Limits) -> Result<Vec<PathCollection>> {
    let ctx = SatContext::new(g, limits)?;
    let fe_all: Vec<(VertexId, u64)> = g
        .vertices()
        .flat_map(|v| ctx.fe_masks(v).iter().map(move |&m| (v, m)))
        .collect();
    let bottom = ctx.close(&[], limits)?;
    let mut seen: HashSet<Vec<(VertexId, u64)>> = HashSet::new();
    let key = |s: &BTreeSet<(VertexId, u64)>| s.iter().copied().collect::<Vec<_>>();
    let mut queue = vec![bottom.clone()];
    seen.insert(key(&bottom));
    let mut out = Vec::new();
    while let Some(current) = queue.pop() {
        out.push(current.clone());
        if out.len() > limits.max_candidates {
            return Err(Error::ResourceLimit(
                "satiated enumeration exceeded the candidate budget".into(),
            ));
        }
        for &x in &fe_all {
            if current.contains(&x) {
                continue;
            }
            let mut seeds: Vec<(VertexId, u64)> = current.iter().copied().collect();
            seeds.push(x);
            let next = ctx.close(&seeds, limits)?;
            if seen.insert(key(&next)) {
                queue.push(next);
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|s| PathCollection {
            members: s.into_iter().map(|(v, m)| ctx.set_of(v, m)).collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{corpus_acyclic, loops, omega};

    fn edge_set(g: &KGraph, names: &[&str]) -> EdgeSet {
        EdgeSet::from_edges(g, names.iter().map(|n| g.edge(n).unwrap()).collect()).unwrap()
    }

    fn coll(g: &KGraph, sets: &[&[&str]]) -> EdgeCollection {
        EdgeCollection::new(sets.iter().map(|s| edge_set(g, s)).collect())
    }

    #[test]
    fn loops_1_1_has_five_efficient_collections() {
        let g = loops(1, 1);
        let found = enumerate_efficient(&g, &Limits::default()).unwrap();
        assert_eq!(found.len(), 5);
        // The empty collection, the three singletons, and {a},{b} together.
        let expected: Vec<EdgeCollection> = vec![
            EdgeCollection::empty(),
            coll(&g, &[&["a"]]),
            coll(&g, &[&["b"]]),
            coll(&g, &[&["a", "b"]]),
            coll(&g, &[&["a"], &["b"]]),
        ];
        for e in &expected {
            assert!(found.contains(e), "missing {:?}", e);
        }
    }

    #[test]
    fn single_colour_collections_on_loop_graphs_are_efficient() {
        for (m, n) in [(1, 1), (2, 1), (2, 3)] {
            let g = loops(m, n);
            let a_names: Vec<String> = if m == 1 {
                vec!["a".into()]
            } else {
                (1..=m).map(|i| format!("a{i}")).collect()
            };
            let refs: Vec<&str> = a_names.iter().map(|s| s.as_str()).collect();
            let c = coll(&g, &[&refs]);
            assert!(
                check_efficient(&g, &c).unwrap().is_none(),
                "colour-1 collection on loops({m},{n})"
            );
        }
    }

    #[test]
    fn direct_and_hat_formulations_agree() {
        let g = loops(2, 1);
        let v = g.vertex("v").unwrap();
        let fe = enumerate_fe_edge_sets(&g, v, 16).unwrap();
        let anti = antichains_of(&fe, &Limits::default()).unwrap();
        for idxs in anti {
            let c = EdgeCollection::new(idxs.iter().map(|&i| fe[i].clone()).collect());
            let direct = check_efficient(&g, &c).unwrap();
            let hat = check_efficient_hat(&g, &c).unwrap();
            assert_eq!(direct.is_none(), hat.is_none(), "{:?}", c);
        }
    }

    #[test]
    fn edge_satiation_on_two_loops() {
        let g = loops(2, 1);
        let c = coll(&g, &[&["a1", "a2"]]);
        let hat = edge_satiation(&g, &c, &Limits::default()).unwrap();
        let names: Vec<Vec<String>> = hat.iter().map(|s| s.names(&g)).collect();
        assert_eq!(names, vec![vec!["a1", "a2"], vec!["a1", "a2", "b"]]);
    }

    #[test]
    fn satiate_empty_is_empty() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        let s = satiate(&g, &PathCollection::empty(), &Limits::default()).unwrap();
        assert!(s.is_empty());
        assert!(is_satiated(&g, &s, &Limits::default()).unwrap().is_none());
    }

    #[test]
    fn satiation_of_the_corner_pair_on_the_unit_grid() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        let c = coll(&g, &[&["c1_0_0", "c2_0_0"]]);
        let s = to_satiated(&g, &c, &Limits::default()).unwrap();
        assert!(is_satiated(&g, &s, &Limits::default()).unwrap().is_none());
        // Closure blows the corner pair up but pruning recovers it.
        let back = to_efficient(&g, &s, &Limits::default()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn satiated_collections_on_the_unit_grid_match_the_efficient_count() {
        let g = omega(2, &Degree::new(vec![1, 1]));
        let limits = Limits::default();
        let eff = enumerate_efficient(&g, &limits).unwrap();
        let sat = enumerate_satiated(&g, &limits).unwrap();
        assert_eq!(eff.len(), sat.len());
        for s in &sat {
            assert!(is_satiated(&g, s, &limits).unwrap().is_none());
        }
    }

    #[test]
    fn every_enumerated_satiated_collection_is_closed_and_vice_versa() {
        // Independent cross-check on a smaller graph: brute force over
        // all subsets of the exhaustive sets.
        let g = crate::fixtures::line_1graph(3);
        let limits = Limits::default();
        let ctx = SatContext::new(&g, &limits).unwrap();
        let fe: Vec<(VertexId, u64)> = g
            .vertices()
            .flat_map(|v| ctx.fe_masks(v).iter().map(move |&m| (v, m)))
            .collect();
        let mut brute = 0;
        for mask in 0u64..(1 << fe.len()) {
            let chosen: Vec<(VertexId, u64)> = fe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect();
            let coll = PathCollection::new(
                chosen.iter().map(|&(v, m)| ctx.set_of(v, m)).collect(),
            );
            if is_satiated(&g, &coll, &limits).unwrap().is_none() {
                brute += 1;
            }
        }
        let enumerated = enumerate_satiated(&g, &limits).unwrap();
        assert_eq!(enumerated.len(), brute);
    }

    #[test]
    fn min_extracts_minimal_sets() {
        let g = loops(2, 1);
        let sets = vec![
            edge_set(&g, &["a1", "a2"]),
            edge_set(&g, &["a1", "a2", "b"]),
            edge_set(&g, &["b"]),
        ];
        let min = min_edge_sets(&sets);
        assert_eq!(min.len(), 2);
        assert!(min.contains(&edge_set(&g, &["a1", "a2"])));
        assert!(min.contains(&edge_set(&g, &["b"])));
    }

    #[test]
    fn efficiency_violations_carry_certificates() {
        let g = loops(1, 1);
        // {a} and {a,b} violate the antichain condition.
        let c = coll(&g, &[&["a"], &["a", "b"]]);
        match check_efficient(&g, &c).unwrap() {
            Some(EfficiencyViolation::NotAntichain { smaller, larger }) => {
                assert!(smaller.is_subset(&larger));
            }
            other => panic!("expected an antichain violation, got {:?}", other),
        }
    }

    #[test]
    fn bijection_round_trip_across_the_corpus_spot_checks() {
        let limits = Limits::default();
        for f in corpus_acyclic().into_iter().take(6) {
            let g = &f.graph;
            for c in enumerate_efficient(g, &limits).unwrap() {
                let s = to_satiated(g, &c, &limits).unwrap();
                let back = to_efficient(g, &s, &limits).unwrap();
                assert_eq!(back, c, "round trip on {}", f.name);
            }
        }
    }
}

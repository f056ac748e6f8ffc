//! Ultragraphs with finitely presented infinite structure.
//!
//! Vertices come in two kinds: finitely many *named* vertices and finitely
//! many countably infinite *families* whose members `F#1, F#2, …` are always
//! sinks. Edges are declared at named vertices and carry a nonempty [`VSet`]
//! range; an edge declaration is either a single edge or an *infinite
//! bundle*, i.e. countably many parallel edges sharing source and range,
//! enumerated on demand by index. This keeps infinite emitters, breaking
//! vertices and all closures finitely computable.
//!
//! Canonical order everywhere: named vertices lexicographic, family members
//! by (family, index), edge declarations lexicographic by id, bundle
//! instances by index.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vset::{FamilyId, Trace, VSet, VertexId};

pub use crate::vset::VertexRef;

/// Whether an edge declaration is a single edge or an infinite bundle of
/// parallel edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Multiplicity {
    One,
    #[serde(rename = "infinite")]
    InfiniteBundle,
}

/// Index of an edge declaration (lexicographic by id).
pub type EdgeId = usize;

/// An edge declaration: a single edge, or a whole bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeDecl {
    pub id: String,
    pub source: VertexId,
    pub multiplicity: Multiplicity,
    pub range: VSet,
}

/// One concrete edge: a single-edge declaration, or the `inst`-th member of
/// a bundle (`inst >= 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeInst {
    pub decl: EdgeId,
    pub inst: Option<u32>,
}

impl EdgeInst {
    pub fn single(decl: EdgeId) -> Self {
        EdgeInst { decl, inst: None }
    }

    pub fn bundle(decl: EdgeId, inst: u32) -> Self {
        debug_assert!(inst >= 1);
        EdgeInst {
            decl,
            inst: Some(inst),
        }
    }
}

/// A finite path: a sequence of edge instances, possibly empty. Consecutive
/// edges satisfy `s(α_{i+1}) ∈ r(α_i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path(pub Vec<EdgeInst>);

impl Path {
    pub fn empty() -> Self {
        Path(Vec::new())
    }

    pub fn one(e: EdgeInst) -> Self {
        Path(vec![e])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<EdgeInst> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<EdgeInst> {
        self.0.last().copied()
    }

    /// `self` followed by `tail`.
    pub fn concat(&self, tail: &Path) -> Path {
        let mut v = self.0.clone();
        v.extend_from_slice(&tail.0);
        Path(v)
    }

    pub fn push(&self, e: EdgeInst) -> Path {
        let mut v = self.0.clone();
        v.push(e);
        Path(v)
    }

    /// Split off the last edge, for the reduction at regular vertices.
    pub fn split_last(&self) -> Option<(Path, EdgeInst)> {
        let (last, init) = self.0.split_last()?;
        Some((Path(init.to_vec()), *last))
    }

    /// If `self` is a proper extension of `prefix`, the remaining suffix.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if self.0.len() > prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..] {
            Some(Path(self.0[prefix.0.len()..].to_vec()))
        } else {
            None
        }
    }
}

/// Validation problems reported by [`Ultragraph::build`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{location}: duplicate id `{id}`")]
    DuplicateId { location: String, id: String },
    #[error("edge `{edge}`: empty range")]
    EmptyRange { edge: String },
    #[error("{location}: dangling reference to `{name}`")]
    DanglingRef { location: String, name: String },
    #[error("{location}: family member index must be >= 1")]
    BadIndex { location: String },
}

/// A raw, unvalidated ultragraph description. This is also the JSON shape
/// used by the command-line workspace format.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct UltragraphDesc {
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<String>,
    pub edges: Vec<EdgeDesc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDesc {
    pub id: String,
    pub source: String,
    pub multiplicity: Multiplicity,
    pub range: RangeDesc,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RangeDesc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub named: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub families: BTreeMap<String, TraceDesc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceDesc {
    pub mode: TraceMode,
    pub members_or_exceptions: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceMode {
    Finite,
    Cofinite,
}

/// An ultragraph with validated, index-resolved structure.
///
/// Construction goes through [`Ultragraph::build`]; afterwards the value is
/// immutable.
#[derive(Debug, PartialEq, Eq)]
pub struct Ultragraph {
    vertices: Vec<String>,
    families: Vec<String>,
    edges: Vec<EdgeDecl>,
    out_edges: Vec<Vec<EdgeId>>,
}

impl Ultragraph {
    /// Validate a description without building. Returns every violation.
    pub fn validate(desc: &UltragraphDesc) -> Vec<ModelError> {
        match Self::build(desc.clone()) {
            Ok(_) => Vec::new(),
            Err(errs) => errs,
        }
    }

    /// Resolve names, sort into canonical order and check all invariants.
    pub fn build(desc: UltragraphDesc) -> Result<Arc<Ultragraph>, Vec<ModelError>> {
        let mut errors = Vec::new();

        let mut vertices = desc.vertices.clone();
        vertices.sort();
        vertices.dedup();
        if vertices.len() != desc.vertices.len() {
            let mut seen = BTreeSet::new();
            for v in &desc.vertices {
                if !seen.insert(v.clone()) {
                    errors.push(ModelError::DuplicateId {
                        location: "vertices".into(),
                        id: v.clone(),
                    });
                }
            }
        }
        let mut families = desc.families.clone();
        families.sort();
        families.dedup();
        if families.len() != desc.families.len() {
            errors.push(ModelError::DuplicateId {
                location: "families".into(),
                id: "(family list)".into(),
            });
        }
        for f in &families {
            if vertices.binary_search(f).is_ok() {
                errors.push(ModelError::DuplicateId {
                    location: "families".into(),
                    id: f.clone(),
                });
            }
        }

        let vid = |name: &str| vertices.binary_search_by(|v| v.as_str().cmp(name)).ok();
        let fid = |name: &str| families.binary_search_by(|f| f.as_str().cmp(name)).ok();

        let mut edge_descs = desc.edges.clone();
        edge_descs.sort_by(|a, b| a.id.cmp(&b.id));
        {
            let mut seen = BTreeSet::new();
            for e in &edge_descs {
                if !seen.insert(e.id.clone()) {
                    errors.push(ModelError::DuplicateId {
                        location: "edges".into(),
                        id: e.id.clone(),
                    });
                }
            }
        }

        let mut edges = Vec::new();
        for e in &edge_descs {
            let loc = format!("edge `{}`", e.id);
            let source = match vid(&e.source) {
                Some(id) => id,
                None => {
                    errors.push(ModelError::DanglingRef {
                        location: loc.clone(),
                        name: e.source.clone(),
                    });
                    continue;
                }
            };
            let mut range = VSet::empty();
            let mut range_ok = true;
            for n in &e.range.named {
                match vid(n) {
                    Some(id) => range.insert(VertexRef::named(id)),
                    None => {
                        errors.push(ModelError::DanglingRef {
                            location: loc.clone(),
                            name: n.clone(),
                        });
                        range_ok = false;
                    }
                }
            }
            for (fname, t) in &e.range.families {
                let Some(f) = fid(fname) else {
                    errors.push(ModelError::DanglingRef {
                        location: loc.clone(),
                        name: fname.clone(),
                    });
                    range_ok = false;
                    continue;
                };
                if t.mode == TraceMode::Finite && t.members_or_exceptions.iter().any(|i| *i == 0)
                    || t.mode == TraceMode::Cofinite
                        && t.members_or_exceptions.iter().any(|i| *i == 0)
                {
                    errors.push(ModelError::BadIndex {
                        location: loc.clone(),
                    });
                    range_ok = false;
                    continue;
                }
                let part = match t.mode {
                    TraceMode::Finite => {
                        VSet::family_finite(f, t.members_or_exceptions.iter().copied())
                    }
                    TraceMode::Cofinite => {
                        VSet::family_cofinite(f, t.members_or_exceptions.iter().copied())
                    }
                };
                range = range.union(&part);
            }
            if range_ok && range.is_empty() {
                errors.push(ModelError::EmptyRange { edge: e.id.clone() });
            }
            edges.push(EdgeDecl {
                id: e.id.clone(),
                source,
                multiplicity: e.multiplicity,
                range,
            });
        }

        if !errors.is_empty() {
            return Err(errors);
        }

        let mut out_edges = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.source].push(i);
        }
        Ok(Arc::new(Ultragraph {
            vertices,
            families,
            edges,
            out_edges,
        }))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn family_count(&self) -> usize {
        self.families.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, id: VertexId) -> &str {
        &self.vertices[id]
    }

    pub fn family_name(&self, f: FamilyId) -> &str {
        &self.families[f]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(name)).ok()
    }

    pub fn family_id(&self, name: &str) -> Option<FamilyId> {
        self.families.binary_search_by(|f| f.as_str().cmp(name)).ok()
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeDecl {
        &self.edges[e]
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &EdgeDecl)> {
        self.edges.iter().enumerate()
    }

    pub fn edge_id(&self, id: &str) -> Option<EdgeId> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn has_bundle_at(&self, v: VertexId) -> bool {
        self.out_edges[v]
            .iter()
            .any(|e| self.edges[*e].multiplicity == Multiplicity::InfiniteBundle)
    }

    pub fn has_bundles(&self) -> bool {
        self.edges
            .iter()
            .any(|e| e.multiplicity == Multiplicity::InfiniteBundle)
    }

    /// A named vertex is regular when it emits at least one edge and only
    /// finitely many, i.e. some single edges and no bundle.
    pub fn is_regular(&self, v: VertexId) -> bool {
        !self.out_edges[v].is_empty() && !self.has_bundle_at(v)
    }

    /// The set of all vertices, named and family members alike.
    pub fn all_vertices(&self) -> VSet {
        let mut s = VSet::from_named(0..self.vertices.len());
        for f in 0..self.families.len() {
            s = s.union(&VSet::family_all(f));
        }
        s
    }

    /// Sinks and infinite emitters. Family members are always sinks, so the
    /// result is returned as a (possibly infinite) canonical set.
    pub fn singular_vertices(&self) -> VSet {
        let mut s = VSet::empty();
        for v in 0..self.vertices.len() {
            if self.out_edges[v].is_empty() || self.has_bundle_at(v) {
                s.insert(VertexRef::named(v));
            }
        }
        for f in 0..self.families.len() {
            s = s.union(&VSet::family_all(f));
        }
        s
    }

    /// `s(e)` for an edge instance.
    pub fn source(&self, e: EdgeInst) -> VertexId {
        self.edges[e.decl].source
    }

    /// `r(e)` for an edge instance; instances of a bundle share the range.
    pub fn range(&self, e: EdgeInst) -> &VSet {
        &self.edges[e.decl].range
    }

    /// Whether `prev` can be followed by `next` in a path.
    pub fn step_ok(&self, prev: EdgeInst, next: EdgeInst) -> bool {
        self.range(prev)
            .contains(VertexRef::named(self.source(next)))
    }

    pub fn path_ok(&self, p: &Path) -> bool {
        p.0.windows(2).all(|w| self.step_ok(w[0], w[1]))
    }

    /// `(s(α_1), r(α_last))` of a nonempty path.
    pub fn path_endpoints(&self, p: &Path) -> Result<(VertexRef, VSet), ModelError> {
        let (first, last) = match (p.first(), p.last()) {
            (Some(f), Some(l)) => (f, l),
            _ => {
                return Err(ModelError::DanglingRef {
                    location: "path".into(),
                    name: "(empty path has no endpoints; use a set cell)".into(),
                })
            }
        };
        Ok((
            VertexRef::named(self.source(first)),
            self.range(last).clone(),
        ))
    }

    /// All edge instances at a vertex, bundles enumerated up to
    /// `bundle_bound` instances.
    pub fn instances_at(&self, v: VertexId, bundle_bound: u32) -> Vec<EdgeInst> {
        let mut out = Vec::new();
        for e in &self.out_edges[v] {
            match self.edges[*e].multiplicity {
                Multiplicity::One => out.push(EdgeInst::single(*e)),
                Multiplicity::InfiniteBundle => {
                    out.extend((1..=bundle_bound).map(|k| EdgeInst::bundle(*e, k)))
                }
            }
        }
        out
    }

    /// All paths of length `1..=n`, bundle instances enumerated up to
    /// `bundle_bound`, in canonical order (by length, then lexicographically).
    pub fn paths_up_to(&self, n: usize, bundle_bound: u32) -> Vec<Path> {
        assert!(n >= 1, "paths_up_to requires n >= 1");
        let mut out = Vec::new();
        let mut frontier: Vec<Path> = Vec::new();
        for v in 0..self.vertices.len() {
            for e in self.instances_at(v, bundle_bound) {
                frontier.push(Path::one(e));
            }
        }
        frontier.sort();
        for _ in 0..n {
            out.extend(frontier.iter().cloned());
            let mut next = Vec::new();
            for p in &frontier {
                let last = p.last().unwrap();
                for v in 0..self.vertices.len() {
                    if !self.range(last).contains(VertexRef::named(v)) {
                        continue;
                    }
                    for e in self.instances_at(v, bundle_bound) {
                        next.push(p.push(e));
                    }
                }
            }
            next.sort();
            frontier = next;
        }
        out
    }

    /// Human-readable form of a set, e.g. `{v0, W~{1}, X#2}`.
    pub fn display_set(&self, s: &VSet) -> String {
        let mut parts: Vec<String> = Vec::new();
        for n in s.named_part() {
            let name = self.vertex_name(n.id);
            parts.push(if n.primed {
                format!("{name}'")
            } else {
                name.to_string()
            });
        }
        for (f, t) in s.traces() {
            let fname = self.family_name(f);
            match t {
                Trace::Finite(m) => {
                    parts.extend(m.iter().map(|i| format!("{fname}#{i}")));
                }
                Trace::Cofinite(ex) if ex.is_empty() => parts.push(fname.to_string()),
                Trace::Cofinite(ex) => {
                    let list: Vec<String> = ex.iter().map(|i| i.to_string()).collect();
                    parts.push(format!("{fname}~{{{}}}", list.join(",")));
                }
            }
        }
        format!("{{{}}}", parts.join(", "))
    }

    pub fn display_inst(&self, e: EdgeInst) -> String {
        match e.inst {
            None => self.edges[e.decl].id.clone(),
            Some(k) => format!("{}#{k}", self.edges[e.decl].id),
        }
    }

    pub fn display_path(&self, p: &Path) -> String {
        if p.is_empty() {
            return "ε".into();
        }
        p.0.iter()
            .map(|e| self.display_inst(*e))
            .collect::<Vec<_>>()
            .join("·")
    }

    /// Export back to a description (inverse of [`Ultragraph::build`]).
    pub fn to_desc(&self) -> UltragraphDesc {
        UltragraphDesc {
            vertices: self.vertices.clone(),
            families: self.families.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDesc {
                    id: e.id.clone(),
                    source: self.vertices[e.source].clone(),
                    multiplicity: e.multiplicity,
                    range: range_to_desc(self, &e.range),
                })
                .collect(),
        }
    }
}

fn range_to_desc(g: &Ultragraph, s: &VSet) -> RangeDesc {
    let mut named: Vec<String> = s
        .named_part()
        .map(|n| g.vertex_name(n.id).to_string())
        .collect();
    named.sort();
    let mut families = BTreeMap::new();
    for (f, t) in s.traces() {
        let (mode, list) = match t {
            Trace::Finite(m) => (TraceMode::Finite, m.iter().copied().collect()),
            Trace::Cofinite(ex) => (TraceMode::Cofinite, ex.iter().copied().collect()),
        };
        families.insert(
            g.family_name(f).to_string(),
            TraceDesc {
                mode,
                members_or_exceptions: list,
            },
        );
    }
    RangeDesc { named, families }
}

impl fmt::Display for Ultragraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertices.join(", "))?;
        if !self.families.is_empty() {
            writeln!(f, "families: {}", self.families.join(", "))?;
        }
        for e in &self.edges {
            let m = match e.multiplicity {
                Multiplicity::One => "",
                Multiplicity::InfiniteBundle => " (bundle)",
            };
            writeln!(
                f,
                "  {}{}: {} -> {}",
                e.id,
                m,
                self.vertices[e.source],
                self.display_set(&e.range)
            )?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Matrix presentations and the one-edge-per-vertex reform.
// ---------------------------------------------------------------------------

/// Errors from the matrix / tilde constructions.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("row {0} of the matrix is identically zero")]
    ZeroRow(usize),
    #[error("matrix is not square")]
    NotSquare,
    #[error("ultragraph has an infinite bundle; the edge matrix would need an infinite index set")]
    BundlesPresent,
    #[error("ultragraph has a singular vertex ({0})")]
    SingularVertex(String),
}

/// The edge matrix `A(e,f) = 1` iff `s(f) ∈ r(e)`, edges in canonical order.
pub fn edge_matrix(g: &Ultragraph) -> Result<Vec<Vec<u8>>, MatrixError> {
    if g.has_bundles() {
        return Err(MatrixError::BundlesPresent);
    }
    let n = g.edge_count();
    let mut a = vec![vec![0u8; n]; n];
    for (i, e) in g.edges() {
        for (j, f) in g.edges() {
            if e.range.contains(VertexRef::named(f.source)) {
                a[i][j] = 1;
            }
        }
    }
    Ok(a)
}

/// The ultragraph of a 0/1 matrix: one vertex `v_i` and one edge `i` per
/// row, with `s(i) = v_i` and `r(i) = {v_j : A(i,j) = 1}`.
pub fn from_matrix(a: &[Vec<u8>]) -> Result<Arc<Ultragraph>, MatrixError> {
    let n = a.len();
    for (i, row) in a.iter().enumerate() {
        if row.iter().all(|x| *x == 0) {
            return Err(MatrixError::ZeroRow(i + 1));
        }
    }
    for row in a {
        if row.len() != n {
            return Err(MatrixError::NotSquare);
        }
    }
    let width = n.to_string().len();
    let name = |i: usize| format!("v{:0width$}", i + 1, width = width);
    let desc = UltragraphDesc {
        vertices: (0..n).map(name).collect(),
        families: Vec::new(),
        edges: (0..n)
            .map(|i| EdgeDesc {
                id: format!("{:0width$}", i + 1, width = width),
                source: name(i),
                multiplicity: Multiplicity::One,
                range: RangeDesc {
                    named: (0..n).filter(|j| a[i][*j] == 1).map(name).collect(),
                    families: BTreeMap::new(),
                },
            })
            .collect(),
    };
    Ok(Ultragraph::build(desc).expect("matrix ultragraph is well-formed"))
}

/// The reform of a non-singular ultragraph in which every vertex emits
/// exactly one edge: vertices `v_e` for `v = s(e)` paired with each edge at
/// `v`, same edge set, `s̃(e) = s(e)_e` and
/// `r̃(e) = {w_f : w ∈ r(e), f ∈ s^{-1}(w)}`.
pub fn tilde(g: &Ultragraph) -> Result<Arc<Ultragraph>, MatrixError> {
    let singular = g.singular_vertices();
    if !singular.is_empty() {
        return Err(MatrixError::SingularVertex(g.display_set(&singular)));
    }
    let tilde_name = |v: VertexId, e: EdgeId| format!("{}_{}", g.vertex_name(v), g.edge(e).id);
    let mut vertices = Vec::new();
    for v in 0..g.vertex_count() {
        for e in g.out_edges(v) {
            vertices.push(tilde_name(v, *e));
        }
    }
    let edges = g
        .edges()
        .map(|(ei, e)| {
            let mut named = Vec::new();
            for w in 0..g.vertex_count() {
                if !e.range.contains(VertexRef::named(w)) {
                    continue;
                }
                for f in g.out_edges(w) {
                    named.push(tilde_name(w, *f));
                }
            }
            EdgeDesc {
                id: e.id.clone(),
                source: tilde_name(e.source, ei),
                multiplicity: Multiplicity::One,
                range: RangeDesc {
                    named,
                    families: BTreeMap::new(),
                },
            }
        })
        .collect();
    let desc = UltragraphDesc {
        vertices,
        families: Vec::new(),
        edges,
    };
    Ok(Ultragraph::build(desc).expect("tilde ultragraph is well-formed"))
}

/// Checks `G_{A_G} = G̃` under the canonical renaming `v_e ↔ v_{index(e)}`.
pub fn check_tilde_eq_ga(g: &Ultragraph) -> Result<bool, MatrixError> {
    let t = tilde(g)?;
    let ga = from_matrix(&edge_matrix(g)?)?;
    if t.edge_count() != ga.edge_count() || t.vertex_count() != ga.vertex_count() {
        return Ok(false);
    }
    // Edge i of g corresponds to edge i of both (canonical edge order is
    // shared); vertex s(e)_e of the tilde graph corresponds to v_{index(e)}.
    let mut rename: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (i, e) in g.edges() {
        let tname = format!("{}_{}", g.vertex_name(e.source), e.id);
        let (Some(tv), Some(gv)) = (t.vertex_id(&tname), Some(i)) else {
            return Ok(false);
        };
        let ga_name = ga.vertex_name(ga.edge(gv).source).to_string();
        let Some(gav) = ga.vertex_id(&ga_name) else {
            return Ok(false);
        };
        rename.insert(tv, gav);
    }
    for (i, te) in t.edges() {
        let ge = ga.edge(i);
        let Some(mapped_source) = rename.get(&te.source) else {
            return Ok(false);
        };
        if *mapped_source != ge.source {
            return Ok(false);
        }
        let mapped_range: BTreeSet<VertexId> = te
            .range
            .named_part()
            .map(|n| *rename.get(&n.id).expect("tilde vertex is renamed"))
            .collect();
        let ga_range: BTreeSet<VertexId> = ge.range.named_part().map(|n| n.id).collect();
        if mapped_range != ga_range {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite directed (multi)graph, for import as an ultragraph with
/// singleton ranges.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct DiGraphDesc {
    pub vertices: Vec<String>,
    /// `(edge id, source, target)`
    pub edges: Vec<(String, String, String)>,
}

/// Every directed graph is an ultragraph whose ranges are singletons.
pub fn import_graph(g: &DiGraphDesc) -> Result<Arc<Ultragraph>, Vec<ModelError>> {
    let desc = UltragraphDesc {
        vertices: g.vertices.clone(),
        families: Vec::new(),
        edges: g
            .edges
            .iter()
            .map(|(id, s, t)| EdgeDesc {
                id: id.clone(),
                source: s.clone(),
                multiplicity: Multiplicity::One,
                range: RangeDesc {
                    named: vec![t.clone()],
                    families: BTreeMap::new(),
                },
            })
            .collect(),
    };
    Ultragraph::build(desc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_validate() {
        // U2 is well-formed.
        let u2 = fixtures::u2();
        assert_eq!(u2.vertex_count(), 2);
        assert_eq!(u2.edge_count(), 2);
    }

    #[test]
    fn empty_range_rejected() {
        let mut desc = fixtures::u1_desc();
        desc.edges[0].range = RangeDesc::default();
        let errs = Ultragraph::validate(&desc);
        assert!(errs.iter().any(|e| matches!(e, ModelError::EmptyRange { .. })));
    }

    #[test]
    fn dangling_source_rejected() {
        let mut desc = fixtures::u2_desc();
        desc.edges[0].source = "nope".into();
        let errs = Ultragraph::validate(&desc);
        assert!(errs.iter().any(|e| matches!(e, ModelError::DanglingRef { .. })));
    }

    #[test]
    fn duplicate_edge_id_rejected() {
        let mut desc = fixtures::u2_desc();
        let dup = desc.edges[0].clone();
        desc.edges.push(dup);
        let errs = Ultragraph::validate(&desc);
        assert!(errs.iter().any(|e| matches!(e, ModelError::DuplicateId { .. })));
    }

    #[test]
    fn paths_in_u2() {
        let u2 = fixtures::u2();
        let p1 = u2.paths_up_to(1, 1);
        assert_eq!(p1.len(), 2);
        let p2 = u2.paths_up_to(2, 1);
        // 11, 12, 21 are paths; 22 is not since s(2)=v2 is not in r(2)={v1}.
        assert_eq!(p2.len(), 5);
        let names: Vec<String> = p2.iter().map(|p| u2.display_path(p)).collect();
        assert!(names.contains(&"1·1".to_string()));
        assert!(names.contains(&"1·2".to_string()));
        assert!(names.contains(&"2·1".to_string()));
        assert!(!names.contains(&"2·2".to_string()));
    }

    #[test]
    fn no_paths_without_edges() {
        let u3 = fixtures::u3();
        assert!(u3.paths_up_to(3, 4).is_empty());
    }

    #[test]
    fn endpoints() {
        let u2 = fixtures::u2();
        let e1 = EdgeInst::single(u2.edge_id("1").unwrap());
        let e2 = EdgeInst::single(u2.edge_id("2").unwrap());
        let p = Path(vec![e1, e2]);
        let (s, r) = u2.path_endpoints(&p).unwrap();
        assert_eq!(s, VertexRef::named(u2.vertex_id("v1").unwrap()));
        assert_eq!(r, VSet::from_named([u2.vertex_id("v1").unwrap()]));

        let u1 = fixtures::u1();
        let e = EdgeInst::single(u1.edge_id("e").unwrap());
        let (s, r) = u1.path_endpoints(&Path::one(e)).unwrap();
        assert_eq!(s, VertexRef::named(u1.vertex_id("v0").unwrap()));
        assert_eq!(r, VSet::family_all(0));

        assert!(u1.path_endpoints(&Path::empty()).is_err());
    }

    #[test]
    fn singular_vertices_of_fixtures() {
        let u1 = fixtures::u1();
        let s = u1.singular_vertices();
        // Every family member is a sink; v0 emits a single edge so it is
        // regular.
        assert!(s.contains(VertexRef::member(0, 17)));
        assert!(!s.contains(VertexRef::named(u1.vertex_id("v0").unwrap())));

        assert!(fixtures::u2().singular_vertices().is_empty());

        let u4 = fixtures::u4();
        let s4 = u4.singular_vertices();
        for name in ["u", "x", "y"] {
            assert!(s4.contains(VertexRef::named(u4.vertex_id(name).unwrap())));
        }
    }

    #[test]
    fn edge_matrix_of_u2_matches_presentation() {
        let u2 = fixtures::u2();
        assert_eq!(edge_matrix(&u2).unwrap(), vec![vec![1, 1], vec![1, 0]]);
        let u5 = fixtures::u5();
        assert_eq!(edge_matrix(&u5).unwrap(), vec![vec![1]]);
        let u3 = fixtures::u3();
        assert!(edge_matrix(&u3).unwrap().is_empty());
        assert_eq!(
            edge_matrix(&fixtures::u4()),
            Err(MatrixError::BundlesPresent)
        );
    }

    #[test]
    fn matrix_roundtrip() {
        let a = vec![vec![1, 1], vec![1, 0]];
        let g = from_matrix(&a).unwrap();
        assert_eq!(edge_matrix(&g).unwrap(), a);
        // The matrix ultragraph of [[1,1],[1,0]] is U2 up to names.
        let u2 = fixtures::u2();
        assert_eq!(g.vertex_count(), u2.vertex_count());
        assert_eq!(g.edge_count(), u2.edge_count());

        assert_eq!(from_matrix(&[vec![0, 0]]), Err(MatrixError::ZeroRow(1)));
    }

    #[test]
    fn tilde_of_u2() {
        let u2 = fixtures::u2();
        let t = tilde(&u2).unwrap();
        assert_eq!(t.vertex_count(), 2);
        assert!(t.vertex_id("v1_1").is_some());
        assert!(t.vertex_id("v2_2").is_some());
        let r1 = &t.edge(t.edge_id("1").unwrap()).range;
        assert_eq!(r1.finite_len(), Some(2));
        let r2 = &t.edge(t.edge_id("2").unwrap()).range;
        assert_eq!(
            r2.finite_members().unwrap(),
            vec![VertexRef::named(t.vertex_id("v1_1").unwrap())]
        );
        assert!(matches!(
            tilde(&fixtures::u1()),
            Err(MatrixError::SingularVertex(_))
        ));
    }

    #[test]
    fn tilde_equals_matrix_ultragraph() {
        assert!(check_tilde_eq_ga(&fixtures::u2()).unwrap());
        assert!(check_tilde_eq_ga(&fixtures::u5()).unwrap());
        assert!(check_tilde_eq_ga(&fixtures::u5_with_exit()).unwrap());
        assert!(check_tilde_eq_ga(&fixtures::u1()).is_err());
    }

    #[test]
    fn import_graph_singleton_ranges() {
        let g = import_graph(&DiGraphDesc {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![
                ("e1".into(), "a".into(), "b".into()),
                ("e2".into(), "a".into(), "b".into()),
            ],
        })
        .unwrap();
        for (_, e) in g.edges() {
            assert_eq!(e.range.finite_len(), Some(1));
        }
    }
}

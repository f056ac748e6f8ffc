//! Finite graph approximation of a quotient Leavitt path algebra.
//!
//! From a finite set `F` of singular vertex classes and edges, the finite
//! graph `G_F` has vertices `F^0 ∪ F^1 ∪ Γ_F`, where the region vertices
//! `ω ∈ {0,1}^n ∖ {0^n}` track the Boolean combinations
//! `r(ω) = ⋂_{ω_i=1} r(e_i) ∖ ⋃_{ω_j=0} r(e_j)` of the selected edge
//! ranges, trimmed by the selected vertex classes to
//! `R(ω) = r(ω) ∖ ⋃_{[v]∈F^0} [v]`. Regions that decompose into finitely
//! many regular classes whose edges all lie in `F^1` (the set `Γ_0`) are
//! omitted: their induced idempotents vanish. The induced Leavitt family
//! inside the quotient algebra maps every `G_F` generator to an element,
//! and all graph relations normalize to zero.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, CheckReport, Element};
use crate::model::{EdgeInst, Multiplicity, Path};
use crate::quotient::{ClassSet, QuotientUltragraph};
use crate::ring::RingConfig;
use crate::vset::{VSet, VertexRef};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ApproxError {
    #[error("F contains a non-singular vertex class")]
    NotSingular,
    #[error("F contains a vertex class that is [∅] in the quotient")]
    EmptyClass,
    #[error("F must list bundle members individually, not whole bundles")]
    WholeBundle,
    #[error("F contains an edge outside the quotient")]
    NotKept,
    #[error("duplicate item in F")]
    Duplicate,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An item of the approximating set `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FItem {
    Edge(EdgeInst),
    Class(VertexRef),
}

/// Classification of one region word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionClass {
    Empty,
    Gamma0,
    GammaF,
}

/// One region row: the word, `r(ω)`, `R(ω)` and its classification.
#[derive(Clone, Debug)]
pub struct OmegaRegion {
    pub omega: Vec<bool>,
    pub r: ClassSet,
    pub r_trimmed: ClassSet,
    pub class: RegionClass,
}

/// A vertex of the finite graph `G_F`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GfVertex {
    Edge(EdgeInst),
    Class(VertexRef),
    Region(Vec<bool>),
}

/// An edge of `G_F`; sources are always `F^1` edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GfEdge {
    pub from: EdgeInst,
    pub to: GfVertex,
}

#[derive(Clone, Debug, Default)]
pub struct FiniteGraph {
    pub vertices: Vec<GfVertex>,
    pub edges: Vec<GfEdge>,
}

impl FiniteGraph {
    pub fn out_edges(&self, z: &GfVertex) -> Vec<&GfEdge> {
        self.edges
            .iter()
            .filter(|g| matches!(z, GfVertex::Edge(e) if g.from == *e))
            .collect()
    }

    /// Adjacency between `F^1`-vertices only (the `(e,f)` edges), in `F^1`
    /// order.
    pub fn edge_adjacency(&self, f1: &[EdgeInst]) -> Vec<Vec<u8>> {
        let n = f1.len();
        let mut a = vec![vec![0u8; n]; n];
        for g in &self.edges {
            if let GfVertex::Edge(t) = &g.to {
                let i = f1.iter().position(|e| *e == g.from).unwrap();
                let j = f1.iter().position(|e| e == t).unwrap();
                a[i][j] = 1;
            }
        }
        a
    }
}

fn display_f_vertex(q: &QuotientUltragraph, v: &GfVertex) -> String {
    let g = q.base();
    match v {
        GfVertex::Edge(e) => g.display_inst(*e),
        GfVertex::Class(VertexRef::Named(n)) => {
            let name = g.vertex_name(n.id);
            if n.primed {
                format!("[{name}']")
            } else {
                format!("[{name}]")
            }
        }
        GfVertex::Class(VertexRef::Member(f, i)) => format!("[{}#{}]", g.family_name(*f), i),
        GfVertex::Region(w) => format!(
            "ω({})",
            w.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>()
        ),
    }
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionClass::Empty => write!(f, "empty"),
            RegionClass::Gamma0 => write!(f, "Γ0"),
            RegionClass::GammaF => write!(f, "ΓF"),
        }
    }
}

fn validate_f(q: &QuotientUltragraph, f: &[FItem]) -> Result<(Vec<FItem>, Vec<EdgeInst>), ApproxError> {
    let g = q.base();
    let mut sorted = f.to_vec();
    sorted.sort();
    let before = sorted.len();
    sorted.dedup();
    if sorted.len() != before {
        return Err(ApproxError::Duplicate);
    }
    let mut f1 = Vec::new();
    for item in &sorted {
        match item {
            FItem::Edge(e) => {
                if !q.is_kept(e.decl) {
                    return Err(ApproxError::NotKept);
                }
                match (g.edge(e.decl).multiplicity, e.inst) {
                    (Multiplicity::One, None) => {}
                    (Multiplicity::InfiniteBundle, Some(_)) => {}
                    _ => return Err(ApproxError::WholeBundle),
                }
                f1.push(*e);
            }
            FItem::Class(r) => {
                if q.class_is_empty(&VSet::singleton(*r)) {
                    return Err(ApproxError::EmptyClass);
                }
                let singular = match r {
                    VertexRef::Named(n) if !n.primed => {
                        // sink class or infinite emitter class
                        q.out_kept(n.id).is_empty()
                            || q.out_kept(n.id)
                                .iter()
                                .any(|d| g.edge(*d).multiplicity == Multiplicity::InfiniteBundle)
                    }
                    // primed vertices and family members are sinks
                    VertexRef::Named(_) => true,
                    VertexRef::Member(..) => true,
                };
                if !singular {
                    return Err(ApproxError::NotSingular);
                }
            }
        }
    }
    Ok((sorted, f1))
}

/// The region table over `F^1` and the finite graph `G_F`.
pub fn build_gf(
    q: &Arc<QuotientUltragraph>,
    f: &[FItem],
) -> Result<(FiniteGraph, Vec<OmegaRegion>), ApproxError> {
    let g = q.base();
    let (items, f1) = validate_f(q, f)?;
    let f0: Vec<VertexRef> = items
        .iter()
        .filter_map(|i| match i {
            FItem::Class(r) => Some(*r),
            FItem::Edge(_) => None,
        })
        .collect();
    let n = f1.len();
    assert!(n <= 12, "region enumeration is desk-scale");

    let mut f0_union = VSet::empty();
    for r in &f0 {
        f0_union.insert(*r);
    }

    let mut regions = Vec::new();
    for mask in 1u32..(1 << n) {
        let omega: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let mut r: Option<VSet> = None;
        for (i, e) in f1.iter().enumerate() {
            if omega[i] {
                let bar = q.range_bar(e.decl);
                r = Some(match r {
                    None => bar,
                    Some(acc) => acc.intersect(&bar),
                });
            }
        }
        let mut r = r.expect("nonzero word");
        for (i, e) in f1.iter().enumerate() {
            if !omega[i] {
                r = r.diff(&q.range_bar(e.decl));
            }
        }
        let r_class = q.class_reduce(&r);
        let trimmed = q.class_reduce(&r.diff(&f0_union));
        let class = classify_region(q, &trimmed, &f1);
        regions.push(OmegaRegion {
            omega,
            r: r_class,
            r_trimmed: trimmed,
            class,
        });
    }

    let mut vertices: Vec<GfVertex> = Vec::new();
    vertices.extend(f0.iter().map(|r| GfVertex::Class(*r)));
    vertices.extend(f1.iter().map(|e| GfVertex::Edge(*e)));
    vertices.extend(
        regions
            .iter()
            .filter(|r| r.class == RegionClass::GammaF)
            .map(|r| GfVertex::Region(r.omega.clone())),
    );

    let mut edges = Vec::new();
    for e in &f1 {
        let re = q.range_bar(e.decl);
        for fe in &f1 {
            let src = VSet::singleton(VertexRef::named(g.source(*fe)));
            if q.class_subset(&src, &re) {
                edges.push(GfEdge {
                    from: *e,
                    to: GfVertex::Edge(*fe),
                });
            }
        }
        for r in &f0 {
            if q.class_subset(&VSet::singleton(*r), &re) {
                edges.push(GfEdge {
                    from: *e,
                    to: GfVertex::Class(*r),
                });
            }
        }
        let i = f1.iter().position(|x| x == e).unwrap();
        for reg in &regions {
            if reg.class == RegionClass::GammaF && reg.omega[i] {
                edges.push(GfEdge {
                    from: *e,
                    to: GfVertex::Region(reg.omega.clone()),
                });
            }
        }
    }
    edges.sort();
    Ok((FiniteGraph { vertices, edges }, regions))
}

/// `ω ∈ Γ_0` iff `R(ω)` is a finite union of vertex classes, each emitting
/// and with every kept edge instance inside `F^1`. A cofinite family trace
/// means infinitely many sink classes, so the condition fails; so does any
/// primed vertex or family member (sinks), or a kept bundle (infinitely
/// many instances cannot fit in `F^1`).
fn classify_region(
    q: &QuotientUltragraph,
    trimmed: &ClassSet,
    f1: &[EdgeInst],
) -> RegionClass {
    if trimmed.is_empty() {
        return RegionClass::Empty;
    }
    let repr = trimmed.repr();
    let Some(members) = repr.finite_members() else {
        return RegionClass::GammaF;
    };
    let g = q.base();
    for v in members {
        let VertexRef::Named(n) = v else {
            return RegionClass::GammaF;
        };
        if n.primed {
            return RegionClass::GammaF;
        }
        let out = q.out_kept(n.id);
        if out.is_empty() {
            return RegionClass::GammaF;
        }
        for d in out {
            if g.edge(*d).multiplicity == Multiplicity::InfiniteBundle {
                return RegionClass::GammaF;
            }
            if !f1.contains(&EdgeInst::single(*d)) {
                return RegionClass::GammaF;
            }
        }
    }
    RegionClass::Gamma0
}

/// The induced Leavitt family of `G_F` inside the quotient algebra.
#[derive(Clone, Debug)]
pub struct GfFamily {
    pub p: BTreeMap<GfVertex, Element>,
    pub s: BTreeMap<GfEdge, Element>,
    pub s_star: BTreeMap<GfEdge, Element>,
}

/// Builds `P_e = t_e t_{e*}`, `P_{[v]} = q_{[v]}(1 − Σ t_e t_{e*})`,
/// `P_ω = q_{R(ω)}(1 − Σ t_e t_{e*})`, `S_{(e,x)} = t_e P_x` and its ghost.
pub fn gf_family(
    q: &Arc<QuotientUltragraph>,
    f: &[FItem],
    ring: RingConfig,
) -> Result<(FiniteGraph, Vec<OmegaRegion>, GfFamily), ApproxError> {
    let (fg, regions) = build_gf(q, f)?;
    let (_, f1) = validate_f(q, f)?;

    let mut sum_tt = Element::zero(q.clone(), ring);
    let mut tt: BTreeMap<EdgeInst, Element> = BTreeMap::new();
    for e in &f1 {
        let te = Element::edge(q.clone(), ring, *e)?;
        let te_star = Element::ghost(q.clone(), ring, *e)?;
        let prod = te.mul(&te_star)?;
        sum_tt = sum_tt.add(&prod)?;
        tt.insert(*e, prod);
    }

    let mut p = BTreeMap::new();
    for z in &fg.vertices {
        let el = match z {
            GfVertex::Edge(e) => tt[e].clone(),
            GfVertex::Class(r) => {
                let qv = Element::proj(q.clone(), ring, &VSet::singleton(*r))?;
                qv.sub(&qv.mul(&sum_tt)?)?
            }
            GfVertex::Region(omega) => {
                let reg = regions
                    .iter()
                    .find(|r| &r.omega == omega)
                    .expect("region vertex has a region row");
                let qr = Element::proj(q.clone(), ring, reg.r_trimmed.repr())?;
                qr.sub(&qr.mul(&sum_tt)?)?
            }
        };
        p.insert(z.clone(), el);
    }

    let mut s = BTreeMap::new();
    let mut s_star = BTreeMap::new();
    for edge in &fg.edges {
        let te = Element::edge(q.clone(), ring, edge.from)?;
        let te_star = Element::ghost(q.clone(), ring, edge.from)?;
        let px = &p[&edge.to];
        s.insert(edge.clone(), te.mul(px)?);
        s_star.insert(edge.clone(), px.mul(&te_star)?);
    }
    Ok((fg, regions, GfFamily { p, s, s_star }))
}

/// Checks every graph Leavitt relation of `G_F` against the quotient
/// normalizer, plus the generation spot-checks (`t_e`, `t_{e*}` and
/// `q_{[v]}` are polynomials in the family).
pub fn gf_relations_check(
    q: &Arc<QuotientUltragraph>,
    f: &[FItem],
    ring: RingConfig,
) -> Result<CheckReport, ApproxError> {
    let (fg, _regions, fam) = gf_family(q, f, ring)?;
    let (_, f1) = validate_f(q, f)?;
    let mut lines = Vec::new();
    let mut push = |name: String, pass: bool| {
        lines.push(crate::algebra::CheckLine { name, pass });
    };

    // (LP1): orthogonal idempotents
    for z in &fg.vertices {
        for z2 in &fg.vertices {
            let prod = fam.p[z].mul(&fam.p[z2])?;
            let expect = if z == z2 {
                fam.p[z].clone()
            } else {
                Element::zero(q.clone(), ring)
            };
            push(
                format!(
                    "P_{} P_{} = δ P",
                    display_f_vertex(q, z),
                    display_f_vertex(q, z2)
                ),
                prod.sub(&expect)?.is_zero(),
            );
        }
    }
    // (LP2)
    for e in &fg.edges {
        let sg = &fam.s[e];
        let sg_star = &fam.s_star[e];
        let p_src = &fam.p[&GfVertex::Edge(e.from)];
        let p_tgt = &fam.p[&e.to];
        let name = format!(
            "({},{})",
            q.base().display_inst(e.from),
            display_f_vertex(q, &e.to)
        );
        push(
            format!("P_s S = S = S P_r at {name}"),
            p_src.mul(sg)?.equiv(sg)? && sg.mul(p_tgt)?.equiv(sg)?,
        );
        push(
            format!("P_r S* = S* = S* P_s at {name}"),
            p_tgt.mul(sg_star)?.equiv(sg_star)? && sg_star.mul(p_src)?.equiv(sg_star)?,
        );
    }
    // (LP3)
    for e in &fg.edges {
        for e2 in &fg.edges {
            let prod = fam.s_star[e].mul(&fam.s[e2])?;
            let expect = if e == e2 {
                fam.p[&e.to].clone()
            } else {
                Element::zero(q.clone(), ring)
            };
            push(
                format!(
                    "S*({},{}) S({},{}) = δ P_r",
                    q.base().display_inst(e.from),
                    display_f_vertex(q, &e.to),
                    q.base().display_inst(e2.from),
                    display_f_vertex(q, &e2.to)
                ),
                prod.sub(&expect)?.is_zero(),
            );
        }
    }
    // (LP4) at regular G_F vertices (edge vertices with outgoing edges)
    for z in &fg.vertices {
        let out = fg.out_edges(z);
        if out.is_empty() {
            continue;
        }
        let mut sum = Element::zero(q.clone(), ring);
        for e in out {
            sum = sum.add(&fam.s[e].mul(&fam.s_star[e])?)?;
        }
        push(
            format!("P_z = Σ S S* at {}", display_f_vertex(q, z)),
            fam.p[z].equiv(&sum)?,
        );
    }
    // generation spot-checks
    for e in &f1 {
        let te = Element::edge(q.clone(), ring, *e)?;
        let mut sum = Element::zero(q.clone(), ring);
        for edge in fg.edges.iter().filter(|x| x.from == *e) {
            sum = sum.add(&fam.s[edge])?;
        }
        push(
            format!("t_{} = Σ_x S_(e,x)", q.base().display_inst(*e)),
            te.equiv(&sum)?,
        );
        let te_star = Element::ghost(q.clone(), ring, *e)?;
        let mut sum = Element::zero(q.clone(), ring);
        for edge in fg.edges.iter().filter(|x| x.from == *e) {
            sum = sum.add(&fam.s_star[edge])?;
        }
        push(
            format!("t_{}* = Σ_x S*_(e,x)", q.base().display_inst(*e)),
            te_star.equiv(&sum)?,
        );
    }
    for z in &fg.vertices {
        let GfVertex::Class(r) = z else { continue };
        let qv = Element::proj(q.clone(), ring, &VSet::singleton(*r))?;
        let mut sum = fam.p[z].clone();
        for e in &f1 {
            let src = VSet::singleton(VertexRef::named(q.base().source(*e)));
            if q.class_eq(&src, &VSet::singleton(*r)) {
                sum = sum.add(&fam.p[&GfVertex::Edge(*e)])?;
            }
        }
        push(
            format!("q_{} = P + Σ P_e", display_f_vertex(q, z)),
            qv.equiv(&sum)?,
        );
    }
    Ok(CheckReport { lines })
}

/// Partition property of a region table: the nonempty `r(ω)` are pairwise
/// disjoint classes whose union is the union of the selected ranges.
pub fn region_partition_ok(
    q: &QuotientUltragraph,
    f1: &[EdgeInst],
    regions: &[OmegaRegion],
) -> bool {
    let mut union = VSet::empty();
    let live: Vec<&OmegaRegion> = regions.iter().filter(|r| !r.r.is_empty()).collect();
    for (i, a) in live.iter().enumerate() {
        for b in live.iter().skip(i + 1) {
            if !q
                .class_op(crate::vset::SetOp::Intersect, &a.r, &b.r)
                .is_empty()
            {
                return false;
            }
        }
        union = union.union(a.r.repr());
    }
    let mut all = VSet::empty();
    for e in f1 {
        all = all.union(&q.range_bar(e.decl));
    }
    q.class_eq(&union, &all)
}

/// Helper carried around by tests: the path of one instance.
pub fn single_path(e: EdgeInst) -> Path {
    Path::one(e)
}

//! Hereditary saturated collections, breaking vertices and admissible pairs.
//!
//! A collection `H` of algebra sets that is hereditary (closed under ranges
//! of `H`-sourced edges, finite unions and subsets) and saturated (a regular
//! vertex all of whose ranges lie in `H` joins `H`) is represented by the
//! pair `(V_H, At_H)`:
//!
//! * `V_H` — the set of vertices whose singletons lie in `H`,
//! * `At_H` — the signatures of the atoms contained in `H` up to finite
//!   sets.
//!
//! Membership rule: `A ∈ H` iff `A ∖ ⋃At_H` is finite and contained in
//! `V_H`. Every member of every flagged atom lies in `V_H` (downward
//! closure), so finite atoms never need flagging and `At_H` canonically
//! holds infinite atoms only. `H` is *not* determined by `V_H` alone: the
//! collection of all finite subsets of an infinite family has `V_H` equal to
//! the whole family with no atom flagged.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::model::{Multiplicity, Ultragraph};
use crate::setalg::{atoms, in_algebra_with, AtomTable, Signature};
use crate::vset::{FamilyId, VSet, VertexId, VertexRef};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("set {0} is outside the generated set algebra")]
    OutsideAlgebra(String),
    #[error("vertex `{0}` is not a breaking vertex of H")]
    NotBreaking(String),
    #[error("S is not a subset of the breaking vertices of H")]
    BadBreakingSet,
}

/// A hereditary saturated subcollection of the set algebra, in `(V_H, At_H)`
/// representation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HSCollection {
    v_h: VSet,
    at_h: BTreeSet<Signature>,
}

impl HSCollection {
    /// The trivial collection `{∅}`.
    pub fn trivial() -> Self {
        HSCollection {
            v_h: VSet::empty(),
            at_h: BTreeSet::new(),
        }
    }

    /// Wrap raw representation data without running the closure. The result
    /// need not be hereditary or saturated; [`is_hereditary`] /
    /// [`is_saturated`] exist to check exactly that.
    pub fn from_raw(v_h: VSet, at_h: BTreeSet<Signature>) -> Self {
        HSCollection { v_h, at_h }
    }

    pub fn v_h(&self) -> &VSet {
        &self.v_h
    }

    pub fn at_h(&self) -> &BTreeSet<Signature> {
        &self.at_h
    }

    pub fn is_trivial(&self) -> bool {
        self.v_h.is_empty() && self.at_h.is_empty()
    }

    fn flagged_union(&self, table: &AtomTable) -> VSet {
        table.union_of(&self.at_h)
    }

    /// Membership without the algebra precondition check.
    pub fn contains_unchecked(&self, table: &AtomTable, a: &VSet) -> bool {
        let rest = a.diff(&self.flagged_union(table));
        rest.is_finite() && rest.is_subset(&self.v_h)
    }

    /// `A ∈ H`. Errors when `A` is outside the set algebra.
    pub fn contains(&self, g: &Ultragraph, a: &VSet) -> Result<bool, IdealError> {
        let table = atoms(g);
        if !in_algebra_with(&table, a) {
            return Err(IdealError::OutsideAlgebra(g.display_set(a)));
        }
        Ok(self.contains_unchecked(&table, a))
    }

    /// A finite list of generators that re-closes to this collection:
    /// flagged atoms, the finite leftover of `V_H` as singletons, and one
    /// fill marker per family whose `V_H` trace is cofinite but not covered
    /// by flagged atoms.
    pub fn generating_family(&self, table: &AtomTable) -> (Vec<VSet>, Vec<FamilyId>) {
        let mut sets: Vec<VSet> = self
            .at_h
            .iter()
            .filter_map(|sig| table.get(sig).cloned())
            .collect();
        let leftover = self.v_h.diff(&self.flagged_union(table));
        let mut fills = Vec::new();
        let mut finite_leftover = leftover.clone();
        for (f, t) in leftover.traces() {
            if let crate::vset::Trace::Cofinite(_) = t {
                fills.push(f);
                finite_leftover = finite_leftover.diff(&VSet::family_all(f));
            }
        }
        for v in finite_leftover
            .finite_members()
            .expect("leftover minus cofinite traces is finite")
        {
            sets.push(VSet::singleton(v));
        }
        (sets, fills)
    }
}

/// Condition (1) of heredity: `s(e) ∈ H` implies `r(e) ∈ H` for every edge.
/// Conditions (2) and (3) — closure under finite unions and subsets — hold
/// by construction of the representation.
pub fn is_hereditary(g: &Ultragraph, h: &HSCollection) -> bool {
    let table = atoms(g);
    for (_, e) in g.edges() {
        let src = VSet::singleton(VertexRef::named(e.source));
        if h.contains_unchecked(&table, &src) && !h.contains_unchecked(&table, &e.range) {
            return false;
        }
    }
    true
}

/// Saturation: every named vertex emitting finitely many (at least one)
/// edges, all of whose ranges lie in `H`, has its singleton in `H`. Family
/// members are sinks, so only named vertices are checked.
pub fn is_saturated(g: &Ultragraph, h: &HSCollection) -> bool {
    let table = atoms(g);
    for v in 0..g.vertex_count() {
        if !g.is_regular(v) {
            continue;
        }
        let all_in = g
            .out_edges(v)
            .iter()
            .all(|e| h.contains_unchecked(&table, &g.edge(*e).range));
        if all_in && !h.contains_unchecked(&table, &VSet::singleton(VertexRef::named(v))) {
            return false;
        }
    }
    true
}

/// Least representable hereditary saturated collection containing the given
/// generator sets.
pub fn hs_closure(g: &Ultragraph, generators: &[VSet]) -> Result<HSCollection, IdealError> {
    hs_closure_with_fills(g, generators, &[])
}

/// Closure where, in addition to set generators, whole families may be
/// supplied as *singleton fills*: the fill of `F` adds every singleton
/// `{F#k}` to `H` without adding any infinite subset of `F`.
pub fn hs_closure_with_fills(
    g: &Ultragraph,
    generators: &[VSet],
    fills: &[FamilyId],
) -> Result<HSCollection, IdealError> {
    let table = atoms(g);
    for a in generators {
        if !in_algebra_with(&table, a) {
            return Err(IdealError::OutsideAlgebra(g.display_set(a)));
        }
    }
    let mut h = HSCollection::trivial();
    for f in fills {
        h.v_h = h.v_h.union(&VSet::family_all(*f));
    }
    let mut queue: Vec<VSet> = generators.to_vec();
    loop {
        while let Some(a) = queue.pop() {
            absorb(&mut h, &table, &a);
        }
        let mut changed = false;
        // ranges of H-sourced edges
        for (_, e) in g.edges() {
            let src = VSet::singleton(VertexRef::named(e.source));
            if h.contains_unchecked(&table, &src) && !h.contains_unchecked(&table, &e.range) {
                queue.push(e.range.clone());
                changed = true;
            }
        }
        // saturation at regular vertices
        for v in 0..g.vertex_count() {
            if !g.is_regular(v) {
                continue;
            }
            let vset = VSet::singleton(VertexRef::named(v));
            if h.contains_unchecked(&table, &vset) {
                continue;
            }
            let all_in = g
                .out_edges(v)
                .iter()
                .all(|e| h.contains_unchecked(&table, &g.edge(*e).range));
            if all_in {
                queue.push(vset);
                changed = true;
            }
        }
        if !changed && queue.is_empty() {
            break;
        }
    }
    debug_assert!(is_hereditary(g, &h) && is_saturated(g, &h));
    Ok(h)
}

/// Add one algebra set to the representation: flag every atom it meets
/// infinitely (pulling the whole atom into `V_H`, preserving downward
/// closure of the representation), then add the finite leftover to `V_H`.
fn absorb(h: &mut HSCollection, table: &AtomTable, a: &VSet) {
    if h.contains_unchecked(table, a) {
        return;
    }
    for (sig, atom) in table.iter() {
        if atom.is_finite() || h.at_h.contains(sig) {
            continue;
        }
        if !a.intersect(atom).is_finite() {
            h.at_h.insert(sig.clone());
            h.v_h = h.v_h.union(atom);
        }
    }
    let leftover = a.diff(&h.flagged_union(table));
    debug_assert!(leftover.is_finite(), "generator must be in the algebra");
    h.v_h = h.v_h.union(&leftover);
}

/// Breaking vertices of `H`: infinite emitters with finitely many, but at
/// least one, edges ranging outside `H`. A named vertex is an infinite
/// emitter exactly when it carries a bundle; every bundle at it must range
/// inside `H`, and the single edges outside `H` must number `0 < k < ∞`.
pub fn breaking_vertices(g: &Ultragraph, h: &HSCollection) -> BTreeSet<VertexId> {
    let table = atoms(g);
    let mut out = BTreeSet::new();
    for v in 0..g.vertex_count() {
        if !g.has_bundle_at(v) {
            continue;
        }
        let mut singles_outside = 0usize;
        let mut bundle_outside = false;
        for e in g.out_edges(v) {
            let in_h = h.contains_unchecked(&table, &g.edge(*e).range);
            match g.edge(*e).multiplicity {
                Multiplicity::InfiniteBundle if !in_h => bundle_outside = true,
                Multiplicity::One if !in_h => singles_outside += 1,
                _ => {}
            }
        }
        if !bundle_outside && singles_outside > 0 {
            out.insert(v);
        }
    }
    out
}

/// A hereditary saturated collection together with a set of its breaking
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdmissiblePair {
    h: HSCollection,
    s: BTreeSet<VertexId>,
}

impl AdmissiblePair {
    /// The pair `({∅}, ∅)`; quotienting by it changes nothing.
    pub fn trivial() -> Self {
        AdmissiblePair {
            h: HSCollection::trivial(),
            s: BTreeSet::new(),
        }
    }

    pub fn new(
        g: &Ultragraph,
        h: HSCollection,
        s: BTreeSet<VertexId>,
    ) -> Result<Self, IdealError> {
        let b = breaking_vertices(g, &h);
        if !s.is_subset(&b) {
            return Err(IdealError::BadBreakingSet);
        }
        Ok(AdmissiblePair { h, s })
    }

    pub fn h(&self) -> &HSCollection {
        &self.h
    }

    pub fn s(&self) -> &BTreeSet<VertexId> {
        &self.s
    }

    pub fn is_trivial(&self) -> bool {
        self.h.is_trivial() && self.s.is_empty()
    }
}

/// Enumerates the admissible pairs whose collections are generated by the
/// finite pool {named singletons} ∪ {whole families, as singleton fills}
/// ∪ {edge ranges}: closures of all pool subsets, deduplicated, crossed
/// with every subset of the breaking vertices. An infinite ultragraph can
/// admit collections outside this pool; those are out of scope by design.
pub fn admissible_pairs(g: &Ultragraph) -> Vec<AdmissiblePair> {
    enum PoolItem {
        Set(VSet),
        Fill(FamilyId),
    }
    let mut pool: Vec<PoolItem> = Vec::new();
    for v in 0..g.vertex_count() {
        pool.push(PoolItem::Set(VSet::singleton(VertexRef::named(v))));
    }
    for f in 0..g.family_count() {
        pool.push(PoolItem::Fill(f));
    }
    for (_, e) in g.edges() {
        pool.push(PoolItem::Set(e.range.clone()));
    }
    assert!(pool.len() <= 16, "pool enumeration is desk-scale");

    let mut collections: BTreeSet<HSCollection> = BTreeSet::new();
    for mask in 0u32..(1 << pool.len()) {
        let mut sets = Vec::new();
        let mut fills = Vec::new();
        for (i, item) in pool.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            match item {
                PoolItem::Set(s) => sets.push(s.clone()),
                PoolItem::Fill(f) => fills.push(*f),
            }
        }
        let h = hs_closure_with_fills(g, &sets, &fills).expect("pool sets are in the algebra");
        collections.insert(h);
    }

    let mut out = Vec::new();
    for h in collections {
        let b: Vec<VertexId> = breaking_vertices(g, &h).into_iter().collect();
        for mask in 0u32..(1 << b.len()) {
            let s: BTreeSet<VertexId> = b
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect();
            out.push(AdmissiblePair { h: h.clone(), s });
        }
    }
    out
}

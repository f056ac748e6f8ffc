//! Quotient ultragraphs: the overline construction, equivalence classes of
//! sets modulo a hereditary saturated collection, and `G/(H,S)`.
//!
//! Two sets are equivalent when both differences lie in `H`. The canonical
//! class representative is computed by (i) subtracting every flagged atom of
//! `At_H`, (ii) dropping explicit members that lie in `V_H` from the named
//! part and from finite traces, and (iii) clearing cofinite-trace exceptions
//! that lie in `V_H`. Cofinite traces on atoms outside `At_H` survive
//! intact: in the reference ultragraph U1 with `H` the finite subsets of
//! `W`, the class `[W]` is nonzero even though every singleton of `W` lies
//! in `H`.
//!
//! The quotient by the trivial pair `({∅}, ∅)` is the ultragraph itself with
//! singleton classes; the plain Leavitt path algebra machinery runs through
//! that case.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::ideals::AdmissiblePair;
use crate::model::{EdgeId, EdgeInst, Multiplicity, Path, Ultragraph};
use crate::setalg::{atoms, atoms_of_ranges, in_algebra_with, AtomTable};
use crate::vset::{NamedV, SetOp, Trace, VSet, VertexId, VertexRef};

/// The overline extension data: primed vertices `w'` for `w ∈ B_H ∖ S`, and
/// the edges whose source is rewritten to the primed copy (exactly those
/// with `s(e) ∈ B_H ∖ S` and `r(e) ∈ H`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overline {
    pub primed: BTreeSet<VertexId>,
    pub resourced: BTreeSet<EdgeId>,
}

/// Builds the overline data for an admissible pair.
pub fn build_overline(g: &Ultragraph, pair: &AdmissiblePair) -> Overline {
    let b = crate::ideals::breaking_vertices(g, pair.h());
    let primed: BTreeSet<VertexId> = b.difference(pair.s()).copied().collect();
    let table = atoms(g);
    let mut resourced = BTreeSet::new();
    for (i, e) in g.edges() {
        if primed.contains(&e.source) && pair.h().contains_unchecked(&table, &e.range) {
            resourced.insert(i);
        }
    }
    Overline { primed, resourced }
}

/// A canonical class representative over the primed-extended universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassSet(VSet);

impl ClassSet {
    pub fn repr(&self) -> &VSet {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> VSet {
        self.0
    }
}

/// The quotient ultragraph `G/(H,S)`: vertex classes `[v]` for `{v} ∉ H`
/// plus `[w']` for `w ∈ B_H ∖ S`, and the edges with `r(e) ∉ H`, with
/// class-valued ranges. Holds the caches every later analysis consults.
#[derive(Debug)]
pub struct QuotientUltragraph {
    base: Arc<Ultragraph>,
    pair: AdmissiblePair,
    ov: Overline,
    base_atoms: AtomTable,
    ov_atoms: AtomTable,
    kept: Vec<EdgeId>,
    out_kept: Vec<Vec<EdgeId>>,
}

impl QuotientUltragraph {
    pub fn new(base: Arc<Ultragraph>, pair: AdmissiblePair) -> Arc<Self> {
        let ov = build_overline(&base, &pair);
        let base_atoms = atoms(&base);
        let mut kept = Vec::new();
        for (i, e) in base.edges() {
            if !pair.h().contains_unchecked(&base_atoms, &e.range) {
                kept.push(i);
            }
        }
        let mut out_kept = vec![Vec::new(); base.vertex_count()];
        for e in &kept {
            out_kept[base.edge(*e).source].push(*e);
        }
        let bar_ranges: Vec<(EdgeId, VSet)> = base
            .edges()
            .map(|(i, e)| (i, overline_bar_set(&ov, &e.range)))
            .collect();
        let ov_atoms = atoms_of_ranges(&bar_ranges);
        Arc::new(QuotientUltragraph {
            base,
            pair,
            ov,
            base_atoms,
            ov_atoms,
            kept,
            out_kept,
        })
    }

    /// The quotient by the trivial pair, i.e. the ultragraph itself.
    pub fn trivial(base: Arc<Ultragraph>) -> Arc<Self> {
        Self::new(base, AdmissiblePair::trivial())
    }

    pub fn base(&self) -> &Arc<Ultragraph> {
        &self.base
    }

    pub fn pair(&self) -> &AdmissiblePair {
        &self.pair
    }

    pub fn overline(&self) -> &Overline {
        &self.ov
    }

    pub fn base_atoms(&self) -> &AtomTable {
        &self.base_atoms
    }

    /// True when this is the trivial quotient (classes are singletons).
    pub fn is_plain(&self) -> bool {
        self.pair.is_trivial()
    }

    /// `Ā = A ∪ {w' : w ∈ A ∩ (B_H ∖ S)}`.
    pub fn overline_bar(&self, a: &VSet) -> VSet {
        overline_bar_set(&self.ov, a)
    }

    /// `s̄(e)`, a primed vertex exactly when the edge was re-sourced.
    pub fn source_bar(&self, e: EdgeId) -> NamedV {
        let v = self.base.edge(e).source;
        if self.ov.resourced.contains(&e) {
            NamedV::primed(v)
        } else {
            NamedV::plain(v)
        }
    }

    /// `r̄(e) = r(e) ∪ {w' : w ∈ r(e) ∩ (B_H ∖ S)}`.
    pub fn range_bar(&self, e: EdgeId) -> VSet {
        self.overline_bar(&self.base.edge(e).range)
    }

    /// Edges surviving in the quotient: those with `r(e) ∉ H`.
    pub fn kept_edges(&self) -> &[EdgeId] {
        &self.kept
    }

    pub fn is_kept(&self, e: EdgeId) -> bool {
        self.kept.binary_search(&e).is_ok()
    }

    pub fn path_kept(&self, p: &Path) -> bool {
        p.0.iter().all(|e| self.is_kept(e.decl))
    }

    /// Kept edge declarations at a named vertex. Kept edges always have an
    /// unprimed source: a re-sourced edge has `r(e) ∈ H` and is dropped.
    pub fn out_kept(&self, v: VertexId) -> &[EdgeId] {
        &self.out_kept[v]
    }

    /// Membership of a set in the overline algebra (generated by singletons,
    /// primed singletons and the `r̄(e)`).
    pub fn in_overline_algebra(&self, a: &VSet) -> bool {
        in_algebra_with(&self.ov_atoms, a)
    }

    /// Canonical representative of `[A]`.
    pub fn class_reduce(&self, a: &VSet) -> ClassSet {
        let h = self.pair.h();
        let mut b = a.clone();
        for sig in h.at_h() {
            if let Some(atom) = self.base_atoms.get(sig) {
                b = b.diff(atom);
            }
        }
        let v_h = h.v_h();
        let mut out = VSet::empty();
        for n in b.named_part() {
            if n.primed || !v_h.contains(VertexRef::Named(n)) {
                out.insert(VertexRef::Named(n));
            }
        }
        for (f, t) in b.traces() {
            let keep = match t {
                Trace::Finite(m) => VSet::family_finite(
                    f,
                    m.iter()
                        .copied()
                        .filter(|i| !v_h.contains(VertexRef::Member(f, *i))),
                ),
                Trace::Cofinite(ex) => VSet::family_cofinite(
                    f,
                    ex.iter()
                        .copied()
                        .filter(|i| !v_h.contains(VertexRef::Member(f, *i))),
                ),
            };
            out = out.union(&keep);
        }
        ClassSet(out)
    }

    pub fn class_is_empty(&self, a: &VSet) -> bool {
        self.class_reduce(a).is_empty()
    }

    /// `[A] = [B]`, i.e. both differences lie in `H`.
    pub fn class_eq(&self, a: &VSet, b: &VSet) -> bool {
        self.class_reduce(a) == self.class_reduce(b)
    }

    /// `[A] ⊆ [B]`.
    pub fn class_subset(&self, a: &VSet, b: &VSet) -> bool {
        self.class_is_empty(&a.diff(b))
    }

    /// Set operations on classes, computed on representatives and reduced.
    pub fn class_op(&self, op: SetOp, a: &ClassSet, b: &ClassSet) -> ClassSet {
        self.class_reduce(&VSet::apply(op, &a.0, &b.0))
    }

    /// The class of one (possibly primed) vertex.
    pub fn vertex_class(&self, v: NamedV) -> ClassSet {
        self.class_reduce(&VSet::singleton(VertexRef::Named(v)))
    }

    /// Range class `r(e) = [r̄(e)]` of a kept edge.
    pub fn range_class(&self, e: EdgeId) -> ClassSet {
        self.class_reduce(&self.range_bar(e))
    }

    /// Source class `[s̄(e)]` of a kept edge (always unprimed).
    pub fn source_class(&self, e: EdgeId) -> ClassSet {
        self.vertex_class(self.source_bar(e))
    }

    /// Vertex classes of the quotient, as one canonical set over the
    /// extended universe: `{v : {v} ∉ H}` plus the primed vertices.
    pub fn vertex_classes(&self) -> VSet {
        let mut all = self.base.all_vertices().diff(self.pair.h().v_h());
        for w in &self.ov.primed {
            all.insert(VertexRef::Named(NamedV::primed(*w)));
        }
        all
    }

    /// Whether `prev` may be followed by `next` in a quotient path
    /// (`s(next) ⊆ r(prev)` on classes). For kept edges the source singleton
    /// class is never `[∅]`, so this agrees with pointwise membership in the
    /// base range.
    pub fn step_ok(&self, prev: EdgeInst, next: EdgeInst) -> bool {
        debug_assert!(self.is_kept(prev.decl) && self.is_kept(next.decl));
        self.base.step_ok(prev, next)
    }

    pub fn path_ok(&self, p: &Path) -> bool {
        self.path_kept(p) && p.0.windows(2).all(|w| self.step_ok(w[0], w[1]))
    }

    /// A vertex class `[v]` is regular in the quotient when it emits at
    /// least one and finitely many kept edges, i.e. no kept bundle.
    pub fn regular_class(&self, v: VertexId) -> bool {
        let out = &self.out_kept[v];
        !out.is_empty()
            && out
                .iter()
                .all(|e| self.base.edge(*e).multiplicity == Multiplicity::One)
    }

    /// The pivot edge at a regular class: canonically the last kept edge.
    pub fn pivot(&self, v: VertexId) -> Option<EdgeId> {
        if self.regular_class(v) {
            self.out_kept[v].last().copied()
        } else {
            None
        }
    }

    /// Display a class, e.g. `[{v0, W}]`.
    pub fn display_class(&self, c: &ClassSet) -> String {
        format!("[{}]", self.base.display_set(&c.0))
    }
}

fn overline_bar_set(ov: &Overline, a: &VSet) -> VSet {
    let mut out = a.clone();
    for w in &ov.primed {
        if a.contains(VertexRef::named(*w)) {
            out.insert(VertexRef::Named(NamedV::primed(*w)));
        }
    }
    out
}

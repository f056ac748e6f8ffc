//! The algebra of vertex sets generated by singletons and edge ranges.
//!
//! The *atoms* are the minimal nonempty Boolean combinations of the edge
//! ranges: for a nonempty signature `σ` of edge declarations,
//! `r(σ) = ⋂_{e∈σ} r(e) ∖ ⋃_{f∉σ} r(f)`. They partition the union of all
//! ranges. A set belongs to the generated algebra exactly when it differs
//! from some union of atoms by finitely many vertices; that criterion is
//! decidable in the finite/cofinite representation and is cross-validated
//! against [`brute_closure`] on fully finite ultragraphs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{EdgeId, Ultragraph};
use crate::vset::{FamilyId, VSet, VertexRef};

/// Signature of an atom: the set of edge declarations whose ranges contain
/// it.
pub type Signature = BTreeSet<EdgeId>;

/// The nonempty atoms of the range-generated algebra, keyed by signature.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomTable {
    atoms: BTreeMap<Signature, VSet>,
}

impl AtomTable {
    pub fn iter(&self) -> impl Iterator<Item = (&Signature, &VSet)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn get(&self, sig: &Signature) -> Option<&VSet> {
        self.atoms.get(sig)
    }

    /// Union of the atoms in the given signature set.
    pub fn union_of(&self, sigs: &BTreeSet<Signature>) -> VSet {
        let mut out = VSet::empty();
        for sig in sigs {
            if let Some(a) = self.atoms.get(sig) {
                out = out.union(a);
            }
        }
        out
    }

    /// Union of all atoms, i.e. the union of all edge ranges.
    pub fn covered(&self) -> VSet {
        let mut out = VSet::empty();
        for a in self.atoms.values() {
            out = out.union(a);
        }
        out
    }

    /// Signatures of the atoms with infinitely many members.
    pub fn infinite_signatures(&self) -> Vec<&Signature> {
        self.atoms
            .iter()
            .filter(|(_, a)| !a.is_finite())
            .map(|(s, _)| s)
            .collect()
    }
}

/// Atom partition of a list of generating ranges, by successive refinement.
/// Only nonempty atoms are materialized.
pub fn atoms_of_ranges(ranges: &[(EdgeId, VSet)]) -> AtomTable {
    let mut pieces: Vec<(Signature, VSet)> = Vec::new();
    let mut covered = VSet::empty();
    for (id, r) in ranges {
        let mut next = Vec::new();
        for (sig, p) in pieces {
            let inside = p.intersect(r);
            if !inside.is_empty() {
                let mut s = sig.clone();
                s.insert(*id);
                next.push((s, inside));
            }
            let outside = p.diff(r);
            if !outside.is_empty() {
                next.push((sig, outside));
            }
        }
        let fresh = r.diff(&covered);
        if !fresh.is_empty() {
            next.push((BTreeSet::from([*id]), fresh));
        }
        covered = covered.union(r);
        pieces = next;
    }
    AtomTable {
        atoms: pieces.into_iter().collect(),
    }
}

/// Atom partition of an ultragraph's edge ranges. A bundle contributes a
/// single range generator.
pub fn atoms(g: &Ultragraph) -> AtomTable {
    let ranges: Vec<(EdgeId, VSet)> = g.edges().map(|(i, e)| (i, e.range.clone())).collect();
    atoms_of_ranges(&ranges)
}

/// Decides membership in the generated algebra: `A` belongs iff it has
/// finite symmetric difference from some union of atoms. The candidate
/// union is forced on infinite atoms (`t` participates iff `t ∖ A` is
/// finite), so no enumeration over signature subsets is needed.
pub fn in_algebra_with(table: &AtomTable, a: &VSet) -> bool {
    let mut candidate = VSet::empty();
    for (_, atom) in table.iter() {
        if atom.is_finite() {
            continue;
        }
        if atom.diff(a).is_finite() {
            candidate = candidate.union(atom);
        }
    }
    a.diff(&candidate).is_finite()
}

pub fn in_algebra(g: &Ultragraph, a: &VSet) -> bool {
    in_algebra_with(&atoms(g), a)
}

/// Membership decision for a periodic family subset
/// `{F#k : k mod modulus ∈ residues}`. Such a set is finite only when no
/// residue is selected and cofinite only when all are, so outside those
/// degenerate cases it cannot belong to the algebra.
pub fn in_algebra_periodic(
    g: &Ultragraph,
    family: FamilyId,
    modulus: u32,
    residues: &BTreeSet<u32>,
) -> bool {
    assert!(modulus >= 1 && residues.iter().all(|r| *r < modulus));
    if residues.is_empty() {
        return true; // the empty set
    }
    if residues.len() == modulus as usize {
        return in_algebra(g, &VSet::family_all(family));
    }
    false
}

/// Whether the Leavitt path algebra of `g` is unital, i.e. whether the full
/// vertex set lies in the generated algebra.
pub fn is_unital(g: &Ultragraph) -> bool {
    in_algebra(g, &g.all_vertices())
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SetAlgError {
    #[error("brute-force closure needs a fully finite ultragraph (no families, no bundles)")]
    InfinitePresentation,
    #[error("brute-force closure is limited to 12 vertices, got {0}")]
    TooLarge(usize),
}

/// Exhaustive fixpoint closure of `{singletons} ∪ {ranges}` under union,
/// intersection and difference. Only for fully finite ultragraphs; serves
/// as the independent oracle for [`in_algebra`].
pub fn brute_closure(g: &Ultragraph) -> Result<Vec<VSet>, SetAlgError> {
    if g.family_count() > 0 || g.has_bundles() {
        return Err(SetAlgError::InfinitePresentation);
    }
    let n = g.vertex_count();
    if n > 12 {
        return Err(SetAlgError::TooLarge(n));
    }
    let to_mask = |s: &VSet| -> u32 {
        let mut m = 0u32;
        for v in s.named_part() {
            m |= 1 << v.id;
        }
        m
    };
    let mut masks: BTreeSet<u32> = BTreeSet::new();
    masks.insert(0);
    for v in 0..n {
        masks.insert(1 << v);
    }
    for (_, e) in g.edges() {
        masks.insert(to_mask(&e.range));
    }
    loop {
        let snapshot: Vec<u32> = masks.iter().copied().collect();
        let before = masks.len();
        for &a in &snapshot {
            for &b in &snapshot {
                masks.insert(a | b);
                masks.insert(a & b);
                masks.insert(a & !b);
            }
        }
        if masks.len() == before {
            break;
        }
    }
    Ok(masks
        .into_iter()
        .map(|m| VSet::from_named((0..n).filter(|v| m & (1 << v) != 0)))
        .collect())
}

/// Enumerate all subsets of the named vertices of a fully finite ultragraph.
pub fn all_subsets(g: &Ultragraph) -> Vec<VSet> {
    let n = g.vertex_count();
    assert!(n <= 12);
    (0u32..(1 << n))
        .map(|m| VSet::from_named((0..n).filter(|v| m & (1 << v) != 0)))
        .collect()
}

/// The finite pool of generator sets used for closure enumeration: named
/// singletons and edge ranges. (Whole families are handled separately as
/// singleton-fill generators.)
pub fn generator_pool(g: &Ultragraph) -> Vec<(String, VSet)> {
    let mut pool = Vec::new();
    for v in 0..g.vertex_count() {
        pool.push((
            format!("{{{}}}", g.vertex_name(v)),
            VSet::singleton(VertexRef::named(v)),
        ));
    }
    for (_, e) in g.edges() {
        pool.push((format!("r({})", e.id), e.range.clone()));
    }
    pool
}

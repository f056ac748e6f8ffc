//! Canonical vertex sets: finite named part plus a finite or cofinite trace
//! per vertex family.
//!
//! Every set this crate ever manipulates lives in the class of sets that are
//! "finite or cofinite within each family, plus finitely many named
//! vertices". Singletons, edge ranges and all their Boolean combinations stay
//! inside this class, so union, intersection and difference are exact and
//! terminating, and structural equality of [`VSet`] values is set equality.

use std::collections::{BTreeMap, BTreeSet};

/// Index of a named vertex in its ambient ultragraph (lexicographic order).
pub type VertexId = usize;
/// Index of a vertex family in its ambient ultragraph (lexicographic order).
pub type FamilyId = usize;

/// A named vertex of the (possibly primed-extended) universe.
///
/// `primed == true` refers to the auxiliary vertex `w'` that the overline
/// construction attaches to a breaking vertex `w`. Base-universe sets never
/// contain primed vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamedV {
    pub id: VertexId,
    pub primed: bool,
}

impl NamedV {
    pub fn plain(id: VertexId) -> Self {
        NamedV { id, primed: false }
    }

    pub fn primed(id: VertexId) -> Self {
        NamedV { id, primed: true }
    }
}

/// A single vertex reference: a named vertex or the `index`-th member of a
/// family (indices start at 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexRef {
    Named(NamedV),
    Member(FamilyId, u32),
}

impl VertexRef {
    pub fn named(id: VertexId) -> Self {
        VertexRef::Named(NamedV::plain(id))
    }

    pub fn member(family: FamilyId, index: u32) -> Self {
        debug_assert!(index >= 1);
        VertexRef::Member(family, index)
    }
}

/// Trace of a set on one family: an explicit finite member list or a
/// cofinite set given by its finite exception list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trace {
    Finite(BTreeSet<u32>),
    Cofinite(BTreeSet<u32>),
}

impl Trace {
    fn is_empty(&self) -> bool {
        matches!(self, Trace::Finite(m) if m.is_empty())
    }

    fn contains(&self, index: u32) -> bool {
        match self {
            Trace::Finite(m) => m.contains(&index),
            Trace::Cofinite(ex) => !ex.contains(&index),
        }
    }

    fn union(&self, other: &Trace) -> Trace {
        use Trace::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.union(b).copied().collect()),
            (Finite(a), Cofinite(e)) => Cofinite(e.difference(a).copied().collect()),
            (Cofinite(e), Finite(b)) => Cofinite(e.difference(b).copied().collect()),
            (Cofinite(e), Cofinite(f)) => Cofinite(e.intersection(f).copied().collect()),
        }
    }

    fn intersect(&self, other: &Trace) -> Trace {
        use Trace::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.intersection(b).copied().collect()),
            (Finite(a), Cofinite(e)) => Finite(a.difference(e).copied().collect()),
            (Cofinite(e), Finite(b)) => Finite(b.difference(e).copied().collect()),
            (Cofinite(e), Cofinite(f)) => Cofinite(e.union(f).copied().collect()),
        }
    }

    fn diff(&self, other: &Trace) -> Trace {
        use Trace::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.difference(b).copied().collect()),
            (Finite(a), Cofinite(e)) => Finite(a.intersection(e).copied().collect()),
            (Cofinite(e), Finite(b)) => Cofinite(e.union(b).copied().collect()),
            (Cofinite(e), Cofinite(f)) => Finite(f.difference(e).copied().collect()),
        }
    }
}

/// The binary set operations, for callers that select one at runtime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersect,
    Diff,
}

/// A canonical vertex set.
///
/// Invariants: the named part is finite and duplicate-free (a `BTreeSet`),
/// member/exception lists are finite, and no family maps to an empty finite
/// trace. Under these invariants, structural equality is set equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VSet {
    named: BTreeSet<NamedV>,
    fams: BTreeMap<FamilyId, Trace>,
}

impl VSet {
    pub fn empty() -> Self {
        VSet::default()
    }

    pub fn singleton(v: VertexRef) -> Self {
        let mut s = VSet::empty();
        s.insert(v);
        s
    }

    pub fn from_named<I: IntoIterator<Item = VertexId>>(ids: I) -> Self {
        let mut s = VSet::empty();
        for id in ids {
            s.named.insert(NamedV::plain(id));
        }
        s
    }

    /// The whole family `f`, i.e. a cofinite trace with no exceptions.
    pub fn family_all(f: FamilyId) -> Self {
        let mut s = VSet::empty();
        s.fams.insert(f, Trace::Cofinite(BTreeSet::new()));
        s
    }

    /// The family `f` minus the given exceptional indices.
    pub fn family_cofinite<I: IntoIterator<Item = u32>>(f: FamilyId, exceptions: I) -> Self {
        let mut s = VSet::empty();
        s.fams
            .insert(f, Trace::Cofinite(exceptions.into_iter().collect()));
        s
    }

    /// The listed members of family `f`.
    pub fn family_finite<I: IntoIterator<Item = u32>>(f: FamilyId, members: I) -> Self {
        let mut s = VSet::empty();
        let m: BTreeSet<u32> = members.into_iter().collect();
        if !m.is_empty() {
            s.fams.insert(f, Trace::Finite(m));
        }
        s
    }

    fn normalize(mut self) -> Self {
        self.fams.retain(|_, t| !t.is_empty());
        self
    }

    pub fn insert(&mut self, v: VertexRef) {
        match v {
            VertexRef::Named(n) => {
                self.named.insert(n);
            }
            VertexRef::Member(f, i) => match self.fams.get_mut(&f) {
                Some(Trace::Finite(m)) => {
                    m.insert(i);
                }
                Some(Trace::Cofinite(ex)) => {
                    ex.remove(&i);
                }
                None => {
                    self.fams.insert(f, Trace::Finite(BTreeSet::from([i])));
                }
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.named.is_empty() && self.fams.is_empty()
    }

    /// True when the set has no cofinite trace (hence finitely many members).
    pub fn is_finite(&self) -> bool {
        self.fams.values().all(|t| matches!(t, Trace::Finite(_)))
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        match v {
            VertexRef::Named(n) => self.named.contains(&n),
            VertexRef::Member(f, i) => self.fams.get(&f).is_some_and(|t| t.contains(i)),
        }
    }

    pub fn has_primed(&self) -> bool {
        self.named.iter().any(|n| n.primed)
    }

    pub fn named_part(&self) -> impl Iterator<Item = NamedV> + '_ {
        self.named.iter().copied()
    }

    pub fn traces(&self) -> impl Iterator<Item = (FamilyId, &Trace)> {
        self.fams.iter().map(|(f, t)| (*f, t))
    }

    pub fn trace(&self, f: FamilyId) -> Option<&Trace> {
        self.fams.get(&f)
    }

    pub fn union(&self, other: &VSet) -> VSet {
        let mut named = self.named.clone();
        named.extend(other.named.iter().copied());
        let mut fams = self.fams.clone();
        for (f, t) in &other.fams {
            match fams.get(f) {
                Some(mine) => {
                    let u = mine.union(t);
                    fams.insert(*f, u);
                }
                None => {
                    fams.insert(*f, t.clone());
                }
            }
        }
        VSet { named, fams }.normalize()
    }

    pub fn intersect(&self, other: &VSet) -> VSet {
        let named = self.named.intersection(&other.named).copied().collect();
        let mut fams = BTreeMap::new();
        for (f, t) in &self.fams {
            if let Some(theirs) = other.fams.get(f) {
                fams.insert(*f, t.intersect(theirs));
            }
        }
        VSet { named, fams }.normalize()
    }

    pub fn diff(&self, other: &VSet) -> VSet {
        let named = self.named.difference(&other.named).copied().collect();
        let mut fams = BTreeMap::new();
        for (f, t) in &self.fams {
            match other.fams.get(f) {
                Some(theirs) => fams.insert(*f, t.diff(theirs)),
                None => fams.insert(*f, t.clone()),
            };
        }
        VSet { named, fams }.normalize()
    }

    pub fn apply(op: SetOp, a: &VSet, b: &VSet) -> VSet {
        match op {
            SetOp::Union => a.union(b),
            SetOp::Intersect => a.intersect(b),
            SetOp::Diff => a.diff(b),
        }
    }

    pub fn is_subset(&self, other: &VSet) -> bool {
        self.diff(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &VSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Number of members, provided the set is finite.
    pub fn finite_len(&self) -> Option<usize> {
        if !self.is_finite() {
            return None;
        }
        let fam: usize = self
            .fams
            .values()
            .map(|t| match t {
                Trace::Finite(m) => m.len(),
                Trace::Cofinite(_) => unreachable!(),
            })
            .sum();
        Some(self.named.len() + fam)
    }

    /// Members of a finite set, in canonical order.
    pub fn finite_members(&self) -> Option<Vec<VertexRef>> {
        if !self.is_finite() {
            return None;
        }
        let mut out: Vec<VertexRef> = self.named.iter().map(|n| VertexRef::Named(*n)).collect();
        for (f, t) in &self.fams {
            if let Trace::Finite(m) = t {
                out.extend(m.iter().map(|i| VertexRef::Member(*f, *i)));
            }
        }
        Some(out)
    }

    /// A handful of members, for probing infinite sets: all finite-part
    /// members plus the first `per_family` members of each cofinite trace.
    pub fn sample_members(&self, per_family: usize) -> Vec<VertexRef> {
        let mut out: Vec<VertexRef> = self.named.iter().map(|n| VertexRef::Named(*n)).collect();
        for (f, t) in &self.fams {
            match t {
                Trace::Finite(m) => out.extend(m.iter().map(|i| VertexRef::Member(*f, *i))),
                Trace::Cofinite(ex) => {
                    let mut i = 1u32;
                    let mut taken = 0;
                    while taken < per_family {
                        if !ex.contains(&i) {
                            out.push(VertexRef::Member(*f, i));
                            taken += 1;
                        }
                        i += 1;
                    }
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Canonical enumeration of the members of a set.
//
// The representation of the Leavitt algebra on a direct-sum module needs, for
// each edge range, a fixed bijection between range members and the naturals.
// The order is: named vertices, then finite-trace members by (family, index),
// then the cofinite traces interleaved round-robin in family order.
// ---------------------------------------------------------------------------

impl VSet {
    fn finite_prefix(&self) -> Vec<VertexRef> {
        let mut out: Vec<VertexRef> = self.named.iter().map(|n| VertexRef::Named(*n)).collect();
        for (f, t) in &self.fams {
            if let Trace::Finite(m) = t {
                out.extend(m.iter().map(|i| VertexRef::Member(*f, *i)));
            }
        }
        out
    }

    fn cofinite_families(&self) -> Vec<(FamilyId, &BTreeSet<u32>)> {
        self.fams
            .iter()
            .filter_map(|(f, t)| match t {
                Trace::Cofinite(ex) => Some((*f, ex)),
                Trace::Finite(_) => None,
            })
            .collect()
    }

    /// The `n`-th member of the set in canonical enumeration order, if any.
    pub fn nth_member(&self, n: u64) -> Option<VertexRef> {
        let prefix = self.finite_prefix();
        if (n as usize) < prefix.len() {
            return Some(prefix[n as usize]);
        }
        let p = n - prefix.len() as u64;
        let cof = self.cofinite_families();
        if cof.is_empty() {
            return None;
        }
        let k = cof.len() as u64;
        let (f, ex) = cof[(p % k) as usize];
        Some(VertexRef::Member(f, nth_not_in(ex, p / k)))
    }

    /// The canonical enumeration index of a member.
    pub fn index_of(&self, v: VertexRef) -> Option<u64> {
        if !self.contains(v) {
            return None;
        }
        let prefix = self.finite_prefix();
        if let Some(pos) = prefix.iter().position(|w| *w == v) {
            return Some(pos as u64);
        }
        let cof = self.cofinite_families();
        let k = cof.len() as u64;
        let (slot, (_, ex)) = cof
            .iter()
            .enumerate()
            .find(|(_, (f, _))| matches!(v, VertexRef::Member(g, _) if g == *f))?;
        let VertexRef::Member(_, i) = v else {
            return None;
        };
        let rank = rank_not_in(ex, i);
        Some(prefix.len() as u64 + rank * k + slot as u64)
    }
}

/// The `rank`-th positive integer (0-based rank) outside the exception set.
fn nth_not_in(ex: &BTreeSet<u32>, rank: u64) -> u32 {
    let mut candidate = rank + 1;
    for e in ex {
        if (*e as u64) <= candidate {
            candidate += 1;
        } else {
            break;
        }
    }
    candidate as u32
}

/// Inverse of [`nth_not_in`]: the rank of `i` among non-exceptions.
fn rank_not_in(ex: &BTreeSet<u32>, i: u32) -> u64 {
    debug_assert!(!ex.contains(&i));
    let below = ex.iter().filter(|e| **e < i).count() as u64;
    (i as u64) - 1 - below
}

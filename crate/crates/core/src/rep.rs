//! The direct-sum module representation of a plain Leavitt path algebra.
//!
//! For each edge `e`, `Z_e` is a direct sum of countably many copies of the
//! ring; for each vertex, `Z_v` is the direct sum of the `Z_e` over edges at
//! `v`, or a fresh countable sum at a sink. `P_A` acts as the identity on
//! the blocks of `A`'s vertices; `S_e` is a fixed isomorphism
//! `⊕_{v∈r(e)} Z_v → Z_e ⊆ Z_{s(e)}` and `S_{e*}` its inverse. Projections
//! of nonempty sets act nontrivially, so a state mapped to something nonzero
//! certifies that an element is nonzero.
//!
//! The chosen isomorphisms are pinned down by explicit pairings: basis
//! vectors are indexed by `(vertex, slot)`, slots at an emitter are
//! `(edge instance, copy)` pairs, and `S_e` matches `(i-th range vertex,
//! j-th slot)` with copy `j*k + i` when the range has `k` members and with
//! the Cantor pairing of `(i, j)` when it is infinite. Everything is exact
//! and deterministic; quotient contexts have no such representation (their
//! range classes can contain no vertex classes at all), which is why this
//! module insists on a plain context.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraError, Element, Monomial};
use crate::model::{EdgeInst, Multiplicity, Ultragraph};
use crate::quotient::QuotientUltragraph;
use crate::ring::{RingConfig, Scalar};
use crate::vset::{VSet, VertexId, VertexRef};

/// A basis slot inside the module of one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    /// The `m`-th copy at a sink.
    Free(u64),
    /// The `m`-th copy inside `Z_e` at the emitter `s(e)`.
    Copy(EdgeInst, u64),
}

/// A finitely supported vector over the basis `(vertex, slot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepState {
    ring: RingConfig,
    entries: BTreeMap<(VertexRef, Slot), Scalar>,
}

impl RepState {
    pub fn zero(ring: RingConfig) -> Self {
        RepState {
            ring,
            entries: BTreeMap::new(),
        }
    }

    /// The basis vector `δ_{(v, slot)}`.
    pub fn basis(ring: RingConfig, v: VertexRef, slot: Slot) -> Self {
        let mut s = RepState::zero(ring);
        s.entries.insert((v, slot), ring.one());
        s
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_to(&mut self, key: (VertexRef, Slot), c: Scalar) {
        let cur = self.entries.remove(&key).unwrap_or_else(|| self.ring.zero());
        let sum = self.ring.add(&cur, &c);
        if !self.ring.is_zero(&sum) {
            self.entries.insert(key, sum);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(VertexRef, Slot), &Scalar)> {
        self.entries.iter()
    }
}

/// Cantor pairing `(i, j) ↦ (i+j)(i+j+1)/2 + j` and its inverse.
fn cantor(i: u64, j: u64) -> u64 {
    let s = i + j;
    s * (s + 1) / 2 + j
}

fn cantor_inv(z: u64) -> (u64, u64) {
    let mut w = 0u64;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let t = w * (w + 1) / 2;
    let j = z - t;
    (w - j, j)
}

/// Copy index inside `Z_e` of the `j`-th slot at the `i`-th range vertex.
fn mix(i: u64, j: u64, range_size: Option<u64>) -> u64 {
    match range_size {
        Some(k) => j * k + i,
        None => cantor(i, j),
    }
}

fn unmix(m: u64, range_size: Option<u64>) -> (u64, u64) {
    match range_size {
        Some(k) => (m % k, m / k),
        None => cantor_inv(m),
    }
}

/// Bijection between the slots at a vertex and the naturals, fixed by the
/// out-edge profile: `k` single edges alone give `(edge i, copy m) ↦ m*k+i`;
/// with `b ≥ 1` bundles, instances enumerate as singles first and bundle
/// members diagonally, paired with the copy index by Cantor.
fn slot_index(g: &Ultragraph, v: VertexId, slot: Slot) -> Option<u64> {
    let out = g.out_edges(v);
    if out.is_empty() {
        return match slot {
            Slot::Free(m) => Some(m),
            Slot::Copy(..) => None,
        };
    }
    let Slot::Copy(e, m) = slot else {
        return None;
    };
    if g.source(e) != v {
        return None;
    }
    let singles: Vec<usize> = out
        .iter()
        .copied()
        .filter(|d| g.edge(*d).multiplicity == Multiplicity::One)
        .collect();
    let bundles: Vec<usize> = out
        .iter()
        .copied()
        .filter(|d| g.edge(*d).multiplicity == Multiplicity::InfiniteBundle)
        .collect();
    let inst_idx = match e.inst {
        None => singles.iter().position(|d| *d == e.decl)? as u64,
        Some(n) => {
            let t = bundles.iter().position(|d| *d == e.decl)? as u64;
            singles.len() as u64 + (n as u64 - 1) * bundles.len() as u64 + t
        }
    };
    if bundles.is_empty() {
        Some(m * singles.len() as u64 + inst_idx)
    } else {
        Some(cantor(inst_idx, m))
    }
}

fn slot_at(g: &Ultragraph, v: VertexId, idx: u64) -> Slot {
    let out = g.out_edges(v);
    if out.is_empty() {
        return Slot::Free(idx);
    }
    let singles: Vec<usize> = out
        .iter()
        .copied()
        .filter(|d| g.edge(*d).multiplicity == Multiplicity::One)
        .collect();
    let bundles: Vec<usize> = out
        .iter()
        .copied()
        .filter(|d| g.edge(*d).multiplicity == Multiplicity::InfiniteBundle)
        .collect();
    if bundles.is_empty() {
        let k = singles.len() as u64;
        let (i, m) = (idx % k, idx / k);
        return Slot::Copy(EdgeInst::single(singles[i as usize]), m);
    }
    let (inst_idx, m) = cantor_inv(idx);
    let e = if (inst_idx as usize) < singles.len() {
        EdgeInst::single(singles[inst_idx as usize])
    } else {
        let off = inst_idx - singles.len() as u64;
        let b = bundles.len() as u64;
        EdgeInst::bundle(bundles[(off % b) as usize], (off / b) as u32 + 1)
    };
    Slot::Copy(e, m)
}

fn range_size(r: &VSet) -> Option<u64> {
    r.finite_len().map(|n| n as u64)
}

/// `P_A` on a state: keep the blocks of vertices in `A`.
fn apply_proj(state: &RepState, a: &VSet) -> RepState {
    let mut out = RepState::zero(state.ring);
    for ((v, slot), c) in state.entries() {
        if a.contains(*v) {
            out.add_to((*v, *slot), c.clone());
        }
    }
    out
}

/// `S_e` on a state: `δ_{(v, slot)} ↦ δ_{(s(e), Copy(e, mix(i, j)))}` for
/// `v` the `i`-th member of `r(e)` and `slot` its `j`-th slot.
fn apply_edge(g: &Ultragraph, e: EdgeInst, state: &RepState) -> RepState {
    let r = g.range(e);
    let k = range_size(r);
    let src = VertexRef::named(g.source(e));
    let mut out = RepState::zero(state.ring);
    for ((v, slot), c) in state.entries() {
        let Some(i) = r.index_of(*v) else { continue };
        let j = match v {
            VertexRef::Named(n) => slot_index(g, n.id, *slot),
            VertexRef::Member(..) => match slot {
                Slot::Free(m) => Some(*m),
                Slot::Copy(..) => None,
            },
        };
        let Some(j) = j else { continue };
        out.add_to((src, Slot::Copy(e, mix(i, j, k))), c.clone());
    }
    out
}

/// `S_{e*}` on a state: the inverse of [`apply_edge`], zero outside `Z_e`.
fn apply_ghost(g: &Ultragraph, e: EdgeInst, state: &RepState) -> RepState {
    let r = g.range(e);
    let k = range_size(r);
    let src = VertexRef::named(g.source(e));
    let mut out = RepState::zero(state.ring);
    for ((v, slot), c) in state.entries() {
        if *v != src {
            continue;
        }
        let Slot::Copy(f, m) = slot else { continue };
        if *f != e {
            continue;
        }
        let (i, j) = unmix(*m, k);
        let target = r.nth_member(i).expect("index below range size");
        let slot = match target {
            VertexRef::Named(n) => slot_at(g, n.id, j),
            VertexRef::Member(..) => Slot::Free(j),
        };
        out.add_to((target, slot), c.clone());
    }
    out
}

fn apply_monomial(g: &Ultragraph, m: &Monomial, state: &RepState) -> RepState {
    let mut cur = state.clone();
    for e in &m.beta.0 {
        cur = apply_ghost(g, *e, &cur);
        if cur.is_zero() {
            return cur;
        }
    }
    cur = apply_proj(&cur, &m.cell);
    for e in m.alpha.0.iter().rev() {
        cur = apply_edge(g, *e, &cur);
        if cur.is_zero() {
            return cur;
        }
    }
    cur
}

/// The exact action of an element on a finitely supported vector. Only
/// plain contexts carry the representation.
pub fn rep_apply(x: &Element, state: &RepState) -> Result<RepState, AlgebraError> {
    if !x.ctx().is_plain() {
        return Err(AlgebraError::NotPlain);
    }
    let g = x.ctx().base();
    let mut out = RepState::zero(x.ring());
    for (c, m) in x.terms() {
        let image = apply_monomial(g, &m, state);
        for (key, val) in image.entries() {
            out.add_to(*key, x.ring().mul(val, &c));
        }
    }
    Ok(out)
}

/// Sound one-sided nonzeroness oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certify {
    True,
    Inconclusive,
}

const CERTIFY_SEED: u64 = 0x756c_7472_616c_7631;
const RANDOM_PROBES: usize = 50;

/// Vertices worth probing for an element: all cell samples plus the sources
/// and sample range members of every path edge.
fn probe_vertices(x: &Element) -> Vec<VertexRef> {
    let g = x.ctx().base();
    let mut out: Vec<VertexRef> = Vec::new();
    for (_, m) in x.terms() {
        out.extend(m.cell.sample_members(3));
        for e in m.alpha.0.iter().chain(m.beta.0.iter()) {
            out.push(VertexRef::named(g.source(*e)));
            out.extend(g.range(*e).sample_members(2));
        }
    }
    out.sort();
    out.dedup();
    out
}

fn slots_for(g: &Ultragraph, v: VertexRef, idx: u64) -> Slot {
    match v {
        VertexRef::Named(n) => slot_at(g, n.id, idx),
        VertexRef::Member(..) => Slot::Free(idx),
    }
}

/// Returns [`Certify::True`] if any probe vector (systematic block probes
/// plus seeded random ones) maps to a nonzero state. A `True` answer is
/// definitive; `Inconclusive` is not a zero certificate — normal forms are.
pub fn nonzero_certify(x: &Element) -> Result<Certify, AlgebraError> {
    if !x.ctx().is_plain() {
        return Err(AlgebraError::NotPlain);
    }
    if x.is_zero() {
        return Ok(Certify::Inconclusive);
    }
    let g = x.ctx().base();
    let vertices = probe_vertices(x);
    for v in &vertices {
        for idx in 0..3u64 {
            let probe = RepState::basis(x.ring(), *v, slots_for(g, *v, idx));
            if !rep_apply(x, &probe)?.is_zero() {
                return Ok(Certify::True);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CERTIFY_SEED);
    for _ in 0..RANDOM_PROBES {
        if vertices.is_empty() {
            break;
        }
        let v = vertices[rng.gen_range(0..vertices.len())];
        let idx = rng.gen_range(0..8u64);
        let probe = RepState::basis(x.ring(), v, slots_for(g, v, idx));
        if !rep_apply(x, &probe)?.is_zero() {
            return Ok(Certify::True);
        }
    }
    Ok(Certify::Inconclusive)
}

/// A deterministic supply of probe states over the relevant blocks of an
/// ultragraph, for oracle-agreement tests.
pub fn probe_states(
    ctx: &Arc<QuotientUltragraph>,
    ring: RingConfig,
    count: usize,
    seed: u64,
) -> Vec<RepState> {
    let g = ctx.base();
    let mut vertices: Vec<VertexRef> = (0..g.vertex_count()).map(VertexRef::named).collect();
    for f in 0..g.family_count() {
        vertices.extend((1..=3u32).map(|i| VertexRef::member(f, i)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let mut s = RepState::zero(ring);
        for _ in 0..rng.gen_range(1..=3usize) {
            let v = vertices[rng.gen_range(0..vertices.len())];
            let slot = slots_for(g, v, rng.gen_range(0..6u64));
            s.add_to((v, slot), ring.from_i64(rng.gen_range(1..=5i64)));
        }
        out.push(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cantor_roundtrip() {
        for z in 0..200u64 {
            let (i, j) = cantor_inv(z);
            assert_eq!(cantor(i, j), z);
        }
        assert_eq!(cantor(0, 0), 0);
    }

    #[test]
    fn slot_roundtrip_with_bundles() {
        let u4 = fixtures::u4();
        let u = u4.vertex_id("u").unwrap();
        for idx in 0..30u64 {
            let slot = slot_at(&u4, u, idx);
            assert_eq!(slot_index(&u4, u, slot), Some(idx));
        }
        // sink slots are free
        let x = u4.vertex_id("x").unwrap();
        assert_eq!(slot_at(&u4, x, 5), Slot::Free(5));
        assert_eq!(slot_index(&u4, x, Slot::Free(5)), Some(5));
    }

    #[test]
    fn slot_roundtrip_singles_only() {
        let u2 = fixtures::u2();
        let v1 = u2.vertex_id("v1").unwrap();
        for idx in 0..12u64 {
            let slot = slot_at(&u2, v1, idx);
            assert_eq!(slot_index(&u2, v1, slot), Some(idx));
        }
    }

    #[test]
    fn projection_acts_blockwise() {
        let u2 = fixtures::u2();
        let ctx = QuotientUltragraph::trivial(u2.clone());
        let ring = RingConfig::Int;
        let v1 = VertexRef::named(u2.vertex_id("v1").unwrap());
        let v2 = VertexRef::named(u2.vertex_id("v2").unwrap());
        let p1 = Element::vertex(ctx.clone(), ring, v1).unwrap();
        let probe = RepState::basis(ring, v1, slot_at(&u2, u2.vertex_id("v1").unwrap(), 0));
        assert_eq!(rep_apply(&p1, &probe).unwrap(), probe);
        let p2 = Element::vertex(ctx, ring, v2).unwrap();
        assert!(rep_apply(&p2, &probe).unwrap().is_zero());
    }

    #[test]
    fn ghost_edge_inverts_edge_on_infinite_range() {
        // (s_{e*} s_e − p_{r(e)}) kills every probe over U1.
        let u1 = fixtures::u1();
        let ctx = QuotientUltragraph::trivial(u1.clone());
        let ring = RingConfig::Int;
        let e = EdgeInst::single(u1.edge_id("e").unwrap());
        let se = Element::edge(ctx.clone(), ring, e).unwrap();
        let ss = Element::ghost(ctx.clone(), ring, e).unwrap();
        let pr = Element::proj(ctx.clone(), ring, &VSet::family_all(0)).unwrap();
        let lhs = ss.mul(&se).unwrap().sub(&pr).unwrap();
        // already zero in normal form, and zero on probes
        assert!(lhs.is_zero());
        let prod = se.mul(&ss).unwrap();
        for state in probe_states(&ctx, ring, 20, 7) {
            let once = rep_apply(&prod, &state).unwrap();
            let twice = rep_apply(&se, &rep_apply(&ss, &state).unwrap()).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn certify_finds_nonzero_projections() {
        let u1 = fixtures::u1();
        let ctx = QuotientUltragraph::trivial(u1.clone());
        let p = Element::vertex(
            ctx.clone(),
            RingConfig::Int,
            VertexRef::named(u1.vertex_id("v0").unwrap()),
        )
        .unwrap();
        assert_eq!(nonzero_certify(&p).unwrap(), Certify::True);
        let zero = Element::zero(ctx, RingConfig::Int);
        assert_eq!(nonzero_certify(&zero).unwrap(), Certify::Inconclusive);
    }

    #[test]
    fn certify_sees_torsion() {
        // 2·p_{v0} over Z/4 is nonzero.
        let u1 = fixtures::u1();
        let ctx = QuotientUltragraph::trivial(u1.clone());
        let ring = RingConfig::Mod(4);
        let p = Element::vertex(
            ctx,
            ring,
            VertexRef::named(u1.vertex_id("v0").unwrap()),
        )
        .unwrap()
        .scalar_mul(&ring.from_i64(2));
        assert!(!p.is_zero());
        assert_eq!(nonzero_certify(&p).unwrap(), Certify::True);
    }
}

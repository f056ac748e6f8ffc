//! Symbolic Leavitt path algebra arithmetic with canonical normal forms.
//!
//! Elements are exact-coefficient linear combinations of spanning monomials
//! `s_α p_A s_{β*}` (in a quotient context, `t_α q_{[A]} t_{β*}`). The
//! normal form keeps, for every path pair `(α, β)`, the cell coefficient
//! function in level-set form: pairwise disjoint canonical cells, one per
//! distinct coefficient. On top of that the reduction at regular vertices
//! rewrites the pivot pattern `s_e p_{r(e)} s_{e*}` (pivot = canonically
//! last edge at the vertex, full range cell) into `p_v − Σ_{f≠e} s_f
//! s_{f*}`, to a fixpoint. Each step strictly shrinks the total path length
//! of reducible monomials, so normalization terminates; zero-testing of
//! differences is the equality decision, cross-checked by the module
//! representation in [`crate::rep`].
//!
//! Everything here is generic over the context: a plain ultragraph is the
//! quotient by the trivial pair.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ideals::{breaking_vertices, AdmissiblePair, HSCollection};
use crate::model::{EdgeInst, Multiplicity, Path, Ultragraph};
use crate::quotient::QuotientUltragraph;
use crate::ring::{RingConfig, Scalar};
use crate::setalg;
use crate::vset::{VSet, VertexId, VertexRef};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands live in different contexts")]
    MixedContexts,
    #[error("operands live over different rings")]
    MixedRings,
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("monomial cell is empty (r(α) ∩ A ∩ r(β) = [∅])")]
    EmptyCell,
    #[error("operation requires a plain (trivial-quotient) context")]
    NotPlain,
    #[error("vertex `{0}` is not a breaking vertex of H")]
    NotBreaking(String),
    #[error(transparent)]
    Matrix(#[from] crate::model::MatrixError),
    #[error(transparent)]
    Ideal(#[from] crate::ideals::IdealError),
}

/// A spanning monomial `s_α p_A s_{β*}` with canonical cell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial {
    pub alpha: Path,
    pub cell: VSet,
    pub beta: Path,
}

impl Monomial {
    /// Validates paths against the context, canonicalizes the cell and
    /// rejects monomials whose cell class is empty.
    pub fn new(
        ctx: &QuotientUltragraph,
        alpha: Path,
        cell: VSet,
        beta: Path,
    ) -> Result<Monomial, AlgebraError> {
        for p in [&alpha, &beta] {
            if !ctx.path_ok(p) {
                return Err(AlgebraError::InvalidPath(ctx.base().display_path(p)));
            }
        }
        let cell = canonical_cell(ctx, &alpha, cell, &beta);
        if cell.is_empty() {
            return Err(AlgebraError::EmptyCell);
        }
        Ok(Monomial { alpha, cell, beta })
    }

    pub fn degree(&self) -> i64 {
        self.alpha.len() as i64 - self.beta.len() as i64
    }
}

/// Reduce `A ∩ r̄(α) ∩ r̄(β)` to its canonical class representative. Empty
/// paths contribute no range constraint.
fn canonical_cell(ctx: &QuotientUltragraph, alpha: &Path, cell: VSet, beta: &Path) -> VSet {
    let mut c = cell;
    if let Some(last) = alpha.last() {
        c = c.intersect(&ctx.range_bar(last.decl));
    }
    if let Some(last) = beta.last() {
        c = c.intersect(&ctx.range_bar(last.decl));
    }
    ctx.class_reduce(&c).into_inner()
}

type BlockKey = (Path, Path);

/// An element of the (quotient) Leavitt path algebra in canonical form.
#[derive(Clone)]
pub struct Element {
    ctx: Arc<QuotientUltragraph>,
    ring: RingConfig,
    blocks: BTreeMap<BlockKey, BTreeMap<Scalar, VSet>>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.ring == other.ring && self.blocks == other.blocks
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl Element {
    pub fn zero(ctx: Arc<QuotientUltragraph>, ring: RingConfig) -> Element {
        Element {
            ctx,
            ring,
            blocks: BTreeMap::new(),
        }
    }

    /// The projection `p_A` (in quotients, `q_{[A]}`).
    pub fn proj(
        ctx: Arc<QuotientUltragraph>,
        ring: RingConfig,
        a: &VSet,
    ) -> Result<Element, AlgebraError> {
        Ok(Element::from_raw(
            ctx,
            ring,
            vec![(ring.one(), Path::empty(), a.clone(), Path::empty())],
        ))
    }

    /// `p_v` for one (possibly primed) vertex.
    pub fn vertex(
        ctx: Arc<QuotientUltragraph>,
        ring: RingConfig,
        v: VertexRef,
    ) -> Result<Element, AlgebraError> {
        Element::proj(ctx, ring, &VSet::singleton(v))
    }

    /// The generator `s_e`.
    pub fn edge(
        ctx: Arc<QuotientUltragraph>,
        ring: RingConfig,
        e: EdgeInst,
    ) -> Result<Element, AlgebraError> {
        let cell = ctx.range_bar(e.decl);
        let m = Monomial::new(&ctx, Path::one(e), cell, Path::empty())?;
        Element::from_monomials(ctx, ring, vec![(ring.one(), m)])
    }

    /// The generator `s_{e*}`.
    pub fn ghost(
        ctx: Arc<QuotientUltragraph>,
        ring: RingConfig,
        e: EdgeInst,
    ) -> Result<Element, AlgebraError> {
        let cell = ctx.range_bar(e.decl);
        let m = Monomial::new(&ctx, Path::empty(), cell, Path::one(e))?;
        Element::from_monomials(ctx, ring, vec![(ring.one(), m)])
    }

    /// `s_α p_A s_{β*}` as an element.
    pub fn monomial(
        ctx: Arc<QuotientUltragraph>,
        ring: RingConfig,
        m: Monomial,
    ) -> Result<Element, AlgebraError> {
        Element::from_monomials(ctx, ring, vec![(ring.one(), m)])
    }

    pub fn from_monomials(
        ctx: Arc<QuotientUltragraph>,
        ring: RingConfig,
        terms: Vec<(Scalar, Monomial)>,
    ) -> Result<Element, AlgebraError> {
        let raw = terms
            .into_iter()
            .map(|(c, m)| (c, m.alpha, m.cell, m.beta))
            .collect();
        Ok(Element::from_raw(ctx, ring, raw))
    }

    /// Core constructor: canonicalize cells, group into level sets and run
    /// the pivot reduction to a fixpoint.
    fn from_raw(
        ctx: Arc<QuotientUltragraph>,
        ring: RingConfig,
        terms: Vec<(Scalar, Path, VSet, Path)>,
    ) -> Element {
        let mut work = terms;
        loop {
            let blocks = coalesce(&ctx, &ring, work);
            match reduce_once(&ctx, &ring, &blocks) {
                None => {
                    return Element { ctx, ring, blocks };
                }
                Some(rewritten) => work = rewritten,
            }
        }
    }

    pub fn ctx(&self) -> &Arc<QuotientUltragraph> {
        &self.ctx
    }

    pub fn ring(&self) -> RingConfig {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Expansion into (coefficient, monomial) terms of the canonical form.
    pub fn terms(&self) -> Vec<(Scalar, Monomial)> {
        let mut out = Vec::new();
        for ((alpha, beta), pieces) in &self.blocks {
            for (c, cell) in pieces {
                out.push((
                    c.clone(),
                    Monomial {
                        alpha: alpha.clone(),
                        cell: cell.clone(),
                        beta: beta.clone(),
                    },
                ));
            }
        }
        out
    }

    pub fn term_count(&self) -> usize {
        self.blocks.values().map(|p| p.len()).sum()
    }

    fn compatible(&self, other: &Element) -> Result<(), AlgebraError> {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) {
            return Err(AlgebraError::MixedContexts);
        }
        if self.ring != other.ring {
            return Err(AlgebraError::MixedRings);
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.compatible(other)?;
        let mut raw = self.raw_terms();
        raw.extend(other.raw_terms());
        Ok(Element::from_raw(self.ctx.clone(), self.ring, raw))
    }

    pub fn neg(&self) -> Element {
        let raw = self
            .raw_terms()
            .into_iter()
            .map(|(c, a, s, b)| (self.ring.neg(&c), a, s, b))
            .collect();
        Element::from_raw(self.ctx.clone(), self.ring, raw)
    }

    pub fn sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: &Scalar) -> Element {
        let raw = self
            .raw_terms()
            .into_iter()
            .map(|(k, a, s, b)| (self.ring.mul(&k, c), a, s, b))
            .collect();
        Element::from_raw(self.ctx.clone(), self.ring, raw)
    }

    pub fn mul(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.compatible(other)?;
        let mut raw = Vec::new();
        for (cx, mx) in self.terms() {
            for (cy, my) in other.terms() {
                if let Some((alpha, cell, beta)) = mono_mul_term(&self.ctx, &mx, &my) {
                    raw.push((self.ring.mul(&cx, &cy), alpha, cell, beta));
                }
            }
        }
        Ok(Element::from_raw(self.ctx.clone(), self.ring, raw))
    }

    /// Equality in the algebra: the difference normalizes to zero.
    pub fn equiv(&self, other: &Element) -> Result<bool, AlgebraError> {
        Ok(self.sub(other)?.is_zero())
    }

    /// Re-run canonicalization. Idempotent; exposed as the normal-form
    /// entry point.
    pub fn normalize(&self) -> Element {
        Element::from_raw(self.ctx.clone(), self.ring, self.raw_terms())
    }

    fn raw_terms(&self) -> Vec<(Scalar, Path, VSet, Path)> {
        self.blocks
            .iter()
            .flat_map(|((a, b), pieces)| {
                pieces
                    .iter()
                    .map(move |(c, s)| (c.clone(), a.clone(), s.clone(), b.clone()))
            })
            .collect()
    }

    /// Splits by `|α| − |β|`. Summands of the canonical form are canonical.
    pub fn degree_decompose(&self) -> BTreeMap<i64, Element> {
        let mut out: BTreeMap<i64, Vec<(Scalar, Path, VSet, Path)>> = BTreeMap::new();
        for (c, a, s, b) in self.raw_terms() {
            let d = a.len() as i64 - b.len() as i64;
            out.entry(d).or_default().push((c, a, s, b));
        }
        out.into_iter()
            .map(|(d, raw)| (d, Element::from_raw(self.ctx.clone(), self.ring, raw)))
            .collect()
    }

    /// Degree of a homogeneous element, if it is homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let degs: BTreeSet<i64> = self
            .blocks
            .keys()
            .map(|(a, b)| a.len() as i64 - b.len() as i64)
            .collect();
        if degs.len() == 1 {
            degs.into_iter().next()
        } else {
            None
        }
    }
}

/// Single-monomial product per the four-case multiplication lemma. Returns
/// the raw result term, or `None` for zero. Cells of inputs are assumed
/// canonical (in particular contained in their path ranges).
fn mono_mul_term(
    ctx: &QuotientUltragraph,
    x: &Monomial,
    y: &Monomial,
) -> Option<(Path, VSet, Path)> {
    if x.beta == y.alpha {
        // (s_α p_A s_{β*})(s_β p_B s_{ν*}) = s_α p_{A∩r(β)∩B} s_{ν*}
        let cell = x.cell.intersect(&y.cell);
        return Some((x.alpha.clone(), cell, y.beta.clone()));
    }
    if let Some(mu_tail) = y.alpha.strip_prefix(&x.beta) {
        // μ = β·μ' with s(μ') ∈ A ∩ r(α)
        let head = mu_tail.first().expect("nonempty suffix");
        let src = VertexRef::named(ctx.base().source(head));
        if x.cell.contains(src) {
            return Some((x.alpha.concat(&mu_tail), y.cell.clone(), y.beta.clone()));
        }
        return None;
    }
    if let Some(beta_tail) = x.beta.strip_prefix(&y.alpha) {
        // β = μ·β' with s(β') ∈ B ∩ r(ν)
        let head = beta_tail.first().expect("nonempty suffix");
        let src = VertexRef::named(ctx.base().source(head));
        if y.cell.contains(src) {
            return Some((x.alpha.clone(), x.cell.clone(), y.beta.concat(&beta_tail)));
        }
        return None;
    }
    None
}

/// Product of two monomials as a normalized element.
pub fn mono_mul(
    ctx: &Arc<QuotientUltragraph>,
    ring: RingConfig,
    x: &Monomial,
    y: &Monomial,
) -> Element {
    match mono_mul_term(ctx, x, y) {
        Some((a, s, b)) => Element::from_raw(ctx.clone(), ring, vec![(ring.one(), a, s, b)]),
        None => Element::zero(ctx.clone(), ring),
    }
}

/// Canonicalize raw terms into level-set blocks: per path pair, pairwise
/// disjoint cells with one cell per distinct coefficient.
fn coalesce(
    ctx: &QuotientUltragraph,
    ring: &RingConfig,
    terms: Vec<(Scalar, Path, VSet, Path)>,
) -> BTreeMap<BlockKey, BTreeMap<Scalar, VSet>> {
    let mut per_block: BTreeMap<BlockKey, Vec<(Scalar, VSet)>> = BTreeMap::new();
    for (c, alpha, cell, beta) in terms {
        if ring.is_zero(&c) {
            continue;
        }
        let cell = canonical_cell(ctx, &alpha, cell, &beta);
        if cell.is_empty() {
            continue;
        }
        per_block.entry((alpha, beta)).or_default().push((c, cell));
    }
    let mut out = BTreeMap::new();
    for (key, pieces) in per_block {
        // refine into disjoint pieces, summing coefficients on overlaps
        let mut disjoint: Vec<(Scalar, VSet)> = Vec::new();
        for (c, p) in pieces {
            let mut rest = p;
            let mut next: Vec<(Scalar, VSet)> = Vec::new();
            for (ci, qi) in disjoint {
                let overlap = qi.intersect(&rest);
                if overlap.is_empty() {
                    next.push((ci, qi));
                    continue;
                }
                let only_q = qi.diff(&rest);
                if !only_q.is_empty() {
                    next.push((ci.clone(), only_q));
                }
                rest = rest.diff(&qi);
                next.push((ring.add(&ci, &c), overlap));
            }
            if !rest.is_empty() {
                next.push((c, rest));
            }
            disjoint = next;
        }
        // group level sets by coefficient
        let mut grouped: BTreeMap<Scalar, VSet> = BTreeMap::new();
        for (c, p) in disjoint {
            if ring.is_zero(&c) {
                continue;
            }
            grouped
                .entry(c)
                .and_modify(|s| *s = s.union(&p))
                .or_insert(p);
        }
        if !grouped.is_empty() {
            out.insert(key, grouped);
        }
    }
    out
}

/// One pass of the reduction at regular vertices. Finds a block whose paths
/// both end with the pivot edge of a regular vertex class and whose cell
/// support is the full range class, and rewrites the extracted full-range
/// part through `s_e s_{e*} = p_v − Σ_{f≠e} s_f s_{f*}`. Returns the
/// rewritten raw terms, or `None` at the fixpoint.
fn reduce_once(
    ctx: &QuotientUltragraph,
    ring: &RingConfig,
    blocks: &BTreeMap<BlockKey, BTreeMap<Scalar, VSet>>,
) -> Option<Vec<(Scalar, Path, VSet, Path)>> {
    let target = blocks.iter().find_map(|(key, pieces)| {
        reducible_pivot(ctx, key, pieces).map(|c| (key.clone(), c))
    })?;
    let ((alpha, beta), extract) = target;

    let mut raw = Vec::new();
    for ((a, b), pieces) in blocks {
        if (a, b) == (&alpha, &beta) {
            continue;
        }
        for (c, s) in pieces {
            raw.push((c.clone(), a.clone(), s.clone(), b.clone()));
        }
    }
    // residual pieces of the rewritten block
    for (c, s) in &blocks[&(alpha.clone(), beta.clone())] {
        let residual = ring.sub(c, &extract);
        raw.push((residual, alpha.clone(), s.clone(), beta.clone()));
    }
    // c · s_{α'} ( p_v − Σ_{f≠e} s_f s_{f*} ) s_{β'*}
    let (alpha_head, e) = alpha.split_last().expect("reducible paths are nonempty");
    let (beta_head, _) = beta.split_last().expect("reducible paths are nonempty");
    let v = ctx.base().source(e);
    raw.push((
        extract.clone(),
        alpha_head.clone(),
        VSet::singleton(VertexRef::named(v)),
        beta_head.clone(),
    ));
    for f in ctx.out_kept(v) {
        if *f == e.decl {
            continue;
        }
        let inst = EdgeInst::single(*f);
        raw.push((
            ring.neg(&extract),
            alpha_head.push(inst),
            ctx.range_bar(*f),
            beta_head.push(inst),
        ));
    }
    Some(raw)
}

/// If the block is pivot-reducible, the coefficient to extract: the one on
/// the piece holding the canonically least member of the support.
fn reducible_pivot(
    ctx: &QuotientUltragraph,
    (alpha, beta): &BlockKey,
    pieces: &BTreeMap<Scalar, VSet>,
) -> Option<Scalar> {
    let (ea, eb) = (alpha.last()?, beta.last()?);
    if ea != eb || ea.inst.is_some() {
        return None;
    }
    if ctx.pivot(ctx.base().source(ea)) != Some(ea.decl) {
        return None;
    }
    let mut support = VSet::empty();
    for s in pieces.values() {
        support = support.union(s);
    }
    let full = ctx.range_class(ea.decl);
    if &support != full.repr() {
        return None;
    }
    let least = support.nth_member(0).expect("nonempty support");
    pieces
        .iter()
        .find(|(_, s)| s.contains(least))
        .map(|(c, _)| c.clone())
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let g = self.ctx.base();
        let mut first = true;
        for ((alpha, beta), pieces) in &self.blocks {
            for (c, cell) in pieces {
                let (neg, mag) = c.display_signed();
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                    first = false;
                } else if neg {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                let mut factors: Vec<String> = Vec::new();
                if !mag.is_display_one() {
                    factors.push(mag.to_string());
                }
                for e in &alpha.0 {
                    factors.push(format!("s[{}]", g.display_inst(*e)));
                }
                factors.push(format!("p[{}]", g.display_set(cell)));
                for e in beta.0.iter().rev() {
                    factors.push(format!("s[{}*]", g.display_inst(*e)));
                }
                write!(f, "{}", factors.join(" "))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Gap idempotents, ideal membership, recovery, and presentation checks.
// ---------------------------------------------------------------------------

/// The gap idempotent `p_w^H = p_w − Σ_{s(e)=w, r(e)∉H} s_e s_{e*}` of a
/// breaking vertex.
pub fn gap_idempotent(
    ctx: &Arc<QuotientUltragraph>,
    ring: RingConfig,
    h: &HSCollection,
    w: VertexId,
) -> Result<Element, AlgebraError> {
    if !ctx.is_plain() {
        return Err(AlgebraError::NotPlain);
    }
    let g = ctx.base();
    if !breaking_vertices(g, h).contains(&w) {
        return Err(AlgebraError::NotBreaking(g.vertex_name(w).to_string()));
    }
    let table = ctx.base_atoms();
    let mut el = Element::vertex(ctx.clone(), ring, VertexRef::named(w))?;
    for e in g.out_edges(w) {
        let decl = g.edge(*e);
        if decl.multiplicity != Multiplicity::One {
            continue; // bundles at a breaking vertex range inside H
        }
        if h.contains_unchecked(table, &decl.range) {
            continue;
        }
        let inst = EdgeInst::single(*e);
        let se = Element::edge(ctx.clone(), ring, inst)?;
        let se_star = Element::ghost(ctx.clone(), ring, inst)?;
        el = el.sub(&se.mul(&se_star)?)?;
    }
    Ok(el)
}

/// The image of a plain element in the quotient algebra by `(H,S)`:
/// monomials through killed edges vanish, cells pass to their overline
/// classes, and the quotient normal form does the rest.
pub fn quotient_image(
    x: &Element,
    pair: &AdmissiblePair,
    qctx: &Arc<QuotientUltragraph>,
) -> Result<Element, AlgebraError> {
    if !x.ctx().is_plain() {
        return Err(AlgebraError::NotPlain);
    }
    debug_assert!(qctx.pair() == pair && Arc::ptr_eq(qctx.base(), x.ctx().base()));
    let mut raw = Vec::new();
    for (c, m) in x.terms() {
        if !qctx.path_kept(&m.alpha) || !qctx.path_kept(&m.beta) {
            continue;
        }
        raw.push((
            c,
            m.alpha,
            qctx.overline_bar(&m.cell),
            m.beta,
        ));
    }
    Ok(Element::from_raw(qctx.clone(), x.ring(), raw))
}

/// Membership in the graded basic ideal `I_{(H,S)}`: true iff the image in
/// the quotient algebra normalizes to zero.
pub fn ideal_membership(x: &Element, pair: &AdmissiblePair) -> Result<bool, AlgebraError> {
    let qctx = QuotientUltragraph::new(x.ctx().base().clone(), pair.clone());
    Ok(quotient_image(x, pair, &qctx)?.is_zero())
}

/// Result of probing an ideal for the admissible pair that generates it.
#[derive(Clone, Debug)]
pub struct Recovered {
    pub h: HSCollection,
    pub s: BTreeSet<VertexId>,
    pub matches: bool,
}

/// Recovers `(H, S)` from membership probes against `I_{(H,S)}`: pool sets
/// with `p_A` in the ideal regenerate `H`, and breaking vertices with gap
/// idempotent in the ideal recover `S`.
pub fn recover_hs(
    ctx: &Arc<QuotientUltragraph>,
    ring: RingConfig,
    pair: &AdmissiblePair,
) -> Result<Recovered, AlgebraError> {
    if !ctx.is_plain() {
        return Err(AlgebraError::NotPlain);
    }
    let g = ctx.base();
    let mut sets = Vec::new();
    let mut fills = Vec::new();
    for (_, a) in setalg::generator_pool(g) {
        let pa = Element::proj(ctx.clone(), ring, &a)?;
        if ideal_membership(&pa, pair)? {
            sets.push(a);
        }
    }
    for f in 0..g.family_count() {
        // a family fill is recovered from singleton probes
        let all_in = (1..=3u32).try_fold(true, |acc, k| {
            let pa = Element::proj(ctx.clone(), ring, &VSet::family_finite(f, [k]))?;
            Ok::<bool, AlgebraError>(acc && ideal_membership(&pa, pair)?)
        })?;
        if all_in {
            fills.push(f);
        }
    }
    // probe the pair's own generating family as well, so non-pool
    // collections round-trip
    let (gen_sets, gen_fills) = pair.h().generating_family(ctx.base_atoms());
    for a in gen_sets {
        let pa = Element::proj(ctx.clone(), ring, &a)?;
        if ideal_membership(&pa, pair)? {
            sets.push(a);
        }
    }
    for f in gen_fills {
        if !fills.contains(&f) {
            fills.push(f);
        }
    }
    let h = crate::ideals::hs_closure_with_fills(g, &sets, &fills)?;
    let mut s = BTreeSet::new();
    for w in breaking_vertices(g, &h) {
        let gap = gap_idempotent(ctx, ring, &h, w)?;
        if ideal_membership(&gap, pair)? {
            s.insert(w);
        }
    }
    let matches = &h == pair.h() && &s == pair.s();
    Ok(Recovered { h, s, matches })
}

/// One named check with its outcome.
#[derive(Clone, Debug)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    fn push(&mut self, name: impl Into<String>, pass: bool) {
        self.lines.push(CheckLine {
            name: name.into(),
            pass,
        });
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{} {}", if l.pass { "ok " } else { "FAIL" }, l.name)?;
        }
        Ok(())
    }
}

/// Verifies the Cuntz–Krieger presentation of `EL_A(R)` for a finite 0/1
/// matrix: maps `x_i ↦ s_i`, `y_i ↦ s_{i*}` in the matrix ultragraph and
/// checks the four relation schemas plus the reverse generating identity
/// `P_B = Σ_{v_i ∈ B} x_i y_i`.
pub fn ck_check(a: &[Vec<u8>], ring: RingConfig) -> Result<CheckReport, AlgebraError> {
    let n = a.len();
    assert!(n <= 6, "presentation check is desk-scale");
    let g = crate::model::from_matrix(a)?;
    let ctx = QuotientUltragraph::trivial(g.clone());
    let mut report = CheckReport { lines: Vec::new() };

    let x: Vec<Element> = (0..n)
        .map(|i| Element::edge(ctx.clone(), ring, EdgeInst::single(i)))
        .collect::<Result<_, _>>()?;
    let y: Vec<Element> = (0..n)
        .map(|i| Element::ghost(ctx.clone(), ring, EdgeInst::single(i)))
        .collect::<Result<_, _>>()?;

    for i in 0..n {
        let xyx = x[i].mul(&y[i])?.mul(&x[i])?;
        report.push(format!("x{0} y{0} x{0} = x{0}", i + 1), xyx.equiv(&x[i])?);
        let yxy = y[i].mul(&x[i])?.mul(&y[i])?;
        report.push(format!("y{0} x{0} y{0} = y{0}", i + 1), yxy.equiv(&y[i])?);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                report.push(
                    format!("y{} x{} = 0", i + 1, j + 1),
                    y[i].mul(&x[j])?.is_zero(),
                );
            }
        }
    }
    for i in 0..n {
        let mut rhs = Element::zero(ctx.clone(), ring);
        for j in 0..n {
            if a[i][j] == 1 {
                rhs = rhs.add(&x[j].mul(&y[j])?)?;
            }
        }
        report.push(
            format!("y{0} x{0} = Σ_j A({0},j) x_j y_j", i + 1),
            y[i].mul(&x[i])?.equiv(&rhs)?,
        );
    }
    {
        let mut total = Element::zero(ctx.clone(), ring);
        for j in 0..n {
            total = total.add(&x[j].mul(&y[j])?)?;
        }
        let unit = Element::proj(ctx.clone(), ring, &g.all_vertices())?;
        report.push("Σ_j x_j y_j = 1", total.equiv(&unit)?);
    }
    // reverse direction: every projection is a polynomial in the family
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let b = VSet::from_named(members.iter().copied());
        let mut sum = Element::zero(ctx.clone(), ring);
        for i in &members {
            sum = sum.add(&x[*i].mul(&y[*i])?)?;
        }
        let pb = Element::proj(ctx.clone(), ring, &b)?;
        report.push(
            format!("P_B = Σ_{{v_i∈B}} x_i y_i for B mask {mask:b}"),
            pb.equiv(&sum)?,
        );
    }
    Ok(report)
}

/// Verifies that `P_A := q_{Ã}, S_e := t_e` forms a Leavitt family for the
/// original ultragraph inside the algebra of its one-edge-per-vertex reform,
/// and that `q_{v_e} = S_e S_{e*}` recovers every reform generator.
pub fn tilde_iso_check(g: &Arc<Ultragraph>, ring: RingConfig) -> Result<CheckReport, AlgebraError> {
    let t = crate::model::tilde(g)?;
    let ctx = QuotientUltragraph::trivial(t.clone());
    let mut report = CheckReport { lines: Vec::new() };

    let tilde_set = |a: &VSet| -> VSet {
        let mut out = VSet::empty();
        for n in a.named_part() {
            for e in g.out_edges(n.id) {
                let name = format!("{}_{}", g.vertex_name(n.id), g.edge(*e).id);
                out.insert(VertexRef::named(t.vertex_id(&name).expect("tilde vertex")));
            }
        }
        out
    };
    let p = |a: &VSet| Element::proj(ctx.clone(), ring, &tilde_set(a));
    // edge ids are shared between g and its reform
    let s_of = |e: usize| Element::edge(ctx.clone(), ring, EdgeInst::single(e));
    let s_star_of = |e: usize| Element::ghost(ctx.clone(), ring, EdgeInst::single(e));

    // (LP1) on singletons, ranges and their combinations
    let mut cells: Vec<VSet> = (0..g.vertex_count())
        .map(|v| VSet::singleton(VertexRef::named(v)))
        .collect();
    cells.extend(g.edges().map(|(_, e)| e.range.clone()));
    for a in &cells {
        for b in &cells {
            let lhs = p(a)?.mul(&p(b)?)?;
            report.push(
                format!(
                    "P_{} P_{} = P_∩",
                    g.display_set(a),
                    g.display_set(b)
                ),
                lhs.equiv(&p(&a.intersect(b))?)?,
            );
            let rhs = p(a)?.add(&p(b)?)?.sub(&p(&a.intersect(b))?)?;
            report.push(
                format!(
                    "P_∪ = P_{0} + P_{1} - P_∩ for {0}, {1}",
                    g.display_set(a),
                    g.display_set(b)
                ),
                p(&a.union(b))?.equiv(&rhs)?,
            );
        }
    }
    // (LP2), (LP3)
    for (ei, e) in g.edges() {
        let se = s_of(ei)?;
        let ses = s_star_of(ei)?;
        let src = VSet::singleton(VertexRef::named(e.source));
        report.push(
            format!("P_s S_{0} = S_{0} = S_{0} P_r for edge {0}", e.id),
            p(&src)?.mul(&se)?.equiv(&se)? && se.mul(&p(&e.range)?)?.equiv(&se)?,
        );
        report.push(
            format!("P_r S_{0}* = S_{0}* = S_{0}* P_s for edge {0}", e.id),
            p(&e.range)?.mul(&ses)?.equiv(&ses)? && ses.mul(&p(&src)?)?.equiv(&ses)?,
        );
        for (fi, f) in g.edges() {
            let prod = s_star_of(ei)?.mul(&s_of(fi)?)?;
            let expected = if ei == fi {
                p(&e.range)?
            } else {
                Element::zero(ctx.clone(), ring)
            };
            report.push(
                format!("S_{}* S_{} = δ P_r", e.id, f.id),
                prod.sub(&expected)?.is_zero(),
            );
        }
    }
    // (LP4) at every vertex (all regular by the precondition)
    for v in 0..g.vertex_count() {
        let mut sum = Element::zero(ctx.clone(), ring);
        for e in g.out_edges(v) {
            sum = sum.add(&s_of(*e)?.mul(&s_star_of(*e)?)?)?;
        }
        report.push(
            format!("P_v = Σ S_e S_e* at {}", g.vertex_name(v)),
            p(&VSet::singleton(VertexRef::named(v)))?.equiv(&sum)?,
        );
    }
    // recovery of the reform generators
    for v in 0..g.vertex_count() {
        for e in g.out_edges(v) {
            let name = format!("{}_{}", g.vertex_name(v), g.edge(*e).id);
            let tv = t.vertex_id(&name).expect("tilde vertex");
            let qv = Element::vertex(ctx.clone(), ring, VertexRef::named(tv))?;
            let prod = s_of(*e)?.mul(&s_star_of(*e)?)?;
            report.push(format!("q_{name} = S S*"), qv.equiv(&prod)?);
        }
    }
    Ok(report)
}

//! First-return path counting, Condition (K) for ultragraphs, and
//! Condition (L) for quotient ultragraphs.
//!
//! A first-return path based at `v` is a loop `e_1⋯e_n` with `s(e_1) = v`,
//! interior sources different from `v`, and `v` back in `r(e_n)`. Counting
//! works at the level of edge declarations: a usable bundle contributes
//! infinitely many parallel paths at once, a cycle among usable declarations
//! contributes arbitrarily long ones, and otherwise the count is a DAG path
//! count capped at "many". Condition (K) asks every vertex to base zero or
//! at least two first-return paths.
//!
//! In a quotient, a loop violates Condition (L) exactly when every step has
//! range class equal to the singleton class of the next source and that
//! source emits exactly one edge; such loops are the cycles of the
//! deterministic-chain subgraph.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::ideals::admissible_pairs;
use crate::model::{EdgeId, Multiplicity, Ultragraph};
use crate::quotient::QuotientUltragraph;
use crate::vset::{NamedV, VSet, VertexId, VertexRef};

/// Trichotomy of first-return path counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReturnCount {
    Zero,
    One,
    Many,
}

/// The analysis graph behind [`first_return_count`]: usable edge
/// declarations with their successor relation, closing flags and
/// reachability annotations.
#[derive(Clone, Debug)]
pub struct ReturnGraph {
    pub base: VertexId,
    /// Kept declarations appearing on some base-to-base route.
    pub usable: BTreeSet<EdgeId>,
    /// Successors within the usable set (`d → d'` when `s(d') ∈ r(d)` and
    /// `s(d') ≠ base`).
    pub succ: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Declarations whose range contains the base class.
    pub closes: BTreeSet<EdgeId>,
    /// Usable declarations sourced at the base.
    pub starts: Vec<EdgeId>,
}

/// Builds the return graph at a vertex class `[v]`.
pub fn return_graph(q: &QuotientUltragraph, v: VertexId) -> ReturnGraph {
    let g = q.base();
    let base_class = VSet::singleton(VertexRef::named(v));
    // adjacency over all kept declarations
    let mut succ_all: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    let mut closes = BTreeSet::new();
    let mut starts_all = Vec::new();
    for &d in q.kept_edges() {
        let r = &g.edge(d).range;
        let mut nexts = Vec::new();
        for &d2 in q.kept_edges() {
            let src = g.edge(d2).source;
            if src != v && r.contains(VertexRef::named(src)) {
                nexts.push(d2);
            }
        }
        succ_all.insert(d, nexts);
        if q.class_subset(&base_class, &q.range_bar(d)) {
            closes.insert(d);
        }
        if g.edge(d).source == v {
            starts_all.push(d);
        }
    }
    // forward reachability from the starts
    let mut reach: BTreeSet<EdgeId> = BTreeSet::new();
    let mut stack: Vec<EdgeId> = starts_all.clone();
    while let Some(d) = stack.pop() {
        if !reach.insert(d) {
            continue;
        }
        stack.extend(succ_all[&d].iter().copied());
    }
    // backward closure towards a closing declaration
    let mut can_close: BTreeSet<EdgeId> = closes.intersection(&reach).copied().collect();
    loop {
        let mut grew = false;
        for d in &reach {
            if can_close.contains(d) {
                continue;
            }
            if succ_all[d].iter().any(|d2| can_close.contains(d2)) {
                can_close.insert(*d);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let usable = can_close;
    let succ = usable
        .iter()
        .map(|d| {
            (
                *d,
                succ_all[d]
                    .iter()
                    .copied()
                    .filter(|d2| usable.contains(d2))
                    .collect(),
            )
        })
        .collect();
    let starts = starts_all
        .into_iter()
        .filter(|d| usable.contains(d))
        .collect();
    ReturnGraph {
        base: v,
        usable,
        succ,
        closes,
        starts,
    }
}

fn has_cycle(rg: &ReturnGraph) -> bool {
    // iterative colored DFS over the successor relation
    let mut open: BTreeSet<EdgeId> = BTreeSet::new();
    let mut done: BTreeSet<EdgeId> = BTreeSet::new();
    for &start in &rg.usable {
        if done.contains(&start) {
            continue;
        }
        let mut stack = vec![(start, false)];
        while let Some((d, leaving)) = stack.pop() {
            if leaving {
                open.remove(&d);
                done.insert(d);
                continue;
            }
            if open.contains(&d) {
                return true;
            }
            if done.contains(&d) {
                continue;
            }
            open.insert(d);
            stack.push((d, true));
            for d2 in &rg.succ[&d] {
                stack.push((*d2, false));
            }
        }
    }
    false
}

/// Number of first-return paths based at the class of `v`, as a
/// zero/one/many trichotomy. The count can be infinite (cycles through the
/// interior, or a usable bundle), so exact counting is not attempted.
pub fn first_return_count(q: &QuotientUltragraph, v: VertexId) -> ReturnCount {
    if q.pair().h().v_h().contains(VertexRef::named(v)) {
        return ReturnCount::Zero; // the class [v] is [∅]
    }
    let rg = return_graph(q, v);
    if rg.starts.is_empty() {
        return ReturnCount::Zero;
    }
    if has_cycle(&rg) {
        return ReturnCount::Many;
    }
    if rg
        .usable
        .iter()
        .any(|d| q.base().edge(*d).multiplicity == Multiplicity::InfiniteBundle)
    {
        return ReturnCount::Many;
    }
    // DAG count, capped at 2
    fn ways(
        d: EdgeId,
        rg: &ReturnGraph,
        memo: &mut BTreeMap<EdgeId, usize>,
    ) -> usize {
        if let Some(w) = memo.get(&d) {
            return *w;
        }
        let mut total = usize::from(rg.closes.contains(&d));
        for d2 in &rg.succ[&d] {
            total = (total + ways(*d2, rg, memo)).min(2);
        }
        memo.insert(d, total);
        total
    }
    let mut memo = BTreeMap::new();
    let mut total = 0usize;
    for d in &rg.starts {
        total = (total + ways(*d, &rg, &mut memo)).min(2);
    }
    match total {
        0 => ReturnCount::Zero,
        1 => ReturnCount::One,
        _ => ReturnCount::Many,
    }
}

/// Condition (K): every vertex bases zero or at least two first-return
/// paths. Family members are sinks and trivially base none.
pub fn satisfies_k(g: &Arc<Ultragraph>) -> bool {
    let q = QuotientUltragraph::trivial(g.clone());
    (0..g.vertex_count()).all(|v| first_return_count(&q, v) != ReturnCount::One)
}

/// Condition (L) for a quotient ultragraph: every loop has an exit or some
/// step with `r(α_i) ≠ s(α_{i+1})`. A violating loop is a cycle in the
/// deterministic-chain subgraph: edges `e → f` where `r(e)` equals the
/// singleton class `[s(f)]` exactly and `f` is the only edge at its source.
pub fn satisfies_l(q: &QuotientUltragraph) -> bool {
    let g = q.base();
    // chain nodes: kept single edges that are alone at their source
    let nodes: Vec<EdgeId> = q
        .kept_edges()
        .iter()
        .copied()
        .filter(|d| {
            g.edge(*d).multiplicity == Multiplicity::One && q.out_kept(g.edge(*d).source) == [*d]
        })
        .collect();
    let mut succ: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    for &e in &nodes {
        let re = q.range_class(e);
        let mut nexts = Vec::new();
        for &f in &nodes {
            let sf = q.vertex_class(NamedV::plain(g.edge(f).source));
            if re == sf {
                nexts.push(f);
            }
        }
        succ.insert(e, nexts);
    }
    // any cycle in the chain subgraph is a loop without exit and with exact
    // range/source matches
    let mut done: BTreeSet<EdgeId> = BTreeSet::new();
    for &start in &nodes {
        if done.contains(&start) {
            continue;
        }
        let mut open: BTreeSet<EdgeId> = BTreeSet::new();
        let mut stack = vec![(start, false)];
        while let Some((d, leaving)) = stack.pop() {
            if leaving {
                open.remove(&d);
                done.insert(d);
                continue;
            }
            if open.contains(&d) {
                return false;
            }
            if done.contains(&d) {
                continue;
            }
            open.insert(d);
            stack.push((d, true));
            for d2 in &succ[&d] {
                stack.push((*d2, false));
            }
        }
    }
    true
}

/// Agreement report for "Condition (K) iff every quotient satisfies
/// Condition (L)".
#[derive(Clone, Debug)]
pub struct KvsLReport {
    pub k: bool,
    /// One row per enumerated admissible pair: (pair label, satisfies (L)).
    pub rows: Vec<(String, bool)>,
    pub agree: bool,
}

/// Evaluates Condition (K) against Condition (L) of every pool-enumerated
/// quotient and reports agreement or the counterexample rows.
pub fn k_iff_quotients_l(g: &Arc<Ultragraph>) -> KvsLReport {
    let k = satisfies_k(g);
    let mut rows = Vec::new();
    let mut all_l = true;
    for pair in admissible_pairs(g) {
        let q = QuotientUltragraph::new(g.clone(), pair.clone());
        let l = satisfies_l(&q);
        all_l &= l;
        let label = format!(
            "(V_H={}, |At_H|={}, S={{{}}})",
            g.display_set(pair.h().v_h()),
            pair.h().at_h().len(),
            pair.s()
                .iter()
                .map(|v| g.vertex_name(*v).to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        rows.push((label, l));
    }
    KvsLReport {
        k,
        rows,
        agree: k == all_l,
    }
}

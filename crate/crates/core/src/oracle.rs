//! Brute-force reference implementations used by the test suites as
//! independent oracles. Nothing here is consulted by the production code
//! paths; each function recomputes a quantity by direct enumeration.

use crate::model::Path;
use crate::quotient::QuotientUltragraph;
use crate::vset::{VSet, VertexId, VertexRef};

/// Enumerates the first-return paths based at `[v]` up to the given length,
/// with bundle instances enumerated up to `bundle_bound`. A first-return
/// path is a loop `e_1⋯e_n` with `s(e_1) = v`, interior sources different
/// from `v`, and `[v] ⊆ r(e_n)`.
pub fn first_return_paths(
    q: &QuotientUltragraph,
    v: VertexId,
    max_len: usize,
    bundle_bound: u32,
) -> Vec<Path> {
    let g = q.base();
    let base_class = VSet::singleton(VertexRef::named(v));
    let kept_instances_at = |w: VertexId| -> Vec<crate::model::EdgeInst> {
        g.instances_at(w, bundle_bound)
            .into_iter()
            .filter(|e| q.is_kept(e.decl))
            .collect()
    };
    let mut found = Vec::new();
    let mut stack: Vec<Path> = kept_instances_at(v).into_iter().map(Path::one).collect();
    while let Some(p) = stack.pop() {
        let last = p.last().unwrap();
        if q.class_subset(&base_class, &q.range_bar(last.decl)) {
            found.push(p.clone());
        }
        if p.len() == max_len {
            continue;
        }
        for w in 0..g.vertex_count() {
            if w == v || !g.range(last).contains(VertexRef::named(w)) {
                continue;
            }
            for e in kept_instances_at(w) {
                stack.push(p.push(e));
            }
        }
    }
    found.sort();
    found
}

//! First-return counting against brute-force enumeration, the Condition
//! (K)/(L) equivalence across quotients, and the finite-graph approximation
//! relation checks.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use ultraleavitt::approx::{build_gf, gf_relations_check, region_partition_ok, FItem};
use ultraleavitt::conditions::{
    first_return_count, k_iff_quotients_l, satisfies_k, ReturnCount,
};
use ultraleavitt::fixtures;
use ultraleavitt::ideals::{admissible_pairs, hs_closure_with_fills, AdmissiblePair};
use ultraleavitt::model::{EdgeInst, Multiplicity, Ultragraph};
use ultraleavitt::oracle::first_return_paths;
use ultraleavitt::quotient::QuotientUltragraph;
use ultraleavitt::ring::RingConfig;
use ultraleavitt::vset::VertexRef;

fn plain(g: &Arc<Ultragraph>) -> Arc<QuotientUltragraph> {
    QuotientUltragraph::trivial(g.clone())
}

#[test]
fn first_return_count_matches_bruteforce() {
    for (name, g) in fixtures::all() {
        let q = plain(&g);
        let max_len = g.edge_count() + g.vertex_count();
        for v in 0..g.vertex_count() {
            let counted = first_return_count(&q, v);
            let brute = first_return_paths(&q, v, max_len, 3);
            let expected = match brute.len() {
                0 => ReturnCount::Zero,
                1 => ReturnCount::One,
                _ => ReturnCount::Many,
            };
            // bounded enumeration undercounts cycles only in one direction:
            // a cycle guarantees at least two within the bound
            assert_eq!(
                counted, expected,
                "first-return mismatch at {} of {name}",
                g.vertex_name(v)
            );
        }
    }
}

#[test]
fn first_return_count_on_quotients_matches_bruteforce() {
    for (name, g) in fixtures::all() {
        for pair in admissible_pairs(&g) {
            let q = QuotientUltragraph::new(g.clone(), pair);
            let max_len = g.edge_count() + g.vertex_count();
            for v in 0..g.vertex_count() {
                if q.pair().h().v_h().contains(VertexRef::named(v)) {
                    continue;
                }
                let counted = first_return_count(&q, v);
                let brute = first_return_paths(&q, v, max_len, 3);
                let expected = match brute.len() {
                    0 => ReturnCount::Zero,
                    1 => ReturnCount::One,
                    _ => ReturnCount::Many,
                };
                assert_eq!(counted, expected, "quotient mismatch on {name}");
            }
        }
    }
}

#[test]
fn condition_k_fixture_values() {
    assert!(satisfies_k(&fixtures::u1()));
    assert!(satisfies_k(&fixtures::u2()));
    assert!(!satisfies_k(&fixtures::u5()));
    assert!(satisfies_k(&fixtures::u5_with_exit()));
}

#[test]
fn k_iff_every_quotient_satisfies_l() {
    for (name, g) in fixtures::all() {
        let report = k_iff_quotients_l(&g);
        assert!(
            report.agree,
            "K vs quotient-L disagreement on {name}: {report:?}"
        );
    }
    // a mixed case: loop with an exit into a sink satisfies K=false and
    // has a quotient killing the exit, where L fails too
    let g = ultraleavitt::model::Ultragraph::build(ultraleavitt::model::UltragraphDesc {
        vertices: vec!["v".into(), "w".into()],
        families: Vec::new(),
        edges: vec![
            ultraleavitt::model::EdgeDesc {
                id: "loop".into(),
                source: "v".into(),
                multiplicity: Multiplicity::One,
                range: ultraleavitt::model::RangeDesc {
                    named: vec!["v".into()],
                    families: Default::default(),
                },
            },
            ultraleavitt::model::EdgeDesc {
                id: "out".into(),
                source: "v".into(),
                multiplicity: Multiplicity::One,
                range: ultraleavitt::model::RangeDesc {
                    named: vec!["w".into()],
                    families: Default::default(),
                },
            },
        ],
    })
    .unwrap();
    assert!(!satisfies_k(&g));
    let report = k_iff_quotients_l(&g);
    assert!(report.agree);
    assert!(report.rows.iter().any(|(_, l)| !l));
}

/// Every subset of the candidate items of size at most `k`.
fn subsets_up_to<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for item in items {
        let mut more = Vec::new();
        for s in &out {
            if s.len() < k {
                let mut t = s.clone();
                t.push(item.clone());
                more.push(t);
            }
        }
        out.extend(more);
    }
    out
}

fn f_candidates(q: &QuotientUltragraph) -> Vec<FItem> {
    let g = q.base();
    let mut out = Vec::new();
    for &d in q.kept_edges() {
        match g.edge(d).multiplicity {
            Multiplicity::One => out.push(FItem::Edge(EdgeInst::single(d))),
            Multiplicity::InfiniteBundle => {
                out.push(FItem::Edge(EdgeInst::bundle(d, 1)));
                out.push(FItem::Edge(EdgeInst::bundle(d, 2)));
            }
        }
    }
    // singular classes: named sinks or bundle carriers, primed vertices,
    // and a couple of family members
    for v in 0..g.vertex_count() {
        let dead = q.pair().h().v_h().contains(VertexRef::named(v));
        if dead {
            continue;
        }
        let sink = q.out_kept(v).is_empty();
        let infinite = q
            .out_kept(v)
            .iter()
            .any(|d| g.edge(*d).multiplicity == Multiplicity::InfiniteBundle);
        if sink || infinite {
            out.push(FItem::Class(VertexRef::named(v)));
        }
    }
    for w in &q.overline().primed {
        out.push(FItem::Class(VertexRef::Named(
            ultraleavitt::vset::NamedV::primed(*w),
        )));
    }
    for f in 0..g.family_count() {
        for i in 1..=2u32 {
            let r = VertexRef::member(f, i);
            if !q.class_is_empty(&ultraleavitt::VSet::singleton(r)) {
                out.push(FItem::Class(r));
            }
        }
    }
    out
}

#[test]
fn gf_relations_hold_for_all_small_f() {
    for (name, g) in fixtures::all() {
        let mut quotients = vec![plain(&g)];
        // one nontrivial quotient per fixture keeps this desk-scale
        if let Some(pair) = admissible_pairs(&g)
            .into_iter()
            .find(|p| !p.is_trivial() && !p.h().v_h().is_empty())
        {
            quotients.push(QuotientUltragraph::new(g.clone(), pair));
        }
        for q in quotients {
            let candidates = f_candidates(&q);
            for f in subsets_up_to(&candidates, 3) {
                let report = gf_relations_check(&q, &f, RingConfig::Int).unwrap();
                assert!(
                    report.pass(),
                    "G_F relations failed on {name} with F={f:?}:\n{report}"
                );
            }
        }
    }
}

#[test]
fn gf_region_partition_invariant() {
    for (_, g) in fixtures::all() {
        let q = plain(&g);
        let candidates = f_candidates(&q);
        for f in subsets_up_to(&candidates, 3) {
            let f1: Vec<EdgeInst> = f
                .iter()
                .filter_map(|i| match i {
                    FItem::Edge(e) => Some(*e),
                    FItem::Class(_) => None,
                })
                .collect();
            let (_, regions) = build_gf(&q, &f).unwrap();
            assert!(region_partition_ok(&q, &f1, &regions));
        }
    }
}

#[test]
fn gf_u1_example_rows() {
    // the region of U1/(H_fin,∅) with F={e} lands in Γ_F with R(ω)=[W]
    let u1 = fixtures::u1();
    let h = hs_closure_with_fills(&u1, &[], &[0]).unwrap();
    let pair = AdmissiblePair::new(&u1, h, BTreeSet::new()).unwrap();
    let q = QuotientUltragraph::new(u1.clone(), pair);
    let e = EdgeInst::single(u1.edge_id("e").unwrap());
    let (fg, regions) = build_gf(&q, &[FItem::Edge(e)]).unwrap();
    assert_eq!(regions.len(), 1);
    assert_eq!(
        regions[0].class,
        ultraleavitt::approx::RegionClass::GammaF
    );
    assert_eq!(fg.edges.len(), 1);
    let report = gf_relations_check(&q, &[FItem::Edge(e)], RingConfig::Mod(2)).unwrap();
    assert!(report.pass(), "{report}");
}

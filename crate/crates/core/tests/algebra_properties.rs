//! Property suites for the symbolic algebra: the full relation suite over
//! all fixtures and rings, agreement between the normalizer and the module
//! representation, grading, and ideal membership closure.

mod common;

use std::sync::Arc;

use rand::Rng;

use common::{rings, MonomialGen};
use ultraleavitt::algebra::{ideal_membership, Element};
use ultraleavitt::fixtures;
use ultraleavitt::ideals::admissible_pairs;
use ultraleavitt::model::{EdgeInst, Multiplicity, Ultragraph};
use ultraleavitt::quotient::QuotientUltragraph;
use ultraleavitt::rep::{nonzero_certify, probe_states, rep_apply, Certify};
use ultraleavitt::ring::RingConfig;
use ultraleavitt::setalg::atoms;
use ultraleavitt::vset::VertexRef;
use ultraleavitt::{Monomial, VSet};

fn plain(g: &Arc<Ultragraph>) -> Arc<QuotientUltragraph> {
    QuotientUltragraph::trivial(g.clone())
}

/// Edge instances with bundles sampled at two indices.
fn sample_instances(g: &Ultragraph) -> Vec<EdgeInst> {
    let mut out = Vec::new();
    for (i, e) in g.edges() {
        match e.multiplicity {
            Multiplicity::One => out.push(EdgeInst::single(i)),
            Multiplicity::InfiniteBundle => {
                out.push(EdgeInst::bundle(i, 1));
                out.push(EdgeInst::bundle(i, 2));
            }
        }
    }
    out
}

/// Atom-aligned test cells: atoms, singleton samples, ranges, the empty set
/// and the full vertex set when available.
fn test_cells(ctx: &Arc<QuotientUltragraph>) -> Vec<VSet> {
    let g = ctx.base();
    let mut cells = vec![VSet::empty()];
    for (_, atom) in atoms(g).iter() {
        cells.push(atom.clone());
    }
    for v in 0..g.vertex_count() {
        cells.push(VSet::singleton(VertexRef::named(v)));
    }
    for f in 0..g.family_count() {
        cells.push(VSet::family_finite(f, [1, 3]));
        cells.push(VSet::family_cofinite(f, [2]));
    }
    for (_, e) in g.edges() {
        cells.push(e.range.clone());
    }
    cells.push(g.all_vertices());
    cells
}

/// Every (LP1)–(LP4) instance over the test cells normalizes to zero.
fn relation_suite(ctx: &Arc<QuotientUltragraph>, ring: RingConfig) {
    let g = ctx.base();
    let p = |a: &VSet| Element::proj(ctx.clone(), ring, a).unwrap();
    let cells = test_cells(ctx);
    // (LP1)
    for a in &cells {
        for b in &cells {
            let lhs = p(a).mul(&p(b)).unwrap();
            assert!(
                lhs.equiv(&p(&a.intersect(b))).unwrap(),
                "LP1 product failed for {} ∩ {}",
                g.display_set(a),
                g.display_set(b)
            );
            let rhs = p(a).add(&p(b)).unwrap().sub(&p(&a.intersect(b))).unwrap();
            assert!(
                p(&a.union(b)).equiv(&rhs).unwrap(),
                "LP1 union failed for {} ∪ {}",
                g.display_set(a),
                g.display_set(b)
            );
        }
    }
    let insts: Vec<EdgeInst> = sample_instances(g)
        .into_iter()
        .filter(|e| ctx.is_kept(e.decl))
        .collect();
    // (LP2)
    for e in &insts {
        let se = Element::edge(ctx.clone(), ring, *e).unwrap();
        let ss = Element::ghost(ctx.clone(), ring, *e).unwrap();
        let ps = p(&VSet::singleton(VertexRef::named(g.source(*e))));
        let pr = p(&ctx.range_bar(e.decl));
        assert!(ps.mul(&se).unwrap().equiv(&se).unwrap());
        assert!(se.mul(&pr).unwrap().equiv(&se).unwrap());
        assert!(pr.mul(&ss).unwrap().equiv(&ss).unwrap());
        assert!(ss.mul(&ps).unwrap().equiv(&ss).unwrap());
    }
    // (LP3)
    for e in &insts {
        for f in &insts {
            let prod = Element::ghost(ctx.clone(), ring, *e)
                .unwrap()
                .mul(&Element::edge(ctx.clone(), ring, *f).unwrap())
                .unwrap();
            let expect = if e == f {
                p(&ctx.range_bar(e.decl))
            } else {
                Element::zero(ctx.clone(), ring)
            };
            assert!(
                prod.sub(&expect).unwrap().is_zero(),
                "LP3 failed at {} {}",
                g.display_inst(*e),
                g.display_inst(*f)
            );
        }
    }
    // (LP4) at regular classes
    for v in 0..g.vertex_count() {
        if !ctx.regular_class(v) {
            continue;
        }
        let mut sum = Element::zero(ctx.clone(), ring);
        for d in ctx.out_kept(v) {
            let e = EdgeInst::single(*d);
            sum = sum
                .add(
                    &Element::edge(ctx.clone(), ring, e)
                        .unwrap()
                        .mul(&Element::ghost(ctx.clone(), ring, e).unwrap())
                        .unwrap(),
                )
                .unwrap();
        }
        assert!(
            p(&VSet::singleton(VertexRef::named(v))).equiv(&sum).unwrap(),
            "LP4 failed at {}",
            g.vertex_name(v)
        );
    }
}

#[test]
fn relation_suite_all_fixtures_all_rings() {
    for (name, g) in fixtures::all() {
        for ring in rings() {
            relation_suite(&plain(&g), ring);
            let _ = name;
        }
    }
}

#[test]
fn relation_suite_all_quotients() {
    for (name, g) in fixtures::all() {
        for pair in admissible_pairs(&g) {
            let q = QuotientUltragraph::new(g.clone(), pair);
            relation_suite(&q, RingConfig::Int);
            let _ = name;
        }
    }
}

#[test]
fn multiplication_agrees_with_representation() {
    // normalize(x·y) and the compositional action agree on probe states
    for (name, g) in fixtures::all() {
        let ctx = plain(&g);
        let ring = RingConfig::Int;
        let gen = MonomialGen::new(&ctx);
        let mut rng = common::rng(0xA1);
        let probes = probe_states(&ctx, ring, 20, common::seed() ^ 0xB2);
        for _ in 0..100 {
            let x = gen.rand_monomial(&ctx, &mut rng);
            let y = gen.rand_monomial(&ctx, &mut rng);
            let ex = Element::monomial(ctx.clone(), ring, x.clone()).unwrap();
            let ey = Element::monomial(ctx.clone(), ring, y.clone()).unwrap();
            let prod = ex.mul(&ey).unwrap();
            for state in &probes {
                let direct = rep_apply(&prod, state).unwrap();
                let composed = rep_apply(&ex, &rep_apply(&ey, state).unwrap()).unwrap();
                assert_eq!(
                    direct, composed,
                    "oracle mismatch on {name}: ({ex}) · ({ey})"
                );
            }
        }
    }
}

#[test]
fn random_element_products_agree_with_representation() {
    for (name, g) in fixtures::all() {
        let ctx = plain(&g);
        let ring = RingConfig::Int;
        let gen = MonomialGen::new(&ctx);
        let mut rng = common::rng(0xC3);
        let probes = probe_states(&ctx, ring, 10, common::seed() ^ 0xD4);
        for _ in 0..30 {
            let x = gen.rand_element(&ctx, ring, &mut rng);
            let y = gen.rand_element(&ctx, ring, &mut rng);
            let prod = x.mul(&y).unwrap();
            for state in &probes {
                let direct = rep_apply(&prod, state).unwrap();
                let composed = rep_apply(&x, &rep_apply(&y, state).unwrap()).unwrap();
                assert_eq!(direct, composed, "element oracle mismatch on {name}");
            }
        }
    }
}

#[test]
fn normalizer_zero_is_never_certified_nonzero() {
    for (_, g) in fixtures::all() {
        let ctx = plain(&g);
        let ring = RingConfig::Int;
        let gen = MonomialGen::new(&ctx);
        let mut rng = common::rng(0xE5);
        for _ in 0..40 {
            let x = gen.rand_element(&ctx, ring, &mut rng);
            let z = x.sub(&x).unwrap();
            assert!(z.is_zero());
            assert_eq!(nonzero_certify(&z).unwrap(), Certify::Inconclusive);
        }
    }
}

#[test]
fn rewriting_is_confluent_on_random_identity_instances() {
    // x and x + (LP identities) normalize to the same element up to
    // difference, and the difference is exactly zero
    for (_, g) in fixtures::all() {
        let ctx = plain(&g);
        let ring = RingConfig::Int;
        let gen = MonomialGen::new(&ctx);
        let mut rng = common::rng(0xF6);
        for _ in 0..60 {
            let x = gen.rand_element(&ctx, ring, &mut rng);
            // an LP4 identity instance at a random regular vertex, scaled
            let regular: Vec<usize> =
                (0..g.vertex_count()).filter(|v| ctx.regular_class(*v)).collect();
            if regular.is_empty() {
                break;
            }
            let v = regular[rng.gen_range(0..regular.len())];
            let mut identity =
                Element::vertex(ctx.clone(), ring, VertexRef::named(v)).unwrap();
            for d in ctx.out_kept(v) {
                let e = EdgeInst::single(*d);
                identity = identity
                    .sub(
                        &Element::edge(ctx.clone(), ring, e)
                            .unwrap()
                            .mul(&Element::ghost(ctx.clone(), ring, e).unwrap())
                            .unwrap(),
                    )
                    .unwrap();
            }
            assert!(identity.is_zero(), "LP4 identity must normalize to zero");
            let c = ring.from_i64(rng.gen_range(-2..=2i64));
            let y = x.add(&identity.scalar_mul(&c)).unwrap();
            assert!(x.equiv(&y).unwrap());
            assert_eq!(x.sub(&y).unwrap().term_count(), 0);
        }
    }
}

#[test]
fn grading_of_homogeneous_products() {
    for (_, g) in fixtures::all() {
        let ctx = plain(&g);
        let ring = RingConfig::Int;
        let gen = MonomialGen::new(&ctx);
        let mut rng = common::rng(0x17);
        let mut tried = 0;
        while tried < 200 {
            let x = gen.rand_monomial(&ctx, &mut rng);
            let y = gen.rand_monomial(&ctx, &mut rng);
            let ex = Element::monomial(ctx.clone(), ring, x.clone()).unwrap();
            let ey = Element::monomial(ctx.clone(), ring, y.clone()).unwrap();
            let prod = ex.mul(&ey).unwrap();
            tried += 1;
            if prod.is_zero() {
                continue;
            }
            assert_eq!(
                prod.homogeneous_degree(),
                Some(x.degree() + y.degree()),
                "deg(xy) = deg x + deg y failed"
            );
            // decomposition of a homogeneous product sits in one degree
            assert_eq!(prod.degree_decompose().len(), 1);
        }
    }
}

#[test]
fn degree_decomposition_sums_back() {
    for (_, g) in fixtures::all() {
        let ctx = plain(&g);
        let ring = RingConfig::Rat;
        let gen = MonomialGen::new(&ctx);
        let mut rng = common::rng(0x28);
        for _ in 0..30 {
            let x = gen.rand_element(&ctx, ring, &mut rng);
            let mut sum = Element::zero(ctx.clone(), ring);
            for (d, part) in x.degree_decompose() {
                assert_eq!(part.homogeneous_degree(), Some(d));
                assert_eq!(part.normalize(), part);
                sum = sum.add(&part).unwrap();
            }
            assert!(sum.equiv(&x).unwrap());
        }
    }
}

#[test]
fn ideal_membership_is_an_ideal() {
    // membership is closed under addition and two-sided multiplication
    let u1 = fixtures::u1();
    let ctx = plain(&u1);
    let ring = RingConfig::Int;
    let h = ultraleavitt::ideals::hs_closure_with_fills(&u1, &[], &[0]).unwrap();
    let pair =
        ultraleavitt::ideals::AdmissiblePair::new(&u1, h, Default::default()).unwrap();
    let gen = MonomialGen::new(&ctx);
    let mut rng = common::rng(0x39);

    let w1 = Element::proj(ctx.clone(), ring, &VSet::family_finite(0, [1])).unwrap();
    let w2 = Element::proj(ctx.clone(), ring, &VSet::family_finite(0, [2, 5])).unwrap();
    assert!(ideal_membership(&w1, &pair).unwrap());
    assert!(ideal_membership(&w2, &pair).unwrap());
    assert!(ideal_membership(&w1.add(&w2).unwrap(), &pair).unwrap());
    for _ in 0..200 {
        let r = gen.rand_element(&ctx, ring, &mut rng);
        let member = if rng.gen_bool(0.5) { &w1 } else { &w2 };
        let left = r.mul(member).unwrap();
        let right = member.mul(&r).unwrap();
        assert!(ideal_membership(&left, &pair).unwrap(), "left mul escaped");
        assert!(ideal_membership(&right, &pair).unwrap(), "right mul escaped");
    }
}

#[test]
fn nonvanishing_in_quotients() {
    // for every pool cell with [Ā] ≠ [∅] and nonzero r, r·p_A is not in the
    // ideal
    for (_, g) in fixtures::all() {
        for pair in admissible_pairs(&g) {
            let q = QuotientUltragraph::new(g.clone(), pair.clone());
            let ctx = plain(&g);
            for ring in rings() {
                for (_, a) in ultraleavitt::setalg::generator_pool(&g) {
                    if q.class_is_empty(&q.overline_bar(&a)) {
                        continue;
                    }
                    for r in ring.sample_nonzero() {
                        let x = Element::proj(ctx.clone(), ring, &a)
                            .unwrap()
                            .scalar_mul(&r);
                        assert!(
                            !ideal_membership(&x, &pair).unwrap(),
                            "r·p_A vanished in quotient for nonzero class"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn pivot_reduction_shortens_full_range_squares() {
    // s_e p_{r(e)} s_{e*} at a regular vertex rewrites away from the pivot
    let u2 = fixtures::u2();
    let ctx = plain(&u2);
    let ring = RingConfig::Int;
    let e1 = EdgeInst::single(u2.edge_id("1").unwrap());
    let m = Monomial::new(&ctx, ultraleavitt::model::Path::one(e1), VSet::from_named([0, 1]), ultraleavitt::model::Path::one(e1)).unwrap();
    let x = Element::monomial(ctx.clone(), ring, m).unwrap();
    // normal form is p_{v1}: a single degree-zero projection with empty paths
    let terms = x.terms();
    assert_eq!(terms.len(), 1);
    assert!(terms[0].1.alpha.is_empty() && terms[0].1.beta.is_empty());
}

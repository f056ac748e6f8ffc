//! Shared randomized generators for the property suites. The seed comes
//! from `ULTRALEAVITT_SEED` when set, so failures replay deterministically.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ultraleavitt::algebra::Element;
use ultraleavitt::model::{Path, Ultragraph};
use ultraleavitt::quotient::QuotientUltragraph;
use ultraleavitt::ring::RingConfig;
use ultraleavitt::setalg::generator_pool;
use ultraleavitt::{Monomial, VSet};

pub const DEFAULT_SEED: u64 = 0x756c_7261_6c76_7474;

pub fn seed() -> u64 {
    std::env::var("ULTRALEAVITT_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed() ^ salt)
}

/// A random set in the generated algebra: a Boolean combination of pool
/// sets and a random finite set.
pub fn rand_algebra_set(g: &Ultragraph, rng: &mut ChaCha8Rng) -> VSet {
    let pool: Vec<VSet> = generator_pool(g).into_iter().map(|(_, s)| s).collect();
    let mut acc = if pool.is_empty() {
        VSet::empty()
    } else {
        pool[rng.gen_range(0..pool.len())].clone()
    };
    for _ in 0..rng.gen_range(0..3usize) {
        if pool.is_empty() {
            break;
        }
        let other = &pool[rng.gen_range(0..pool.len())];
        acc = match rng.gen_range(0..3u8) {
            0 => acc.union(other),
            1 => acc.intersect(other),
            _ => acc.diff(other),
        };
    }
    // sprinkle in finitely many family members
    for f in 0..g.family_count() {
        if rng.gen_bool(0.4) {
            let members: Vec<u32> = (1..=8u32).filter(|_| rng.gen_bool(0.3)).collect();
            let part = VSet::family_finite(f, members);
            acc = if rng.gen_bool(0.5) {
                acc.union(&part)
            } else {
                acc.diff(&part)
            };
        }
    }
    acc
}

pub struct MonomialGen {
    paths: Vec<Path>,
}

impl MonomialGen {
    pub fn new(ctx: &Arc<QuotientUltragraph>) -> Self {
        let g = ctx.base();
        let mut paths = vec![Path::empty()];
        paths.extend(
            g.paths_up_to(3, 2)
                .into_iter()
                .filter(|p| ctx.path_kept(p)),
        );
        MonomialGen { paths }
    }

    pub fn rand_monomial(
        &self,
        ctx: &Arc<QuotientUltragraph>,
        rng: &mut ChaCha8Rng,
    ) -> Monomial {
        let g = ctx.base();
        for _ in 0..60 {
            let alpha = self.paths[rng.gen_range(0..self.paths.len())].clone();
            let beta = self.paths[rng.gen_range(0..self.paths.len())].clone();
            let cell = if rng.gen_bool(0.25) {
                g.all_vertices()
            } else {
                rand_algebra_set(g, rng)
            };
            if let Ok(m) = Monomial::new(ctx, alpha, cell, beta) {
                return m;
            }
        }
        // fall back to a bare projection over everything
        Monomial::new(ctx, Path::empty(), g.all_vertices(), Path::empty())
            .expect("context has at least one nonzero vertex class")
    }

    pub fn rand_element(
        &self,
        ctx: &Arc<QuotientUltragraph>,
        ring: RingConfig,
        rng: &mut ChaCha8Rng,
    ) -> Element {
        let terms: Vec<_> = (0..rng.gen_range(1..=3usize))
            .map(|_| {
                (
                    ring.from_i64(rng.gen_range(-3..=3i64)),
                    self.rand_monomial(ctx, rng),
                )
            })
            .collect();
        Element::from_monomials(ctx.clone(), ring, terms).expect("same context")
    }
}

pub fn rings() -> Vec<RingConfig> {
    vec![RingConfig::Int, RingConfig::Mod(4), RingConfig::Rat]
}

use ultraleavitt::model::{EdgeInst, Multiplicity};
use ultraleavitt::setalg::atoms;
use ultraleavitt::vset::VertexRef;

/// Edge instances with bundles sampled at two indices.
pub fn sample_instances(g: &Ultragraph) -> Vec<EdgeInst> {
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

/// Atom-aligned test cells: atoms, singletons, family samples, ranges, the
/// empty set and the full vertex set.
pub fn test_cells(ctx: &Arc<QuotientUltragraph>) -> Vec<VSet> {
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

/// Asserts every (LP1)–(LP4) instance over the test cells normalizes to
/// zero in the given context and ring.
pub fn assert_relation_suite(ctx: &Arc<QuotientUltragraph>, ring: RingConfig) {
    let g = ctx.base();
    let p = |a: &VSet| Element::proj(ctx.clone(), ring, a).unwrap();
    let cells = test_cells(ctx);
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
    for e in &insts {
        let se = Element::edge(ctx.clone(), ring, *e).unwrap();
        let ss = Element::ghost(ctx.clone(), ring, *e).unwrap();
        let ps = p(&VSet::singleton(VertexRef::named(g.source(*e))));
        let pr = p(&ctx.range_bar(e.decl));
        assert!(ps.mul(&se).unwrap().equiv(&se).unwrap(), "LP2");
        assert!(se.mul(&pr).unwrap().equiv(&se).unwrap(), "LP2");
        assert!(pr.mul(&ss).unwrap().equiv(&ss).unwrap(), "LP2");
        assert!(ss.mul(&ps).unwrap().equiv(&ss).unwrap(), "LP2");
    }
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

//! Small reference ultragraphs used across the test suites and the docs.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::model::{
    EdgeDesc, Multiplicity, RangeDesc, TraceDesc, TraceMode, Ultragraph, UltragraphDesc,
};

fn range_named(names: &[&str]) -> RangeDesc {
    RangeDesc {
        named: names.iter().map(|s| s.to_string()).collect(),
        families: BTreeMap::new(),
    }
}

fn range_family_all(family: &str) -> RangeDesc {
    let mut families = BTreeMap::new();
    families.insert(
        family.to_string(),
        TraceDesc {
            mode: TraceMode::Cofinite,
            members_or_exceptions: Vec::new(),
        },
    );
    RangeDesc {
        named: Vec::new(),
        families,
    }
}

fn edge(id: &str, source: &str, multiplicity: Multiplicity, range: RangeDesc) -> EdgeDesc {
    EdgeDesc {
        id: id.into(),
        source: source.into(),
        multiplicity,
        range,
    }
}

/// One vertex `v0`, one family `W`, and a single edge `e: v0 -> W`.
pub fn u1_desc() -> UltragraphDesc {
    UltragraphDesc {
        vertices: vec!["v0".into()],
        families: vec!["W".into()],
        edges: vec![edge("e", "v0", Multiplicity::One, range_family_all("W"))],
    }
}

pub fn u1() -> Arc<Ultragraph> {
    Ultragraph::build(u1_desc()).unwrap()
}

/// The matrix ultragraph of `[[1,1],[1,0]]`: edges `1: v1 -> {v1,v2}` and
/// `2: v2 -> {v1}`.
pub fn u2_desc() -> UltragraphDesc {
    UltragraphDesc {
        vertices: vec!["v1".into(), "v2".into()],
        families: Vec::new(),
        edges: vec![
            edge("1", "v1", Multiplicity::One, range_named(&["v1", "v2"])),
            edge("2", "v2", Multiplicity::One, range_named(&["v1"])),
        ],
    }
}

pub fn u2() -> Arc<Ultragraph> {
    Ultragraph::build(u2_desc()).unwrap()
}

/// One vertex, no edges.
pub fn u3() -> Arc<Ultragraph> {
    Ultragraph::build(UltragraphDesc {
        vertices: vec!["v".into()],
        families: Vec::new(),
        edges: Vec::new(),
    })
    .unwrap()
}

/// Vertices `u, x, y`; an infinite bundle `f: u -> {x}` and a single edge
/// `g: u -> {y}`.
pub fn u4() -> Arc<Ultragraph> {
    Ultragraph::build(UltragraphDesc {
        vertices: vec!["u".into(), "x".into(), "y".into()],
        families: Vec::new(),
        edges: vec![
            edge("f", "u", Multiplicity::InfiniteBundle, range_named(&["x"])),
            edge("g", "u", Multiplicity::One, range_named(&["y"])),
        ],
    })
    .unwrap()
}

/// A single vertex with a single loop.
pub fn u5() -> Arc<Ultragraph> {
    Ultragraph::build(UltragraphDesc {
        vertices: vec!["v".into()],
        families: Vec::new(),
        edges: vec![edge("loop", "v", Multiplicity::One, range_named(&["v"]))],
    })
    .unwrap()
}

/// U5 plus a second edge out of `v`, so the loop has an exit.
pub fn u5_with_exit() -> Arc<Ultragraph> {
    Ultragraph::build(UltragraphDesc {
        vertices: vec!["v".into()],
        families: Vec::new(),
        edges: vec![
            edge("loop", "v", Multiplicity::One, range_named(&["v"])),
            edge("exit", "v", Multiplicity::One, range_named(&["v"])),
        ],
    })
    .unwrap()
}

/// All the plain fixtures, labelled.
pub fn all() -> Vec<(&'static str, Arc<Ultragraph>)> {
    vec![
        ("U1", u1()),
        ("U2", u2()),
        ("U3", u3()),
        ("U4", u4()),
        ("U5", u5()),
        ("U5x", u5_with_exit()),
    ]
}

/// The fully finite fixtures (no families, no bundles).
pub fn finite() -> Vec<(&'static str, Arc<Ultragraph>)> {
    vec![
        ("U2", u2()),
        ("U3", u3()),
        ("U5", u5()),
        ("U5x", u5_with_exit()),
    ]
}

//! Computer algebra for ultragraphs and their Leavitt path algebras.
//!
//! An ultragraph is a directed graph whose edges have nonempty *sets* of
//! range vertices. This crate makes the associated constructions executable
//! at desk scale:
//!
//! * finitely presented ultragraphs with countably infinite vertex families
//!   and infinite edge bundles ([`model`]),
//! * the algebra of vertex sets generated by singletons and edge ranges,
//!   kept exact through a finite/cofinite-per-family canonical form
//!   ([`vset`], [`setalg`]),
//! * hereditary saturated collections, breaking vertices and admissible
//!   pairs ([`ideals`]),
//! * quotient ultragraphs and canonical class representatives ([`quotient`]),
//! * symbolic Leavitt path algebra arithmetic with canonical normal forms,
//!   a faithful-on-projections representation oracle, graded pieces and
//!   ideal membership ([`algebra`], [`rep`], [`ring`]),
//! * finite graph approximations of quotient Leavitt path algebras
//!   ([`approx`]),
//! * first-return paths, Condition (K) and Condition (L) ([`conditions`]).
//!
//! All values are immutable after construction and every operation is a
//! pure function, so the library is safe for concurrent use.

pub mod algebra;
pub mod approx;
pub mod conditions;
pub mod fixtures;
pub mod ideals;
pub mod model;
pub mod oracle;
pub mod quotient;
pub mod rep;
pub mod ring;
pub mod setalg;
pub mod vset;

pub use algebra::{Element, Monomial};
pub use ideals::{AdmissiblePair, HSCollection};
pub use model::{EdgeInst, Multiplicity, Path, Ultragraph, VertexRef};
pub use quotient::{ClassSet, QuotientUltragraph};
pub use ring::{RingConfig, Scalar};
pub use vset::VSet;

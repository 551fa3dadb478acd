//! Global transformations of finite presheaves.
//!
//! A rule system rewrites every occurrence of every rule lhs at once and glues
//! the corresponding right-hand sides together along shared sub-rules. This
//! crate provides the data model, a monomorphism matcher, colimits, rule
//! systems with an incrementality checker, and two evaluators: an online one
//! that builds the result by successive generalized pushouts and a batch
//! colimit used as a reference.

pub mod base;
pub mod colimit;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod json;
pub mod matching;
pub mod morphism;
pub mod presheaf;
pub mod rules;
pub mod union_find;

pub use base::BaseCategory;
pub use colimit::{colimit_of_diagram, generalized_pushout, mediating, Cocone, Diagram, DiagramArrow, Span};
pub use engine::{
    batch_step, iterate, online_step, online_step_with, transport, Instance, OnlineOptions, OnlineReport,
};
pub use matching::{extend_mono, find_monos, has_extension, is_isomorphic};
pub use morphism::{compose, morphism_equal, PresheafMorphism};
pub use presheaf::{disjoint_union, representable, validate_presheaf, Presheaf, RawPresheaf};
pub use rules::{check_incremental, close_under_composition, validate_rule_system, Incrementality, RuleSystem};

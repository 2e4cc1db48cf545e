//! Finite epistemic type structures over conditional probability systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`space`]: finite conditional spaces, event sets, product domains and
//!   the propositional construction of a space from literals.
//! * [`measure`]: exact probability measures, pushforwards and conditional
//!   probability systems with axiom checking.
//! * [`structure`]: type structures, belief operators and type morphisms.
//! * [`hierarchy`]: finite-depth belief hierarchies and description
//!   equivalence by partition refinement.
//! * [`quotient`]: redundancy detection, quotients and finite-depth
//!   terminal approximations.
//! * [`logic`]: parser and model checker for the conditional belief logic.
//! * [`json`]: the on-disk schema used by the CLI.

pub mod error;
pub mod hierarchy;
pub mod json;
pub mod logic;
pub mod measure;
pub mod quotient;
pub mod random;
pub mod rational;
pub mod space;
pub mod structure;

pub use error::{Error, Result};
pub use hierarchy::{
    check_morphism_preserves_descriptions, describe, hierarchy_partition, Depth, Description,
    DescriptionTree, HierarchySpace, PartitionFamily, PartitionResult,
};
pub use logic::{check, evaluate, parse_formula, Formula, Verdict};
pub use measure::{pushforward, pushforward_cps, validate_cps, Cps, CpsReport, CpsViolation, Measure};
pub use quotient::{is_non_redundant, quotient, terminal_approximation};
pub use rational::{q, Rational};
pub use space::{
    induce_from_propositions, lift_conditioning, Component, ConditionalDomain, Domain, EventSet,
    FiniteConditionalSpace, InducedSpace, LiteralSet, Valuation,
};
pub use structure::{
    check_isomorphism, check_morphism, Coordinate, MorphismSpec, TypeStructure,
};

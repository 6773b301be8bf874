//! A constraint-based case-frame lexicon over typed feature structures.
//!
//! The crate provides a type lattice with appropriateness conditions,
//! well-typed feature structures with unification and subsumption, a
//! semantic-marker ontology, a lexicon definition language, and a resolver
//! that maps case frames to verb senses.

pub mod avm;
pub mod cli;
pub mod corpus;
pub mod dsl;
pub mod fs;
pub mod ontology;
pub mod resolver;
pub mod types;

pub use avm::Avm;
pub use dsl::{Diagnostic, Lexicon};
pub use fs::{FeaturePath, FeatureStructure};
pub use resolver::{explain, generate, resolve, resolve_oracle, ResolutionResult};
pub use types::TypeLattice;

//! Semantic-marker network: a region of the type lattice below `sem`, plus
//! a lexicon mapping word stems to concepts.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::types::{TypeError, TypeId, TypeLattice};

pub const SEM_ROOT: &str = "sem";

/// The ten top-level concept groups every ontology must declare.
pub const MAJOR_CONCEPTS: [&str; 10] = [
    "Thing-Object",
    "Commodity-Ware",
    "Idea-Abstraction",
    "Part",
    "Attribute",
    "Phenomenon",
    "Doing-Action",
    "Sentiment-MentalActivity",
    "Measure",
    "Time-Space",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("`{0}` is not a concept")]
    NotAConcept(String),
}

#[derive(Debug, Clone, Default)]
pub struct Ontology {
    root: Option<TypeId>,
    concepts: BTreeSet<TypeId>,
    markers: BTreeMap<String, Vec<TypeId>>,
}

impl Ontology {
    pub(crate) fn new(
        root: Option<TypeId>,
        concepts: BTreeSet<TypeId>,
        markers: BTreeMap<String, Vec<TypeId>>,
    ) -> Self {
        Ontology { root, concepts, markers }
    }

    pub fn root(&self) -> Option<TypeId> {
        self.root
    }

    /// Declared concepts (not including the `sem` root itself).
    pub fn concepts(&self) -> &BTreeSet<TypeId> {
        &self.concepts
    }

    pub fn markers(&self) -> &BTreeMap<String, Vec<TypeId>> {
        &self.markers
    }

    pub fn is_concept(&self, lat: &TypeLattice, t: TypeId) -> bool {
        self.root.is_some_and(|r| lat.is_subtype(t, r))
    }

    /// Declared markers for `stem`, in declaration order. Unknown stems get
    /// an empty slice.
    pub fn sem_of(&self, stem: &str) -> &[TypeId] {
        self.markers.get(stem).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Selectional-restriction check: plain subtyping inside the concept
    /// region.
    pub fn satisfies(&self, lat: &TypeLattice, marker: &str, required: &str) -> Result<bool, OntologyError> {
        let m = lat.id(marker)?;
        let r = lat.id(required)?;
        for (name, t) in [(marker, m), (required, r)] {
            if !self.is_concept(lat, t) {
                return Err(OntologyError::NotAConcept(name.to_string()));
            }
        }
        Ok(lat.is_subtype(m, r))
    }
}

//! Assertional statements: named individuals, class assertions and object
//! property assertions.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::iri::Iri;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassAssertion {
    pub individual: Iri,
    pub class: Iri,
}

/// `property(subject, target)`. Ordering is by (subject, property, target),
/// the canonical save order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PropertyAssertion {
    pub subject: Iri,
    pub property: Iri,
    pub target: Iri,
}

impl PropertyAssertion {
    pub fn new(subject: Iri, property: Iri, target: Iri) -> Self {
        PropertyAssertion {
            subject,
            property,
            target,
        }
    }
}

impl fmt::Display for ClassAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassAssertion({}, {})", self.class, self.individual)
    }
}

impl fmt::Display for PropertyAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.property, self.subject, self.target)
    }
}

/// Set semantics throughout: duplicates collapse, and every individual
/// mentioned by an assertion is also a declared individual.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AssertionSet {
    individuals: BTreeSet<Iri>,
    class_assertions: BTreeSet<ClassAssertion>,
    property_assertions: BTreeSet<PropertyAssertion>,
}

impl AssertionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn declare_individual(&mut self, iri: Iri) -> bool {
        self.individuals.insert(iri)
    }

    pub fn assert_class(&mut self, individual: Iri, class: Iri) -> bool {
        self.individuals.insert(individual.clone());
        self.class_assertions
            .insert(ClassAssertion { individual, class })
    }

    pub fn assert_property(&mut self, assertion: PropertyAssertion) -> bool {
        self.individuals.insert(assertion.subject.clone());
        self.individuals.insert(assertion.target.clone());
        self.property_assertions.insert(assertion)
    }

    pub fn individuals(&self) -> &BTreeSet<Iri> {
        &self.individuals
    }

    pub fn class_assertions(&self) -> &BTreeSet<ClassAssertion> {
        &self.class_assertions
    }

    pub fn property_assertions(&self) -> &BTreeSet<PropertyAssertion> {
        &self.property_assertions
    }

    /// Directly asserted classes of one individual.
    pub fn asserted_types<'a>(&'a self, individual: &'a Iri) -> impl Iterator<Item = &'a Iri> + 'a {
        self.class_assertions
            .iter()
            .filter(move |ca| &ca.individual == individual)
            .map(|ca| &ca.class)
    }

    pub fn extend(&mut self, other: &AssertionSet) {
        self.individuals.extend(other.individuals.iter().cloned());
        self.class_assertions
            .extend(other.class_assertions.iter().cloned());
        self.property_assertions
            .extend(other.property_assertions.iter().cloned());
    }
}

//! The seven kernel alphas as an executable top-level ontology.
//!
//! * [`ontology`] and [`owl_xml`]: terminological content and its `.owx` form.
//! * [`reasoner`]: subsumption closure, type inference, violation detection.
//! * [`kernel`]: the built-in alpha ontology and alpha state tables.
//! * [`project`]: project models, alpha state computation and events.
//! * [`checker`]: closed-world completeness and consistency verdicts.
//! * [`scenarios`]: deterministic automation, distribution and self-evolution runs.
//! * [`fixtures`]: golden-file manifest verification.

pub mod abox;
pub mod checker;
pub mod fixtures;
pub mod iri;
pub mod kernel;
pub mod ontology;
pub mod owl_xml;
pub mod project;
pub mod reasoner;
pub mod scenarios;

pub use abox::{AssertionSet, ClassAssertion, PropertyAssertion};
pub use iri::{Iri, IriError};
pub use ontology::{Axiom, Ontology, OntologyError, SignatureFinding, SignatureMode};

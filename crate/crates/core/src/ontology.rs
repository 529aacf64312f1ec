//! Terminological layer: class and object-property declarations plus the
//! axioms relating them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::iri::Iri;

/// How references to undeclared entities are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignatureMode {
    /// Undeclared references are rejected by `add_axiom` and reported by
    /// `validate_signature`.
    #[default]
    Strict,
    /// Entities are declared on first use.
    Lenient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntityKind {
    Class,
    ObjectProperty,
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityKind::Class => f.write_str("class"),
            EntityKind::ObjectProperty => f.write_str("object property"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "axiom", rename_all = "PascalCase")]
pub enum Axiom {
    SubClassOf {
        sub: Iri,
        sup: Iri,
    },
    FunctionalObjectProperty {
        property: Iri,
    },
    ObjectPropertyDomain {
        property: Iri,
        class: Iri,
    },
    ObjectPropertyRange {
        property: Iri,
        class: Iri,
    },
    /// Member order is irrelevant, so members live in an ordered set.
    DisjointClasses {
        classes: BTreeSet<Iri>,
    },
}

impl Axiom {
    pub fn sub_class_of(sub: Iri, sup: Iri) -> Self {
        Axiom::SubClassOf { sub, sup }
    }

    pub fn functional(property: Iri) -> Self {
        Axiom::FunctionalObjectProperty { property }
    }

    pub fn domain(property: Iri, class: Iri) -> Self {
        Axiom::ObjectPropertyDomain { property, class }
    }

    pub fn range(property: Iri, class: Iri) -> Self {
        Axiom::ObjectPropertyRange { property, class }
    }

    pub fn disjoint(classes: impl IntoIterator<Item = Iri>) -> Self {
        Axiom::DisjointClasses {
            classes: classes.into_iter().collect(),
        }
    }

    /// Every entity the axiom mentions, tagged with the kind it must have.
    pub fn signature(&self) -> Vec<(EntityKind, &Iri)> {
        use EntityKind::*;
        match self {
            Axiom::SubClassOf { sub, sup } => vec![(Class, sub), (Class, sup)],
            Axiom::FunctionalObjectProperty { property } => vec![(ObjectProperty, property)],
            Axiom::ObjectPropertyDomain { property, class }
            | Axiom::ObjectPropertyRange { property, class } => {
                vec![(ObjectProperty, property), (Class, class)]
            }
            Axiom::DisjointClasses { classes } => classes.iter().map(|c| (Class, c)).collect(),
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf { sub, sup } => write!(f, "SubClassOf({sub}, {sup})"),
            Axiom::FunctionalObjectProperty { property } => {
                write!(f, "FunctionalObjectProperty({property})")
            }
            Axiom::ObjectPropertyDomain { property, class } => {
                write!(f, "ObjectPropertyDomain({property}, {class})")
            }
            Axiom::ObjectPropertyRange { property, class } => {
                write!(f, "ObjectPropertyRange({property}, {class})")
            }
            Axiom::DisjointClasses { classes } => {
                let names: Vec<&str> = classes.iter().map(Iri::as_str).collect();
                write!(f, "DisjointClasses({})", names.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OntologyError {
    #[error("undeclared {kind} {iri}")]
    UndeclaredEntity { iri: Iri, kind: EntityKind },
    #[error("SubClassOf({sub}, {sup}) closes a subclass cycle")]
    CycleIntroduced { sub: Iri, sup: Iri },
    #[error("DisjointClasses needs at least two distinct classes")]
    DisjointTooSmall,
}

/// Problems reported by [`Ontology::validate_signature`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "finding", rename_all = "PascalCase")]
pub enum SignatureFinding {
    UndeclaredEntity { iri: Iri, kind: EntityKind },
    CycleIntroduced { sub: Iri, sup: Iri },
    DisjointTooSmall { axiom_index: usize },
}

impl fmt::Display for SignatureFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureFinding::UndeclaredEntity { iri, kind } => {
                write!(f, "undeclared {kind} {iri}")
            }
            SignatureFinding::CycleIntroduced { sub, sup } => {
                write!(f, "SubClassOf({sub}, {sup}) closes a subclass cycle")
            }
            SignatureFinding::DisjointTooSmall { axiom_index } => {
                write!(
                    f,
                    "axiom #{axiom_index}: DisjointClasses with fewer than two classes"
                )
            }
        }
    }
}

/// Derived view of one object property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectPropertyDecl {
    pub iri: Iri,
    pub functional: bool,
    pub domain: Option<Iri>,
    pub range: Option<Iri>,
}

#[derive(Debug, Clone, Default)]
pub struct Ontology {
    mode: SignatureMode,
    classes: BTreeSet<Iri>,
    properties: BTreeSet<Iri>,
    axioms: Vec<Axiom>,
}

/// Structural equality: the signature mode is a construction setting, not
/// content.
impl PartialEq for Ontology {
    fn eq(&self, other: &Self) -> bool {
        self.classes == other.classes
            && self.properties == other.properties
            && self.axioms == other.axioms
    }
}

impl Eq for Ontology {}

impl Ontology {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_mode(mode: SignatureMode) -> Self {
        Ontology {
            mode,
            ..Self::default()
        }
    }

    pub fn mode(&self) -> SignatureMode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: SignatureMode) {
        self.mode = mode;
    }

    pub fn classes(&self) -> &BTreeSet<Iri> {
        &self.classes
    }

    pub fn properties(&self) -> &BTreeSet<Iri> {
        &self.properties
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.properties.is_empty() && self.axioms.is_empty()
    }

    /// Returns `true` if the class was not yet declared.
    pub fn declare_class(&mut self, iri: Iri) -> bool {
        self.classes.insert(iri)
    }

    pub fn declare_property(&mut self, iri: Iri) -> bool {
        self.properties.insert(iri)
    }

    pub fn has_class(&self, iri: &Iri) -> bool {
        self.classes.contains(iri)
    }

    pub fn has_property(&self, iri: &Iri) -> bool {
        self.properties.contains(iri)
    }

    pub fn contains_axiom(&self, axiom: &Axiom) -> bool {
        self.axioms.contains(axiom)
    }

    fn is_declared(&self, kind: EntityKind, iri: &Iri) -> bool {
        match kind {
            EntityKind::Class => self.classes.contains(iri),
            EntityKind::ObjectProperty => self.properties.contains(iri),
        }
    }

    /// Adds an axiom, enforcing the signature mode and subclass acyclicity.
    ///
    /// Returns `Ok(false)` when nothing changed: the axiom was already present
    /// or is a reflexive `SubClassOf(x, x)`.
    pub fn add_axiom(&mut self, axiom: Axiom) -> Result<bool, OntologyError> {
        if let Axiom::DisjointClasses { classes } = &axiom {
            if classes.len() < 2 {
                return Err(OntologyError::DisjointTooSmall);
            }
        }
        if let Axiom::SubClassOf { sub, sup } = &axiom {
            if sub == sup {
                if self.mode == SignatureMode::Lenient {
                    self.classes.insert(sub.clone());
                } else if !self.classes.contains(sub) {
                    return Err(OntologyError::UndeclaredEntity {
                        iri: sub.clone(),
                        kind: EntityKind::Class,
                    });
                }
                return Ok(false);
            }
        }
        if self.axioms.contains(&axiom) {
            return Ok(false);
        }
        match self.mode {
            SignatureMode::Strict => {
                if let Some((kind, iri)) = axiom
                    .signature()
                    .into_iter()
                    .find(|(kind, iri)| !self.is_declared(*kind, iri))
                {
                    return Err(OntologyError::UndeclaredEntity {
                        iri: iri.clone(),
                        kind,
                    });
                }
            }
            SignatureMode::Lenient => {}
        }
        if let Axiom::SubClassOf { sub, sup } = &axiom {
            if self.reaches(sup, sub) {
                return Err(OntologyError::CycleIntroduced {
                    sub: sub.clone(),
                    sup: sup.clone(),
                });
            }
        }
        if self.mode == SignatureMode::Lenient {
            for (kind, iri) in axiom.signature() {
                match kind {
                    EntityKind::Class => self.classes.insert(iri.clone()),
                    EntityKind::ObjectProperty => self.properties.insert(iri.clone()),
                };
            }
        }
        self.axioms.push(axiom);
        Ok(true)
    }

    /// Appends an axiom without signature or cycle checks. Duplicates still
    /// collapse. Used by readers that must preserve whatever a document says so
    /// that [`Ontology::validate_signature`] can report it.
    pub fn insert_axiom_unchecked(&mut self, axiom: Axiom) -> bool {
        if self.axioms.contains(&axiom) {
            return false;
        }
        self.axioms.push(axiom);
        true
    }

    /// Layers `other` on top of `self`: declarations first, then axioms in
    /// their stored order, each through [`Ontology::add_axiom`].
    pub fn extend_from(&mut self, other: &Ontology) -> Result<(), OntologyError> {
        self.classes.extend(other.classes.iter().cloned());
        self.properties.extend(other.properties.iter().cloned());
        for axiom in &other.axioms {
            self.add_axiom(axiom.clone())?;
        }
        Ok(())
    }

    pub fn subclass_edges(&self) -> impl Iterator<Item = (&Iri, &Iri)> {
        self.axioms.iter().filter_map(|a| match a {
            Axiom::SubClassOf { sub, sup } if sub != sup => Some((sub, sup)),
            _ => None,
        })
    }

    /// Direct superclasses keyed by subclass.
    pub fn direct_supers(&self) -> BTreeMap<&Iri, BTreeSet<&Iri>> {
        let mut map: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
        for (sub, sup) in self.subclass_edges() {
            map.entry(sub).or_default().insert(sup);
        }
        map
    }

    /// Whether `to` is reachable from `from` over asserted subclass edges.
    fn reaches(&self, from: &Iri, to: &Iri) -> bool {
        if from == to {
            return true;
        }
        let supers = self.direct_supers();
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        while let Some(node) = stack.pop() {
            if node == to {
                return true;
            }
            if !seen.insert(node) {
                continue;
            }
            if let Some(next) = supers.get(node) {
                stack.extend(next.iter().copied());
            }
        }
        false
    }

    /// Combined view of the property's declaration and its axioms. The first
    /// domain and range axiom in stored order is reported.
    pub fn property(&self, iri: &Iri) -> Option<ObjectPropertyDecl> {
        let mentioned = self.axioms.iter().any(|a| {
            a.signature()
                .iter()
                .any(|(k, i)| *k == EntityKind::ObjectProperty && *i == iri)
        });
        if !self.properties.contains(iri) && !mentioned {
            return None;
        }
        let mut decl = ObjectPropertyDecl {
            iri: iri.clone(),
            functional: false,
            domain: None,
            range: None,
        };
        for axiom in &self.axioms {
            match axiom {
                Axiom::FunctionalObjectProperty { property } if property == iri => {
                    decl.functional = true
                }
                Axiom::ObjectPropertyDomain { property, class } if property == iri => {
                    decl.domain.get_or_insert_with(|| class.clone());
                }
                Axiom::ObjectPropertyRange { property, class } if property == iri => {
                    decl.range.get_or_insert_with(|| class.clone());
                }
                _ => {}
            }
        }
        Some(decl)
    }

    /// All undeclared references and subclass cycles. An empty list means the
    /// ontology is well formed.
    pub fn validate_signature(&self) -> Vec<SignatureFinding> {
        let mut findings = BTreeSet::new();
        for (index, axiom) in self.axioms.iter().enumerate() {
            if let Axiom::DisjointClasses { classes } = axiom {
                if classes.len() < 2 {
                    findings.insert(SignatureFinding::DisjointTooSmall { axiom_index: index });
                }
            }
            for (kind, iri) in axiom.signature() {
                if !self.is_declared(kind, iri) {
                    findings.insert(SignatureFinding::UndeclaredEntity {
                        iri: iri.clone(),
                        kind,
                    });
                }
            }
        }
        let mut findings: Vec<_> = findings.into_iter().collect();
        findings.extend(self.cycle_edges().into_iter().map(|(sub, sup)| {
            SignatureFinding::CycleIntroduced {
                sub: sub.clone(),
                sup: sup.clone(),
            }
        }));
        findings
    }

    /// Back edges found by a depth-first walk in lexicographic node order.
    /// Each elementary cycle yields at least one edge.
    fn cycle_edges(&self) -> Vec<(&Iri, &Iri)> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        let supers = self.direct_supers();
        let mut marks: BTreeMap<&Iri, Mark> = BTreeMap::new();
        let mut back = Vec::new();
        for &root in supers.keys() {
            if marks.contains_key(root) {
                continue;
            }
            // iterative DFS: (node, remaining children)
            let mut stack: Vec<(&Iri, Vec<&Iri>)> = Vec::new();
            marks.insert(root, Mark::Open);
            stack.push((root, children(&supers, root)));
            while let Some((node, pending)) = stack.last_mut() {
                let node = *node;
                match pending.pop() {
                    Some(next) => match marks.get(next) {
                        Some(Mark::Open) => back.push((node, next)),
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(next, Mark::Open);
                            stack.push((next, children(&supers, next)));
                        }
                    },
                    None => {
                        marks.insert(node, Mark::Done);
                        stack.pop();
                    }
                }
            }
        }
        back.sort();
        back
    }
}

fn children<'a>(supers: &BTreeMap<&'a Iri, BTreeSet<&'a Iri>>, node: &Iri) -> Vec<&'a Iri> {
    // reversed so that `pop` visits in lexicographic order
    supers
        .get(node)
        .map(|s| s.iter().rev().copied().collect())
        .unwrap_or_default()
}

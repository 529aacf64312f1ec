//! Subsumption closure, type inference and violation detection over an
//! ontology plus an assertion set.
//!
//! Individuals are evaluated under the unique-name assumption: two distinct
//! IRIs always denote two distinct individuals. That is stronger than OWL and
//! is what lets a functional property be violated by two different targets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::abox::{AssertionSet, ClassAssertion, PropertyAssertion};
use crate::iri::Iri;
use crate::ontology::{Axiom, Ontology};

/// Reflexive-transitive closure of the asserted subclass edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsumptionClosure {
    supers: BTreeMap<Iri, BTreeSet<Iri>>,
}

pub fn subclass_closure(ontology: &Ontology) -> SubsumptionClosure {
    let direct = ontology.direct_supers();
    let mut nodes: BTreeSet<&Iri> = ontology.classes().iter().collect();
    for (sub, sup) in ontology.subclass_edges() {
        nodes.insert(sub);
        nodes.insert(sup);
    }
    let mut supers = BTreeMap::new();
    for &node in &nodes {
        let mut reached = BTreeSet::new();
        let mut stack = vec![node];
        while let Some(c) = stack.pop() {
            if reached.insert(c.clone()) {
                if let Some(next) = direct.get(c) {
                    stack.extend(next.iter().copied());
                }
            }
        }
        supers.insert(node.clone(), reached);
    }
    SubsumptionClosure { supers }
}

impl SubsumptionClosure {
    /// True iff `(sub, sup)` is in the closure.
    pub fn is_subclass_of(&self, sub: &Iri, sup: &Iri) -> bool {
        self.supers.get(sub).is_some_and(|s| s.contains(sup))
    }

    /// Superclasses of `class`, itself included. A class the ontology does not
    /// know is only its own superclass.
    pub fn supers_of<'a>(&'a self, class: &'a Iri) -> Box<dyn Iterator<Item = &'a Iri> + 'a> {
        match self.supers.get(class) {
            Some(s) => Box::new(s.iter()),
            None => Box::new(std::iter::once(class)),
        }
    }

    /// All pairs, lexicographic by (sub, sup).
    pub fn pairs(&self) -> impl Iterator<Item = (&Iri, &Iri)> {
        self.supers
            .iter()
            .flat_map(|(sub, sups)| sups.iter().map(move |sup| (sub, sup)))
    }

    pub fn len(&self) -> usize {
        self.supers.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.supers.is_empty()
    }
}

pub fn is_subclass_of(closure: &SubsumptionClosure, a: &Iri, b: &Iri) -> bool {
    closure.is_subclass_of(a, b)
}

/// How domain and range axioms are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReasoningMode {
    /// Domain and range are constraints: an untyped subject or target is a
    /// violation.
    #[default]
    Strict,
    /// Domain and range classify: subjects and targets acquire the types.
    Infer,
}

impl std::str::FromStr for ReasoningMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ReasoningMode::Strict),
            "infer" => Ok(ReasoningMode::Infer),
            other => Err(format!("unknown mode `{other}`, expected strict or infer")),
        }
    }
}

/// An axiom or assertion cited in an explanation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "cites", rename_all = "kebab-case")]
pub enum Cited {
    Axiom { axiom: Axiom },
    ClassAssertion(ClassAssertion),
    PropertyAssertion(PropertyAssertion),
}

impl fmt::Display for Cited {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cited::Axiom { axiom } => axiom.fmt(f),
            Cited::ClassAssertion(ca) => ca.fmt(f),
            Cited::PropertyAssertion(pa) => pa.fmt(f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FindingKind {
    DomainViolation,
    RangeViolation,
    FunctionalViolation,
    DisjointnessViolation,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum FindingDetail {
    /// `subject` of the finding is the individual lacking `required`.
    Typing {
        property: Iri,
        required: Iri,
        other_end: Iri,
    },
    Functional {
        property: Iri,
        targets: Vec<Iri>,
    },
    Disjoint {
        classes: [Iri; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    pub subject: Iri,
    pub detail: FindingDetail,
    pub explanation: Vec<Cited>,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.detail {
            FindingDetail::Typing {
                property,
                required,
                other_end,
            } => {
                let role = if self.kind == FindingKind::DomainViolation {
                    "subject"
                } else {
                    "target"
                };
                write!(
                    f,
                    "{}: {} is the {role} of {property} (other end {other_end}) but is not typed {required}",
                    self.kind, self.subject
                )
            }
            FindingDetail::Functional { property, targets } => {
                let names: Vec<&str> = targets.iter().map(Iri::as_str).collect();
                write!(
                    f,
                    "{}: functional {property} has {} targets for {}: {}",
                    self.kind,
                    targets.len(),
                    self.subject,
                    names.join(", ")
                )
            }
            FindingDetail::Disjoint { classes } => write!(
                f,
                "{}: {} is typed both {} and {}, which are disjoint",
                self.kind, self.subject, classes[0], classes[1]
            ),
        }
    }
}

/// Why an individual has a type: the cited statements that produced it.
type TypeSources = BTreeMap<Iri, Vec<Cited>>;

/// Entailed types of every individual together with their first source.
/// Asserted types are considered before domain/range inference, each in
/// sorted order, so the recorded source is deterministic.
fn type_index(
    ontology: &Ontology,
    closure: &SubsumptionClosure,
    abox: &AssertionSet,
    mode: ReasoningMode,
) -> BTreeMap<Iri, TypeSources> {
    let mut index: BTreeMap<Iri, TypeSources> = abox
        .individuals()
        .iter()
        .map(|i| (i.clone(), TypeSources::new()))
        .collect();
    let add = |index: &mut BTreeMap<Iri, TypeSources>, ind: &Iri, class: &Iri, why: Vec<Cited>| {
        let types = index.entry(ind.clone()).or_default();
        for sup in closure.supers_of(class) {
            types.entry(sup.clone()).or_insert_with(|| why.clone());
        }
    };
    for ca in abox.class_assertions() {
        add(
            &mut index,
            &ca.individual,
            &ca.class,
            vec![Cited::ClassAssertion(ca.clone())],
        );
    }
    if mode == ReasoningMode::Infer {
        for pa in abox.property_assertions() {
            for axiom in ontology.axioms() {
                let (ind, class) = match axiom {
                    Axiom::ObjectPropertyDomain { property, class } if *property == pa.property => {
                        (&pa.subject, class)
                    }
                    Axiom::ObjectPropertyRange { property, class } if *property == pa.property => {
                        (&pa.target, class)
                    }
                    _ => continue,
                };
                let why = vec![
                    Cited::Axiom {
                        axiom: axiom.clone(),
                    },
                    Cited::PropertyAssertion(pa.clone()),
                ];
                add(&mut index, ind, class, why);
            }
        }
    }
    index
}

/// Types every individual with its domain/range classes and all
/// superclasses of its types. Idempotent.
pub fn infer_types(ontology: &Ontology, abox: &AssertionSet) -> AssertionSet {
    let closure = subclass_closure(ontology);
    let index = type_index(ontology, &closure, abox, ReasoningMode::Infer);
    let mut out = abox.clone();
    for (ind, types) in index {
        for class in types.into_keys() {
            out.assert_class(ind.clone(), class);
        }
    }
    out
}

/// Entailed types per individual: asserted types closed upward, plus
/// domain/range classes in infer mode.
pub fn entailed_types(
    ontology: &Ontology,
    closure: &SubsumptionClosure,
    abox: &AssertionSet,
    mode: ReasoningMode,
) -> BTreeMap<Iri, BTreeSet<Iri>> {
    type_index(ontology, closure, abox, mode)
        .into_iter()
        .map(|(ind, types)| (ind, types.into_keys().collect()))
        .collect()
}

/// All violations, sorted by (kind, subject, detail).
pub fn detect_violations(
    ontology: &Ontology,
    abox: &AssertionSet,
    mode: ReasoningMode,
) -> Vec<Finding> {
    let closure = subclass_closure(ontology);
    let index = type_index(ontology, &closure, abox, mode);
    let empty = TypeSources::new();
    let types_of = |ind: &Iri| index.get(ind).unwrap_or(&empty);

    let mut found: BTreeMap<(FindingKind, Iri, FindingDetail), Vec<Cited>> = BTreeMap::new();

    if mode == ReasoningMode::Strict {
        for pa in abox.property_assertions() {
            for axiom in ontology.axioms() {
                let (kind, ind, other, class) = match axiom {
                    Axiom::ObjectPropertyDomain { property, class } if *property == pa.property => {
                        (FindingKind::DomainViolation, &pa.subject, &pa.target, class)
                    }
                    Axiom::ObjectPropertyRange { property, class } if *property == pa.property => {
                        (FindingKind::RangeViolation, &pa.target, &pa.subject, class)
                    }
                    _ => continue,
                };
                if !types_of(ind).contains_key(class) {
                    let detail = FindingDetail::Typing {
                        property: pa.property.clone(),
                        required: class.clone(),
                        other_end: other.clone(),
                    };
                    found.entry((kind, ind.clone(), detail)).or_insert_with(|| {
                        vec![
                            Cited::Axiom {
                                axiom: axiom.clone(),
                            },
                            Cited::PropertyAssertion(pa.clone()),
                        ]
                    });
                }
            }
        }
    }

    for axiom in ontology.axioms() {
        let Axiom::FunctionalObjectProperty { property } = axiom else {
            continue;
        };
        let mut by_subject: BTreeMap<&Iri, Vec<&PropertyAssertion>> = BTreeMap::new();
        for pa in abox.property_assertions() {
            if pa.property == *property {
                by_subject.entry(&pa.subject).or_default().push(pa);
            }
        }
        for (subject, assertions) in by_subject {
            // assertions are a set, so distinct entries have distinct targets
            if assertions.len() < 2 {
                continue;
            }
            let detail = FindingDetail::Functional {
                property: property.clone(),
                targets: assertions.iter().map(|pa| pa.target.clone()).collect(),
            };
            found
                .entry((FindingKind::FunctionalViolation, subject.clone(), detail))
                .or_insert_with(|| {
                    vec![
                        Cited::Axiom {
                            axiom: axiom.clone(),
                        },
                        Cited::PropertyAssertion(assertions[0].clone()),
                        Cited::PropertyAssertion(assertions[1].clone()),
                    ]
                });
        }
    }

    for (ind, types) in &index {
        for axiom in ontology.axioms() {
            let Axiom::DisjointClasses { classes } = axiom else {
                continue;
            };
            let members: Vec<&Iri> = classes.iter().filter(|c| types.contains_key(*c)).collect();
            for (i, a) in members.iter().enumerate() {
                for b in &members[i + 1..] {
                    let detail = FindingDetail::Disjoint {
                        classes: [(*a).clone(), (*b).clone()],
                    };
                    found
                        .entry((FindingKind::DisjointnessViolation, ind.clone(), detail))
                        .or_insert_with(|| {
                            let mut why = vec![Cited::Axiom {
                                axiom: axiom.clone(),
                            }];
                            for cited in types[*a].iter().chain(&types[*b]) {
                                if !why.contains(cited) {
                                    why.push(cited.clone());
                                }
                            }
                            why
                        });
                }
            }
        }
    }

    found
        .into_iter()
        .map(|((kind, subject, detail), explanation)| Finding {
            kind,
            subject,
            detail,
            explanation,
        })
        .collect()
}

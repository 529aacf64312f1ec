//! Closed-world completeness and consistency verdicts for a project model.
//!
//! Completeness asks whether every requirement is fulfilled by some part of the
//! software system. Under open-world semantics that question can never be
//! answered "no", so the project model is treated as the complete description
//! of its world: a requirement without an asserted `#fulfills` is a gap.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::iri::Iri;
use crate::kernel::{AlphaKind, FULFILLS};
use crate::ontology::{Axiom, Ontology, SignatureMode};
use crate::project::{ProjectModel, MODULE_CLASS};
use crate::reasoner::{
    detect_violations, entailed_types, subclass_closure, Finding, ReasoningMode,
};

/// Non-blocking observations attached to a completeness report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "advisory", rename_all = "kebab-case")]
pub enum Advisory {
    /// `#fulfills` is functional, so each system part can fulfill at most one
    /// requirement; with fewer parts than requirements the model cannot be
    /// both complete and consistent.
    FunctionalTension {
        requirements: usize,
        system_parts: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fulfillment {
    pub module: Iri,
    pub requirement: Iri,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub complete: bool,
    pub unfulfilled: Vec<Iri>,
    pub fulfillment_map: Vec<Fulfillment>,
    pub advisories: Vec<Advisory>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub findings: Vec<Finding>,
}

/// `ontology` plus `#module` as a subclass of `#software-system`. A no-op when
/// the axiom is already present.
pub fn with_checker_extension(ontology: &Ontology) -> Ontology {
    let module = Iri::new(MODULE_CLASS).expect("static IRI");
    let system = AlphaKind::SoftwareSystem.class_iri();
    let axiom = Axiom::sub_class_of(module.clone(), system.clone());
    let mut out = ontology.clone();
    if out.contains_axiom(&axiom) {
        return out;
    }
    let mode = out.mode();
    out.set_mode(SignatureMode::Lenient);
    out.declare_class(module);
    out.declare_class(system);
    // can only fail if #software-system is already below #module
    let _ = out.add_axiom(axiom);
    out.set_mode(mode);
    out
}

pub fn check_completeness(model: &ProjectModel, ontology: &Ontology) -> CompletenessReport {
    let ontology = with_checker_extension(ontology);
    let closure = subclass_closure(&ontology);
    let types = entailed_types(
        &ontology,
        &closure,
        &model.assertions(),
        ReasoningMode::Strict,
    );
    let requirements_class = AlphaKind::Requirements.class_iri();
    let system_class = AlphaKind::SoftwareSystem.class_iri();
    let fulfills = Iri::new(FULFILLS).expect("static IRI");

    let typed = |ind: &Iri, class: &Iri| types.get(ind).is_some_and(|t| t.contains(class));

    let requirements: Vec<&Iri> = types
        .keys()
        .filter(|i| typed(i, &requirements_class))
        .collect();
    let system_parts = types.keys().filter(|i| typed(i, &system_class)).count();

    let fulfillment_map: Vec<Fulfillment> = model
        .property_assertions()
        .iter()
        .filter(|pa| pa.property == fulfills && typed(&pa.subject, &system_class))
        .map(|pa| Fulfillment {
            module: pa.subject.clone(),
            requirement: pa.target.clone(),
        })
        .collect();
    let fulfilled: BTreeSet<&Iri> = fulfillment_map.iter().map(|f| &f.requirement).collect();
    let unfulfilled: Vec<Iri> = requirements
        .iter()
        .filter(|r| !fulfilled.contains(*r))
        .map(|r| (*r).clone())
        .collect();

    let mut advisories = Vec::new();
    if requirements.len() > system_parts {
        advisories.push(Advisory::FunctionalTension {
            requirements: requirements.len(),
            system_parts,
        });
    }
    CompletenessReport {
        complete: unfulfilled.is_empty(),
        unfulfilled,
        fulfillment_map,
        advisories,
    }
}

pub fn check_consistency(
    model: &ProjectModel,
    ontology: &Ontology,
    mode: ReasoningMode,
) -> ConsistencyReport {
    let ontology = with_checker_extension(ontology);
    let findings = detect_violations(&ontology, &model.assertions(), mode);
    ConsistencyReport {
        consistent: findings.is_empty(),
        findings,
    }
}

pub const REPORT_VERSION: u32 = 1;

/// Both verdicts together; the structured output of `check`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub report_version: u32,
    pub mode: ReasoningMode,
    pub completeness: CompletenessReport,
    pub consistency: ConsistencyReport,
}

impl CheckReport {
    pub fn run(model: &ProjectModel, ontology: &Ontology, mode: ReasoningMode) -> Self {
        CheckReport {
            report_version: REPORT_VERSION,
            mode,
            completeness: check_completeness(model, ontology),
            consistency: check_consistency(model, ontology, mode),
        }
    }

    pub fn passed(&self) -> bool {
        self.completeness.complete && self.consistency.consistent
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.completeness;
        out.push_str(&format!(
            "completeness: {}\n",
            if c.complete { "complete" } else { "INCOMPLETE" }
        ));
        for f in &c.fulfillment_map {
            out.push_str(&format!("  {} fulfills {}\n", f.module, f.requirement));
        }
        for r in &c.unfulfilled {
            out.push_str(&format!("  gap: {r} is not fulfilled\n"));
        }
        for a in &c.advisories {
            match a {
                Advisory::FunctionalTension {
                    requirements,
                    system_parts,
                } => out.push_str(&format!(
                    "  advisory: {requirements} requirements but only {system_parts} system parts; #fulfills is functional\n"
                )),
            }
        }
        let k = &self.consistency;
        out.push_str(&format!(
            "consistency ({}): {}\n",
            match self.mode {
                ReasoningMode::Strict => "strict",
                ReasoningMode::Infer => "infer",
            },
            if k.consistent {
                "consistent"
            } else {
                "INCONSISTENT"
            }
        ));
        for f in &k.findings {
            out.push_str(&format!("  {f}\n"));
            for cited in &f.explanation {
                out.push_str(&format!("    because {cited}\n"));
            }
        }
        out
    }
}

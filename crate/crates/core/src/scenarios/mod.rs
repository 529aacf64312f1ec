//! Deterministic runs of three robustness experiments: a software stakeholder
//! reacting to a failure (automation), a satellite swarm spreading news and
//! voting (distribution), and a repair loop restoring completeness
//! (self-evolution). Each run ends by validating its final model against the
//! unmodified built-in alpha classes.

mod automation;
mod distribution;
pub mod rng;
mod self_evolution;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

pub use automation::run_automation_scenario;
pub use distribution::run_distribution_scenario;
pub use self_evolution::run_self_evolution_scenario;

use crate::checker::{check_completeness, check_consistency, with_checker_extension};
use crate::checker::{CompletenessReport, ConsistencyReport};
use crate::iri::Iri;
use crate::kernel::{builtin_alpha_ontology, AlphaKind};
use crate::ontology::{Axiom, Ontology};
use crate::project::ProjectModel;
use crate::reasoner::ReasoningMode;

pub const SIGNALS: &str = "#signals";

/// The built-in ontology with the checker extension and the `#signals`
/// property (stakeholders to opportunity). Alpha classes are untouched.
pub fn scenario_ontology() -> Ontology {
    let mut o = with_checker_extension(&builtin_alpha_ontology());
    let signals = Iri::new(SIGNALS).expect("static IRI");
    o.declare_property(signals.clone());
    for axiom in [
        Axiom::domain(signals.clone(), AlphaKind::Stakeholders.class_iri()),
        Axiom::range(signals, AlphaKind::Opportunity.class_iri()),
    ] {
        o.add_axiom(axiom)
            .expect("scenario extension is well formed");
    }
    o
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub step: u64,
    pub actor: String,
    pub action: String,
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioReport {
    pub scenario: String,
    pub seed: u64,
    pub parameters: BTreeMap<String, Value>,
    pub trace: Vec<TraceRecord>,
    pub final_model: ProjectModel,
    pub consistency: ConsistencyReport,
    pub completeness: CompletenessReport,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.consistency.consistent && self.completeness.complete
    }

    /// One JSON object per line, keys sorted.
    pub fn trace_jsonl(&self) -> String {
        self.trace
            .iter()
            .map(|r| serde_json::to_string(r).expect("trace serializes") + "\n")
            .collect()
    }

    pub fn records<'a>(&'a self, action: &'a str) -> impl Iterator<Item = &'a TraceRecord> + 'a {
        self.trace.iter().filter(move |r| r.action == action)
    }

    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            report_version: u32,
            scenario: &'a str,
            seed: u64,
            parameters: &'a BTreeMap<String, Value>,
            trace_records: usize,
            passed: bool,
            completeness: &'a CompletenessReport,
            consistency: &'a ConsistencyReport,
        }
        let summary = Summary {
            report_version: crate::checker::REPORT_VERSION,
            scenario: &self.scenario,
            seed: self.seed,
            parameters: &self.parameters,
            trace_records: self.trace.len(),
            passed: self.passed(),
            completeness: &self.completeness,
            consistency: &self.consistency,
        };
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("invalid scenario parameters: {0}")]
    ParameterError(String),
    #[error("repair limit reached with {remaining} gap(s) left")]
    LimitExceeded {
        remaining: usize,
        report: Box<ScenarioReport>,
    },
    #[error("repair failed: {0}")]
    Repair(String),
}

/// Accumulates trace records with consecutive step numbers.
pub(crate) struct Tracer {
    records: Vec<TraceRecord>,
}

impl Tracer {
    pub(crate) fn new() -> Self {
        Tracer {
            records: Vec::new(),
        }
    }

    pub(crate) fn record(&mut self, actor: impl Into<String>, action: &str, payload: Value) {
        self.records.push(TraceRecord {
            step: self.records.len() as u64 + 1,
            actor: actor.into(),
            action: action.to_string(),
            payload,
        });
    }
}

/// Validates the final model, appends the `validate` record and assembles
/// the report.
pub(crate) fn finish(
    scenario: &str,
    seed: u64,
    parameters: BTreeMap<String, Value>,
    mut tracer: Tracer,
    model: ProjectModel,
) -> ScenarioReport {
    let ontology = scenario_ontology();
    let consistency = check_consistency(&model, &ontology, ReasoningMode::Strict);
    let completeness = check_completeness(&model, &ontology);
    tracer.record(
        "checker",
        "validate",
        serde_json::json!({
            "consistent": consistency.consistent,
            "complete": completeness.complete,
            "findings": consistency.findings.len(),
            "gaps": completeness.unfulfilled.len(),
        }),
    );
    ScenarioReport {
        scenario: scenario.to_string(),
        seed,
        parameters,
        trace: tracer.records,
        final_model: model,
        consistency,
        completeness,
    }
}

pub(crate) fn sat_iri(id: u64) -> Iri {
    Iri::local(&format!("sat-{id}"))
}

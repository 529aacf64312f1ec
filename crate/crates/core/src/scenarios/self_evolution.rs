use std::collections::BTreeMap;

use serde_json::json;

use super::{finish, scenario_ontology, ScenarioError, ScenarioReport, Tracer};
use crate::checker::check_completeness;
use crate::project::{fresh_module_iri, Event, ProjectModel};

/// Repair loop: while the model is incomplete and fewer than `limit` repairs
/// have been made, add a fresh module fulfilling the lexicographically first
/// unfulfilled requirement.
///
/// Each repair closes exactly one gap, so a model with `g` gaps and
/// `limit >= g` ends complete after `g` repairs. Otherwise the partial report
/// comes back inside [`ScenarioError::LimitExceeded`].
pub fn run_self_evolution_scenario(
    model: &ProjectModel,
    limit: u64,
) -> Result<ScenarioReport, ScenarioError> {
    if limit < 1 {
        return Err(ScenarioError::ParameterError(
            "limit must be at least 1".into(),
        ));
    }
    let ontology = scenario_ontology();
    let mut tracer = Tracer::new();
    let mut model = model.clone();

    let initial = check_completeness(&model, &ontology);
    tracer.record(
        "checker",
        "initial-check",
        json!({ "gaps": initial.unfulfilled.len() }),
    );

    let mut iterations = 0u64;
    let mut gaps = initial.unfulfilled;
    while !gaps.is_empty() && iterations < limit {
        let requirement = gaps[0].clone();
        let module = fresh_module_iri(&requirement);
        model = model
            .apply_events(&[Event::AddModuleFulfilling {
                requirement: requirement.clone(),
            }])
            .map_err(|e| ScenarioError::Repair(e.reason))?;
        iterations += 1;
        tracer.record(
            "repair-loop",
            "repair",
            json!({
                "iteration": iterations,
                "requirement": requirement.as_str(),
                "module": module.as_str(),
            }),
        );
        gaps = check_completeness(&model, &ontology).unfulfilled;
    }

    let parameters = BTreeMap::from([
        ("limit".to_string(), json!(limit)),
        ("iterations".to_string(), json!(iterations)),
    ]);
    let report = finish("self-evolution", 0, parameters, tracer, model);
    if report.completeness.complete {
        Ok(report)
    } else {
        Err(ScenarioError::LimitExceeded {
            remaining: report.completeness.unfulfilled.len(),
            report: Box::new(report),
        })
    }
}

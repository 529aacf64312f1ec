use std::collections::BTreeMap;

use serde_json::json;

use super::rng::SplitMix64;
use super::{finish, ScenarioReport, Tracer, SIGNALS};
use crate::abox::PropertyAssertion;
use crate::iri::Iri;
use crate::kernel::{AlphaKind, FULFILLS};
use crate::project::{Individual, IndividualKind, ProjectModel, MODULE_CLASS};

const SUBSYSTEMS: [&str; 3] = ["navigation", "communication", "power"];
const SYSTEM: &str = "satellite-system";
const CONTROLLER: &str = "onboard-controller";
const EARTH: &str = "earth-station";

fn local(name: &str) -> Iri {
    Iri::local(name)
}

fn satellite_model() -> ProjectModel {
    let mut m = ProjectModel::new();
    let add = |m: &mut ProjectModel, ind: Individual| m.add_individual(ind).expect("fresh names");
    add(
        &mut m,
        Individual::new(local(SYSTEM), [AlphaKind::SoftwareSystem.class_iri()]),
    );
    for name in SUBSYSTEMS {
        add(
            &mut m,
            Individual::new(
                local(&format!("module-{name}")),
                [Iri::new(MODULE_CLASS).expect("static IRI")],
            ),
        );
        add(
            &mut m,
            Individual::new(
                local(&format!("req-{name}")),
                [AlphaKind::Requirements.class_iri()],
            ),
        );
        m.add_assertion(PropertyAssertion::new(
            local(&format!("module-{name}")),
            Iri::new(FULFILLS).expect("static IRI"),
            local(&format!("req-{name}")),
        ))
        .expect("both ends exist");
    }
    add(
        &mut m,
        Individual::new(local(EARTH), [AlphaKind::Stakeholders.class_iri()])
            .with_kind(IndividualKind::Human),
    );
    add(
        &mut m,
        Individual::new(local(CONTROLLER), [AlphaKind::Stakeholders.class_iri()])
            .with_kind(IndividualKind::Software),
    );
    m
}

/// A satellite whose onboard software is itself a stakeholder. One module
/// fails (chosen by the seed); the controller detects it, records a
/// replacement opportunity, signals it and reports to the human earth station.
pub fn run_automation_scenario(seed: u64) -> ScenarioReport {
    let mut rng = SplitMix64::new(seed);
    let mut tracer = Tracer::new();
    let mut model = satellite_model();
    let system = local(SYSTEM);
    let controller = local(CONTROLLER);

    tracer.record(
        system.as_str(),
        "launch",
        json!({ "modules": SUBSYSTEMS.len() }),
    );

    let failed = SUBSYSTEMS[rng.below(SUBSYSTEMS.len() as u64) as usize];
    let module = local(&format!("module-{failed}"));
    tracer.record(
        module.as_str(),
        "module-failure",
        json!({ "module": module.as_str() }),
    );
    tracer.record(
        controller.as_str(),
        "detect-failure",
        json!({ "module": module.as_str(), "stakeholder-kind": "software" }),
    );

    let opportunity = local(&format!("opportunity-replace-{failed}"));
    model
        .add_individual(Individual::new(
            opportunity.clone(),
            [AlphaKind::Opportunity.class_iri()],
        ))
        .expect("fresh opportunity");
    model
        .add_assertion(PropertyAssertion::new(
            controller.clone(),
            Iri::new(SIGNALS).expect("static IRI"),
            opportunity.clone(),
        ))
        .expect("both ends exist");
    tracer.record(
        controller.as_str(),
        "signals-opportunity",
        json!({ "opportunity": opportunity.as_str(), "property": SIGNALS }),
    );
    tracer.record(
        controller.as_str(),
        "dialogue",
        json!({ "with": local(EARTH).as_str(), "opportunity": opportunity.as_str() }),
    );

    finish("automation", seed, BTreeMap::new(), tracer, model)
}

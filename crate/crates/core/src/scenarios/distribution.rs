use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use super::rng::SplitMix64;
use super::{finish, sat_iri, ScenarioError, ScenarioReport, Tracer, SIGNALS};
use crate::abox::PropertyAssertion;
use crate::iri::Iri;
use crate::kernel::AlphaKind;
use crate::project::{Individual, IndividualKind, ProjectModel};

const EARTH: &str = "#earth-station";

/// A swarm of `n` software satellites.
///
/// 1. Election: the `k` lowest ids become communicators.
/// 2. Failure: one satellite, drawn with `below(n)`, detects a failure.
/// 3. Dissemination in synchronous rounds. At the start of a round the
///    uninformed ids are listed in ascending order; every satellite informed
///    at that moment, in ascending id order, draws `below(len)` into that list
///    and informs the chosen one. Several senders may pick the same target.
///    Rounds continue until everybody is informed.
/// 4. Consultation: every satellite in id order casts `coin()`; the decision
///    is a strict majority of yes votes.
/// 5. On a yes decision a replacement opportunity is recorded and each
///    communicator signals it to the earth station.
pub fn run_distribution_scenario(
    n: u64,
    k: u64,
    seed: u64,
) -> Result<ScenarioReport, ScenarioError> {
    if n < 2 {
        return Err(ScenarioError::ParameterError(format!(
            "n must be at least 2, got {n}"
        )));
    }
    if k < 1 || k > n {
        return Err(ScenarioError::ParameterError(format!(
            "k must be in 1..={n}, got {k}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut tracer = Tracer::new();
    let mut model = ProjectModel::new();
    let stakeholders = AlphaKind::Stakeholders.class_iri();
    for id in 0..n {
        model
            .add_individual(
                Individual::new(sat_iri(id), [stakeholders.clone()])
                    .with_kind(IndividualKind::Software),
            )
            .expect("fresh names");
    }
    let earth = Iri::new(EARTH).expect("static IRI");
    model
        .add_individual(
            Individual::new(earth.clone(), [stakeholders]).with_kind(IndividualKind::Human),
        )
        .expect("fresh name");

    let communicators: Vec<u64> = (0..k).collect();
    for &id in &communicators {
        tracer.record(
            sat_iri(id).as_str(),
            "elected-communicator",
            json!({ "id": id }),
        );
    }

    let failed = rng.below(n);
    tracer.record(
        sat_iri(failed).as_str(),
        "failure-detected",
        json!({ "id": failed }),
    );

    let mut informed = BTreeSet::from([failed]);
    let mut round = 0u64;
    while (informed.len() as u64) < n {
        round += 1;
        let uninformed: Vec<u64> = (0..n).filter(|id| !informed.contains(id)).collect();
        let senders: Vec<u64> = informed.iter().copied().collect();
        for from in senders {
            let to = uninformed[rng.below(uninformed.len() as u64) as usize];
            tracer.record(
                sat_iri(from).as_str(),
                "inform",
                json!({ "round": round, "from": from, "to": to }),
            );
            informed.insert(to);
        }
    }
    tracer.record("network", "all-informed", json!({ "rounds": round }));

    let mut yes = 0u64;
    for id in 0..n {
        let replace = rng.coin();
        yes += u64::from(replace);
        tracer.record(
            sat_iri(id).as_str(),
            "vote",
            json!({ "id": id, "replace": replace }),
        );
    }
    let decision = 2 * yes > n;
    tracer.record(
        "network",
        "decision",
        json!({ "replace": decision, "yes": yes, "no": n - yes }),
    );

    if decision {
        let opportunity = Iri::local(&format!("opportunity-replace-sat-{failed}"));
        model
            .add_individual(Individual::new(
                opportunity.clone(),
                [AlphaKind::Opportunity.class_iri()],
            ))
            .expect("fresh name");
        let signals = Iri::new(SIGNALS).expect("static IRI");
        for &id in &communicators {
            model
                .add_assertion(PropertyAssertion::new(
                    sat_iri(id),
                    signals.clone(),
                    opportunity.clone(),
                ))
                .expect("both ends exist");
            tracer.record(
                sat_iri(id).as_str(),
                "signal-earth",
                json!({ "to": EARTH, "opportunity": opportunity.as_str() }),
            );
        }
    }

    let parameters = BTreeMap::from([("n".to_string(), json!(n)), ("k".to_string(), json!(k))]);
    Ok(finish("distribution", seed, parameters, tracer, model))
}

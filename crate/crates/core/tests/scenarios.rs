mod common;

use common::*;
use essence_core::checker::check_completeness;
use essence_core::kernel::builtin_alpha_ontology;
use essence_core::kernel::default_state_tables;
use essence_core::project::{load_project, IndividualKind};
use essence_core::scenarios::rng::SplitMix64;
use essence_core::scenarios::{
    run_automation_scenario, run_distribution_scenario, run_self_evolution_scenario,
    scenario_ontology, ScenarioError, ScenarioReport,
};
use proptest::prelude::*;

fn fixture(path: &str) -> String {
    std::fs::read_to_string(fixtures_dir().join(path)).unwrap()
}

fn u(r: &essence_core::scenarios::TraceRecord, key: &str) -> u64 {
    r.payload[key].as_u64().unwrap()
}

#[test]
fn distribution_golden_trace_is_byte_identical() {
    let report = run_distribution_scenario(5, 2, 42).unwrap();
    assert_eq!(
        report.trace_jsonl(),
        fixture("traces/distribution-n5-k2-seed42.jsonl")
    );
    assert_eq!(
        report.summary_json(),
        fixture("reports/scenario-distribution-n5-k2-seed42.json")
    );
}

#[test]
fn automation_golden_trace_is_byte_identical() {
    let report = run_automation_scenario(0);
    assert_eq!(
        report.trace_jsonl(),
        fixture("traces/automation-seed0.jsonl")
    );
}

#[test]
fn self_evolution_golden_trace_is_byte_identical() {
    let model = load_project(
        &fixture("projects/three-gaps.project"),
        &default_state_tables(),
    )
    .unwrap();
    let report = run_self_evolution_scenario(&model, 10).unwrap();
    assert_eq!(report.records("repair").count(), 3);
    assert_eq!(
        report.trace_jsonl(),
        fixture("traces/self-evolution-three-gaps.jsonl")
    );
}

fn check_distribution(report: &ScenarioReport, n: u64, k: u64, seed: u64) {
    let communicators: Vec<u64> = report
        .records("elected-communicator")
        .map(|r| u(r, "id"))
        .collect();
    assert_eq!(communicators, (0..k).collect::<Vec<_>>());

    let mut rng = SplitMix64::new(seed);
    let (failed, rounds, contacts) = resimulate_dissemination(n, &mut rng);
    assert_eq!(
        u(report.records("failure-detected").next().unwrap(), "id"),
        failed
    );
    let traced: Vec<(u64, u64, u64)> = report
        .records("inform")
        .map(|r| (u(r, "round"), u(r, "from"), u(r, "to")))
        .collect();
    assert_eq!(traced, contacts);
    let all = report.records("all-informed").next().unwrap();
    assert_eq!(u(all, "rounds"), rounds);
    assert!(rounds <= n, "n={n} seed={seed} took {rounds} rounds");

    let votes: Vec<bool> = report
        .records("vote")
        .map(|r| r.payload["replace"].as_bool().unwrap())
        .collect();
    assert_eq!(votes.len() as u64, n);
    let expected_votes: Vec<bool> = (0..n).map(|_| rng.next_u64() >> 63 == 1).collect();
    assert_eq!(votes, expected_votes);
    let yes = votes.iter().filter(|v| **v).count() as u64;
    let decision = report.records("decision").next().unwrap();
    assert_eq!(decision.payload["replace"].as_bool().unwrap(), 2 * yes > n);
    assert_eq!((u(decision, "yes"), u(decision, "no")), (yes, n - yes));
    let signals = report.records("signal-earth").count() as u64;
    assert_eq!(signals, if 2 * yes > n { k } else { 0 });
    assert!(
        report.consistency.consistent,
        "{:?}",
        report.consistency.findings
    );
}

#[test]
fn distribution_matches_resimulation_and_terminates_within_n_rounds() {
    for n in 2..=32u64 {
        for seed in 0..50u64 {
            let k = 1 + seed % n;
            let report = run_distribution_scenario(n, k, seed).unwrap();
            check_distribution(&report, n, k, seed);
        }
    }
}

#[test]
fn distribution_rejects_bad_parameters() {
    for (n, k) in [(1, 1), (5, 0), (5, 6), (0, 0)] {
        assert!(matches!(
            run_distribution_scenario(n, k, 1),
            Err(ScenarioError::ParameterError(_))
        ));
    }
}

#[test]
fn same_seed_same_trace() {
    for seed in 0..20 {
        assert_eq!(run_automation_scenario(seed), run_automation_scenario(seed));
        assert_eq!(
            run_distribution_scenario(7, 3, seed).unwrap(),
            run_distribution_scenario(7, 3, seed).unwrap()
        );
    }
}

#[test]
fn scenarios_stay_consistent_with_unmodified_alpha_classes() {
    let builtin = builtin_alpha_ontology();
    let extended = scenario_ontology();
    for axiom in builtin.axioms() {
        assert!(
            extended.contains_axiom(axiom),
            "scenario ontology dropped {axiom}"
        );
    }
    assert!(builtin.classes().is_subset(extended.classes()));
    for seed in 0..20 {
        let report = run_automation_scenario(seed);
        assert!(report.passed(), "automation seed {seed}");
        let controller = report
            .final_model
            .individual(&iri("#onboard-controller"))
            .unwrap();
        assert_eq!(controller.kind, Some(IndividualKind::Software));
        assert_eq!(
            controller.types,
            [iri("#stakeholders")].into_iter().collect()
        );
    }
    let model = load_project(
        &fixture("projects/three-gaps.project"),
        &default_state_tables(),
    )
    .unwrap();
    assert!(
        run_self_evolution_scenario(&model, 10)
            .unwrap()
            .consistency
            .consistent
    );
    assert!(
        run_distribution_scenario(5, 2, 42)
            .unwrap()
            .consistency
            .consistent
    );
}

#[test]
fn repair_limit_below_gap_count_reports_remaining() {
    let model = load_project(
        &fixture("projects/three-gaps.project"),
        &default_state_tables(),
    )
    .unwrap();
    match run_self_evolution_scenario(&model, 2) {
        Err(ScenarioError::LimitExceeded { remaining, report }) => {
            assert_eq!(remaining, 1);
            assert_eq!(report.records("repair").count(), 2);
        }
        other => panic!("expected LimitExceeded, got {other:?}"),
    }
    assert!(matches!(
        run_self_evolution_scenario(&model, 0),
        Err(ScenarioError::ParameterError(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn repair_loop_converges_in_exactly_g_iterations(seed in any::<u64>(), g in 0u64..=5, slack in 0u64..5) {
        let mut rng = SplitMix64::new(seed);
        let model = random_gap_model(&mut rng, g);
        prop_assert_eq!(count_gaps(&model) as u64, g);
        let report = run_self_evolution_scenario(&model, g.max(1) + slack).unwrap();
        prop_assert_eq!(report.records("repair").count() as u64, g);
        prop_assert!(report.completeness.complete);
        prop_assert!(report.consistency.consistent);
        prop_assert!(check_completeness(&report.final_model, &builtin_alpha_ontology()).complete);
    }
}

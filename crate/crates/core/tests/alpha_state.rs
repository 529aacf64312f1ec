mod common;

use common::*;
use essence_core::kernel::{default_state_tables, AlphaKind};
use essence_core::project::{
    compute_alpha_state, events_to_toml, island_states, load_events, load_project, Event,
    Individual, ProjectModel,
};
use essence_core::scenarios::rng::SplitMix64;
use proptest::prelude::*;

fn model_with(mask: u8) -> ProjectModel {
    let mut model = ProjectModel::new();
    model.add_alpha_instance(pattern_instance(mask)).unwrap();
    model
}

#[test]
fn all_256_patterns_follow_the_prefix_rule() {
    let table = four_state_table();
    for mask in 0..=255u8 {
        let achieved = pattern_achieved(mask);
        let state = compute_alpha_state(&pattern_instance(mask), &table);
        let want = longest_prefix_oracle(&achieved);
        assert_eq!(state.index, want, "mask {mask:08b}");
        let want_name = if want < 0 {
            "not-started"
        } else {
            PATTERN_STATES[want as usize]
        };
        assert_eq!(state.name, want_name);
        let islands = island_states(&pattern_instance(mask), &table);
        let want_islands: Vec<String> = achieved
            .iter()
            .enumerate()
            .skip((want + 1) as usize)
            .filter(|(_, a)| **a)
            .map(|(i, _)| PATTERN_STATES[i].to_string())
            .collect();
        assert_eq!(islands, want_islands, "mask {mask:08b}");
    }
}

#[test]
fn later_islands_do_not_count() {
    // S1, S2 done; S3 half done; S4 done
    let mask = 0b11_01_11_11;
    let state = compute_alpha_state(&pattern_instance(mask), &four_state_table());
    assert_eq!((state.name.as_str(), state.index), ("S2", 1));
}

#[test]
fn empty_state_needs_explicit_done() {
    let table = default_state_tables();
    let mut inst = essence_core::project::AlphaInstance::new(iri("#team-a"), AlphaKind::Team);
    assert_eq!(compute_alpha_state(&inst, &table).index, -1);
    let first = table.states(AlphaKind::Team)[0].clone();
    inst.explicit_done.insert(first.clone());
    assert_eq!(compute_alpha_state(&inst, &table).name, first);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn mark_item_done_never_decreases_state(seed in any::<u64>(), start in any::<u8>(), len in 1usize..24) {
        let table = four_state_table();
        let mut rng = SplitMix64::new(seed);
        let mut model = model_with(start);
        let mut index = compute_alpha_state(&model.alpha_instances()[0], &table).index;
        for event in random_mark_stream(&mut rng, len) {
            model = model.apply_events(std::slice::from_ref(&event)).unwrap();
            let inst = &model.alpha_instances()[0];
            let now = compute_alpha_state(inst, &table).index;
            prop_assert!(now >= index);
            // recompute from scratch off the item flags
            let achieved: Vec<bool> = PATTERN_STATES
                .iter()
                .map(|s| inst.items(s).iter().all(|i| i.done))
                .collect();
            prop_assert_eq!(now, longest_prefix_oracle(&achieved));
            index = now;
        }
    }

    #[test]
    fn applying_a_concatenation_equals_applying_in_turn(seed in any::<u64>(), split in 0usize..16) {
        let mut rng = SplitMix64::new(seed);
        let events = random_mark_stream(&mut rng, 16);
        let model = model_with(0);
        let whole = model.apply_events(&events).unwrap();
        let staged = model
            .apply_events(&events[..split])
            .unwrap()
            .apply_events(&events[split..])
            .unwrap();
        prop_assert_eq!(whole, staged);
    }

    #[test]
    fn project_files_round_trip(seed in any::<u64>(), gaps in 0u64..=5, mask in any::<u8>()) {
        let mut rng = SplitMix64::new(seed);
        let mut model = random_gap_model(&mut rng, gaps);
        let mut inst = pattern_instance(mask);
        inst.alpha = AlphaKind::Work;
        model.add_alpha_instance(inst).unwrap();
        let table = four_state_table();
        let text = model.to_toml();
        let back = ProjectModel::from_toml(&text, &table).unwrap();
        prop_assert_eq!(&back, &model);
        prop_assert_eq!(back.to_toml(), text);
    }

    #[test]
    fn event_files_round_trip(seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let mut events = random_mark_stream(&mut rng, 4);
        events.push(Event::AddModuleFulfilling { requirement: iri("#r") });
        events.push(Event::AddIndividual { iri: iri("#x"), types: vec![iri("#team")], kind: None });
        let text = events_to_toml(&events);
        prop_assert_eq!(load_events(&text).unwrap(), events);
    }
}

#[test]
fn failed_event_leaves_model_untouched() {
    let mut model = ProjectModel::new();
    model
        .add_individual(Individual::new(iri("#r"), [iri("#requirements")]))
        .unwrap();
    let events = [
        Event::AddModuleFulfilling {
            requirement: iri("#r"),
        },
        Event::AddModuleFulfilling {
            requirement: iri("#nope"),
        },
    ];
    let err = model.apply_events(&events).unwrap_err();
    assert_eq!(err.index, 1);
    assert_eq!(model.individuals().count(), 1);
}

#[test]
fn schema_errors_name_the_path() {
    let text = "format = 1\n[[individuals]]\niri = \"no scheme\"\n";
    let err = load_project(text, &default_state_tables()).unwrap_err();
    assert!(err.to_string().starts_with("individuals[0].iri"), "{err}");
}

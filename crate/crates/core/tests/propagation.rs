mod common;

use std::collections::BTreeMap;

use common::{generative, instance, lattice, Shuffled};
use proptest::prelude::*;
use softcat::{check_violations, fixtures, oracle_enumerate, Direction, InferenceState};

fn fixpoint(mut state: InferenceState, seed: Option<u64>) -> BTreeMap<String, Vec<String>> {
    match seed {
        Some(seed) => state.propagate_with(&mut Shuffled::new(seed)),
        None => state.propagate(),
    };
    state.candidate_map()
}

#[test]
fn cookbook_fixpoint_is_independent_of_schedule() {
    let expected = fixpoint(fixtures::cookbook_state(), None);
    for seed in 0..100 {
        assert_eq!(
            fixpoint(fixtures::cookbook_state(), Some(seed)),
            expected,
            "seed {seed}"
        );
    }
}

#[test]
fn cookbook_second_propagation_is_quiet() {
    let mut state = fixtures::cookbook_state();
    state.propagate();
    let again = state.propagate();
    assert!(again.changes.is_empty());
    assert_eq!(again.steps, 0);
}

#[test]
fn exports_are_byte_identical_across_runs() {
    let run = || {
        let mut state = fixtures::cookbook_state();
        state.propagate();
        state.assign(fixtures::READER, "T", false).unwrap();
        state.propagate();
        state.to_json()
    };
    let first = run();
    for _ in 0..5 {
        assert_eq!(run(), first);
    }
    let reloaded = InferenceState::from_json(&first).unwrap();
    assert_eq!(reloaded.to_json(), first);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fixpoint_is_confluent(inst in prop_oneof![instance(generative(), 12, 25), instance(lattice(6), 12, 25)], seeds in prop::collection::vec(any::<u64>(), 4)) {
        let expected = fixpoint(inst.state(), None);
        for seed in seeds {
            prop_assert_eq!(&fixpoint(inst.state(), Some(seed)), &expected);
        }
    }

    #[test]
    fn narrowing_is_monotone_and_bounded(inst in prop_oneof![instance(generative(), 12, 25), instance(lattice(6), 12, 25)]) {
        let mut state = inst.state();
        let before = state.candidate_sets().to_vec();
        let report = state.propagate();
        let after = state.candidate_sets();
        for (b, a) in before.iter().zip(after) {
            prop_assert!(a.is_subset(b));
        }
        let bound = inst.graph.len() * inst.lattice.len();
        prop_assert!(report.steps <= bound);
        let removed: usize = state.log().iter().map(|s| s.removed.len()).sum();
        prop_assert!(removed <= bound);
        prop_assert!(state.log().iter().all(|s| !s.removed.is_empty()));
    }

    #[test]
    fn conflict_free_fixpoints_are_arc_consistent(inst in prop_oneof![instance(generative(), 12, 25), instance(lattice(6), 12, 25)]) {
        let mut state = inst.state();
        state.propagate();
        prop_assume!(state.conflicts().is_empty());
        let lattice = state.lattice();
        let graph = state.graph();
        let sets = state.candidate_sets();
        for edge in graph.edges().iter().filter(|e| !e.is_self_edge()) {
            let (u, v) = (graph.position(&edge.from).unwrap(), graph.position(&edge.to).unwrap());
            for c in sets[u].iter() {
                prop_assert!(sets[v].iter().any(|d| lattice.allows(c, d)), "{edge}: no support for {}", lattice.id(c));
            }
            if !state.is_seeded(&edge.to) {
                for d in sets[v].iter() {
                    prop_assert!(sets[u].iter().any(|c| lattice.allows(c, d)), "{edge}: no support for {}", lattice.id(d));
                }
            }
        }
    }

    #[test]
    fn fixpoint_keeps_every_consistent_assignment(inst in prop_oneof![instance(generative(), 8, 14), instance(lattice(4), 8, 14)]) {
        let mut state = inst.state();
        state.propagate();
        let candidates = state.candidate_map();
        let solutions = oracle_enumerate(&inst.graph, &inst.lattice, &inst.seeds).unwrap();
        for solution in &solutions {
            for (unit, category) in solution {
                prop_assert!(candidates[unit].contains(category), "{unit}={category} pruned");
            }
            prop_assert!(check_violations(&inst.graph, &inst.lattice, solution).unwrap().is_empty());
        }
    }

    #[test]
    fn every_narrowing_step_is_explained(inst in prop_oneof![instance(generative(), 12, 25), instance(lattice(6), 12, 25)]) {
        let mut state = inst.state();
        state.propagate();
        for step in state.log() {
            match step.direction {
                Direction::Seed => prop_assert!(step.cause.is_none()),
                _ => prop_assert!(step.cause.is_some()),
            }
        }
    }
}

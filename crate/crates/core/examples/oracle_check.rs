//! Compares the propagated candidates with exhaustive enumeration.
//!
//! Every consistent total assignment must survive propagation. Units whose
//! candidate set is larger than the set of values actually used by some
//! solution show where arc consistency stops short of the exact answer.

use std::collections::{BTreeMap, BTreeSet};

use softcat::{fixtures, oracle_enumerate, InferenceState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (graph, lattice, seeds) = fixtures::cookbook();
    let mut state = InferenceState::new(graph.clone(), lattice.clone(), &seeds)?;
    state.propagate();

    let solutions = oracle_enumerate(&graph, &lattice, &seeds)?;
    println!("{} consistent assignments", solutions.len());

    let mut used: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for solution in &solutions {
        for (unit, category) in solution {
            used.entry(unit).or_default().insert(category);
        }
    }
    for (unit, candidates) in state.candidate_map() {
        let exact: Vec<&str> = used
            .get(unit.as_str())
            .into_iter()
            .flatten()
            .copied()
            .collect();
        let mark = if exact.len() == candidates.len() {
            ""
        } else {
            "  (looser)"
        };
        println!("{unit:<24} propagated {candidates:?} exact {exact:?}{mark}");
        assert!(exact.iter().all(|c| candidates.iter().any(|x| x == c)));
    }
    Ok(())
}

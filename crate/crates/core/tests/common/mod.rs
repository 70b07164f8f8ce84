#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use softcat::{
    Category, CategoryLattice, CodeUnit, DependencyEdge, DependencyGraph, DependencyKind,
    InferenceState, Refinement, Schedule, SeedAssignment,
};

/// A random lattice over `c0..cN` rooted at `c0`. Every other category
/// refines a non-empty set of lower-numbered ones, so the result is acyclic
/// and single-rooted by construction.
pub fn lattice(max: usize) -> impl Strategy<Value = CategoryLattice> {
    (2..=max)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(any::<u32>(), n - 1),
                1u32..(1 << n),
            )
        })
        .prop_map(|(n, masks, specific)| {
            let categories = (0..n).map(|i| Category::new(format!("c{i}"), "")).collect();
            let mut refinements = Vec::new();
            for (k, mask) in masks.iter().enumerate() {
                let child = k + 1;
                let choices = (1u32 << child) - 1;
                let parents = mask % choices + 1;
                for p in 0..child {
                    if parents & (1 << p) != 0 {
                        refinements.push(Refinement::new(format!("c{child}"), format!("c{p}")));
                    }
                }
            }
            let specific = (0..n)
                .filter(|i| specific & (1 << i) != 0)
                .map(|i| format!("c{i}"))
                .collect();
            CategoryLattice::build(categories, refinements, "c0", specific)
                .expect("generated lattice is valid")
        })
}

/// A lattice, a graph over it and seeds drawn from its categories.
#[derive(Debug, Clone)]
pub struct Instance {
    pub lattice: Arc<CategoryLattice>,
    pub graph: Arc<DependencyGraph>,
    pub seeds: Vec<SeedAssignment>,
}

impl Instance {
    pub fn state(&self) -> InferenceState {
        InferenceState::new(
            Arc::clone(&self.graph),
            Arc::clone(&self.lattice),
            &self.seeds,
        )
        .expect("generated seeds are valid")
    }
}

pub fn instance(
    lattice: impl Strategy<Value = CategoryLattice>,
    max_units: usize,
    max_edges: usize,
) -> impl Strategy<Value = Instance> {
    (lattice, 1..=max_units)
        .prop_flat_map(move |(lattice, units)| {
            let cats = lattice.len();
            (
                Just(lattice),
                Just(units),
                prop::collection::vec(
                    (0..units, 0..units, 0..DependencyKind::ALL.len()),
                    0..=max_edges,
                ),
                prop::collection::vec(prop::option::weighted(0.35, 0..cats), units),
            )
        })
        .prop_map(|(lattice, units, edges, seeds)| {
            let name = |i: usize| format!("u{i:02}");
            let graph = DependencyGraph::new(
                (0..units).map(|i| CodeUnit::class(name(i))).collect(),
                edges
                    .into_iter()
                    .map(|(a, b, k)| DependencyEdge::new(name(a), name(b), DependencyKind::ALL[k]))
                    .collect(),
            )
            .expect("generated graph is valid");
            let seeds = seeds
                .into_iter()
                .enumerate()
                .filter_map(|(i, c)| {
                    c.map(|c| {
                        SeedAssignment::seed(name(i), lattice.id(lattice.indices().nth(c).unwrap()))
                    })
                })
                .collect();
            Instance {
                lattice: Arc::new(lattice),
                graph: Arc::new(graph),
                seeds,
            }
        })
}

/// Picks uniformly from the worklist.
pub struct Shuffled(pub StdRng);

impl Shuffled {
    pub fn new(seed: u64) -> Self {
        Shuffled(StdRng::seed_from_u64(seed))
    }
}

impl Schedule for Shuffled {
    fn pick(&mut self, pending: &BTreeSet<usize>) -> usize {
        let k = self.0.random_range(0..pending.len());
        *pending.iter().nth(k).unwrap()
    }
}

/// The bundled five-category lattice.
pub fn generative() -> impl Strategy<Value = CategoryLattice> {
    Just(softcat::fixtures::generative_lattice())
}

//! Bundled example inputs: the generative-software category graph and the
//! cookbook library with its initial categorization.

use std::sync::Arc;

use crate::graph::DependencyGraph;
use crate::inference::{InferenceState, SeedAssignment, SeedsDocument};
use crate::lattice::CategoryLattice;

pub const GENERATIVE_CATEGORIES_JSON: &str = include_str!("../fixtures/generative.categories.json");
pub const COOKBOOK_GRAPH_JSON: &str = include_str!("../fixtures/cookbook.graph.json");
pub const COOKBOOK_SEEDS_JSON: &str = include_str!("../fixtures/cookbook.seeds.json");
pub const CONFLICT_GRAPH_JSON: &str = include_str!("../fixtures/conflict.graph.json");
pub const CONFLICT_SEEDS_JSON: &str = include_str!("../fixtures/conflict.seeds.json");

pub const COOKBOOK: &str = "lib.CookBook";
pub const BOOK: &str = "lib.Book";
pub const AUTHOR: &str = "lib.Author";
pub const READER: &str = "lib.Reader";
pub const COOKBOOK_READER: &str = "lib.CookBookReader";
pub const COOKBOOK_PANEL: &str = "lib.CookBookPanel";
pub const ABSTRACT_PANEL: &str = "lib.AbstractPanel";
pub const JPANEL: &str = "javax.swing.JPanel";
/// The two units that depend on `CookBookPanel`.
pub const PANEL_DEPENDENTS: [&str; 2] = ["lib.RecipeDetailView", "lib.RecipeListView"];

/// Categories 0', DG, D, T and DT with specific = {D}.
pub fn generative_lattice() -> CategoryLattice {
    CategoryLattice::from_json(GENERATIVE_CATEGORIES_JSON).expect("bundled lattice is valid")
}

/// The ten-unit cookbook graph with its four seeds.
pub fn cookbook() -> (
    Arc<DependencyGraph>,
    Arc<CategoryLattice>,
    Vec<SeedAssignment>,
) {
    let graph = DependencyGraph::from_json(COOKBOOK_GRAPH_JSON).expect("bundled graph is valid");
    let seeds = SeedsDocument::from_json(COOKBOOK_SEEDS_JSON).expect("bundled seeds are valid");
    (
        Arc::new(graph),
        Arc::new(generative_lattice()),
        seeds.assignments,
    )
}

pub fn cookbook_state() -> InferenceState {
    let (graph, lattice, seeds) = cookbook();
    InferenceState::new(graph, lattice, &seeds).expect("bundled seeds match the graph")
}

/// `X` seeded D depends on `Y` seeded T, which the matrix forbids.
pub fn conflict() -> (
    Arc<DependencyGraph>,
    Arc<CategoryLattice>,
    Vec<SeedAssignment>,
) {
    let graph = DependencyGraph::from_json(CONFLICT_GRAPH_JSON).expect("bundled graph is valid");
    let seeds = SeedsDocument::from_json(CONFLICT_SEEDS_JSON).expect("bundled seeds are valid");
    (
        Arc::new(graph),
        Arc::new(generative_lattice()),
        seeds.assignments,
    )
}

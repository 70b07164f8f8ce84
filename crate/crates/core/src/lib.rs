//! Semi-automatic categorization of classes and interfaces into software
//! categories.
//!
//! The inputs are a [`CategoryLattice`] (which categories exist and which
//! refine which), a [`DependencyGraph`] of code units, and a handful of
//! expert [`SeedAssignment`]s. [`InferenceState::propagate`] narrows every
//! unit's candidate categories to a fixpoint; the expert can then
//! [`assign`](InferenceState::assign) ambiguous units by hand and propagate
//! again. Units whose candidates lie within the lattice's specific
//! categories are reported as candidates for generated code.
//!
//! ```
//! use softcat::{fixtures, Tier};
//!
//! let mut state = fixtures::cookbook_state();
//! state.propagate();
//! assert_eq!(state.candidates_of("lib.CookBookPanel").unwrap(), ["DT"]);
//!
//! let report = state.generation_candidates(None).unwrap();
//! assert!(report.in_tier(Tier::Definite).contains(&"lib.CookBook"));
//! ```
//!
//! Runnable walkthroughs live in `examples/`.

pub mod extract;
pub mod fixtures;
pub mod graph;
pub mod inference;
pub mod lattice;
pub mod report;
mod set;

pub use extract::{
    extract_dir, extract_from_source, read_sources, ExtractError, Extraction, ExtractionConfig,
    PackageMap, PackagePattern, SourceFile, Unresolved,
};
pub use graph::{
    CodeUnit, DependencyEdge, DependencyGraph, DependencyKind, GraphDocument, GraphError, Location,
    UnitKind,
};
pub use inference::{
    check_violations, oracle_enumerate, AssignOutcome, CandidateEntry, CandidateReport, Conflict,
    Direction, InferenceError, InferenceState, Lexicographic, NarrowingStep, PropagationReport,
    Provenance, Schedule, SeedAssignment, SeedsDocument, StateDocument, Tier, UnitChange,
    Violation, ViolationReport,
};
pub use lattice::{
    Category, CategoryLattice, DependencyMatrix, LatticeDocument, LatticeError, LatticeIssue,
    Refinement,
};
pub use set::{CatIx, CategorySet};

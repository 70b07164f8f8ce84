//! Category inference by constraint propagation.
//!
//! Every unit carries the set of categories it may still belong to. Seeded
//! units start as singletons, everything else starts with the whole lattice.
//! For every non-self edge `u -> v` two rules narrow the sets:
//!
//! * outgoing: `u` keeps only categories that may depend on some candidate
//!   of `v`, i.e. `cand(u) ∩= ⋃ descendants(cand(v))`;
//! * incoming: `v` keeps only categories some candidate of `u` may depend
//!   on, i.e. `cand(v) ∩= ⋃ ancestors(cand(u))`. A seeded unit is fixed by
//!   the expert and is not narrowed through its dependents; an inconsistent
//!   seed shows up as a conflict on the unit that depends on it.
//!
//! Both rules only ever shrink sets and are monotone in the neighbour's set,
//! so a worklist reaches the same fixpoint whatever order units are revised
//! in. Empty sets are conflicts; they do not stop propagation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DependencyEdge, DependencyGraph, GraphDocument, GraphError};
use crate::lattice::{CategoryLattice, LatticeDocument, LatticeError};
use crate::set::{CatIx, CategorySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Seed,
    Manual,
}

fn default_provenance() -> Provenance {
    Provenance::Seed
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedAssignment {
    pub unit: String,
    pub category: String,
    #[serde(default = "default_provenance")]
    pub provenance: Provenance,
}

impl SeedAssignment {
    pub fn seed(unit: impl Into<String>, category: impl Into<String>) -> Self {
        SeedAssignment {
            unit: unit.into(),
            category: category.into(),
            provenance: Provenance::Seed,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedsDocument {
    pub assignments: Vec<SeedAssignment>,
}

impl SeedsDocument {
    pub fn from_json(text: &str) -> Result<Self, InferenceError> {
        serde_json::from_str(text).map_err(|e| InferenceError::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("unit `{0}` is seeded more than once")]
    DuplicateSeed(String),
    #[error("`{category}` is not a candidate of `{unit}` (candidates: {})", .candidates.join(", "))]
    CategoryNotInCandidates {
        unit: String,
        category: String,
        candidates: Vec<String>,
    },
    #[error("assignment is incomplete; unassigned: {}", .units.join(", "))]
    IncompleteAssignment { units: Vec<String> },
    #[error("the lattice names no specific categories")]
    EmptySpecificSet,
    #[error("search space of {combinations} assignments exceeds the oracle limit")]
    SearchSpaceTooLarge { combinations: u128 },
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("inconsistent state document: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl InferenceError {
    pub fn code(&self) -> &'static str {
        match self {
            InferenceError::UnknownUnit(_) => "UnknownUnit",
            InferenceError::UnknownCategory(_) => "UnknownCategory",
            InferenceError::DuplicateSeed(_) => "DuplicateSeed",
            InferenceError::CategoryNotInCandidates { .. } => "CategoryNotInCandidates",
            InferenceError::IncompleteAssignment { .. } => "IncompleteAssignment",
            InferenceError::EmptySpecificSet => "EmptySpecificSet",
            InferenceError::SearchSpaceTooLarge { .. } => "SearchSpaceTooLarge",
            InferenceError::Parse(_) => "ParseError",
            InferenceError::InvalidState(_) => "InvalidState",
            InferenceError::Lattice(e) => e.code(),
            InferenceError::Graph(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Narrowed because of something the unit depends on.
    OutgoingConstraint,
    /// Narrowed because of something depending on the unit.
    IncomingConstraint,
    Seed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cause {
    pub edge: DependencyEdge,
    pub neighbor: String,
    pub neighbor_candidates: Vec<String>,
}

/// One removal of categories from one unit's candidate set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NarrowingStep {
    /// Number of completed rounds when the step was applied.
    pub iteration: u32,
    pub unit: String,
    pub removed: Vec<String>,
    pub remaining: Vec<String>,
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cause: Option<Cause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitChange {
    pub unit: String,
    pub before: Vec<String>,
    pub after: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropagationReport {
    pub iteration: u32,
    pub changes: Vec<UnitChange>,
    pub newly_resolved: Vec<String>,
    pub newly_conflicted: Vec<String>,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignOutcome {
    /// The unit already carried this seed.
    Unchanged,
    /// The category was a candidate; the unit is now a manual singleton.
    Applied,
    /// Forced outside the candidates: state rebuilt from seeds, iteration 0.
    Rebuilt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub unit: String,
    pub trace: Vec<NarrowingStep>,
}

/// Picks the next unit to revise from the pending worklist.
pub trait Schedule {
    fn pick(&mut self, pending: &BTreeSet<usize>) -> usize;
}

/// Revises units in lexicographic id order.
#[derive(Debug, Default, Clone, Copy)]
pub struct Lexicographic;

impl Schedule for Lexicographic {
    fn pick(&mut self, pending: &BTreeSet<usize>) -> usize {
        *pending.first().expect("pick on empty worklist")
    }
}

/// One constraint per ordered unit pair, with the first edge as witness.
#[derive(Debug)]
struct Links {
    incoming: Vec<Vec<(usize, usize)>>,
    outgoing: Vec<Vec<(usize, usize)>>,
}

impl Links {
    fn new(graph: &DependencyGraph) -> Self {
        let n = graph.len();
        let mut incoming = vec![Vec::new(); n];
        let mut outgoing = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (k, e) in graph.edges().iter().enumerate() {
            if e.is_self_edge() {
                continue;
            }
            let from = graph.position(&e.from).expect("validated graph");
            let to = graph.position(&e.to).expect("validated graph");
            if seen.insert((from, to)) {
                outgoing[from].push((to, k));
                incoming[to].push((from, k));
            }
        }
        Links { incoming, outgoing }
    }
}

#[derive(Debug, Clone)]
pub struct InferenceState {
    graph: Arc<DependencyGraph>,
    lattice: Arc<CategoryLattice>,
    links: Arc<Links>,
    seeds: BTreeMap<usize, (CatIx, Provenance)>,
    candidates: Vec<CategorySet>,
    iteration: u32,
    log: Vec<NarrowingStep>,
}

impl InferenceState {
    pub fn new(
        graph: Arc<DependencyGraph>,
        lattice: Arc<CategoryLattice>,
        seeds: &[SeedAssignment],
    ) -> Result<Self, InferenceError> {
        let seeds = resolve_seeds(&graph, &lattice, seeds)?;
        let links = Arc::new(Links::new(&graph));
        Ok(Self::from_seed_map(graph, lattice, links, seeds))
    }

    fn from_seed_map(
        graph: Arc<DependencyGraph>,
        lattice: Arc<CategoryLattice>,
        links: Arc<Links>,
        seeds: BTreeMap<usize, (CatIx, Provenance)>,
    ) -> Self {
        let mut candidates = vec![lattice.full_set(); graph.len()];
        let mut log = Vec::new();
        for (&u, &(c, _)) in &seeds {
            let single = CategorySet::singleton(lattice.len(), c);
            let removed = candidates[u].difference(&single);
            if !removed.is_empty() {
                log.push(NarrowingStep {
                    iteration: 0,
                    unit: graph.units()[u].id.clone(),
                    removed: lattice.owned_ids(&removed),
                    remaining: lattice.owned_ids(&single),
                    direction: Direction::Seed,
                    cause: None,
                });
            }
            candidates[u] = single;
        }
        InferenceState {
            graph,
            lattice,
            links,
            seeds,
            candidates,
            iteration: 0,
            log,
        }
    }

    pub fn graph(&self) -> &Arc<DependencyGraph> {
        &self.graph
    }

    pub fn lattice(&self) -> &Arc<CategoryLattice> {
        &self.lattice
    }

    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn log(&self) -> &[NarrowingStep] {
        &self.log
    }

    pub fn seeds(&self) -> Vec<SeedAssignment> {
        self.seeds
            .iter()
            .map(|(&u, &(c, provenance))| SeedAssignment {
                unit: self.graph.units()[u].id.clone(),
                category: self.lattice.id(c).to_string(),
                provenance,
            })
            .collect()
    }

    /// Candidate sets in unit order (parallel to `graph().units()`).
    pub fn candidate_sets(&self) -> &[CategorySet] {
        &self.candidates
    }

    pub fn candidates_of(&self, unit: &str) -> Result<Vec<&str>, InferenceError> {
        let u = self.unit_ix(unit)?;
        Ok(self.lattice.ids(&self.candidates[u]))
    }

    /// Candidate ids per unit id.
    pub fn candidate_map(&self) -> BTreeMap<String, Vec<String>> {
        self.graph
            .units()
            .iter()
            .zip(&self.candidates)
            .map(|(u, set)| (u.id.clone(), self.lattice.owned_ids(set)))
            .collect()
    }

    fn unit_ix(&self, unit: &str) -> Result<usize, InferenceError> {
        self.graph
            .position(unit)
            .ok_or_else(|| InferenceError::UnknownUnit(unit.to_string()))
    }

    pub fn is_seeded(&self, unit: &str) -> bool {
        self.graph
            .position(unit)
            .is_some_and(|u| self.seeds.contains_key(&u))
    }

    pub fn propagate(&mut self) -> PropagationReport {
        self.propagate_with(&mut Lexicographic)
    }

    /// Runs the worklist to a fixpoint with a caller-chosen revision order.
    pub fn propagate_with(&mut self, schedule: &mut dyn Schedule) -> PropagationReport {
        let before = self.candidates.clone();
        let first_step = self.log.len();
        let mut pending: BTreeSet<usize> = (0..self.graph.len()).collect();
        while !pending.is_empty() {
            let u = schedule.pick(&pending);
            pending.remove(&u);
            if self.revise(u) {
                let links = Arc::clone(&self.links);
                for &(w, _) in links.incoming[u].iter().chain(&links.outgoing[u]) {
                    pending.insert(w);
                }
            }
        }
        self.iteration += 1;

        let mut report = PropagationReport {
            iteration: self.iteration,
            changes: Vec::new(),
            newly_resolved: Vec::new(),
            newly_conflicted: Vec::new(),
            steps: self.log.len() - first_step,
        };
        for (u, (old, new)) in before.iter().zip(&self.candidates).enumerate() {
            if old == new {
                continue;
            }
            let id = self.graph.units()[u].id.clone();
            if new.len() == 1 {
                report.newly_resolved.push(id.clone());
            }
            if new.is_empty() {
                report.newly_conflicted.push(id.clone());
            }
            report.changes.push(UnitChange {
                unit: id,
                before: self.lattice.owned_ids(old),
                after: self.lattice.owned_ids(new),
            });
        }
        report
    }

    /// Applies both rules to `u` against all its neighbours; true if `u` shrank.
    fn revise(&mut self, u: usize) -> bool {
        let links = Arc::clone(&self.links);
        let mut changed = false;
        if !self.seeds.contains_key(&u) {
            for &(w, edge) in &links.incoming[u] {
                let allowed = self.lattice.up_closure(&self.candidates[w]);
                changed |= self.narrow(u, w, edge, &allowed, Direction::IncomingConstraint);
            }
        }
        for &(v, edge) in &links.outgoing[u] {
            let allowed = self.lattice.down_closure(&self.candidates[v]);
            changed |= self.narrow(u, v, edge, &allowed, Direction::OutgoingConstraint);
        }
        changed
    }

    fn narrow(
        &mut self,
        u: usize,
        neighbor: usize,
        edge: usize,
        allowed: &CategorySet,
        direction: Direction,
    ) -> bool {
        let removed = self.candidates[u].difference(allowed);
        if removed.is_empty() {
            return false;
        }
        self.candidates[u].intersect_with(allowed);
        self.log.push(NarrowingStep {
            iteration: self.iteration,
            unit: self.graph.units()[u].id.clone(),
            removed: self.lattice.owned_ids(&removed),
            remaining: self.lattice.owned_ids(&self.candidates[u]),
            direction,
            cause: Some(Cause {
                edge: self.graph.edges()[edge].clone(),
                neighbor: self.graph.units()[neighbor].id.clone(),
                neighbor_candidates: self.lattice.owned_ids(&self.candidates[neighbor]),
            }),
        });
        true
    }

    /// Records an expert decision between rounds.
    ///
    /// A category outside the current candidates is rejected unless `force`
    /// is set, in which case the state is rebuilt from the seeds (narrowing
    /// cannot be undone) and must be propagated again.
    pub fn assign(
        &mut self,
        unit: &str,
        category: &str,
        force: bool,
    ) -> Result<AssignOutcome, InferenceError> {
        let u = self.unit_ix(unit)?;
        let c = self
            .lattice
            .ix(category)
            .map_err(|_| InferenceError::UnknownCategory(category.to_string()))?;
        if self.seeds.get(&u).is_some_and(|&(seeded, _)| seeded == c) {
            return Ok(AssignOutcome::Unchanged);
        }
        if self.candidates[u].contains(c) {
            let single = CategorySet::singleton(self.lattice.len(), c);
            let removed = self.candidates[u].difference(&single);
            self.seeds.insert(u, (c, Provenance::Manual));
            self.candidates[u] = single;
            if !removed.is_empty() {
                self.log.push(NarrowingStep {
                    iteration: self.iteration,
                    unit: unit.to_string(),
                    removed: self.lattice.owned_ids(&removed),
                    remaining: vec![category.to_string()],
                    direction: Direction::Seed,
                    cause: None,
                });
            }
            return Ok(AssignOutcome::Applied);
        }
        if !force {
            return Err(InferenceError::CategoryNotInCandidates {
                unit: unit.to_string(),
                category: category.to_string(),
                candidates: self.lattice.owned_ids(&self.candidates[u]),
            });
        }
        let mut seeds = self.seeds.clone();
        seeds.insert(u, (c, Provenance::Manual));
        *self = Self::from_seed_map(
            Arc::clone(&self.graph),
            Arc::clone(&self.lattice),
            Arc::clone(&self.links),
            seeds,
        );
        Ok(AssignOutcome::Rebuilt)
    }

    /// Units with an empty candidate set, by id, with their traces.
    pub fn conflicts(&self) -> Vec<Conflict> {
        self.graph
            .units()
            .iter()
            .zip(&self.candidates)
            .filter(|(_, set)| set.is_empty())
            .map(|(u, _)| Conflict {
                unit: u.id.clone(),
                trace: self.trace(&u.id),
            })
            .collect()
    }

    fn trace(&self, unit: &str) -> Vec<NarrowingStep> {
        self.log
            .iter()
            .filter(|s| s.unit == unit)
            .cloned()
            .collect()
    }

    /// Every narrowing step applied to `unit`, in order.
    pub fn explain(&self, unit: &str) -> Result<Vec<NarrowingStep>, InferenceError> {
        self.unit_ix(unit)?;
        Ok(self.trace(unit))
    }

    /// The unit-to-category map, if every unit is resolved to one category.
    pub fn total_assignment(&self) -> Result<BTreeMap<String, String>, InferenceError> {
        let mut unresolved = Vec::new();
        let mut map = BTreeMap::new();
        for (u, set) in self.graph.units().iter().zip(&self.candidates) {
            match set.single() {
                Some(c) => {
                    map.insert(u.id.clone(), self.lattice.id(c).to_string());
                }
                None => unresolved.push(u.id.clone()),
            }
        }
        if unresolved.is_empty() {
            Ok(map)
        } else {
            Err(InferenceError::IncompleteAssignment { units: unresolved })
        }
    }

    /// Tiers every unit against the lattice's specific categories, or
    /// against `specific` when given.
    pub fn generation_candidates(
        &self,
        specific: Option<&CategorySet>,
    ) -> Result<CandidateReport, InferenceError> {
        let specific = specific.unwrap_or(self.lattice.specific());
        if specific.is_empty() {
            return Err(InferenceError::EmptySpecificSet);
        }
        let closure = self.lattice.down_closure(specific);
        let mut units: Vec<CandidateEntry> = self
            .graph
            .units()
            .iter()
            .zip(&self.candidates)
            .map(|(u, set)| CandidateEntry {
                unit: u.id.clone(),
                tier: Tier::of(set, &closure),
                resolved: set.len() == 1,
                candidates: self.lattice.owned_ids(set),
            })
            .collect();
        units.sort_by(|a, b| (a.tier, &a.unit).cmp(&(b.tier, &b.unit)));
        Ok(CandidateReport {
            specific: self.lattice.owned_ids(specific),
            closure: self.lattice.owned_ids(&closure),
            units,
        })
    }

    pub fn to_document(&self) -> StateDocument {
        StateDocument {
            format: STATE_FORMAT.to_string(),
            lattice: self.lattice.to_document(),
            graph: self.graph.to_document(),
            seeds: self.seeds(),
            iteration: self.iteration,
            candidates: self.candidate_map(),
            narrowing_log: self.log.clone(),
        }
    }

    /// Pretty JSON with fixed key order; equal states give equal bytes.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_document()).expect("state serializes");
        text.push('\n');
        text
    }

    pub fn from_document(doc: StateDocument) -> Result<Self, InferenceError> {
        if doc.format != STATE_FORMAT {
            return Err(InferenceError::InvalidState(format!(
                "unsupported format `{}`",
                doc.format
            )));
        }
        let lattice = Arc::new(CategoryLattice::from_document(doc.lattice)?);
        let graph = Arc::new(DependencyGraph::from_document(doc.graph)?);
        let mut state = InferenceState::new(Arc::clone(&graph), Arc::clone(&lattice), &doc.seeds)?;
        if doc.candidates.len() != graph.len() {
            return Err(InferenceError::InvalidState(
                "candidate map does not cover exactly the graph's units".into(),
            ));
        }
        for (unit, ids) in &doc.candidates {
            let u = state.unit_ix(unit)?;
            let set = lattice.set_of(ids.iter().map(String::as_str))?;
            if !set.is_subset(&state.candidates[u]) {
                return Err(InferenceError::InvalidState(format!(
                    "candidates of `{unit}` contradict its seed"
                )));
            }
            state.candidates[u] = set;
        }
        state.iteration = doc.iteration;
        state.log = doc.narrowing_log;
        Ok(state)
    }

    pub fn from_json(text: &str) -> Result<Self, InferenceError> {
        let doc: StateDocument =
            serde_json::from_str(text).map_err(|e| InferenceError::Parse(e.to_string()))?;
        Self::from_document(doc)
    }
}

fn resolve_seeds(
    graph: &DependencyGraph,
    lattice: &CategoryLattice,
    seeds: &[SeedAssignment],
) -> Result<BTreeMap<usize, (CatIx, Provenance)>, InferenceError> {
    let mut map = BTreeMap::new();
    for s in seeds {
        let u = graph
            .position(&s.unit)
            .ok_or_else(|| InferenceError::UnknownUnit(s.unit.clone()))?;
        let c = lattice
            .ix(&s.category)
            .map_err(|_| InferenceError::UnknownCategory(s.category.clone()))?;
        if map.insert(u, (c, s.provenance)).is_some() {
            return Err(InferenceError::DuplicateSeed(s.unit.clone()));
        }
    }
    Ok(map)
}

pub const STATE_FORMAT: &str = "softcat-state/1";

/// Self-contained export of an inference state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateDocument {
    pub format: String,
    pub lattice: LatticeDocument,
    pub graph: GraphDocument,
    pub seeds: Vec<SeedAssignment>,
    pub iteration: u32,
    pub candidates: BTreeMap<String, Vec<String>>,
    pub narrowing_log: Vec<NarrowingStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Every remaining candidate is a specific category (or refines one).
    Definite,
    /// Some remaining candidates are.
    Possible,
    None,
}

impl Tier {
    /// Classifies a candidate set against the down-closure of the specific
    /// categories.
    pub fn of(set: &CategorySet, closure: &CategorySet) -> Tier {
        if set.is_empty() || set.is_disjoint(closure) {
            Tier::None
        } else if set.is_subset(closure) {
            Tier::Definite
        } else {
            Tier::Possible
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateEntry {
    pub unit: String,
    pub tier: Tier,
    pub resolved: bool,
    pub candidates: Vec<String>,
}

/// Units tiered by how surely they belong to the specific categories;
/// ordered definite, possible, none, then by unit id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub specific: Vec<String>,
    pub closure: Vec<String>,
    pub units: Vec<CandidateEntry>,
}

impl CandidateReport {
    pub fn in_tier(&self, tier: Tier) -> Vec<&str> {
        self.units
            .iter()
            .filter(|e| e.tier == tier)
            .map(|e| e.unit.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub edge: DependencyEdge,
    pub from_category: String,
    pub to_category: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every non-self edge whose endpoint categories the matrix forbids.
pub fn check_violations(
    graph: &DependencyGraph,
    lattice: &CategoryLattice,
    assignment: &BTreeMap<String, String>,
) -> Result<ViolationReport, InferenceError> {
    let missing: Vec<String> = graph
        .units()
        .iter()
        .filter(|u| !assignment.contains_key(&u.id))
        .map(|u| u.id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(InferenceError::IncompleteAssignment { units: missing });
    }
    if let Some(unit) = assignment.keys().find(|u| graph.position(u).is_none()) {
        return Err(InferenceError::UnknownUnit(unit.clone()));
    }
    let category = |unit: &str| -> Result<CatIx, InferenceError> {
        let id = &assignment[unit];
        lattice
            .ix(id)
            .map_err(|_| InferenceError::UnknownCategory(id.clone()))
    };
    let mut violations = Vec::new();
    for e in graph.edges() {
        if e.is_self_edge() {
            continue;
        }
        let (from, to) = (category(&e.from)?, category(&e.to)?);
        if !lattice.allows(from, to) {
            violations.push(Violation {
                edge: e.clone(),
                from_category: lattice.id(from).to_string(),
                to_category: lattice.id(to).to_string(),
            });
        }
    }
    Ok(ViolationReport { violations })
}

/// Largest search space [`oracle_enumerate`] accepts.
pub const ORACLE_LIMIT: u128 = 10_000_000;

/// Every total assignment that respects the seeds and lets every non-self
/// edge pass the allowed-dependency matrix, by exhaustive search.
pub fn oracle_enumerate(
    graph: &DependencyGraph,
    lattice: &CategoryLattice,
    seeds: &[SeedAssignment],
) -> Result<Vec<BTreeMap<String, String>>, InferenceError> {
    let fixed = resolve_seeds(graph, lattice, seeds)?;
    let n = graph.len();
    let k = lattice.len() as u128;
    let mut combinations: u128 = 1;
    for u in 0..n {
        if !fixed.contains_key(&u) {
            combinations = combinations.saturating_mul(k);
        }
    }
    if combinations > ORACLE_LIMIT {
        return Err(InferenceError::SearchSpaceTooLarge { combinations });
    }

    // Edges checked as soon as their later endpoint (by index) is assigned.
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in graph.edges() {
        if e.is_self_edge() {
            continue;
        }
        let (a, b) = (
            graph.position(&e.from).unwrap(),
            graph.position(&e.to).unwrap(),
        );
        checks[a.max(b)].push((a, b));
    }
    let domains: Vec<Vec<CatIx>> = (0..n)
        .map(|u| match fixed.get(&u) {
            Some(&(c, _)) => vec![c],
            None => lattice.indices().collect(),
        })
        .collect();

    let mut results = Vec::new();
    let mut current: Vec<CatIx> = Vec::with_capacity(n);
    fn search(
        u: usize,
        current: &mut Vec<CatIx>,
        domains: &[Vec<CatIx>],
        checks: &[Vec<(usize, usize)>],
        lattice: &CategoryLattice,
        out: &mut Vec<Vec<CatIx>>,
    ) {
        if u == domains.len() {
            out.push(current.clone());
            return;
        }
        for &c in &domains[u] {
            current.push(c);
            if checks[u]
                .iter()
                .all(|&(a, b)| lattice.allows(current[a], current[b]))
            {
                search(u + 1, current, domains, checks, lattice, out);
            }
            current.pop();
        }
    }
    search(0, &mut current, &domains, &checks, lattice, &mut results);

    Ok(results
        .into_iter()
        .map(|cats| {
            graph
                .units()
                .iter()
                .zip(cats)
                .map(|(u, c)| (u.id.clone(), lattice.id(c).to_string()))
                .collect()
        })
        .collect())
}

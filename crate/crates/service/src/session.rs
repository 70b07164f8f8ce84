//! In-memory categorization sessions with snapshot history.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, RwLock};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use softcat::{
    check_violations, report, CandidateReport, CategoryLattice, DependencyGraph, GraphDocument,
    InferenceError, InferenceState, LatticeDocument, LatticeError, NarrowingStep,
    PropagationReport, Provenance, SeedsDocument, Tier, UnitChange, ViolationReport,
};

/// An API failure: HTTP status, stable code and detail payload.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: u16,
    pub code: String,
    pub detail: Value,
}

impl ApiError {
    fn new(status: u16, code: impl Into<String>, detail: impl Into<Value>) -> Self {
        ApiError {
            status,
            code: code.into(),
            detail: detail.into(),
        }
    }

    pub fn not_found(id: &str) -> Self {
        Self::new(404, "SessionNotFound", format!("no session `{id}`"))
    }

    pub fn body(&self) -> String {
        report::to_json(&serde_json::json!({"error": self.code, "detail": self.detail}))
    }
}

impl From<LatticeError> for ApiError {
    fn from(e: LatticeError) -> Self {
        let detail = match &e {
            LatticeError::Invalid(issues) => serde_json::to_value(issues).unwrap_or_default(),
            other => Value::String(other.to_string()),
        };
        ApiError::new(400, e.code(), detail)
    }
}

impl From<InferenceError> for ApiError {
    fn from(e: InferenceError) -> Self {
        match e {
            InferenceError::Lattice(inner) => inner.into(),
            InferenceError::CategoryNotInCandidates {
                unit,
                category,
                candidates,
            } => ApiError::new(
                409,
                "CategoryNotInCandidates",
                serde_json::json!({"unit": unit, "category": category, "candidates": candidates}),
            ),
            InferenceError::IncompleteAssignment { units } => ApiError::new(
                409,
                "IncompleteAssignment",
                serde_json::json!({"unassigned": units}),
            ),
            InferenceError::EmptySpecificSet => {
                ApiError::new(409, "EmptySpecificSet", e.to_string())
            }
            other => ApiError::new(400, other.code(), other.to_string()),
        }
    }
}

/// Body of `POST /sessions`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreateRequest {
    pub categories: LatticeDocument,
    pub graph: GraphDocument,
    #[serde(default)]
    pub seeds: SeedsDocument,
}

/// Body of `POST /sessions/{id}/assign`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignRequest {
    pub unit: String,
    pub category: String,
    #[serde(default)]
    pub force: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnitView {
    pub unit: String,
    pub candidates: Vec<String>,
    pub resolved: bool,
    pub conflict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tier: Option<Tier>,
}

/// What the UI renders: candidate sets, tiers, conflicts and the change
/// against the previous snapshot.
#[derive(Debug, Clone, Serialize)]
pub struct StateView {
    pub session: String,
    pub iteration: u32,
    pub history_depth: usize,
    pub created: u64,
    pub modified: u64,
    pub units: Vec<UnitView>,
    pub conflicts: Vec<String>,
    pub last_diff: Vec<UnitChange>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CreatedView {
    pub id: String,
    pub state: StateView,
}

#[derive(Debug)]
struct Committed {
    /// Oldest first; the last entry is the current state. Never empty.
    history: Vec<Arc<InferenceState>>,
    modified: u64,
}

#[derive(Debug)]
pub struct Session {
    id: String,
    created: u64,
    writer: tokio::sync::Mutex<()>,
    committed: RwLock<Arc<Committed>>,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

impl Session {
    fn snapshot(&self) -> Arc<Committed> {
        Arc::clone(&self.committed.read().expect("session lock poisoned"))
    }

    pub fn current(&self) -> Arc<InferenceState> {
        Arc::clone(self.snapshot().history.last().expect("history never empty"))
    }

    pub fn history_depth(&self) -> usize {
        self.snapshot().history.len()
    }

    fn view(&self) -> StateView {
        let committed = self.snapshot();
        let state = committed.history.last().expect("history never empty");
        let lattice = state.lattice();
        let closure = if lattice.specific().is_empty() {
            None
        } else {
            Some(lattice.down_closure(lattice.specific()))
        };
        let seeds: BTreeMap<String, Provenance> = state
            .seeds()
            .into_iter()
            .map(|s| (s.unit, s.provenance))
            .collect();
        let units = state
            .graph()
            .units()
            .iter()
            .zip(state.candidate_sets())
            .map(|(u, set)| UnitView {
                unit: u.id.clone(),
                candidates: lattice.owned_ids(set),
                resolved: set.len() == 1,
                conflict: set.is_empty(),
                seed: seeds.get(&u.id).copied(),
                tier: closure.as_ref().map(|closure| Tier::of(set, closure)),
            })
            .collect::<Vec<_>>();
        let conflicts = units
            .iter()
            .filter(|u| u.conflict)
            .map(|u| u.unit.clone())
            .collect();
        let last_diff = match committed.history.len() {
            n if n >= 2 => diff(&committed.history[n - 2], state),
            _ => Vec::new(),
        };
        StateView {
            session: self.id.clone(),
            iteration: state.iteration(),
            history_depth: committed.history.len(),
            created: self.created,
            modified: committed.modified,
            units,
            conflicts,
            last_diff,
        }
    }

    /// Applies `f` to a copy of the current state and commits the result as
    /// a new snapshot when `f` reports a change.
    async fn mutate<T>(
        &self,
        f: impl FnOnce(&mut InferenceState) -> Result<(T, bool), ApiError>,
    ) -> Result<(T, Arc<InferenceState>), ApiError> {
        let _writer = self.writer.lock().await;
        let committed = self.snapshot();
        let mut next =
            InferenceState::clone(committed.history.last().expect("history never empty"));
        let (out, changed) = f(&mut next)?;
        if !changed {
            return Ok((out, self.current()));
        }
        let next = Arc::new(next);
        let mut history = committed.history.clone();
        history.push(Arc::clone(&next));
        *self.committed.write().expect("session lock poisoned") = Arc::new(Committed {
            history,
            modified: now(),
        });
        Ok((out, next))
    }
}

fn diff(before: &InferenceState, after: &InferenceState) -> Vec<UnitChange> {
    let (old, new) = (before.candidate_map(), after.candidate_map());
    new.iter()
        .filter(|(unit, ids)| old.get(*unit) != Some(*ids))
        .map(|(unit, ids)| UnitChange {
            unit: unit.clone(),
            before: old.get(unit).cloned().unwrap_or_default(),
            after: ids.clone(),
        })
        .collect()
}

/// All sessions of one service instance.
#[derive(Debug, Default)]
pub struct SessionStore {
    sessions: RwLock<HashMap<String, Arc<Session>>>,
    persist_dir: Option<PathBuf>,
}

impl SessionStore {
    pub fn new(persist_dir: Option<PathBuf>) -> Self {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            persist_dir,
        }
    }

    pub fn get(&self, id: &str) -> Result<Arc<Session>, ApiError> {
        self.sessions
            .read()
            .expect("store lock poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }

    fn persist(&self, session: &Session) -> Result<(), ApiError> {
        let Some(dir) = &self.persist_dir else {
            return Ok(());
        };
        let path = dir.join(format!("{}.json", session.id));
        std::fs::write(&path, session.current().to_json())
            .map_err(|e| ApiError::new(500, "PersistFailed", format!("{}: {e}", path.display())))
    }

    /// Validates the three input documents; does not propagate.
    pub fn create(&self, request: CreateRequest) -> Result<CreatedView, ApiError> {
        let lattice = CategoryLattice::from_document(request.categories)?;
        let graph = DependencyGraph::from_document(request.graph)
            .map_err(|e| ApiError::new(400, e.code(), e.to_string()))?;
        let state = InferenceState::new(
            Arc::new(graph),
            Arc::new(lattice),
            &request.seeds.assignments,
        )?;
        let id = uuid::Uuid::new_v4().simple().to_string();
        let created = now();
        let session = Arc::new(Session {
            id: id.clone(),
            created,
            writer: tokio::sync::Mutex::new(()),
            committed: RwLock::new(Arc::new(Committed {
                history: vec![Arc::new(state)],
                modified: created,
            })),
        });
        self.persist(&session)?;
        self.sessions
            .write()
            .expect("store lock poisoned")
            .insert(id.clone(), Arc::clone(&session));
        Ok(CreatedView {
            id,
            state: session.view(),
        })
    }

    pub fn state(&self, id: &str) -> Result<StateView, ApiError> {
        Ok(self.get(id)?.view())
    }

    pub async fn propagate(&self, id: &str) -> Result<PropagationReport, ApiError> {
        let session = self.get(id)?;
        let (report, _) = session
            .mutate(|state| Ok((state.propagate(), true)))
            .await?;
        self.persist(&session)?;
        Ok(report)
    }

    /// Forced assignments outside the candidates rebuild and re-propagate.
    pub async fn assign(&self, id: &str, request: AssignRequest) -> Result<StateView, ApiError> {
        let session = self.get(id)?;
        session
            .mutate(|state| {
                let outcome = state.assign(&request.unit, &request.category, request.force)?;
                match outcome {
                    softcat::AssignOutcome::Unchanged => Ok(((), false)),
                    softcat::AssignOutcome::Applied => Ok(((), true)),
                    softcat::AssignOutcome::Rebuilt => {
                        state.propagate();
                        Ok(((), true))
                    }
                }
            })
            .await?;
        self.persist(&session)?;
        Ok(session.view())
    }

    pub async fn undo(&self, id: &str) -> Result<StateView, ApiError> {
        let session = self.get(id)?;
        {
            let _writer = session.writer.lock().await;
            let committed = session.snapshot();
            if committed.history.len() <= 1 {
                return Err(ApiError::new(
                    409,
                    "NothingToUndo",
                    "history is at its initial snapshot",
                ));
            }
            let mut history = committed.history.clone();
            history.pop();
            *session.committed.write().expect("session lock poisoned") = Arc::new(Committed {
                history,
                modified: now(),
            });
        }
        self.persist(&session)?;
        Ok(session.view())
    }

    /// `specific` overrides the lattice's specific categories.
    pub fn candidates(
        &self,
        id: &str,
        specific: Option<&[&str]>,
    ) -> Result<CandidateReport, ApiError> {
        let state = self.get(id)?.current();
        let set = match specific {
            Some(ids) => Some(state.lattice().set_of(ids.iter().copied())?),
            None => None,
        };
        Ok(state.generation_candidates(set.as_ref())?)
    }

    pub fn violations(&self, id: &str) -> Result<ViolationReport, ApiError> {
        let state = self.get(id)?.current();
        let assignment = state.total_assignment()?;
        Ok(check_violations(
            state.graph(),
            state.lattice(),
            &assignment,
        )?)
    }

    pub fn export(&self, id: &str) -> Result<String, ApiError> {
        Ok(self.get(id)?.current().to_json())
    }

    pub fn explain(&self, id: &str, unit: &str) -> Result<Vec<NarrowingStep>, ApiError> {
        Ok(self.get(id)?.current().explain(unit)?)
    }
}

//! The software-category graph.
//!
//! Categories are connected by refinement edges pointing from a child to the
//! parent it refines. A class of a refining category may use classes of every
//! category it (transitively) refines; the root is refined by everything. The
//! graph must be acyclic with exactly one root, and everything else here, the
//! allowed-dependency matrix and the combination of two categories, is
//! derived from those refinement edges.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::{CatIx, CategorySet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Category {
    pub id: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
}

impl Category {
    pub fn new(id: impl Into<String>, name: impl Into<String>) -> Self {
        Category {
            id: id.into(),
            name: name.into(),
            description: String::new(),
        }
    }
}

/// `child` refines `parent`: code in `child` may use code in `parent`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Refinement {
    pub child: String,
    pub parent: String,
}

impl Refinement {
    pub fn new(child: impl Into<String>, parent: impl Into<String>) -> Self {
        Refinement {
            child: child.into(),
            parent: parent.into(),
        }
    }
}

/// On-disk form of a category graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub categories: Vec<Category>,
    #[serde(default)]
    pub refinements: Vec<Refinement>,
    pub root: String,
    #[serde(default)]
    pub specific: Vec<String>,
}

/// A single rule broken by a category graph document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "rule")]
pub enum LatticeIssue {
    EmptyId,
    DuplicateId { id: String },
    UnknownId { id: String, context: String },
    SelfRefinement { id: String },
    CycleDetected { path: Vec<String> },
    MultipleRoots { roots: Vec<String> },
    RootHasParents { root: String, parents: Vec<String> },
    UnreachableCategory { id: String },
}

impl LatticeIssue {
    pub fn code(&self) -> &'static str {
        match self {
            LatticeIssue::EmptyId => "EmptyId",
            LatticeIssue::DuplicateId { .. } => "DuplicateId",
            LatticeIssue::UnknownId { .. } => "UnknownId",
            LatticeIssue::SelfRefinement { .. } => "SelfRefinement",
            LatticeIssue::CycleDetected { .. } => "CycleDetected",
            LatticeIssue::MultipleRoots { .. } => "MultipleRoots",
            LatticeIssue::RootHasParents { .. } => "RootHasParents",
            LatticeIssue::UnreachableCategory { .. } => "UnreachableCategory",
        }
    }
}

impl fmt::Display for LatticeIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIssue::EmptyId => write!(f, "category with empty id"),
            LatticeIssue::DuplicateId { id } => write!(f, "duplicate category id `{id}`"),
            LatticeIssue::UnknownId { id, context } => {
                write!(f, "unknown category id `{id}` in {context}")
            }
            LatticeIssue::SelfRefinement { id } => write!(f, "category `{id}` refines itself"),
            LatticeIssue::CycleDetected { path } => {
                write!(f, "refinement cycle: {}", path.join(" -> "))
            }
            LatticeIssue::MultipleRoots { roots } => {
                write!(
                    f,
                    "more than one category without parents: {}",
                    roots.join(", ")
                )
            }
            LatticeIssue::RootHasParents { root, parents } => {
                write!(f, "root `{root}` refines {}", parents.join(", "))
            }
            LatticeIssue::UnreachableCategory { id } => {
                write!(f, "category `{id}` does not reach the root")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("invalid category graph: {}", join_issues(.0))]
    Invalid(Vec<LatticeIssue>),
    #[error("unknown category `{0}`")]
    UnknownId(String),
    #[error("`{0}` and `{1}` have no common refinement")]
    NoCommonRefinement(String, String),
    #[error("`{a}` and `{b}` combine ambiguously into any of {}", .candidates.join(", "))]
    AmbiguousCombination {
        a: String,
        b: String,
        candidates: Vec<String>,
    },
    #[error("malformed category graph document: {0}")]
    Parse(String),
}

impl LatticeError {
    /// Stable machine-readable code, used in API error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            LatticeError::Invalid(issues) => issues.first().map_or("Invalid", |i| i.code()),
            LatticeError::UnknownId(_) => "UnknownId",
            LatticeError::NoCommonRefinement(..) => "NoCommonRefinement",
            LatticeError::AmbiguousCombination { .. } => "AmbiguousCombination",
            LatticeError::Parse(_) => "ParseError",
        }
    }
}

fn join_issues(issues: &[LatticeIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A validated, immutable category graph with precomputed closures.
#[derive(Debug, Clone)]
pub struct CategoryLattice {
    categories: Vec<Category>,
    index: HashMap<String, CatIx>,
    refinements: Vec<Refinement>,
    parents: Vec<Vec<CatIx>>,
    root: CatIx,
    specific: CategorySet,
    ancestors: Vec<CategorySet>,
    descendants: Vec<CategorySet>,
    path_counts: Vec<u128>,
}

impl CategoryLattice {
    pub fn build(
        categories: Vec<Category>,
        refinements: Vec<Refinement>,
        root: impl Into<String>,
        specific: Vec<String>,
    ) -> Result<Self, LatticeError> {
        Self::from_document(LatticeDocument {
            categories,
            refinements,
            root: root.into(),
            specific,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let doc: LatticeDocument =
            serde_json::from_str(text).map_err(|e| LatticeError::Parse(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn from_document(doc: LatticeDocument) -> Result<Self, LatticeError> {
        let mut issues = Vec::new();

        let mut categories = doc.categories;
        categories.sort_by(|a, b| a.id.cmp(&b.id));
        let mut seen = BTreeSet::new();
        for c in &categories {
            if c.id.is_empty() {
                issues.push(LatticeIssue::EmptyId);
            } else if !seen.insert(c.id.as_str()) {
                issues.push(LatticeIssue::DuplicateId { id: c.id.clone() });
            }
        }
        categories.dedup_by(|a, b| a.id == b.id);
        categories.retain(|c| !c.id.is_empty());
        let index: HashMap<String, CatIx> = categories
            .iter()
            .enumerate()
            .map(|(i, c)| (c.id.clone(), CatIx(i)))
            .collect();
        let n = categories.len();

        let mut refinements: Vec<Refinement> = doc.refinements;
        refinements.sort();
        refinements.dedup();
        let mut parents: Vec<Vec<CatIx>> = vec![Vec::new(); n];
        for r in &refinements {
            let child = index.get(&r.child);
            let parent = index.get(&r.parent);
            for (id, found) in [(&r.child, child), (&r.parent, parent)] {
                if found.is_none() {
                    issues.push(LatticeIssue::UnknownId {
                        id: id.clone(),
                        context: format!("refinement {} -> {}", r.child, r.parent),
                    });
                }
            }
            if r.child == r.parent {
                issues.push(LatticeIssue::SelfRefinement {
                    id: r.child.clone(),
                });
                continue;
            }
            if let (Some(&c), Some(&p)) = (child, parent) {
                parents[c.0].push(p);
            }
        }

        let root = index.get(&doc.root).copied();
        if root.is_none() {
            issues.push(LatticeIssue::UnknownId {
                id: doc.root.clone(),
                context: "root".into(),
            });
        }
        let mut specific = CategorySet::empty(n);
        for s in &doc.specific {
            match index.get(s) {
                Some(&c) => specific.insert(c),
                None => issues.push(LatticeIssue::UnknownId {
                    id: s.clone(),
                    context: "specific".into(),
                }),
            }
        }

        for path in find_cycles(&parents) {
            issues.push(LatticeIssue::CycleDetected {
                path: path.iter().map(|c| categories[c.0].id.clone()).collect(),
            });
        }

        if let Some(root) = root {
            if !parents[root.0].is_empty() {
                issues.push(LatticeIssue::RootHasParents {
                    root: doc.root.clone(),
                    parents: parents[root.0]
                        .iter()
                        .map(|p| categories[p.0].id.clone())
                        .collect(),
                });
            }
            let parentless: Vec<String> = (0..n)
                .filter(|&i| parents[i].is_empty())
                .map(|i| categories[i].id.clone())
                .collect();
            if parentless.len() > 1 {
                issues.push(LatticeIssue::MultipleRoots { roots: parentless });
            }
            // Walk from the root against the refinement direction.
            let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
            for (c, ps) in parents.iter().enumerate() {
                for p in ps {
                    children[p.0].push(c);
                }
            }
            let mut reached = vec![false; n];
            let mut stack = vec![root.0];
            reached[root.0] = true;
            while let Some(x) = stack.pop() {
                for &c in &children[x] {
                    if !reached[c] {
                        reached[c] = true;
                        stack.push(c);
                    }
                }
            }
            for (i, ok) in reached.iter().enumerate() {
                if !ok {
                    issues.push(LatticeIssue::UnreachableCategory {
                        id: categories[i].id.clone(),
                    });
                }
            }
        }

        if !issues.is_empty() {
            return Err(LatticeError::Invalid(issues));
        }
        let root = root.expect("root checked above");

        let mut ancestors = Vec::with_capacity(n);
        for start in 0..n {
            let mut set = CategorySet::singleton(n, CatIx(start));
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for p in &parents[x] {
                    if !set.contains(*p) {
                        set.insert(*p);
                        stack.push(p.0);
                    }
                }
            }
            ancestors.push(set);
        }
        let mut descendants = vec![CategorySet::empty(n); n];
        for (c, anc) in ancestors.iter().enumerate() {
            for a in anc.iter() {
                descendants[a.0].insert(CatIx(c));
            }
        }

        // Ancestor-set size strictly decreases along every refinement edge,
        // so sorting by it gives a parents-first order.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| ancestors[i].len());
        let mut path_counts = vec![0u128; n];
        for &i in &order {
            path_counts[i] = if i == root.0 {
                1
            } else {
                parents[i]
                    .iter()
                    .fold(0u128, |acc, p| acc.saturating_add(path_counts[p.0]))
            };
        }

        Ok(CategoryLattice {
            categories,
            index,
            refinements,
            parents,
            root,
            specific,
            ancestors,
            descendants,
            path_counts,
        })
    }

    pub fn to_document(&self) -> LatticeDocument {
        LatticeDocument {
            categories: self.categories.clone(),
            refinements: self.refinements.clone(),
            root: self.id(self.root).to_string(),
            specific: self
                .specific
                .iter()
                .map(|c| self.id(c).to_string())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn refinements(&self) -> &[Refinement] {
        &self.refinements
    }

    pub fn indices(&self) -> impl Iterator<Item = CatIx> {
        (0..self.categories.len()).map(CatIx)
    }

    pub fn ix(&self, id: &str) -> Result<CatIx, LatticeError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| LatticeError::UnknownId(id.to_string()))
    }

    pub fn id(&self, c: CatIx) -> &str {
        &self.categories[c.0].id
    }

    pub fn category(&self, c: CatIx) -> &Category {
        &self.categories[c.0]
    }

    pub fn root(&self) -> CatIx {
        self.root
    }

    pub fn root_id(&self) -> &str {
        self.id(self.root)
    }

    pub fn parents(&self, c: CatIx) -> &[CatIx] {
        &self.parents[c.0]
    }

    /// The categories whose members are generation candidates.
    pub fn specific(&self) -> &CategorySet {
        &self.specific
    }

    pub fn empty_set(&self) -> CategorySet {
        CategorySet::empty(self.len())
    }

    pub fn full_set(&self) -> CategorySet {
        CategorySet::full(self.len())
    }

    /// Reflexive-transitive closure of `c` toward the root.
    pub fn ancestors(&self, c: CatIx) -> &CategorySet {
        &self.ancestors[c.0]
    }

    /// Every category that reaches `c`, including `c`.
    pub fn descendants(&self, c: CatIx) -> &CategorySet {
        &self.descendants[c.0]
    }

    /// Union of the ancestor sets of every member.
    pub fn up_closure(&self, set: &CategorySet) -> CategorySet {
        let mut out = self.empty_set();
        for c in set.iter() {
            out.union_with(&self.ancestors[c.0]);
        }
        out
    }

    /// Union of the descendant sets of every member.
    pub fn down_closure(&self, set: &CategorySet) -> CategorySet {
        let mut out = self.empty_set();
        for c in set.iter() {
            out.union_with(&self.descendants[c.0]);
        }
        out
    }

    pub fn ancestors_of(&self, id: &str) -> Result<Vec<&str>, LatticeError> {
        let c = self.ix(id)?;
        Ok(self.ids(self.ancestors(c)))
    }

    pub fn descendants_of(&self, id: &str) -> Result<Vec<&str>, LatticeError> {
        let c = self.ix(id)?;
        Ok(self.ids(self.descendants(c)))
    }

    /// Number of distinct refinement paths from `c` to the root. The root
    /// itself has exactly one (the empty path).
    pub fn path_count(&self, c: CatIx) -> u128 {
        self.path_counts[c.0]
    }

    pub fn is_pure(&self, id: &str) -> Result<bool, LatticeError> {
        Ok(self.path_count(self.ix(id)?) == 1)
    }

    /// Whether a `from`-class may depend on a `to`-class.
    pub fn allows(&self, from: CatIx, to: CatIx) -> bool {
        self.ancestors[from.0].contains(to)
    }

    pub fn may_depend(&self, from: &str, to: &str) -> Result<bool, LatticeError> {
        Ok(self.allows(self.ix(from)?, self.ix(to)?))
    }

    pub fn allowed_matrix(&self) -> DependencyMatrix {
        let ids: Vec<String> = self.categories.iter().map(|c| c.id.clone()).collect();
        let cells = self
            .indices()
            .map(|from| self.indices().map(|to| self.allows(from, to)).collect())
            .collect();
        DependencyMatrix { ids, cells }
    }

    /// The most general category refining both `a` and `b`.
    pub fn combine_ix(&self, a: CatIx, b: CatIx) -> Result<CatIx, LatticeError> {
        let mut common = self.descendants[a.0].clone();
        common.intersect_with(&self.descendants[b.0]);
        if common.is_empty() {
            return Err(LatticeError::NoCommonRefinement(
                self.id(a).to_string(),
                self.id(b).to_string(),
            ));
        }
        // Keep the members that refine no other member of the intersection.
        let tops: Vec<CatIx> = common
            .iter()
            .filter(|&x| {
                common
                    .iter()
                    .all(|y| y == x || !self.ancestors[x.0].contains(y))
            })
            .collect();
        match tops.as_slice() {
            [only] => Ok(*only),
            _ => Err(LatticeError::AmbiguousCombination {
                a: self.id(a).to_string(),
                b: self.id(b).to_string(),
                candidates: tops.iter().map(|c| self.id(*c).to_string()).collect(),
            }),
        }
    }

    pub fn combine(&self, a: &str, b: &str) -> Result<&str, LatticeError> {
        let c = self.combine_ix(self.ix(a)?, self.ix(b)?)?;
        Ok(self.id(c))
    }

    /// Ids of a set's members in index (lexicographic) order.
    pub fn ids<'a>(&'a self, set: &CategorySet) -> Vec<&'a str> {
        set.iter().map(|c| self.id(c)).collect()
    }

    pub fn owned_ids(&self, set: &CategorySet) -> Vec<String> {
        set.iter().map(|c| self.id(c).to_string()).collect()
    }

    pub fn set_of<'s>(
        &self,
        ids: impl IntoIterator<Item = &'s str>,
    ) -> Result<CategorySet, LatticeError> {
        let mut set = self.empty_set();
        for id in ids {
            set.insert(self.ix(id)?);
        }
        Ok(set)
    }
}

/// Cycles in the parent relation, each reported once as a closed path.
fn find_cycles(parents: &[Vec<CatIx>]) -> Vec<Vec<CatIx>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        OnStack,
        Done,
    }
    let n = parents.len();
    let mut mark = vec![Mark::New; n];
    let mut found: BTreeMap<Vec<usize>, Vec<CatIx>> = BTreeMap::new();
    for start in 0..n {
        if mark[start] != Mark::New {
            continue;
        }
        // Iterative DFS; each frame is (node, next parent to visit).
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        mark[start] = Mark::OnStack;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(p) = parents[node].get(*next) {
                *next += 1;
                match mark[p.0] {
                    Mark::New => {
                        mark[p.0] = Mark::OnStack;
                        stack.push((p.0, 0));
                    }
                    Mark::OnStack => {
                        let from = stack.iter().position(|(x, _)| *x == p.0).unwrap();
                        let mut path: Vec<CatIx> =
                            stack[from..].iter().map(|(x, _)| CatIx(*x)).collect();
                        let mut key: Vec<usize> = path.iter().map(|c| c.0).collect();
                        key.sort_unstable();
                        path.push(*p);
                        found.entry(key).or_insert(path);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                stack.pop();
            }
        }
    }
    found.into_values().collect()
}

/// Allowed dependencies between every ordered pair of categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DependencyMatrix {
    pub ids: Vec<String>,
    /// `cells[from][to]`
    pub cells: Vec<Vec<bool>>,
}

impl DependencyMatrix {
    pub fn get(&self, from: &str, to: &str) -> Option<bool> {
        let f = self.ids.iter().position(|x| x == from)?;
        let t = self.ids.iter().position(|x| x == to)?;
        Some(self.cells[f][t])
    }
}

impl fmt::Display for DependencyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.ids.iter().map(String::len).max().unwrap_or(1).max(2);
        write!(f, "{:width$}", "->")?;
        for id in &self.ids {
            write!(f, " {id:>width$}")?;
        }
        writeln!(f)?;
        for (id, row) in self.ids.iter().zip(&self.cells) {
            write!(f, "{id:width$}")?;
            for &cell in row {
                write!(f, " {:>width$}", if cell { "✓" } else { "×" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

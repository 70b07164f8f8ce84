//! Code units and the typed dependency edges between them.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    Class,
    Interface,
}

/// How one unit depends on another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DependencyKind {
    /// `class A extends B`
    Inheritance,
    /// `class A implements I`
    Implementation,
    /// `import b.B;`
    Import,
    /// `new B()`
    Instantiation,
    /// `throws B`
    ExceptionThrowing,
    /// Declarations, parameters, field accesses, method calls and any other mention.
    Usage,
    /// The depended-on unit's name is a prefix of the depending unit's name.
    Naming,
}

impl DependencyKind {
    pub const ALL: [DependencyKind; 7] = [
        DependencyKind::Inheritance,
        DependencyKind::Implementation,
        DependencyKind::Import,
        DependencyKind::Instantiation,
        DependencyKind::ExceptionThrowing,
        DependencyKind::Usage,
        DependencyKind::Naming,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DependencyKind::Inheritance => "Inheritance",
            DependencyKind::Implementation => "Implementation",
            DependencyKind::Import => "Import",
            DependencyKind::Instantiation => "Instantiation",
            DependencyKind::ExceptionThrowing => "ExceptionThrowing",
            DependencyKind::Usage => "Usage",
            DependencyKind::Naming => "Naming",
        }
    }
}

impl fmt::Display for DependencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown dependency kind `{0}`")]
pub struct UnknownKind(pub String);

impl FromStr for DependencyKind {
    type Err = UnknownKind;

    /// Case-insensitive.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DependencyKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownKind(s.to_string()))
    }
}

/// A `file:line` position in the source corpus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub file: String,
    pub line: u32,
}

impl Location {
    pub fn new(file: impl Into<String>, line: u32) -> Self {
        Location {
            file: file.into(),
            line,
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.file, self.line)
    }
}

impl FromStr for Location {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (file, line) = s
            .rsplit_once(':')
            .ok_or_else(|| format!("location `{s}` is not file:line"))?;
        let line = line
            .parse()
            .map_err(|_| format!("location `{s}` has a non-numeric line"))?;
        Ok(Location::new(file, line))
    }
}

impl Serialize for Location {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Location {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeUnit {
    /// Fully qualified name.
    pub id: String,
    pub simple_name: String,
    pub kind: UnitKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
    /// Referenced by the corpus but not declared in it.
    #[serde(default)]
    pub external: bool,
}

impl CodeUnit {
    pub fn class(id: impl Into<String>) -> Self {
        let id = id.into();
        let simple_name = simple_name_of(&id).to_string();
        CodeUnit {
            id,
            simple_name,
            kind: UnitKind::Class,
            location: None,
            external: false,
        }
    }
}

pub(crate) fn simple_name_of(id: &str) -> &str {
    id.rsplit('.').next().unwrap_or(id)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependencyEdge {
    pub from: String,
    pub to: String,
    pub kind: DependencyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl DependencyEdge {
    pub fn new(from: impl Into<String>, to: impl Into<String>, kind: DependencyKind) -> Self {
        DependencyEdge {
            from: from.into(),
            to: to.into(),
            kind,
            location: None,
        }
    }

    pub fn at(mut self, location: Location) -> Self {
        self.location = Some(location);
        self
    }

    pub fn is_self_edge(&self) -> bool {
        self.from == self.to
    }
}

impl Ord for DependencyEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.from, &self.to, self.kind, &self.location).cmp(&(
            &other.from,
            &other.to,
            other.kind,
            &other.location,
        ))
    }
}

impl PartialOrd for DependencyEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DependencyEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} ({})", self.from, self.to, self.kind)?;
        if let Some(loc) = &self.location {
            write!(f, " at {loc}")?;
        }
        Ok(())
    }
}

/// On-disk form of a dependency graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub units: Vec<CodeUnit>,
    #[serde(default)]
    pub edges: Vec<DependencyEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("malformed graph document at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("edge {from} -> {to} references unknown unit `{missing}`")]
    DanglingEndpoint {
        from: String,
        to: String,
        missing: String,
    },
    #[error("duplicate unit id `{0}`")]
    DuplicateUnitId(String),
    #[error("unit `{0}` has an empty id or simple name")]
    EmptyName(String),
}

impl GraphError {
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::Parse { .. } => "ParseError",
            GraphError::DanglingEndpoint { .. } => "DanglingEndpoint",
            GraphError::DuplicateUnitId(_) => "DuplicateUnitId",
            GraphError::EmptyName(_) => "EmptyName",
        }
    }
}

/// Units sorted by id and edges in canonical `(from, to, kind, location)`
/// order. Cycles and self-edges are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    units: Vec<CodeUnit>,
    edges: Vec<DependencyEdge>,
    index: HashMap<String, usize>,
}

impl DependencyGraph {
    pub fn new(
        mut units: Vec<CodeUnit>,
        mut edges: Vec<DependencyEdge>,
    ) -> Result<Self, GraphError> {
        units.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = HashMap::with_capacity(units.len());
        for (i, u) in units.iter().enumerate() {
            if u.id.is_empty() || u.simple_name.is_empty() {
                return Err(GraphError::EmptyName(u.id.clone()));
            }
            if index.insert(u.id.clone(), i).is_some() {
                return Err(GraphError::DuplicateUnitId(u.id.clone()));
            }
        }
        for e in &edges {
            for end in [&e.from, &e.to] {
                if !index.contains_key(end) {
                    return Err(GraphError::DanglingEndpoint {
                        from: e.from.clone(),
                        to: e.to.clone(),
                        missing: end.clone(),
                    });
                }
            }
        }
        edges.sort();
        Ok(DependencyGraph {
            units,
            edges,
            index,
        })
    }

    pub fn from_document(doc: GraphDocument) -> Result<Self, GraphError> {
        Self::new(doc.units, doc.edges)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|e| GraphError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_document(doc)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            units: self.units.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Canonical pretty-printed JSON; identical graphs give identical bytes.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_document()).expect("graph serializes");
        text.push('\n');
        text
    }

    pub fn units(&self) -> &[CodeUnit] {
        &self.units
    }

    pub fn edges(&self) -> &[DependencyEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Position of a unit in [`units`](Self::units).
    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn unit(&self, id: &str) -> Option<&CodeUnit> {
        self.position(id).map(|i| &self.units[i])
    }

    /// Keeps only edges whose kind is listed; units are untouched.
    pub fn filter_by_kind(&self, kinds: &[DependencyKind]) -> DependencyGraph {
        let keep: BTreeSet<DependencyKind> = kinds.iter().copied().collect();
        DependencyGraph {
            units: self.units.clone(),
            edges: self
                .edges
                .iter()
                .filter(|e| keep.contains(&e.kind))
                .cloned()
                .collect(),
            index: self.index.clone(),
        }
    }

    /// Adds a `Naming` edge from each unit to the unit whose simple name is
    /// the longest strict prefix of its own simple name, considering only
    /// names of at least `min_prefix` characters. Matching is
    /// case-sensitive. Units sharing the longest matching name all receive
    /// an edge. Existing edges are kept and re-running adds nothing.
    pub fn add_naming_edges(&self, min_prefix: usize) -> DependencyGraph {
        let min_prefix = min_prefix.max(1);
        let existing: BTreeSet<(&str, &str)> = self
            .edges
            .iter()
            .filter(|e| e.kind == DependencyKind::Naming)
            .map(|e| (e.from.as_str(), e.to.as_str()))
            .collect();
        let mut added = Vec::new();
        for u in &self.units {
            let mut best: Vec<&CodeUnit> = Vec::new();
            for v in &self.units {
                let prefix = &v.simple_name;
                if v.id == u.id
                    || prefix.chars().count() < min_prefix
                    || prefix.len() >= u.simple_name.len()
                    || !u.simple_name.starts_with(prefix.as_str())
                {
                    continue;
                }
                match best.first() {
                    Some(b) if b.simple_name.len() > prefix.len() => {}
                    Some(b) if b.simple_name.len() == prefix.len() => best.push(v),
                    _ => best = vec![v],
                }
            }
            for v in best {
                if !existing.contains(&(u.id.as_str(), v.id.as_str())) {
                    added.push(DependencyEdge::new(&u.id, &v.id, DependencyKind::Naming));
                }
            }
        }
        let mut edges = self.edges.clone();
        edges.extend(added);
        edges.sort();
        DependencyGraph {
            units: self.units.clone(),
            edges,
            index: self.index.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(names: &[&str], edges: Vec<DependencyEdge>) -> DependencyGraph {
        DependencyGraph::new(names.iter().map(|n| CodeUnit::class(*n)).collect(), edges).unwrap()
    }

    fn naming_pairs(g: &DependencyGraph) -> Vec<(String, String)> {
        g.edges()
            .iter()
            .filter(|e| e.kind == DependencyKind::Naming)
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect()
    }

    #[test]
    fn loads_two_unit_document() {
        let text = r#"{
          "units": [
            {"id": "lib.CookBook", "simple_name": "CookBook", "kind": "class"},
            {"id": "lib.Book", "simple_name": "Book", "kind": "class", "location": "Book.ext:1"}
          ],
          "edges": [{"from": "lib.CookBook", "to": "lib.Book", "kind": "Usage"}]
        }"#;
        let g = DependencyGraph::from_json(text).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.units()[0].id, "lib.Book");
        assert_eq!(g.units()[0].location, Some(Location::new("Book.ext", 1)));
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn empty_document() {
        let g = DependencyGraph::from_json(r#"{"units":[],"edges":[]}"#).unwrap();
        assert!(g.is_empty() && g.edges().is_empty());
    }

    #[test]
    fn dangling_endpoint_is_rejected() {
        let text = r#"{"units":[{"id":"A","simple_name":"A","kind":"class"}],
                       "edges":[{"from":"A","to":"B","kind":"Usage"}]}"#;
        assert!(matches!(
            DependencyGraph::from_json(text),
            Err(GraphError::DanglingEndpoint { missing, .. }) if missing == "B"
        ));
    }

    #[test]
    fn duplicate_unit_is_rejected() {
        let err = DependencyGraph::new(vec![CodeUnit::class("A"), CodeUnit::class("A")], vec![])
            .unwrap_err();
        assert_eq!(err, GraphError::DuplicateUnitId("A".into()));
    }

    #[test]
    fn parse_error_carries_position() {
        let err = DependencyGraph::from_json("{\n  \"units\": [,]\n}").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }), "{err:?}");
        let err = DependencyGraph::from_json(r#"{"units":[],"extra":1}"#).unwrap_err();
        assert_eq!(err.code(), "ParseError");
    }

    #[test]
    fn keeps_self_edges_and_parallel_kinds() {
        let g = graph(
            &["A", "B"],
            vec![
                DependencyEdge::new("A", "A", DependencyKind::Usage),
                DependencyEdge::new("A", "B", DependencyKind::Usage),
                DependencyEdge::new("A", "B", DependencyKind::Import),
            ],
        );
        assert_eq!(g.edges().len(), 3);
        let back = DependencyGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn naming_prefix_rule() {
        let g = graph(&["lib.CookBookPanel", "lib.CookBook"], vec![]).add_naming_edges(3);
        assert_eq!(
            naming_pairs(&g),
            [("lib.CookBookPanel".to_string(), "lib.CookBook".to_string())]
        );
        assert!(g.edges()[0].location.is_none());

        let g = graph(&["Reader", "Author"], vec![]).add_naming_edges(3);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn naming_longest_match_only() {
        let g = graph(
            &["CookBookPanelHeader", "CookBookPanel", "CookBook"],
            vec![],
        )
        .add_naming_edges(3);
        assert_eq!(
            naming_pairs(&g),
            [
                ("CookBookPanel".to_string(), "CookBook".to_string()),
                (
                    "CookBookPanelHeader".to_string(),
                    "CookBookPanel".to_string()
                ),
            ]
        );
    }

    #[test]
    fn naming_respects_minimum_and_case() {
        let g = graph(&["Ab", "AbView", "cookBook", "CookBookView"], vec![]);
        assert!(g.add_naming_edges(3).edges().is_empty());
        assert_eq!(naming_pairs(&g.add_naming_edges(2)).len(), 1);
    }

    #[test]
    fn naming_is_idempotent() {
        let g = graph(
            &["CookBookPanelHeader", "CookBookPanel", "CookBook"],
            vec![],
        );
        let once = g.add_naming_edges(3);
        assert_eq!(once.add_naming_edges(3), once);
    }

    #[test]
    fn kind_filter() {
        let g = graph(
            &["A", "B"],
            vec![
                DependencyEdge::new("A", "B", DependencyKind::Import),
                DependencyEdge::new("A", "B", DependencyKind::Usage),
            ],
        );
        assert_eq!(g.filter_by_kind(&DependencyKind::ALL), g);
        let none = g.filter_by_kind(&[]);
        assert!(none.edges().is_empty());
        assert_eq!(none.len(), 2);
        let usage = g.filter_by_kind(&[DependencyKind::Usage]);
        assert_eq!(usage.edges().len(), 1);
        assert_eq!(usage.edges()[0].kind, DependencyKind::Usage);
    }

    #[test]
    fn kind_names_parse() {
        assert_eq!("usage".parse::<DependencyKind>(), Ok(DependencyKind::Usage));
        assert_eq!(
            "ExceptionThrowing".parse::<DependencyKind>(),
            Ok(DependencyKind::ExceptionThrowing)
        );
        assert!("Calls".parse::<DependencyKind>().is_err());
    }
}

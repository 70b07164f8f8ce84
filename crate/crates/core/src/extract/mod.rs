//! Dependency extraction from a small class-based source dialect.
//!
//! Supported forms: `package p;`, `import a.b.C;` (also `.*` and `static`),
//! `class A extends B implements I, J { ... }`, `interface I extends K, L { ... }`
//! with modifiers and annotations in front. Bodies are not parsed into a
//! grammar; they are scanned token by token for `new T`, `throws T`,
//! declarations `T name`, member access through a declared variable and any
//! other mention of a known type.

mod lexer;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use globset::{Glob, GlobMatcher};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{
    simple_name_of, CodeUnit, DependencyEdge, DependencyGraph, DependencyKind, GraphError,
    Location, UnitKind,
};
use crate::inference::{Provenance, SeedAssignment};
use lexer::{tokenize, Tok, Token};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("{file}:{line}: {message}")]
    Lex {
        file: String,
        line: u32,
        message: String,
    },
    #[error("{file}:{line}: unsupported construct: {construct}")]
    UnsupportedConstruct {
        file: String,
        line: u32,
        construct: String,
    },
    #[error("type `{id}` is declared in both {first} and {second}")]
    DuplicateDeclaration {
        id: String,
        first: String,
        second: String,
    },
    #[error("invalid package pattern `{pattern}`: {message}")]
    Pattern { pattern: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path} is not valid UTF-8")]
    Encoding { path: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Maps referenced-but-undeclared types onto external units seeded with a
/// category. Patterns are globs over fully qualified names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackagePattern {
    pub pattern: String,
    pub category: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackageMap {
    pub patterns: Vec<PackagePattern>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionConfig {
    pub ignore_unused_imports: bool,
    /// Matched in order; the first match wins.
    pub package_seed_patterns: Vec<PackagePattern>,
    pub naming_enabled: bool,
    pub naming_min_prefix: usize,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            ignore_unused_imports: false,
            package_seed_patterns: Vec::new(),
            naming_enabled: false,
            naming_min_prefix: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    /// Path as it should appear in locations, `/`-separated.
    pub path: String,
    pub text: String,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        SourceFile {
            path: path.into(),
            text: text.into(),
        }
    }
}

/// A type reference that could not be resolved and was dropped.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Unresolved {
    pub location: Location,
    pub name: String,
    pub context: &'static str,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub graph: DependencyGraph,
    /// Seeds for external units picked up through package patterns.
    pub seeds: Vec<SeedAssignment>,
    pub warnings: Vec<Unresolved>,
}

/// Reads every non-hidden regular file below `dir`, in path order.
pub fn read_sources(dir: &Path) -> Result<Vec<SourceFile>, ExtractError> {
    let mut files = Vec::new();
    let walker = walkdir::WalkDir::new(dir)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|e| e.depth() == 0 || !e.file_name().to_string_lossy().starts_with('.'));
    for entry in walker {
        let entry = entry.map_err(|e| ExtractError::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry.path().strip_prefix(dir).unwrap_or(entry.path());
        let rel = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        let bytes = std::fs::read(entry.path()).map_err(|e| ExtractError::Io {
            path: entry.path().display().to_string(),
            message: e.to_string(),
        })?;
        let text =
            String::from_utf8(bytes).map_err(|_| ExtractError::Encoding { path: rel.clone() })?;
        files.push(SourceFile::new(rel, text));
    }
    Ok(files)
}

pub fn extract_dir(dir: &Path, config: &ExtractionConfig) -> Result<Extraction, ExtractError> {
    let files = read_sources(dir)?;
    extract_from_source(&files, config)
}

pub fn extract_from_source(
    files: &[SourceFile],
    config: &ExtractionConfig,
) -> Result<Extraction, ExtractError> {
    let patterns = config
        .package_seed_patterns
        .iter()
        .map(|p| {
            Glob::new(&p.pattern)
                .map(|g| (g.compile_matcher(), p.category.clone()))
                .map_err(|e| ExtractError::Pattern {
                    pattern: p.pattern.clone(),
                    message: e.to_string(),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut sorted: Vec<&SourceFile> = files.iter().collect();
    sorted.sort_by(|a, b| a.path.cmp(&b.path));
    let parsed = sorted
        .iter()
        .map(|f| parse_file(f))
        .collect::<Result<Vec<_>, _>>()?;

    let mut declared: BTreeMap<String, (UnitKind, Location)> = BTreeMap::new();
    for file in &parsed {
        for decl in &file.types {
            let id = qualify(&file.package, &decl.name);
            let here = Location::new(&file.path, decl.line);
            if let Some((_, first)) = declared.get(&id) {
                return Err(ExtractError::DuplicateDeclaration {
                    id,
                    first: first.to_string(),
                    second: here.to_string(),
                });
            }
            declared.insert(id, (decl.kind, here));
        }
    }

    let ctx = Context {
        declared: &declared,
        patterns: &patterns,
    };
    let mut out = Output::default();
    for file in &parsed {
        extract_file(&ctx, file, config, &mut out);
    }

    let mut units: Vec<CodeUnit> = declared
        .iter()
        .map(|(id, (kind, loc))| CodeUnit {
            id: id.clone(),
            simple_name: simple_name_of(id).to_string(),
            kind: *kind,
            location: Some(loc.clone()),
            external: false,
        })
        .collect();
    let mut seeds = Vec::new();
    for (id, category) in &out.externals {
        units.push(CodeUnit {
            id: id.clone(),
            simple_name: simple_name_of(id).to_string(),
            kind: UnitKind::Class,
            location: None,
            external: true,
        });
        seeds.push(SeedAssignment {
            unit: id.clone(),
            category: category.clone(),
            provenance: Provenance::Seed,
        });
    }

    let mut graph = DependencyGraph::new(units, out.edges)?;
    if config.naming_enabled {
        graph = graph.add_naming_edges(config.naming_min_prefix);
    }
    Ok(Extraction {
        graph,
        seeds,
        warnings: out.warnings.into_iter().collect(),
    })
}

fn qualify(package: &str, name: &str) -> String {
    if package.is_empty() {
        name.to_string()
    } else {
        format!("{package}.{name}")
    }
}

struct Import {
    path: Vec<String>,
    wildcard: bool,
    is_static: bool,
    line: u32,
}

struct TypeDecl {
    name: String,
    kind: UnitKind,
    line: u32,
    /// `(kind, qualified name, line)` for each `extends`/`implements` target.
    supertypes: Vec<(DependencyKind, Vec<String>, u32)>,
    /// Type-parameter and generic-argument tokens from the header.
    header_rest: Vec<Token>,
    body: Vec<Token>,
}

struct ParsedFile {
    path: String,
    package: String,
    imports: Vec<Import>,
    types: Vec<TypeDecl>,
    /// Identifiers outside `package`/`import` statements.
    mentioned: BTreeSet<String>,
}

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "abstract",
    "final",
    "static",
    "sealed",
    "strictfp",
];

const KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "false",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "null",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "true",
    "try",
    "var",
    "void",
    "volatile",
    "while",
];

fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

fn unsupported(path: &str, line: u32, construct: impl Into<String>) -> ExtractError {
    ExtractError::UnsupportedConstruct {
        file: path.to_string(),
        line,
        construct: construct.into(),
    }
}

/// Reads `Ident (. Ident)*` starting at `i`; returns the segments and the
/// index after them.
fn read_qualified(tokens: &[Token], mut i: usize) -> Option<(Vec<String>, usize)> {
    let mut segments = vec![tokens.get(i)?.ident()?.to_string()];
    i += 1;
    while tokens.get(i).is_some_and(|t| t.is('.')) {
        match tokens.get(i + 1).and_then(Token::ident) {
            Some(s) => {
                segments.push(s.to_string());
                i += 2;
            }
            None => break,
        }
    }
    Some((segments, i))
}

fn parse_file(file: &SourceFile) -> Result<ParsedFile, ExtractError> {
    let tokens = tokenize(&file.path, &file.text)?;
    let path = file.path.as_str();
    let mut parsed = ParsedFile {
        path: file.path.clone(),
        package: String::new(),
        imports: Vec::new(),
        types: Vec::new(),
        mentioned: BTreeSet::new(),
    };
    let expect_semicolon = |i: usize, line: u32, what: &str| -> Result<usize, ExtractError> {
        match tokens.get(i) {
            Some(t) if t.is(';') => Ok(i + 1),
            _ => Err(unsupported(
                path,
                line,
                format!("malformed {what} statement"),
            )),
        }
    };

    let mut i = 0;
    while i < tokens.len() {
        let t = &tokens[i];
        let line = t.line;
        match &t.tok {
            Tok::Punct(';') => i += 1,
            Tok::Punct('@') => {
                if tokens.get(i + 1).is_some_and(|n| n.is_word("interface")) {
                    return Err(unsupported(path, line, "annotation type declaration"));
                }
                let (_, mut j) = read_qualified(&tokens, i + 1)
                    .ok_or_else(|| unsupported(path, line, "dangling `@`"))?;
                if tokens.get(j).is_some_and(|n| n.is('(')) {
                    j = skip_balanced(&tokens, j, '(', ')')
                        .ok_or_else(|| unsupported(path, line, "unclosed annotation"))?;
                }
                i = j;
            }
            Tok::Ident(word) => match word.as_str() {
                "package" => {
                    let (segments, j) = read_qualified(&tokens, i + 1)
                        .ok_or_else(|| unsupported(path, line, "malformed package statement"))?;
                    parsed.package = segments.join(".");
                    i = expect_semicolon(j, line, "package")?;
                }
                "import" => {
                    let mut j = i + 1;
                    let is_static = tokens.get(j).is_some_and(|n| n.is_word("static"));
                    if is_static {
                        j += 1;
                    }
                    let (segments, mut j) = read_qualified(&tokens, j)
                        .ok_or_else(|| unsupported(path, line, "malformed import statement"))?;
                    let wildcard = tokens.get(j).is_some_and(|n| n.is('.'))
                        && tokens.get(j + 1).is_some_and(|n| n.is('*'));
                    if wildcard {
                        j += 2;
                    }
                    parsed.imports.push(Import {
                        path: segments,
                        wildcard,
                        is_static,
                        line,
                    });
                    i = expect_semicolon(j, line, "import")?;
                }
                "class" | "interface" => {
                    let (decl, j) = parse_type(path, &tokens, i)?;
                    parsed.types.push(decl);
                    i = j;
                }
                "enum" | "record" => {
                    return Err(unsupported(path, line, format!("`{word}` declaration")));
                }
                w if MODIFIERS.contains(&w) => i += 1,
                other => {
                    return Err(unsupported(
                        path,
                        line,
                        format!("unexpected `{other}` at top level"),
                    ));
                }
            },
            Tok::Punct(c) => {
                return Err(unsupported(
                    path,
                    line,
                    format!("unexpected `{c}` at top level"),
                ));
            }
            Tok::Literal => return Err(unsupported(path, line, "literal at top level")),
        }
    }

    for decl in &parsed.types {
        parsed.mentioned.insert(decl.name.clone());
        for (_, segs, _) in &decl.supertypes {
            parsed.mentioned.extend(segs.iter().cloned());
        }
        for t in decl.header_rest.iter().chain(&decl.body) {
            if let Some(w) = t.ident() {
                parsed.mentioned.insert(w.to_string());
            }
        }
    }
    Ok(parsed)
}

/// `tokens[open]` is `open_c`; returns the index after its partner.
fn skip_balanced(tokens: &[Token], open: usize, open_c: char, close_c: char) -> Option<usize> {
    let mut depth = 0usize;
    for (k, t) in tokens.iter().enumerate().skip(open) {
        if t.is(open_c) {
            depth += 1;
        } else if t.is(close_c) {
            depth -= 1;
            if depth == 0 {
                return Some(k + 1);
            }
        }
    }
    None
}

fn parse_type(
    path: &str,
    tokens: &[Token],
    start: usize,
) -> Result<(TypeDecl, usize), ExtractError> {
    let kw = &tokens[start];
    let kind = if kw.is_word("class") {
        UnitKind::Class
    } else {
        UnitKind::Interface
    };
    let name = tokens
        .get(start + 1)
        .and_then(Token::ident)
        .filter(|n| !is_keyword(n))
        .ok_or_else(|| unsupported(path, kw.line, "type declaration without a name"))?
        .to_string();

    let mut supertypes = Vec::new();
    let mut header_rest = Vec::new();
    let mut clause: Option<DependencyKind> = None;
    let mut depth = 0usize;
    let mut i = start + 2;
    loop {
        let t = tokens
            .get(i)
            .ok_or_else(|| unsupported(path, kw.line, format!("`{name}` has no body")))?;
        if depth == 0 && t.is('{') {
            break;
        }
        if t.is('<') {
            depth += 1;
            header_rest.push(t.clone());
            i += 1;
            continue;
        }
        if t.is('>') {
            depth = depth.saturating_sub(1);
            header_rest.push(t.clone());
            i += 1;
            continue;
        }
        if depth > 0 {
            header_rest.push(t.clone());
            i += 1;
            continue;
        }
        match t.ident() {
            Some("extends") => {
                clause = Some(DependencyKind::Inheritance);
                i += 1;
            }
            Some("implements") => {
                clause = Some(DependencyKind::Implementation);
                i += 1;
            }
            Some(_) if clause.is_some() => {
                let (segments, j) = read_qualified(tokens, i).expect("identifier present");
                supertypes.push((clause.unwrap(), segments, t.line));
                i = j;
            }
            _ if t.is(',') && clause.is_some() => i += 1,
            _ => {
                return Err(unsupported(
                    path,
                    t.line,
                    format!("unexpected token in header of `{name}`"),
                ));
            }
        }
    }
    let open = i;
    let end = skip_balanced(tokens, open, '{', '}')
        .ok_or_else(|| unsupported(path, kw.line, format!("unterminated body of `{name}`")))?;
    let body: Vec<Token> = tokens[open + 1..end - 1].to_vec();
    for (k, t) in body.iter().enumerate() {
        if matches!(t.ident(), Some("class" | "interface" | "enum" | "record"))
            && !(k > 0 && body[k - 1].is('.'))
        {
            return Err(unsupported(path, t.line, "nested type declaration"));
        }
    }
    Ok((
        TypeDecl {
            name,
            kind,
            line: kw.line,
            supertypes,
            header_rest,
            body,
        },
        end,
    ))
}

struct Context<'a> {
    declared: &'a BTreeMap<String, (UnitKind, Location)>,
    patterns: &'a [(GlobMatcher, String)],
}

impl Context<'_> {
    fn pattern_category(&self, fqn: &str) -> Option<&str> {
        self.patterns
            .iter()
            .find(|(m, _)| m.is_match(fqn))
            .map(|(_, c)| c.as_str())
    }
}

#[derive(Default)]
struct Output {
    edges: Vec<DependencyEdge>,
    externals: BTreeMap<String, String>,
    warnings: BTreeSet<Unresolved>,
}

/// Name resolution for one file.
struct Scope<'a> {
    ctx: &'a Context<'a>,
    package: &'a str,
    /// Simple name to fully qualified name, from single-type imports.
    explicit: HashMap<&'a str, String>,
    wildcards: Vec<String>,
}

impl<'a> Scope<'a> {
    fn new(ctx: &'a Context<'a>, file: &'a ParsedFile) -> Self {
        let mut explicit = HashMap::new();
        let mut wildcards = Vec::new();
        for imp in &file.imports {
            if imp.wildcard {
                wildcards.push(imp.path.join("."));
            } else if let Some(type_path) = import_type_path(imp) {
                explicit.insert(type_path.last().unwrap().as_str(), type_path.join("."));
            }
        }
        Scope {
            ctx,
            package: &file.package,
            explicit,
            wildcards,
        }
    }

    /// Declared unit, or external unit if a pattern covers the name.
    fn by_fqn(&self, fqn: &str, out: &mut Output) -> Option<String> {
        if self.ctx.declared.contains_key(fqn) {
            return Some(fqn.to_string());
        }
        let category = self.ctx.pattern_category(fqn)?;
        out.externals
            .entry(fqn.to_string())
            .or_insert_with(|| category.to_string());
        Some(fqn.to_string())
    }

    fn simple(&self, name: &str, out: &mut Output) -> Option<String> {
        if let Some(fqn) = self.explicit.get(name) {
            return self.by_fqn(fqn, out);
        }
        let local = qualify(self.package, name);
        if self.ctx.declared.contains_key(&local) {
            return Some(local);
        }
        self.wildcards
            .iter()
            .map(|p| qualify(p, name))
            .find(|fqn| self.ctx.declared.contains_key(fqn))
    }

    /// Resolves a dotted path to a unit; returns how many segments name it.
    fn path(&self, segments: &[String], out: &mut Output) -> Option<(String, usize)> {
        for k in (2..=segments.len()).rev() {
            let fqn = segments[..k].join(".");
            if self.ctx.declared.contains_key(&fqn) {
                return Some((fqn, k));
            }
        }
        // Conventional `lower.case.package.Type` spelling for external types.
        if let Some(k) = segments.iter().position(|s| starts_upper(s)) {
            if k >= 1 && segments[..k].iter().all(|s| !starts_upper(s)) {
                let fqn = segments[..=k].join(".");
                if let Some(id) = self.by_fqn(&fqn, out) {
                    return Some((id, k + 1));
                }
            }
        }
        self.simple(&segments[0], out).map(|id| (id, 1))
    }
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

/// The type an import refers to; static imports name a member of it.
fn import_type_path(imp: &Import) -> Option<&[String]> {
    if imp.wildcard {
        return None;
    }
    if imp.is_static {
        (imp.path.len() >= 2).then(|| &imp.path[..imp.path.len() - 1])
    } else {
        Some(&imp.path[..])
    }
}

fn extract_file(ctx: &Context<'_>, file: &ParsedFile, config: &ExtractionConfig, out: &mut Output) {
    let scope = Scope::new(ctx, file);
    let owners: Vec<String> = file
        .types
        .iter()
        .map(|d| qualify(&file.package, &d.name))
        .collect();
    let loc = |line: u32| Location::new(&file.path, line);

    for imp in &file.imports {
        let Some(type_path) = import_type_path(imp) else {
            continue;
        };
        let fqn = type_path.join(".");
        let Some(target) = scope.by_fqn(&fqn, out) else {
            out.warnings.insert(Unresolved {
                location: loc(imp.line),
                name: fqn,
                context: "import",
            });
            continue;
        };
        let used = file.mentioned.contains(imp.path.last().unwrap())
            || file.mentioned.contains(type_path.last().unwrap());
        if config.ignore_unused_imports && !used {
            continue;
        }
        for owner in &owners {
            out.edges.push(
                DependencyEdge::new(owner, &target, DependencyKind::Import).at(loc(imp.line)),
            );
        }
    }

    for (decl, owner) in file.types.iter().zip(&owners) {
        for (kind, segments, line) in &decl.supertypes {
            match scope.path(segments, out) {
                Some((target, _)) => out
                    .edges
                    .push(DependencyEdge::new(owner, target, *kind).at(loc(*line))),
                None => {
                    out.warnings.insert(Unresolved {
                        location: loc(*line),
                        name: segments.join("."),
                        context: if *kind == DependencyKind::Implementation {
                            "implements"
                        } else {
                            "extends"
                        },
                    });
                }
            }
        }
        let mut scanner = BodyScanner {
            scope: &scope,
            owner,
            file: &file.path,
            vars: HashMap::new(),
        };
        scanner.scan(&decl.header_rest, out);
        scanner.scan(&decl.body, out);
    }
}

struct BodyScanner<'a> {
    scope: &'a Scope<'a>,
    owner: &'a str,
    file: &'a str,
    /// Variable, field and parameter names with a known declared type.
    vars: HashMap<String, String>,
}

impl BodyScanner<'_> {
    fn edge(&self, out: &mut Output, to: &str, kind: DependencyKind, line: u32) {
        out.edges
            .push(DependencyEdge::new(self.owner, to, kind).at(Location::new(self.file, line)));
    }

    fn warn(&self, out: &mut Output, name: String, line: u32, context: &'static str) {
        out.warnings.insert(Unresolved {
            location: Location::new(self.file, line),
            name,
            context,
        });
    }

    fn scan(&mut self, tokens: &[Token], out: &mut Output) {
        let mut i = 0;
        while i < tokens.len() {
            let t = &tokens[i];
            let Some(word) = t.ident() else {
                i += 1;
                continue;
            };
            if word == "new" {
                match read_qualified(tokens, i + 1) {
                    Some((segments, end)) => {
                        match self.scope.path(&segments, out) {
                            Some((target, _)) => {
                                self.edge(out, &target, DependencyKind::Instantiation, t.line)
                            }
                            None => {
                                self.warn(out, segments.join("."), t.line, "new");
                            }
                        }
                        i = end;
                    }
                    None => i += 1,
                }
                continue;
            }
            if word == "throws" {
                i += 1;
                while let Some((segments, end)) = read_qualified(tokens, i) {
                    let line = tokens[i].line;
                    match self.scope.path(&segments, out) {
                        Some((target, _)) => {
                            self.edge(out, &target, DependencyKind::ExceptionThrowing, line)
                        }
                        None => self.warn(out, segments.join("."), line, "throws"),
                    }
                    i = end;
                    if tokens.get(i).is_some_and(|n| n.is(',')) {
                        i += 1;
                    } else {
                        break;
                    }
                }
                continue;
            }
            let after_dot = i > 0 && tokens[i - 1].is('.');
            let after_this = i > 1 && tokens[i - 1].is('.') && tokens[i - 2].is_word("this");
            if is_keyword(word) || (after_dot && !after_this) {
                i += 1;
                continue;
            }
            let (segments, _) = read_qualified(tokens, i).expect("identifier present");
            if let Some((target, consumed)) = self.scope.path(&segments, out) {
                let next = i + 2 * consumed - 1;
                if let Some(name) = declared_name(tokens, next) {
                    self.vars.insert(name.to_string(), target.clone());
                }
                self.edge(out, &target, DependencyKind::Usage, t.line);
                i = next;
                continue;
            }
            if tokens.get(i + 1).is_some_and(|n| n.is('.')) {
                if let Some(target) = self.vars.get(word) {
                    let target = target.clone();
                    self.edge(out, &target, DependencyKind::Usage, t.line);
                }
            }
            i += 1;
        }
    }
}

/// If a type reference ending before `i` is followed by a declarator name
/// (after optional generic arguments and array brackets), returns it.
fn declared_name(tokens: &[Token], mut i: usize) -> Option<&str> {
    if tokens.get(i).is_some_and(|t| t.is('<')) {
        let mut depth = 0usize;
        loop {
            let t = tokens.get(i)?;
            if t.is('<') {
                depth += 1;
            } else if t.is('>') {
                depth -= 1;
                if depth == 0 {
                    i += 1;
                    break;
                }
            } else if t.is(';') || t.is('{') || t.is('(') || t.is(')') {
                return None;
            }
            i += 1;
        }
    }
    while tokens.get(i).is_some_and(|t| t.is('[')) && tokens.get(i + 1).is_some_and(|t| t.is(']')) {
        i += 2;
    }
    tokens.get(i)?.ident().filter(|w| !is_keyword(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use DependencyKind::*;

    fn extract(files: &[(&str, &str)], config: &ExtractionConfig) -> Extraction {
        let files: Vec<SourceFile> = files.iter().map(|(p, t)| SourceFile::new(*p, *t)).collect();
        extract_from_source(&files, config).unwrap()
    }

    fn triples(g: &DependencyGraph) -> Vec<(String, String, DependencyKind)> {
        g.edges()
            .iter()
            .map(|e| (e.from.clone(), e.to.clone(), e.kind))
            .collect()
    }

    fn t(from: &str, to: &str, kind: DependencyKind) -> (String, String, DependencyKind) {
        (from.into(), to.into(), kind)
    }

    #[test]
    fn extends_declared_class() {
        let x = extract(
            &[("A.src", "class A extends B {}"), ("B.src", "class B {}")],
            &Default::default(),
        );
        assert_eq!(triples(&x.graph), [t("A", "B", Inheritance)]);
        assert_eq!(x.graph.edges()[0].location, Some(Location::new("A.src", 1)));
    }

    #[test]
    fn implements_throws_new() {
        let x = extract(
            &[
                (
                    "A.src",
                    "class A implements I {\n  void m() throws B {\n    Object o = new B();\n  }\n}",
                ),
                ("B.src", "class B {}"),
                ("I.src", "interface I {}"),
            ],
            &Default::default(),
        );
        assert_eq!(
            triples(&x.graph),
            [
                t("A", "B", Instantiation),
                t("A", "B", ExceptionThrowing),
                t("A", "I", Implementation)
            ]
        );
    }

    #[test]
    fn unused_import_is_optional() {
        let files = [
            ("a/A.src", "package a;\nimport b.B;\nclass A {}"),
            ("b/B.src", "package b;\nclass B {}"),
        ];
        let kept = extract(&files, &Default::default());
        assert_eq!(triples(&kept.graph), [t("a.A", "b.B", Import)]);
        let config = ExtractionConfig {
            ignore_unused_imports: true,
            ..Default::default()
        };
        assert!(extract(&files, &config).graph.edges().is_empty());
    }

    #[test]
    fn field_access_and_declaration_are_usage() {
        let x = extract(
            &[
                (
                    "A.src",
                    "class A {\n  B b;\n  int f() { return b.fieldOfB; }\n}",
                ),
                ("B.src", "class B { int fieldOfB; }"),
            ],
            &Default::default(),
        );
        let lines: Vec<u32> = x
            .graph
            .edges()
            .iter()
            .map(|e| {
                assert_eq!((e.from.as_str(), e.to.as_str(), e.kind), ("A", "B", Usage));
                e.location.as_ref().unwrap().line
            })
            .collect();
        assert_eq!(lines, [2, 3]);
    }

    #[test]
    fn interface_extends_list() {
        let x = extract(
            &[
                ("I.src", "interface I extends J, K {}"),
                ("J.src", "interface J {}"),
                ("K.src", "interface K {}"),
            ],
            &Default::default(),
        );
        assert_eq!(
            triples(&x.graph),
            [t("I", "J", Inheritance), t("I", "K", Inheritance)]
        );
        assert_eq!(x.graph.unit("I").unwrap().kind, UnitKind::Interface);
    }

    #[test]
    fn external_units_from_patterns() {
        let config = ExtractionConfig {
            package_seed_patterns: vec![PackagePattern {
                pattern: "javax.swing.*".into(),
                category: "T".into(),
            }],
            ..Default::default()
        };
        let x = extract(
            &[(
                "P.src",
                "import javax.swing.JPanel;\nimport java.util.List;\nclass P extends JPanel { List<P> items; }",
            )],
            &config,
        );
        let ids: Vec<&str> = x.graph.units().iter().map(|u| u.id.as_str()).collect();
        assert_eq!(ids, ["P", "javax.swing.JPanel"]);
        assert!(x.graph.unit("javax.swing.JPanel").unwrap().external);
        assert_eq!(x.seeds.len(), 1);
        assert_eq!(x.seeds[0].category, "T");
        assert_eq!(x.warnings.len(), 1);
        assert_eq!(x.warnings[0].name, "java.util.List");
        assert!(triples(&x.graph).contains(&t("P", "P", Usage)));
    }

    #[test]
    fn qualified_references_resolve() {
        let x = extract(
            &[
                (
                    "a/A.src",
                    "package a;\nclass A { void m() { b.B.make(); } }",
                ),
                (
                    "b/B.src",
                    "package b;\nclass B { static B make() { return null; } }",
                ),
            ],
            &Default::default(),
        );
        assert!(triples(&x.graph).contains(&t("a.A", "b.B", Usage)));
    }

    #[test]
    fn unsupported_constructs() {
        let files = [SourceFile::new("E.src", "enum E { X }")];
        assert!(matches!(
            extract_from_source(&files, &Default::default()),
            Err(ExtractError::UnsupportedConstruct { line: 1, .. })
        ));
        let files = [SourceFile::new("N.src", "class N {\n class Inner {} }")];
        assert!(matches!(
            extract_from_source(&files, &Default::default()),
            Err(ExtractError::UnsupportedConstruct { line: 2, .. })
        ));
    }

    #[test]
    fn duplicate_declarations_fail() {
        let files = [
            SourceFile::new("A.src", "class A {}"),
            SourceFile::new("B.src", "class A {}"),
        ];
        assert!(matches!(
            extract_from_source(&files, &Default::default()),
            Err(ExtractError::DuplicateDeclaration { .. })
        ));
    }

    #[test]
    fn annotations_and_modifiers_are_skipped() {
        let x = extract(
            &[("A.src", "@Deprecated(since = \"1\")\npublic final class A {\n  @Override public String toString() { return \"\"; }\n}")],
            &Default::default(),
        );
        assert_eq!(x.graph.len(), 1);
        assert!(x.graph.edges().is_empty());
    }
}

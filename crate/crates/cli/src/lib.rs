//! The `softcat` command line.
//!
//! Exit codes: 0 success, 1 conflicts or violations found, 2 invalid input,
//! 3 internal error.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use softcat::{
    check_violations, extract_dir, oracle_enumerate, report, CategoryLattice, DependencyGraph,
    DependencyKind, ExtractionConfig, InferenceState, PackageMap, SeedsDocument,
};

pub const SUCCESS: i32 = 0;
pub const FINDINGS: i32 = 1;
pub const INVALID_INPUT: i32 = 2;
pub const INTERNAL_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "softcat",
    version,
    about = "Semi-automatic software categorization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Omit the timestamp header line of text reports.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a category graph document and print its dependency matrix.
    Validate {
        #[arg(long)]
        categories: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Extract a dependency graph from a source tree.
    Extract {
        #[arg(long)]
        src: PathBuf,
        /// Graph document to write; printed to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write seeds for external units matched by --package-map.
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long)]
        naming: bool,
        #[arg(long, default_value_t = 3)]
        naming_min_prefix: usize,
        #[arg(long)]
        ignore_unused_imports: bool,
        #[arg(long)]
        package_map: Option<PathBuf>,
        /// Comma-separated dependency kinds to keep.
        #[arg(long, value_delimiter = ',')]
        kinds: Option<Vec<DependencyKind>>,
    },
    /// Propagate seeds to a fixpoint and write the resulting state.
    Infer {
        #[arg(long)]
        categories: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        kinds: Option<Vec<DependencyKind>>,
        /// Cross-check the fixpoint against exhaustive enumeration.
        #[arg(long, hide = true)]
        oracle: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Report generation candidates of a saved state.
    Candidates {
        #[arg(long)]
        state: PathBuf,
        /// Comma-separated categories replacing the lattice's specific set.
        #[arg(long, value_delimiter = ',')]
        specific: Option<Vec<String>>,
        #[command(flatten)]
        output: Output,
    },
    /// Check a total assignment against the dependency matrix.
    ///
    /// The assignment is either a saved state whose units are all resolved,
    /// or a seeds document covering every unit of --graph.
    Check {
        #[arg(long, conflicts_with_all = ["categories", "graph", "seeds"])]
        state: Option<PathBuf>,
        #[arg(long, requires_all = ["graph", "seeds"])]
        categories: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        kinds: Option<Vec<DependencyKind>>,
        #[command(flatten)]
        output: Output,
    },
    /// Serve the session API and, optionally, the browser UI.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long)]
        ui_dir: Option<PathBuf>,
        /// Keep every session's export in this directory.
        #[arg(long)]
        persist_dir: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn input(context: impl Display, e: impl Display) -> Self {
        Failure::Input(format!("{context}: {e}"))
    }
}

type Outcome = Result<i32, Failure>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn print(&mut self, text: &str) -> Result<(), Failure> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Internal(format!("cannot write output: {e}")))
    }

    fn warn(&mut self, text: &str) {
        let _ = writeln!(self.err, "{text}");
    }

    /// Text reports get a timestamp header; JSON never does.
    fn report(&mut self, output: &Output, text: String, json: String) -> Result<(), Failure> {
        match output.format {
            Format::Json => self.print(&json),
            Format::Text => {
                if !output.no_timestamp {
                    let now = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
                    self.print(&format!("# softcat {} {now}\n", env!("CARGO_PKG_VERSION")))?;
                }
                self.print(&text)
            }
        }
    }
}

/// Runs one command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                INVALID_INPUT
            } else {
                SUCCESS
            };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Failure::Input(message)) => {
            io.warn(&format!("error: {message}"));
            INVALID_INPUT
        }
        Err(Failure::Internal(message)) => {
            io.warn(&format!("internal error: {message}"));
            INTERNAL_ERROR
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Validate { categories, output } => validate(&categories, &output, io),
        Command::Extract {
            src,
            out,
            seeds,
            naming,
            naming_min_prefix,
            ignore_unused_imports,
            package_map,
            kinds,
        } => {
            let patterns = match package_map {
                Some(path) => {
                    serde_json::from_str::<PackageMap>(&read(&path)?)
                        .map_err(|e| Failure::input(path.display(), e))?
                        .patterns
                }
                None => Vec::new(),
            };
            let config = ExtractionConfig {
                ignore_unused_imports,
                package_seed_patterns: patterns,
                naming_enabled: naming,
                naming_min_prefix,
            };
            extract(
                &src,
                &config,
                kinds.as_deref(),
                out.as_deref(),
                seeds.as_deref(),
                io,
            )
        }
        Command::Infer {
            categories,
            graph,
            seeds,
            out,
            kinds,
            oracle,
            output,
        } => {
            let lattice = load_lattice(&categories)?;
            let graph = load_graph(&graph, kinds.as_deref())?;
            let seeds = match seeds {
                Some(path) => load_seeds(&path)?,
                None => SeedsDocument::default(),
            };
            infer(lattice, graph, seeds, out.as_deref(), oracle, &output, io)
        }
        Command::Candidates {
            state,
            specific,
            output,
        } => {
            let state = load_state(&state)?;
            let specific = match &specific {
                Some(ids) => Some(
                    state
                        .lattice()
                        .set_of(ids.iter().map(String::as_str))
                        .map_err(|e| Failure::input("--specific", e))?,
                ),
                None => None,
            };
            let report = state
                .generation_candidates(specific.as_ref())
                .map_err(|e| Failure::input("candidates", e))?;
            io.report(
                &output,
                report::candidates_text(&report),
                report::to_json(&report),
            )?;
            Ok(SUCCESS)
        }
        Command::Check {
            state,
            categories,
            graph,
            seeds,
            kinds,
            output,
        } => {
            let (graph, lattice, assignment) = match (state, categories, graph, seeds) {
                (Some(path), ..) => {
                    let state = load_state(&path)?;
                    let assignment = state
                        .total_assignment()
                        .map_err(|e| Failure::input(path.display(), e))?;
                    (
                        Arc::clone(state.graph()),
                        Arc::clone(state.lattice()),
                        assignment,
                    )
                }
                (None, Some(categories), Some(graph), Some(seeds)) => {
                    let assignment = load_seeds(&seeds)?
                        .assignments
                        .into_iter()
                        .map(|s| (s.unit, s.category))
                        .collect();
                    (
                        Arc::new(load_graph(&graph, None)?),
                        Arc::new(load_lattice(&categories)?),
                        assignment,
                    )
                }
                _ => {
                    return Err(Failure::Input(
                        "check needs --state, or --categories with --graph and --seeds".into(),
                    ))
                }
            };
            let graph = match kinds {
                Some(kinds) => graph.filter_by_kind(&kinds),
                None => DependencyGraph::clone(&graph),
            };
            let report = check_violations(&graph, &lattice, &assignment)
                .map_err(|e| Failure::input("check", e))?;
            io.report(
                &output,
                report::violations_text(&report),
                report::to_json(&report),
            )?;
            Ok(if report.is_empty() { SUCCESS } else { FINDINGS })
        }
        Command::Serve {
            port,
            host,
            ui_dir,
            persist_dir,
        } => serve(&host, port, ui_dir, persist_dir, io),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(path.display(), e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Internal(format!("cannot write {}: {e}", path.display())))
}

fn load_lattice(path: &Path) -> Result<CategoryLattice, Failure> {
    CategoryLattice::from_json(&read(path)?).map_err(|e| Failure::input(path.display(), e))
}

fn load_graph(path: &Path, kinds: Option<&[DependencyKind]>) -> Result<DependencyGraph, Failure> {
    let graph =
        DependencyGraph::from_json(&read(path)?).map_err(|e| Failure::input(path.display(), e))?;
    Ok(match kinds {
        Some(kinds) => graph.filter_by_kind(kinds),
        None => graph,
    })
}

fn load_seeds(path: &Path) -> Result<SeedsDocument, Failure> {
    SeedsDocument::from_json(&read(path)?).map_err(|e| Failure::input(path.display(), e))
}

fn load_state(path: &Path) -> Result<InferenceState, Failure> {
    InferenceState::from_json(&read(path)?).map_err(|e| Failure::input(path.display(), e))
}

fn validate(path: &Path, output: &Output, io: &mut Io) -> Outcome {
    let text = read(path)?;
    match CategoryLattice::from_json(&text) {
        Ok(lattice) => {
            let matrix = lattice.allowed_matrix();
            let summary = format!(
                "valid: {} categories, root {}\n{matrix}\n",
                lattice.len(),
                lattice.root_id()
            );
            io.report(output, summary, report::to_json(&matrix))?;
            Ok(SUCCESS)
        }
        Err(softcat::LatticeError::Invalid(issues)) => {
            for issue in &issues {
                io.warn(&format!("{}: {issue}", issue.code()));
            }
            if output.format == Format::Json {
                io.print(&report::to_json(&issues))?;
            }
            Ok(INVALID_INPUT)
        }
        Err(e) => Err(Failure::input(path.display(), e)),
    }
}

fn extract(
    src: &Path,
    config: &ExtractionConfig,
    kinds: Option<&[DependencyKind]>,
    out: Option<&Path>,
    seeds_out: Option<&Path>,
    io: &mut Io,
) -> Outcome {
    if !src.is_dir() {
        return Err(Failure::Input(format!(
            "{} is not a directory",
            src.display()
        )));
    }
    let extraction = extract_dir(src, config).map_err(|e| Failure::input("extract", e))?;
    let graph = match kinds {
        Some(kinds) => extraction.graph.filter_by_kind(kinds),
        None => extraction.graph,
    };
    for warning in &extraction.warnings {
        io.warn(&format!(
            "warning: {}: unresolved {} reference `{}`",
            warning.location, warning.context, warning.name
        ));
    }
    let json = graph.to_json();
    match out {
        Some(path) => {
            write(path, &json)?;
            io.print(&format!(
                "{} units, {} edges, {} unresolved\n",
                graph.len(),
                graph.edges().len(),
                extraction.warnings.len()
            ))?;
        }
        None => io.print(&json)?,
    }
    if let Some(path) = seeds_out {
        let doc = SeedsDocument {
            assignments: extraction.seeds,
        };
        write(path, &report::to_json(&doc))?;
    }
    Ok(SUCCESS)
}

fn infer(
    lattice: CategoryLattice,
    graph: DependencyGraph,
    seeds: SeedsDocument,
    out: Option<&Path>,
    oracle: bool,
    output: &Output,
    io: &mut Io,
) -> Outcome {
    let (graph, lattice) = (Arc::new(graph), Arc::new(lattice));
    let mut state =
        InferenceState::new(Arc::clone(&graph), Arc::clone(&lattice), &seeds.assignments)
            .map_err(|e| Failure::input("seeds", e))?;
    let propagation = state.propagate();
    let conflicts = state.conflicts();
    if let Some(path) = out {
        write(path, &state.to_json())?;
    }
    let text = format!(
        "{}{}",
        report::propagation_text(&propagation),
        report::conflicts_text(&conflicts)
    );
    let json = report::to_json(&serde_json::json!({
        "propagation": propagation,
        "conflicts": conflicts,
    }));
    io.report(output, text, json)?;

    if oracle {
        let solutions = oracle_enumerate(&graph, &lattice, &seeds.assignments)
            .map_err(|e| Failure::input("oracle", e))?;
        io.warn(&format!(
            "oracle: {} consistent assignment(s)",
            solutions.len()
        ));
        let candidates = state.candidate_map();
        for solution in &solutions {
            for (unit, category) in solution {
                if !candidates[unit].contains(category) {
                    return Err(Failure::Internal(format!(
                        "propagation pruned {category} from {unit}, which a consistent assignment uses"
                    )));
                }
            }
        }
    }
    Ok(if conflicts.is_empty() {
        SUCCESS
    } else {
        FINDINGS
    })
}

fn serve(
    host: &str,
    port: u16,
    ui_dir: Option<PathBuf>,
    persist_dir: Option<PathBuf>,
    io: &mut Io,
) -> Outcome {
    for dir in ui_dir.iter().chain(&persist_dir) {
        if !dir.is_dir() {
            return Err(Failure::Input(format!(
                "{} is not a directory",
                dir.display()
            )));
        }
    }
    let runtime = tokio::runtime::Runtime::new()
        .map_err(|e| Failure::Internal(format!("cannot start runtime: {e}")))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| Failure::Internal(format!("cannot bind {host}:{port}: {e}")))?;
        let addr = listener
            .local_addr()
            .map_err(|e| Failure::Internal(e.to_string()))?;
        io.print(&format!("listening on http://{addr}\n"))?;
        let _ = io.out.flush();
        softcat_service::serve(
            listener,
            softcat_service::ServiceConfig {
                ui_dir,
                persist_dir,
            },
        )
        .await
        .map_err(|e| Failure::Internal(format!("server failed: {e}")))
    })?;
    Ok(SUCCESS)
}

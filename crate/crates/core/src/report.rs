//! Text and JSON renderings shared by the command line and the session API.

use std::fmt::Write;

use serde::Serialize;

use crate::inference::{CandidateReport, Conflict, PropagationReport, Tier, ViolationReport};

/// Pretty JSON plus a trailing newline. Every report payload goes through
/// here so the CLI and the API emit identical bytes.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn braces(ids: &[String]) -> String {
    format!("{{{}}}", ids.join(", "))
}

pub fn candidates_text(report: &CandidateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "specific: {}  (closure {})",
        braces(&report.specific),
        braces(&report.closure)
    );
    for (tier, title) in [(Tier::Definite, "definite"), (Tier::Possible, "possible")] {
        let rows: Vec<_> = report.units.iter().filter(|e| e.tier == tier).collect();
        let _ = writeln!(out, "{title} ({}):", rows.len());
        for e in rows {
            let _ = writeln!(out, "  {:<40} {}", e.unit, braces(&e.candidates));
        }
    }
    out
}

pub fn violations_text(report: &ViolationReport) -> String {
    if report.violations.is_empty() {
        return "no violations\n".to_string();
    }
    let mut out = format!("{} violation(s):\n", report.violations.len());
    for v in &report.violations {
        let _ = writeln!(
            out,
            "  {} ({} -> {} is not allowed)",
            v.edge, v.from_category, v.to_category
        );
    }
    out
}

pub fn conflicts_text(conflicts: &[Conflict]) -> String {
    let mut out = String::new();
    for c in conflicts {
        let _ = writeln!(out, "conflict: {} has no remaining category", c.unit);
        for step in &c.trace {
            let _ = write!(out, "    removed {}", braces(&step.removed));
            match &step.cause {
                Some(cause) => {
                    let _ = writeln!(
                        out,
                        " via {} (neighbour {} was {})",
                        cause.edge,
                        cause.neighbor,
                        braces(&cause.neighbor_candidates)
                    );
                }
                None => {
                    let _ = writeln!(out, " by seed");
                }
            }
        }
    }
    out
}

pub fn propagation_text(report: &PropagationReport) -> String {
    let mut out = format!(
        "round {}: {} narrowing step(s), {} unit(s) changed\n",
        report.iteration,
        report.steps,
        report.changes.len()
    );
    for ch in &report.changes {
        let _ = writeln!(
            out,
            "  {:<40} {} -> {}",
            ch.unit,
            braces(&ch.before),
            braces(&ch.after)
        );
    }
    out
}

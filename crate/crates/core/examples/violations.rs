//! Checks a hand-written total assignment against the dependency matrix.

use std::collections::BTreeMap;

use softcat::{check_violations, fixtures, report};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (graph, lattice, _) = fixtures::cookbook();
    let mut assignment: BTreeMap<String, String> = graph
        .units()
        .iter()
        .map(|u| (u.id.clone(), "DT".to_string()))
        .collect();
    for (unit, category) in [
        (fixtures::BOOK, "DG"),
        (fixtures::AUTHOR, "DG"),
        (fixtures::READER, "T"),
        (fixtures::COOKBOOK, "D"),
        (fixtures::ABSTRACT_PANEL, "T"),
        (fixtures::JPANEL, "T"),
    ] {
        assignment.insert(unit.into(), category.into());
    }
    print!(
        "{}",
        report::violations_text(&check_violations(&graph, &lattice, &assignment)?)
    );

    // A domain class that depends on the technical reader breaks the matrix.
    assignment.insert(fixtures::COOKBOOK_READER.into(), "D".into());
    print!(
        "{}",
        report::violations_text(&check_violations(&graph, &lattice, &assignment)?)
    );
    Ok(())
}

//! Extracts a dependency graph from a source tree.
//!
//! ```text
//! cargo run -p softcat --example extract_sources [SRC_DIR] [PACKAGE_MAP]
//! ```
//!
//! Without arguments it reads the bundled cookbook sources and maps
//! `javax.swing.*` to the technical category.

use std::path::PathBuf;

use softcat::{extract_dir, ExtractionConfig, PackageMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut args = std::env::args().skip(1);
    let src = args
        .next()
        .map_or_else(|| fixtures.join("cookbook_src"), PathBuf::from);
    let map = args
        .next()
        .map_or_else(|| fixtures.join("cookbook.packages.json"), PathBuf::from);

    let map: PackageMap = serde_json::from_str(&std::fs::read_to_string(map)?)?;
    let config = ExtractionConfig {
        package_seed_patterns: map.patterns,
        ..Default::default()
    };
    let extraction = extract_dir(&src, &config)?;

    println!("{} units", extraction.graph.len());
    for unit in extraction.graph.units() {
        let marker = if unit.external { " (external)" } else { "" };
        println!("  {}{marker}", unit.id);
    }
    println!("{} edges", extraction.graph.edges().len());
    for edge in extraction.graph.edges() {
        println!("  {edge}");
    }
    for seed in &extraction.seeds {
        println!("seed {} = {}", seed.unit, seed.category);
    }
    for warning in &extraction.warnings {
        println!(
            "unresolved {} `{}` at {}",
            warning.context, warning.name, warning.location
        );
    }
    Ok(())
}

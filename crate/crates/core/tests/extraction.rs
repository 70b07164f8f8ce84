use std::collections::BTreeSet;
use std::path::PathBuf;

use softcat::DependencyKind::{self, *};
use softcat::{extract_dir, fixtures, DependencyGraph, ExtractionConfig, PackageMap};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn triples(graph: &DependencyGraph) -> BTreeSet<(String, String, DependencyKind)> {
    graph
        .edges()
        .iter()
        .map(|e| (e.from.clone(), e.to.clone(), e.kind))
        .collect()
}

fn t(from: &str, to: &str, kind: DependencyKind) -> (String, String, DependencyKind) {
    (format!("shop.{from}"), format!("shop.{to}"), kind)
}

fn forms(config: ExtractionConfig) -> BTreeSet<(String, String, DependencyKind)> {
    triples(&extract_dir(&fixture("forms_src"), &config).unwrap().graph)
}

#[test]
fn every_dependency_form_is_recognized() {
    let expected: BTreeSet<_> = [
        t("Order", "Base", Inheritance),
        t("Order", "Shape", Implementation),
        t("Order", "Widget", Usage),
        t("Order", "Gadget", Usage),
        t("Order", "Failure", ExceptionThrowing),
        t("Order", "parts.Part", Import),
        t("Order", "parts.Part", Instantiation),
        t("Order", "parts.Part", Usage),
        t("Order", "parts.Spare", Import),
    ]
    .into_iter()
    .collect();
    assert_eq!(forms(ExtractionConfig::default()), expected);
}

#[test]
fn unused_imports_can_be_dropped() {
    let got = forms(ExtractionConfig {
        ignore_unused_imports: true,
        ..Default::default()
    });
    assert!(!got.contains(&t("Order", "parts.Spare", Import)));
    assert!(got.contains(&t("Order", "parts.Part", Import)));
    assert_eq!(got.len(), 8);
}

#[test]
fn naming_adds_one_prefix_edge() {
    let plain = forms(ExtractionConfig::default());
    let named = forms(ExtractionConfig {
        naming_enabled: true,
        ..Default::default()
    });
    let added: Vec<_> = named.difference(&plain).collect();
    assert_eq!(added, [&t("CookBookPanel", "CookBook", Naming)]);
}

#[test]
fn locations_point_at_the_source_line() {
    let x = extract_dir(&fixture("forms_src"), &ExtractionConfig::default()).unwrap();
    let throws = x
        .graph
        .edges()
        .iter()
        .find(|e| e.kind == ExceptionThrowing)
        .unwrap();
    let at = throws.location.as_ref().unwrap();
    assert_eq!((at.file.as_str(), at.line), ("shop/Order.java", 9));
    assert!(x.warnings.is_empty());
}

#[test]
fn cookbook_sources_reproduce_the_bundled_graph() {
    let map: PackageMap =
        serde_json::from_str(&std::fs::read_to_string(fixture("cookbook.packages.json")).unwrap())
            .unwrap();
    let x = extract_dir(
        &fixture("cookbook_src"),
        &ExtractionConfig {
            package_seed_patterns: map.patterns,
            ..Default::default()
        },
    )
    .unwrap();
    let (bundled, _, seeds) = fixtures::cookbook();
    let ids = |g: &DependencyGraph| g.units().iter().map(|u| u.id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&x.graph), ids(&bundled));
    let pairs = |g: &DependencyGraph| {
        g.edges()
            .iter()
            .map(|e| (e.from.clone(), e.to.clone()))
            .collect::<BTreeSet<_>>()
    };
    assert_eq!(pairs(&x.graph), pairs(&bundled));
    assert_eq!(
        x.seeds,
        seeds
            .into_iter()
            .filter(|s| s.unit == fixtures::JPANEL)
            .collect::<Vec<_>>()
    );
}

#[test]
fn extraction_is_deterministic() {
    let a = extract_dir(&fixture("forms_src"), &ExtractionConfig::default()).unwrap();
    let b = extract_dir(&fixture("forms_src"), &ExtractionConfig::default()).unwrap();
    assert_eq!(a.graph.to_json(), b.graph.to_json());
}

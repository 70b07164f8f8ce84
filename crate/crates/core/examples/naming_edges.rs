//! Adds naming dependencies: `CookBookPanel` depends on `CookBook` because
//! the latter's name is a prefix of the former's.

use softcat::{fixtures, DependencyKind};

fn main() {
    let (graph, _, _) = fixtures::cookbook();
    for min_prefix in [3, 9] {
        let named = graph.add_naming_edges(min_prefix);
        println!("min prefix {min_prefix}:");
        for edge in named.filter_by_kind(&[DependencyKind::Naming]).edges() {
            println!("  {} -> {}", edge.from, edge.to);
        }
    }
}

//! Prints the allowed-dependency matrix of a category graph.
//!
//! ```text
//! cargo run -p softcat --example derive_matrix [CATEGORIES_JSON]
//! ```

use softcat::{fixtures, CategoryLattice};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let lattice = match std::env::args().nth(1) {
        Some(path) => CategoryLattice::from_json(&std::fs::read_to_string(path)?)?,
        None => fixtures::generative_lattice(),
    };

    println!("{}", lattice.allowed_matrix());
    for c in lattice.indices() {
        let purity = if lattice.path_count(c) == 1 {
            "pure"
        } else {
            "impure"
        };
        println!(
            "{:>4}  {purity:<6}  refines {:?}",
            lattice.id(c),
            lattice.ids(lattice.ancestors(c))
        );
    }
    Ok(())
}

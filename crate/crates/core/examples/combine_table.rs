//! Tabulates `combine` for every pair of categories.
//!
//! Combining two categories yields the topmost category that refines both.
//! Pairs without one, or with several, are shown as `-` and `?`.

use softcat::{fixtures, LatticeError};

fn main() {
    let lattice = fixtures::generative_lattice();
    let ids: Vec<&str> = lattice.indices().map(|c| lattice.id(c)).collect();

    print!("{:>4}", "");
    for b in &ids {
        print!("{b:>4}");
    }
    println!();
    for a in &ids {
        print!("{a:>4}");
        for b in &ids {
            let cell = match lattice.combine(a, b) {
                Ok(c) => c.to_string(),
                Err(LatticeError::NoCommonRefinement(..)) => "-".into(),
                Err(_) => "?".into(),
            };
            print!("{cell:>4}");
        }
        println!();
    }
}

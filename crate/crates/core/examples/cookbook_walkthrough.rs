//! Two rounds of interactive categorization on the cookbook library.
//!
//! Round one propagates the four seeds. `Reader` is left ambiguous, so the
//! expert assigns it by hand and propagates again. The run ends with the
//! generation candidates and a violation check.

use softcat::{fixtures, report, Tier};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut state = fixtures::cookbook_state();

    println!("== round 1");
    print!("{}", report::propagation_text(&state.propagate()));

    println!("\nwhy is {} DG?", fixtures::AUTHOR);
    for step in state.explain(fixtures::AUTHOR)? {
        println!(
            "  {:?} via {}: removed {:?}",
            step.direction,
            step.cause.as_ref().map_or("-", |c| c.neighbor.as_str()),
            step.removed
        );
    }

    println!("\n== round 2: {} := T", fixtures::READER);
    state.assign(fixtures::READER, "T", false)?;
    print!("{}", report::propagation_text(&state.propagate()));

    let candidates = state.generation_candidates(None)?;
    println!("\n== generation candidates");
    print!("{}", report::candidates_text(&candidates));
    println!("definite: {}", candidates.in_tier(Tier::Definite).len());

    match state.total_assignment() {
        Ok(assignment) => {
            let violations =
                softcat::check_violations(state.graph(), state.lattice(), &assignment)?;
            print!("\n{}", report::violations_text(&violations));
        }
        Err(e) => println!("\nnot yet total: {e}"),
    }
    Ok(())
}

//! Parse a planar diagram, then put a kink on one of its arcs.
//!
//! Arcs are listed counterclockwise from the incoming under-strand. An
//! optional `o(a>b ...)` block fixes the direction of strands whose
//! orientation cannot be read off the crossing alone.

use khss::diagram::parse_pd;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = "X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)";
    let d = parse_pd(text)?;
    println!("parsed:      {}", d.render());
    println!("crossings:   {} ({} positive, {} negative)", d.n_crossings(), d.n_plus(), d.n_minus());
    println!("components:  {}", d.components());
    println!("arcs:        {:?}", d.arcs());

    let kinked = d.insert_kink(d.arcs()[0])?;
    println!("with a kink: {}", kinked.render());
    println!("kink is crossing {:?}", kinked.kink_crossing());

    match parse_pd("X(1,2,3)") {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("malformed input is rejected: {e}"),
    }
    Ok(())
}

//! Build the total differential for several orientation choices and check
//! that it squares to zero.
//!
//! Layer k raises the homological grading by k and the quantum grading by
//! 2k - 2, so layer 1 is the Khovanov differential itself.

use khss::diagram::torus_knot;
use khss::szabo::{build_szabo, verify_square_zero};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = torus_knot(3, 5)?;
    for seed in 0..3 {
        let s = build_szabo(&d, seed);
        let verdict = match verify_square_zero(&s) {
            Ok(()) => "squares to zero".to_string(),
            Err(w) => format!("fails in block ({},{})", w.block.t, w.block.q),
        };
        println!("seed {seed}: layer sizes {:?}, {verdict}", s.layer_sizes());
    }
    Ok(())
}

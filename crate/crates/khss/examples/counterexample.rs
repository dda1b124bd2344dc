//! The full T(4,5) computation, ending at the page where Sq^1 stops
//! commuting with the differential.
//!
//! Slow (about a minute) and memory hungry (about 2 GB).

use khss::ops::report::counterexample_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0);
    let r = counterexample_report(seed, u64::MAX)?;
    print!("{}", r.render_text());
    std::process::exit(if r.ok() { 0 } else { 1 });
}

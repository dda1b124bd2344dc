//! Test the Cartan formula for the page-3 Sq^1 on tensor powers of the
//! T(4,5) spectral sequence. This runs the full T(4,5) pipeline and needs
//! about 2 GB of memory.

use khss::ops::report::counterexample_report;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let r = counterexample_report(0, u64::MAX)?;
    for v in &r.cartan {
        println!(
            "{} copies, class {} -> {}: Sq d = {:?}, d Sq = {:?}, passes {}",
            v.copies, v.a, v.b, v.sq_after_d, v.d_after_sq, v.passes
        );
    }
    Ok(())
}

//! The basepoint map X on the Khovanov complex, its extension X_Sz to the
//! total complex, and the maps it induces on every page.

use khss::diagram::torus_knot;
use khss::ops::report::Pipeline;
use khss::specseq::chain_commutation_failure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = torus_knot(3, 4)?;
    let p = Pipeline::run(&d, 0, 6, u64::MAX)?;
    let sizes: Vec<usize> = p.x_sz.layers.iter().map(|l| l.nnz()).collect();
    println!("basepoint on arc {}, X_Sz layer sizes {sizes:?}", p.basepoint);
    println!("chain map: {}", chain_commutation_failure(&p.sz, &p.x_sz).is_none());
    for (name, r) in p.lift_reports() {
        println!("{name:>8}: lifts = {}, pages checked {:?}", r.lifts, r.checked_pages);
    }
    Ok(())
}

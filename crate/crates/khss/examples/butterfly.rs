//! Survey the sites where a d_2 arrow leaves a black class. Without Sq^2
//! data every site is reported as `NoData`; pass a JSON file of Sq^2
//! matrices (see `export_basis`) to decide them.

use khss::diagram::torus_knot;
use khss::ops::butterfly::{butterfly_detect, parse_sq2};
use khss::ops::report::Pipeline;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = torus_knot(3, 5)?;
    let p = Pipeline::run(&d, 0, 6, u64::MAX)?;
    let sq2 = match std::env::args().nth(1) {
        Some(path) => Some(parse_sq2(&std::fs::read_to_string(path)?, |b| p.kh.dim(b))?),
        None => None,
    };
    let r = butterfly_detect(&p.bridge(), &p.reduced, &p.x_star, sq2.as_ref());
    println!("{} site(s)", r.sites.len());
    for s in &r.sites {
        println!("  ({},{}): {:?}", s.site.t, s.site.q, s.status);
    }
    Ok(())
}

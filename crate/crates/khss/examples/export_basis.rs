//! Write the canonical page-2 basis as JSON.

use khss::cube::{build_complex, Ring};
use khss::diagram::torus_knot;
use khss::homology::kh_homology_f2;
use khss::ops::export::export_basis;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = torus_knot(2, 3)?;
    let c = build_complex(&d, Ring::F2);
    let e = export_basis(&d, &c, &kh_homology_f2(&c));
    println!("{}", serde_json::to_string_pretty(&e)?);
    Ok(())
}

//! Split Khovanov homology into the image of X ("black") and a chosen
//! complement ("white"). X^2 = 0 and ker X = im X make the two halves the
//! same size.

use khss::cube::{build_complex, Ring};
use khss::diagram::torus_knot;
use khss::homology::kh_homology_f2;
use khss::ops::{basepoint_x, induced_on_homology, reduced_decomposition};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = torus_knot(3, 4)?;
    let c = build_complex(&d, Ring::F2);
    let kh = kh_homology_f2(&c);
    let x = basepoint_x(&c, d.arcs()[0])?;
    let xs = induced_on_homology(&c, &kh, &x)?;
    let rd = reduced_decomposition(&kh, &xs)?;
    println!("{} black, {} white", rd.n_black(), rd.n_white());
    for b in rd.black.keys() {
        println!("  black at ({},{})", b.t, b.q);
    }
    for b in rd.white.keys() {
        println!("  white at ({},{})", b.t, b.q);
    }
    Ok(())
}

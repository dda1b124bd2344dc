//! The Bockstein Sq^1 on Khovanov homology, read off the integral complex.

use khss::cube::{build_complex, Ring};
use khss::diagram::torus_knot;
use khss::homology::kh_homology_f2;
use khss::ops::bockstein_sq1;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p, q) in [(2, 3), (3, 4), (3, 5)] {
        let d = torus_knot(p, q)?;
        let f2 = build_complex(&d, Ring::F2);
        let z = build_complex(&d, Ring::Z);
        let kh = kh_homology_f2(&f2);
        let sq1 = bockstein_sq1(&z, &f2, &kh)?;
        print!("T({p},{q}):");
        for ((from, to), r) in sq1.ranks() {
            print!(" ({},{})->({},{}) rank {r};", from.t, from.q, to.t, to.q);
        }
        println!(" Sq^1 Sq^1 = 0: {}", sq1.compose(&sq1).is_zero());
    }
    Ok(())
}

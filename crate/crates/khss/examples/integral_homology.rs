//! Integral Khovanov homology. Torsion shows up as extra invariant factors
//! of the incoming differential.

use khss::cube::{build_complex, Ring};
use khss::diagram::torus_knot;
use khss::homology::kh_homology_z;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (p, q) in [(2, 3), (3, 4), (3, 5)] {
        let c = build_complex(&torus_knot(p, q)?, Ring::Z);
        let groups = kh_homology_z(&c)?;
        println!("T({p},{q}):");
        for (b, g) in &groups {
            let torsion: Vec<String> = g.torsion.iter().map(|k| format!(" + Z/{k}")).collect();
            println!("  ({:>2},{:>3})  Z^{}{}", b.t, b.q, g.rank, torsion.concat());
        }
    }
    Ok(())
}

//! Khovanov homology over F2 for a few small knots.

use khss::cube::{build_complex, Ring};
use khss::diagram::{braid_closure, torus_knot, PlanarDiagram};
use khss::homology::kh_homology_f2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let knots: Vec<(&str, PlanarDiagram)> = vec![
        ("unknot", PlanarDiagram::unknot()),
        ("trefoil", torus_knot(2, 3)?),
        ("figure-eight", braid_closure(3, &[1, -2, 1, -2])?),
        ("T(3,4)", torus_knot(3, 4)?),
    ];
    for (name, d) in knots {
        let c = build_complex(&d, Ring::F2);
        let kh = kh_homology_f2(&c);
        let p = kh.poincare();
        println!("{name:>13}: {} generators, total rank {}", c.cube.dim(), p.total());
        println!("{:>13}  {p}", "");
    }
    Ok(())
}

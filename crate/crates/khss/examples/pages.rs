//! Pages of the spectral sequence for T(3,5) and the arrows on each page.

use khss::diagram::torus_knot;
use khss::specseq::{compute_pages, default_max_page};
use khss::szabo::build_szabo;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = build_szabo(&torus_knot(3, 5)?, 0);
    let ss = compute_pages(&s, default_max_page(&s));
    for page in &ss.pages {
        println!("E_{}: {}", page.n, page.poincare());
    }
    for a in ss.arrows() {
        println!("d_{}: ({},{}) -> ({},{}) rank {}", a.page, a.from.t, a.from.q, a.to.t, a.to.q, a.rank);
    }
    println!("collapses at page {}", ss.collapse_page());
    println!("E_inf: {}", ss.infinity());
    Ok(())
}

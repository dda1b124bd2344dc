//! The full pipeline on one knot, and the T(4,5) report that shows the
//! Bockstein is not an operation on the spectral sequence.

use std::collections::BTreeMap;

use serde::Serialize;

use super::cartan::{CartanVerdict, TensorPage};
use super::{
    basepoint_x, bockstein_sq1, extract_x_sz, induced_on_homology, reduced_decomposition, CanonicalMap, OpsError,
    Page2Bridge, ReducedDecomposition, XSz,
};
use crate::cube::{build_complex_capped, Bigrading, ChainComplex, Ring};
use crate::diagram::{torus_knot, Arc, PlanarDiagram};
use crate::homology::{kh_homology_f2, KhHomology};
use crate::specseq::{
    chain_commutation_failure, check_operation_lift, compute_pages, induce_page_map, labels_at, LiftReport, PageMap,
    SpectralSequence,
};
use crate::szabo::{diagram_hash, orientation_from_seed, szabo_on, SzaboDifferential};

/// Reference values for T(4,5).
pub mod t45 {
    /// `((t,q),(t,q))` for one arrow
    pub type Arrow = ((i32, i32), (i32, i32));
    pub const P2: &str = "(q^11+q^13)t^0 + (q^15+q^17)t^2 + (q^17+q^19)t^3 + (q^17+q^19)t^4 + (q^21+q^23)t^5 \
        + (q^19+2q^21+q^23)t^6 + (q^21+2q^23+q^25)t^7 + (q^23+q^25)t^8 + (q^25+2q^27+q^29)t^9 + (q^27+q^29)t^10";
    pub const P3: &str = "(q^11+q^13)t^0 + (q^17+q^19)t^3 + (q^19+2q^21+q^23)t^6 + (q^21+q^23)t^7 \
        + (q^23+q^25)t^8 + (q^25+2q^27+q^29)t^9 + (q^27+q^29)t^10";
    pub const P4: &str = "(q^11+q^13)t^0 + (q^19+q^21)t^6 + (q^21+q^23)t^7 \
        + (q^23+q^25)t^8 + (q^25+2q^27+q^29)t^9 + (q^27+q^29)t^10";
    /// nonzero `d_2` blocks as `((t,q),(t,q))`
    pub const D2: [Arrow; 4] = [((2, 15), (4, 17)), ((2, 17), (4, 19)), ((5, 21), (7, 23)), ((5, 23), (7, 25))];
    pub const D3: [Arrow; 2] = [((3, 17), (6, 21)), ((3, 19), (6, 23))];
    /// sources of the nonzero `Sq^1` blocks
    pub const SQ1: [(i32, i32); 5] = [(2, 17), (6, 21), (6, 23), (9, 27), (9, 29)];
    pub const SQ1_ZERO: (i32, i32) = (3, 17);
    pub const WITNESS: (i32, i32) = (3, 17);
}

/// Everything computed for one knot, from the cube complex up to the
/// operations on its pages.
pub struct Pipeline {
    pub diagram: PlanarDiagram,
    pub basepoint: Arc,
    pub sz: SzaboDifferential,
    pub ss: SpectralSequence,
    pub kh: KhHomology,
    pub integral: ChainComplex,
    pub sq1: CanonicalMap,
    pub x_sz: XSz,
    pub x_star: CanonicalMap,
    /// maps induced by `X_Sz` on every computed page
    pub x_pages: Vec<PageMap>,
    pub reduced: ReducedDecomposition,
}

impl Pipeline {
    pub fn run(d: &PlanarDiagram, seed: u64, max_page: u32, mem_cap: u64) -> Result<Pipeline, OpsError> {
        let orient = orientation_from_seed(seed, d.n_crossings());
        let mut sz = szabo_on(build_complex_capped(d, Ring::F2, mem_cap)?, &orient, diagram_hash(d));
        sz.seed = Some(seed);
        Pipeline::from_szabo(d, sz, max_page, mem_cap)
    }

    /// Same as [`Pipeline::run`] for an already built total differential.
    pub fn from_szabo(
        d: &PlanarDiagram,
        sz: SzaboDifferential,
        max_page: u32,
        mem_cap: u64,
    ) -> Result<Pipeline, OpsError> {
        let basepoint = d.basepoint().or_else(|| d.arcs().first().copied()).ok_or(OpsError::MissingBasepoint(0))?;
        let ss = compute_pages(&sz, max_page);
        let kh = kh_homology_f2(&sz.complex);
        let integral = build_complex_capped(d, Ring::Z, mem_cap)?;
        let sq1 = bockstein_sq1(&integral, &sz.complex, &kh)?;
        let x_sz = extract_x_sz(&sz, d, basepoint)?;
        let x_pages = induce_page_map(&x_sz, &sz, &ss).map_err(|e| OpsError::Contract(e.to_string()))?;
        let x = basepoint_x(&sz.complex, basepoint)?;
        let x_star = induced_on_homology(&sz.complex, &kh, &x)?;
        let reduced = reduced_decomposition(&kh, &x_star)?;
        Ok(Pipeline { diagram: d.clone(), basepoint, sz, ss, kh, integral, sq1, x_sz, x_star, x_pages, reduced })
    }

    pub fn bridge(&self) -> Page2Bridge<'_> {
        Page2Bridge { complex: &self.sz.complex, kh: &self.kh, ss: &self.ss }
    }

    pub fn sq1_page2(&self) -> PageMap {
        self.bridge().page_map(&self.sq1)
    }

    pub fn x_page(&self, n: u32) -> Option<&PageMap> {
        self.x_pages.iter().find(|p| p.n == n)
    }

    /// Lift reports keyed by operation name.
    pub fn lift_reports(&self) -> BTreeMap<&'static str, LiftReport> {
        let mut out = BTreeMap::new();
        out.insert("identity", check_operation_lift(&PageMap::identity(&self.ss, 2), &self.ss));
        out.insert("x", check_operation_lift(&self.bridge().page_map(&self.x_star), &self.ss));
        out.insert("sq1", check_operation_lift(&self.sq1_page2(), &self.ss));
        out
    }
}

/// One asserted fact with what was expected and what was found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub ok: bool,
}

fn check(name: &str, expected: impl ToString, observed: impl ToString) -> Check {
    let (expected, observed) = (expected.to_string(), observed.to_string());
    Check { name: name.into(), ok: expected == observed, expected, observed }
}

#[derive(Clone, Debug, Serialize)]
pub struct SqRank {
    pub from: Bigrading,
    pub to: Bigrading,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    pub knot: String,
    pub seed: u64,
    pub pages: BTreeMap<u32, String>,
    pub sq1_ranks: Vec<SqRank>,
    pub lifts: BTreeMap<&'static str, LiftReport>,
    pub cartan: Vec<CartanVerdict>,
    pub checks: Vec<Check>,
    pub verdict: String,
}

impl CounterexampleReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("{} (orientation seed {})\n", self.knot, self.seed);
        for (n, p) in &self.pages {
            s += &format!("  E{n}: {p}\n");
        }
        s += "  Sq^1 ranks:\n";
        for r in &self.sq1_ranks {
            s += &format!("    ({},{}) -> ({},{}): {}\n", r.from.t, r.from.q, r.to.t, r.to.q, r.rank);
        }
        for c in &self.checks {
            let mark = if c.ok { "ok  " } else { "FAIL" };
            s += &format!("  [{mark}] {}: {}", c.name, c.observed);
            if !c.ok {
                s += &format!(" (expected {})", c.expected);
            }
            s += "\n";
        }
        s += &format!("verdict: {}\n", self.verdict);
        s
    }
}

fn arrow_list(ss: &SpectralSequence, page: u32) -> String {
    let p = ss.page_or_last(page);
    let arrows: Vec<String> = p
        .arrows(ss.grading())
        .iter()
        .filter(|_| p.n == page)
        .map(|a| format!("({},{})->({},{})", a.from.t, a.from.q, a.to.t, a.to.q))
        .collect();
    arrows.join(" ")
}

fn expected_arrows(list: &[t45::Arrow]) -> String {
    list.iter().map(|((a, b), (c, d))| format!("({a},{b})->({c},{d})")).collect::<Vec<_>>().join(" ")
}

fn at(t: i32, q: i32) -> Bigrading {
    Bigrading { t, q }
}

/// Page-3 facts of the argument, for any knot whose pages have the same
/// local shape; each piece is reported separately so a partial mismatch
/// still shows where it happened.
fn theorem_checks(p: &Pipeline, checks: &mut Vec<Check>) -> Option<(u32, PageMap)> {
    let ss = &p.ss;
    let pers = &ss.persistence;
    checks.push(check("E_3 at (4,17) is zero", 0, labels_at(ss, 3, 4, 17).len()));
    let a_labels = labels_at(ss, 3, t45::WITNESS.0, t45::WITNESS.1);
    checks.push(check("E_3 at (3,17) has rank one", 1, a_labels.len()));
    let &a = a_labels.first()?;
    let page3 = ss.page(3)?;
    let b = page3.d(a);
    checks.push(check(
        "d_3 on (3,17) lands in (6,21)",
        "(6,21)",
        b.map_or("0".into(), |b| {
            let g = pers.grading[b as usize];
            format!("({},{})", g.t, g.q)
        }),
    ));
    let b = b?;
    // the forced f_3 is Sq^1 restricted from page 2
    let sq1_2 = p.sq1_page2();
    let f3 = sq1_2.restrict(pers);
    let d3_f3 = f3.apply(&[a]).iter().filter_map(|&g| page3.d(g)).count();
    checks.push(check("d_3 f_3 vanishes on (3,17)", 0, d3_f3));
    let f3_d3 = f3.apply(&[b]);
    checks.push(check("f_3 d_3 is nonzero on (3,17)", true, !f3_d3.is_empty()));
    // a is black: a = X_3(w) with w white at (3,19), and
    // d_3 a = d_3 X_3 w = X_3 d_3 w
    if let Some(x3) = p.x_page(3) {
        let w = labels_at(ss, 3, 3, 19);
        let xw = x3.apply(&w);
        checks.push(check("X_3 maps (3,19) onto (3,17)", format!("{:?}", [a]), format!("{xw:?}")));
        let d3 = |v: &[u32]| {
            let mut o: Vec<u32> = v.iter().filter_map(|&g| page3.d(g)).collect();
            crate::cube::cancel_pairs(&mut o);
            o
        };
        let lhs = d3(&xw);
        let rhs = x3.apply(&d3(&w));
        checks.push(check(
            "d_3 X_3 = X_3 d_3 on (3,19), equal to d_3 of the black class",
            format!("{:?} = {:?}", [b], [b]),
            format!("{lhs:?} = {rhs:?}"),
        ));
        let (bg, bc) = p.bridge().to_canonical(b);
        let blacks = p.reduced.black.get(&bg).cloned().unwrap_or_default();
        let is_black = super::butterfly::in_span(p.kh.dim(bg), &blacks, &bc);
        checks.push(check("d_3 of the black class at (3,17) is black at (6,21)", true, is_black));
    }
    Some((a, f3))
}

/// Run the pipeline on T(4,5) and compare every step with the reference
/// values.
pub fn counterexample_report(seed: u64, mem_cap: u64) -> Result<CounterexampleReport, OpsError> {
    let d = torus_knot(4, 5)?;
    let p = Pipeline::run(&d, seed, 20, mem_cap)?;
    let ss = &p.ss;
    let mut checks = Vec::new();
    let pages: BTreeMap<u32, String> = ss.pages.iter().map(|pg| (pg.n, pg.poincare().to_string())).collect();
    let norm = |s: &str| crate::specseq::Poincare::parse(s).map(|p| p.to_string()).unwrap_or_default();
    checks.push(check("E_2 = Kh", norm(t45::P2), p.kh.poincare()));
    checks.push(check("E_2", norm(t45::P2), ss.page_or_last(2).poincare()));
    checks.push(check("E_3", norm(t45::P3), ss.page_or_last(3).poincare()));
    checks.push(check("E_4", norm(t45::P4), ss.page_or_last(4).poincare()));
    checks.push(check("E_4 = E_inf", norm(t45::P4), ss.infinity()));
    checks.push(check("d_2 arrows", expected_arrows(&t45::D2), arrow_list(ss, 2)));
    checks.push(check("d_3 arrows", expected_arrows(&t45::D3), arrow_list(ss, 3)));
    let sq1_ranks: Vec<SqRank> =
        p.sq1.ranks().into_iter().map(|((from, to), rank)| SqRank { from, to, rank }).collect();
    let nonzero: Vec<String> = sq1_ranks.iter().map(|r| format!("({},{})", r.from.t, r.from.q)).collect();
    let want: Vec<String> = t45::SQ1.iter().map(|(t, q)| format!("({t},{q})")).collect();
    checks.push(check("Sq^1 nonzero blocks", want.join(" "), nonzero.join(" ")));
    checks.push(check("Sq^1 on (3,17) -> (4,17)", 0, p.sq1.rank(at(t45::SQ1_ZERO.0, t45::SQ1_ZERO.1))));
    checks.push(check("Sq^1 Sq^1 = 0", true, p.sq1.compose(&p.sq1).is_zero()));
    checks.push(check(
        "X_Sz commutes with the total differential",
        "none",
        chain_commutation_failure(&p.sz, &p.x_sz).map_or("none".into(), |g| format!("generator {g}")),
    ));
    checks.push(check(
        "X_2 = X_* in canonical bases",
        true,
        p.x_page(2).is_some_and(|x2| p.bridge().canonical(x2) == p.x_star),
    ));
    checks.push(check("black / white dots", "13 / 13", format!("{} / {}", p.reduced.n_black(), p.reduced.n_white())));
    let t0: Vec<String> = ["black", "white"]
        .iter()
        .zip([&p.reduced.black, &p.reduced.white])
        .flat_map(|(name, m)| m.keys().filter(|b| b.t == 0).map(move |b| format!("{name}@{}", b.q)))
        .collect();
    checks.push(check("t = 0 column", "black@11 white@13", t0.join(" ")));
    let lifts = p.lift_reports();
    checks.push(check("identity lifts", true, lifts["identity"].lifts));
    checks.push(check("X_* lifts", true, lifts["x"].lifts));
    for xn in &p.x_pages {
        checks.push(check(
            &format!("X_{} commutes with d_{}", xn.n, xn.n),
            "none",
            crate::specseq::commutation_failure(ss, xn).map_or("none".into(), |f| format!("{:?}", f.block)),
        ));
    }
    let sq = &lifts["sq1"];
    let fail =
        sq.failure.as_ref().map_or("lifts".into(), |f| format!("page {} block ({},{})", f.page, f.block.t, f.block.q));
    checks.push(check("Sq^1 lift", format!("page 3 block ({},{})", t45::WITNESS.0, t45::WITNESS.1), fail));
    let mut cartan = Vec::new();
    if let Some((a, f3)) = theorem_checks(&p, &mut checks) {
        let tp = TensorPage { ss, n: 3, sq1: &f3 };
        for n in 1..=3 {
            let v = tp.check(n, a);
            checks.push(check(&format!("Cartan check, n = {n}"), true, v.passes));
            cartan.push(v);
        }
    }
    let ok = checks.iter().all(|c| c.ok);
    let verdict = if ok {
        format!("Sq^1 does not lift: fails at page 3, block ({},{})", t45::WITNESS.0, t45::WITNESS.1)
    } else {
        "mismatch against the reference values".to_string()
    };
    Ok(CounterexampleReport { knot: "T(4,5)".into(), seed, pages, sq1_ranks, lifts, cartan, checks, verdict })
}

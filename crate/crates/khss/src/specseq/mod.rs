//! The spectral sequence of the `t`-filtration on `(CKh, d + δ)`.
//!
//! Pages are numbered from 2, so page 2 is Khovanov homology. All page data
//! is read from a single filtered reduction ([`Persistence`]): the basis of
//! page `n` is labelled by the generators whose pair is at least `n` long,
//! and `d_n` matches the two ends of every pair of length exactly `n`.

pub mod persistence;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use persistence::{Persistence, Role};

use crate::cube::{Bigrading, ChainMapLayer};
use crate::szabo::SzaboDifferential;

/// Ranks per bidegree.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct Poincare(pub BTreeMap<Bigrading, usize>);

impl Poincare {
    /// Parse the textual form produced by `Display`, e.g.
    /// `(q^11+q^13)t^0 + (q^15+2q^17)t^2`.
    pub fn parse(s: &str) -> Result<Poincare, String> {
        let mut map = BTreeMap::new();
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        for term in compact.split(")t^").collect::<Vec<_>>().windows(2).enumerate().map(|(i, w)| (i, w[0], w[1])) {
            let (_, left, right) = term;
            // left ends with "(...", right starts with the t exponent
            let open = left.rfind('(').ok_or("missing '('")?;
            let inner = &left[open + 1..];
            let t_str: String = right.chars().take_while(|c| c.is_ascii_digit() || *c == '-').collect();
            let t: i32 = t_str.parse().map_err(|_| format!("bad t exponent in {right}"))?;
            for mono in inner.split('+') {
                let (c, q) = mono.split_once("q^").ok_or(format!("bad monomial {mono}"))?;
                let c: usize = if c.is_empty() { 1 } else { c.parse().map_err(|_| format!("bad coefficient {c}"))? };
                let q: i32 = q.parse().map_err(|_| format!("bad q exponent {q}"))?;
                *map.entry(Bigrading { t, q }).or_insert(0) += c;
            }
        }
        Ok(Poincare(map))
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn rank(&self, t: i32, q: i32) -> usize {
        self.0.get(&Bigrading { t, q }).copied().unwrap_or(0)
    }

    /// Σ (-1)^t q^j rank.
    pub fn euler(&self) -> BTreeMap<i32, i64> {
        let mut e = BTreeMap::new();
        for (b, &r) in &self.0 {
            *e.entry(b.q).or_insert(0) += if b.t.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) };
        }
        e.retain(|_, v| *v != 0);
        e
    }

    /// Signed count that every page differential preserves. Each `d_r`
    /// lowers `w = q - 2t` by exactly 2, so weighting a class by
    /// `(-1)^(w/2)` makes source and target cancel. The usual `(-1)^t`
    /// count does not survive: `d_2` keeps the parity of `t`.
    pub fn euler_w(&self) -> i64 {
        self.0.iter().map(|(b, &r)| w_sign(b.q - 2 * b.t) * r as i64).sum()
    }
}

pub(crate) fn w_sign(w: i32) -> i64 {
    if w.div_euclid(2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl fmt::Display for Poincare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut by_t: BTreeMap<i32, Vec<(i32, usize)>> = BTreeMap::new();
        for (b, &r) in &self.0 {
            if r > 0 {
                by_t.entry(b.t).or_default().push((b.q, r));
            }
        }
        if by_t.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = by_t
            .iter()
            .map(|(t, qs)| {
                let inner: Vec<String> =
                    qs.iter().map(|&(q, r)| if r == 1 { format!("q^{q}") } else { format!("{r}q^{q}") }).collect();
                format!("({})t^{t}", inner.join("+"))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// A nonzero block of a page differential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Arrow {
    pub page: u32,
    pub from: Bigrading,
    pub to: Bigrading,
    pub rank: usize,
}

/// One page: basis labels per bidegree and the page differential.
#[derive(Clone, Debug)]
pub struct Page {
    pub n: u32,
    /// labels of the page basis per bidegree (sorted generator indices)
    pub blocks: BTreeMap<Bigrading, Vec<u32>>,
    /// `d_n` as (source label, target label); a partial matching
    pub differential: Vec<(u32, u32)>,
}

impl Page {
    pub fn poincare(&self) -> Poincare {
        Poincare(self.blocks.iter().map(|(b, v)| (*b, v.len())).filter(|(_, r)| *r > 0).collect())
    }

    /// Nonzero blocks of `d_n` with their ranks.
    pub fn arrows(&self, grading: &[Bigrading]) -> Vec<Arrow> {
        let mut m: BTreeMap<(Bigrading, Bigrading), usize> = BTreeMap::new();
        for &(s, t) in &self.differential {
            *m.entry((grading[s as usize], grading[t as usize])).or_insert(0) += 1;
        }
        m.into_iter().map(|((from, to), rank)| Arrow { page: self.n, from, to, rank }).collect()
    }

    pub fn d(&self, g: u32) -> Option<u32> {
        self.differential.iter().find(|(s, _)| *s == g).map(|&(_, t)| t)
    }
}

/// The spectral sequence of a Szabó complex.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub persistence: Persistence,
    /// pages 2..=last
    pub pages: Vec<Page>,
}

impl SpectralSequence {
    pub fn grading(&self) -> &[Bigrading] {
        &self.persistence.grading
    }

    pub fn page(&self, n: u32) -> Option<&Page> {
        self.pages.iter().find(|p| p.n == n)
    }

    /// Page `n` even past the computed range (pages stabilise).
    pub fn page_or_last(&self, n: u32) -> &Page {
        self.page(n).unwrap_or_else(|| self.pages.last().unwrap())
    }

    /// The abutment: homology of the total complex.
    pub fn infinity(&self) -> Poincare {
        let mut m = BTreeMap::new();
        for (g, r) in self.persistence.role.iter().enumerate() {
            if *r == Role::Essential {
                *m.entry(self.persistence.grading[g]).or_insert(0) += 1;
            }
        }
        Poincare(m)
    }

    /// First page from which nothing changes.
    pub fn collapse_page(&self) -> u32 {
        self.persistence.max_length.max(1) + 1
    }

    pub fn arrows(&self) -> Vec<Arrow> {
        self.pages.iter().flat_map(|p| p.arrows(self.grading())).collect()
    }
}

/// Default page range: one past the largest `t` span.
pub fn default_max_page(sz: &SzaboDifferential) -> u32 {
    let ts: Vec<i32> = sz.complex.bases.keys().map(|b| b.t).collect();
    let span = ts.iter().max().unwrap_or(&0) - ts.iter().min().unwrap_or(&0);
    span as u32 + 1
}

/// Pages 2..=max_page (stopping early once they stabilise).
pub fn compute_pages(sz: &SzaboDifferential, max_page: u32) -> SpectralSequence {
    let persistence = Persistence::new(sz);
    pages_from(persistence, max_page)
}

pub fn pages_from(persistence: Persistence, max_page: u32) -> SpectralSequence {
    let last = max_page.max(2).min(persistence.max_length.max(1) + 1);
    let mut pages = Vec::new();
    for n in 2..=last {
        let mut blocks: BTreeMap<Bigrading, Vec<u32>> = BTreeMap::new();
        let mut differential = Vec::new();
        for g in 0..persistence.dim() as u32 {
            if !persistence.alive(g, n) {
                continue;
            }
            blocks.entry(persistence.grading[g as usize]).or_default().push(g);
            if persistence.role[g as usize] == Role::Death(n) {
                differential.push((g, persistence.partner[g as usize]));
            }
        }
        pages.push(Page { n, blocks, differential });
    }
    SpectralSequence { persistence, pages }
}

/// A linear map on one page, in page bases: label -> labels of the image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageMap {
    pub n: u32,
    pub bidegree: (i32, i32),
    pub images: BTreeMap<u32, Vec<u32>>,
}

impl PageMap {
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let mut acc: Vec<u32> = v.iter().flat_map(|g| self.images.get(g).into_iter().flatten().copied()).collect();
        crate::cube::cancel_pairs(&mut acc);
        acc
    }

    /// Rank of each nonzero block `(t,q) -> (t+a, q+b)`.
    pub fn block_ranks(&self, grading: &[Bigrading]) -> BTreeMap<(Bigrading, Bigrading), usize> {
        let mut cols: BTreeMap<Bigrading, Vec<Vec<u32>>> = BTreeMap::new();
        for (&s, img) in &self.images {
            if !img.is_empty() {
                cols.entry(grading[s as usize]).or_default().push(img.clone());
            }
        }
        cols.into_iter()
            .map(|(b, c)| {
                let to = Bigrading { t: b.t + self.bidegree.0, q: b.q + self.bidegree.1 };
                ((b, to), crate::linalg::sparse::rank_of_columns(&c))
            })
            .filter(|(_, r)| *r > 0)
            .collect()
    }

    /// The map induced on the next page (valid when it commutes with the
    /// page differential): restrict to the surviving labels.
    pub fn restrict(&self, pers: &Persistence) -> PageMap {
        let n = self.n + 1;
        let images = self
            .images
            .iter()
            .filter(|(&s, _)| pers.alive(s, n))
            .map(|(&s, img)| (s, img.iter().copied().filter(|&g| pers.alive(g, n)).collect()))
            .collect();
        PageMap { n, bidegree: self.bidegree, images }
    }

    pub fn identity(ss: &SpectralSequence, n: u32) -> PageMap {
        let p = ss.page_or_last(n);
        let images = p.blocks.values().flatten().map(|&g| (g, vec![g])).collect();
        PageMap { n, bidegree: (0, 0), images }
    }

    pub fn zero(ss: &SpectralSequence, n: u32, bidegree: (i32, i32)) -> PageMap {
        let p = ss.page_or_last(n);
        let images = p.blocks.values().flatten().map(|&g| (g, vec![])).collect();
        PageMap { n, bidegree, images }
    }

    pub fn is_zero(&self) -> bool {
        self.images.values().all(|v| v.is_empty())
    }
}

/// Where (and how) the lifting of a page map breaks down.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LiftFailure {
    pub page: u32,
    pub block: Bigrading,
    /// page basis label of the witness
    pub witness: u32,
    /// `d_n f_n` and `f_n d_n` on the witness (labels)
    pub d_after_f: Vec<u32>,
    pub f_after_d: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LiftReport {
    pub lifts: bool,
    /// pages on which commutation was verified
    pub checked_pages: Vec<u32>,
    pub failure: Option<LiftFailure>,
}

fn apply_d(page: &Page, v: &[u32]) -> Vec<u32> {
    let m: BTreeMap<u32, u32> = page.differential.iter().copied().collect();
    let mut acc: Vec<u32> = v.iter().filter_map(|g| m.get(g).copied()).collect();
    crate::cube::cancel_pairs(&mut acc);
    acc
}

/// Compare `f_n d_n` and `d_n f_n` on every basis element of page `n`.
pub fn commutation_failure(ss: &SpectralSequence, f: &PageMap) -> Option<LiftFailure> {
    let page = ss.page_or_last(f.n);
    let grading = ss.grading();
    for labels in page.blocks.values() {
        for &g in labels {
            let df = apply_d(page, &f.apply(&[g]));
            let fd = f.apply(&apply_d(page, &[g]));
            if df != fd {
                return Some(LiftFailure {
                    page: f.n,
                    block: grading[g as usize],
                    witness: g,
                    d_after_f: df,
                    f_after_d: fd,
                });
            }
        }
    }
    None
}

/// Starting from a map on page 2, test `f_n d_n = d_n f_n` and pass to
/// `f_{n+1} = H(f_n, d_n)` page by page.
pub fn check_operation_lift(f2: &PageMap, ss: &SpectralSequence) -> LiftReport {
    assert_eq!(f2.n, 2, "lifting starts on page 2");
    let mut f = f2.clone();
    let mut checked = Vec::new();
    let last = ss.pages.last().map_or(2, |p| p.n);
    loop {
        if let Some(fail) = commutation_failure(ss, &f) {
            return LiftReport { lifts: false, checked_pages: checked, failure: Some(fail) };
        }
        checked.push(f.n);
        if f.n >= last {
            return LiftReport { lifts: true, checked_pages: checked, failure: None };
        }
        f = f.restrict(&ss.persistence);
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum InduceError {
    #[error("chain map does not commute with the total differential at generator {0}")]
    NotAChainMap(u32),
    #[error("chain map lowers the filtration at generator {0}")]
    LowersFiltration(u32),
}

/// A chain-level map given generator by generator (all layers summed).
pub trait ChainMap: Sync {
    fn image(&self, g: u32) -> Vec<u32>;
    /// `(t, q)` shift of the filtration-preserving part
    fn bidegree(&self) -> (i32, i32);
}

impl ChainMap for ChainMapLayer {
    fn image(&self, g: u32) -> Vec<u32> {
        ChainMapLayer::image(self, g as u64).to_vec()
    }
    fn bidegree(&self) -> (i32, i32) {
        self.bidegree
    }
}

/// Check `f δ = δ f` at chain level on every generator.
pub fn chain_commutation_failure(sz: &SzaboDifferential, f: &dyn ChainMap) -> Option<u32> {
    use rayon::prelude::*;
    (0..sz.dim() as u32).into_par_iter().find_first(|&g| {
        let mut fd: Vec<u32> = sz.apply_generator(g).iter().flat_map(|&x| f.image(x)).collect();
        crate::cube::cancel_pairs(&mut fd);
        let df = sz.apply(&f.image(g));
        fd != df
    })
}

/// Page maps induced by a filtration-preserving chain map, for every
/// computed page. Each is computed directly from the chain level.
pub fn induce_page_map(
    f: &dyn ChainMap,
    sz: &SzaboDifferential,
    ss: &SpectralSequence,
) -> Result<Vec<PageMap>, InduceError> {
    if let Some(g) = chain_commutation_failure(sz, f) {
        return Err(InduceError::NotAChainMap(g));
    }
    let pers = &ss.persistence;
    let (a, _) = f.bidegree();
    let mut out = Vec::new();
    for page in &ss.pages {
        let mut images = BTreeMap::new();
        for labels in page.blocks.values() {
            for &g in labels {
                let t = pers.grading[g as usize].t;
                let fz = f.image_of(&pers.representative(g));
                if let Some(&bad) = fz.iter().find(|&&x| pers.grading[x as usize].t < t + a) {
                    return Err(InduceError::LowersFiltration(bad));
                }
                images.insert(g, pers.page_class(&fz, t + a, page.n));
            }
        }
        out.push(PageMap { n: page.n, bidegree: f.bidegree(), images });
    }
    Ok(out)
}

trait ApplyVec {
    fn image_of(&self, v: &[u32]) -> Vec<u32>;
}

impl<T: ChainMap + ?Sized> ApplyVec for T {
    fn image_of(&self, v: &[u32]) -> Vec<u32> {
        let mut acc: Vec<u32> = v.iter().flat_map(|&g| self.image(g)).collect();
        crate::cube::cancel_pairs(&mut acc);
        acc
    }
}

/// Poincaré polynomials of all computed pages, keyed by page number.
pub fn page_polynomials(ss: &SpectralSequence) -> BTreeMap<u32, Poincare> {
    ss.pages.iter().map(|p| (p.n, p.poincare())).collect()
}

/// Whether two spectral sequences have the same page polynomials on pages
/// 2..=max (pages past the end repeat the last one).
pub fn same_pages(a: &SpectralSequence, b: &SpectralSequence, max: u32) -> bool {
    (2..=max).all(|n| a.page_or_last(n).poincare() == b.page_or_last(n).poincare())
}

/// Labels of a page in one bidegree.
pub fn labels_at(ss: &SpectralSequence, n: u32, t: i32, q: i32) -> Vec<u32> {
    ss.page_or_last(n).blocks.get(&Bigrading { t, q }).cloned().unwrap_or_default()
}

/// Set of bidegrees with nonzero rank on a page.
pub fn support(p: &Poincare) -> BTreeSet<Bigrading> {
    p.0.iter().filter(|(_, &r)| r > 0).map(|(b, _)| *b).collect()
}

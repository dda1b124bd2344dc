//! Survey of the "butterfly" pattern: a `d_2` between black generators next
//! to an `Sq^2` out of the matching white generator.
//!
//! If `d_2(x·m) = x·m'` with `x·m` black at `(t,q)` then `m` is white at
//! `(t,q+2)` and `m'` sits at `(t+2,q+4)`, so `x·m'` is black at
//! `(t+2,q+2)`, which is exactly where `Sq^2(m)` lands. The pattern says
//! that `Sq^2(m)` then has a nonzero black part. This crate does not compute
//! `Sq^2`; the matrices come from a JSON file written in the exported
//! canonical bases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Page2Bridge, ReducedDecomposition};
use crate::cube::Bigrading;
use crate::linalg::{BitVec, MatF2};

pub const SQ2_FORMAT_VERSION: u32 = 1;

/// On-disk form: `blocks["t,q"]` is the dense 0/1 matrix of
/// `Sq^2 : Kh^{t,q} -> Kh^{t+2,q}`, one row per target basis vector.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sq2File {
    pub version: u32,
    pub blocks: BTreeMap<String, Vec<Vec<u8>>>,
}

#[derive(Debug, thiserror::Error)]
pub enum Sq2Error {
    #[error("cannot parse the Sq^2 file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported Sq^2 file version {0}")]
    Version(u32),
    #[error("bad bidegree key {0:?}, expected \"t,q\"")]
    Key(String),
    #[error("Sq^2 block {from:?} is {rows}x{cols}, the canonical bases need {want_rows}x{want_cols}")]
    Dimension { from: Bigrading, rows: usize, cols: usize, want_rows: usize, want_cols: usize },
}

/// Parse and check an `Sq^2` file against the canonical basis dimensions.
pub fn parse_sq2(text: &str, dim: impl Fn(Bigrading) -> usize) -> Result<BTreeMap<Bigrading, MatF2>, Sq2Error> {
    let f: Sq2File = serde_json::from_str(text)?;
    if f.version != SQ2_FORMAT_VERSION {
        return Err(Sq2Error::Version(f.version));
    }
    let mut out = BTreeMap::new();
    for (k, rows) in f.blocks {
        let (t, q) = k.split_once(',').ok_or_else(|| Sq2Error::Key(k.clone()))?;
        let from = Bigrading {
            t: t.trim().parse().map_err(|_| Sq2Error::Key(k.clone()))?,
            q: q.trim().parse().map_err(|_| Sq2Error::Key(k.clone()))?,
        };
        let (want_rows, want_cols) = (dim(Bigrading { t: from.t + 2, q: from.q }), dim(from));
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.len() != want_rows || cols != want_cols || rows.iter().any(|r| r.len() != cols) {
            return Err(Sq2Error::Dimension { from, rows: rows.len(), cols, want_rows, want_cols });
        }
        let bits =
            rows.iter().map(|r| BitVec::from_bools(&r.iter().map(|&x| x & 1 == 1).collect::<Vec<_>>())).collect();
        out.insert(from, MatF2::from_rows(want_cols, bits));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SiteStatus {
    Holds,
    Violated,
    NoData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ButterflySite {
    /// bidegree of the black source `x·m`
    pub site: Bigrading,
    /// canonical coordinates of `x·m`, `m` and `x·m'`
    pub xm: Vec<bool>,
    pub m: Vec<bool>,
    pub xm_prime: Vec<bool>,
    pub status: SiteStatus,
    /// whether the black part of `Sq^2(m)` is exactly `x·m'`
    pub exact: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ButterflyReport {
    pub sites: Vec<ButterflySite>,
    /// sources of nonzero `Sq^2` on white generators with no `d_2` site
    /// attached
    pub unmatched_sq2: Vec<Bigrading>,
}

fn support(v: &[bool]) -> Vec<u32> {
    v.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i as u32).collect()
}

/// Solve `sum c_i basis_i = v`; `None` when `v` is outside the span.
fn express(dim: usize, basis: &[Vec<bool>], v: &[bool]) -> Option<Vec<bool>> {
    let cols: Vec<Vec<u32>> = basis.iter().map(|b| support(b)).collect();
    let m = MatF2::from_columns(dim, &cols);
    m.solve(&BitVec::from_bools(v)).map(|x| (0..x.len()).map(|i| x.get(i)).collect())
}

fn combine(dim: usize, basis: &[Vec<bool>], coeffs: &[bool]) -> Vec<bool> {
    let mut out = vec![false; dim];
    for (b, &c) in basis.iter().zip(coeffs) {
        if c {
            for (o, &x) in out.iter_mut().zip(b) {
                *o ^= x;
            }
        }
    }
    out
}

/// Enumerate butterfly sites and test them against the supplied `Sq^2`.
pub fn butterfly_detect(
    bridge: &Page2Bridge,
    rd: &ReducedDecomposition,
    x_star: &super::CanonicalMap,
    sq2: Option<&BTreeMap<Bigrading, MatF2>>,
) -> ButterflyReport {
    let page = bridge.ss.page_or_last(2);
    let grading = bridge.ss.grading();
    let empty = Vec::new();
    let mut sites = Vec::new();
    let mut m_degrees = Vec::new();
    let mut sources: Vec<Bigrading> = page.differential.iter().map(|&(s, _)| grading[s as usize]).collect();
    sources.sort();
    sources.dedup();
    for site in sources {
        let to = Bigrading { t: site.t + 2, q: site.q + 2 };
        let m_at = Bigrading { t: site.t, q: site.q + 2 };
        let dim_to = bridge.kh.dim(to);
        let blacks_to = rd.black.get(&to).unwrap_or(&empty);
        let whites_m = rd.white.get(&m_at).unwrap_or(&empty);
        for xm in rd.black.get(&site).unwrap_or(&empty) {
            let labels = page_d(page, &bridge.from_canonical(site, xm));
            let mut xm_prime = vec![false; dim_to];
            for g in labels {
                let (_, c) = bridge.to_canonical(g);
                for (a, b) in xm_prime.iter_mut().zip(c) {
                    *a ^= b;
                }
            }
            if !xm_prime.iter().any(|&x| x) || express(dim_to, blacks_to, &xm_prime).is_none() {
                continue;
            }
            // the white preimage of x·m under X_*
            let Some(xm_block) = x_star.blocks.get(&m_at) else { continue };
            let images: Vec<Vec<bool>> = whites_m
                .iter()
                .map(|w| {
                    let v = xm_block.mul_vec(&BitVec::from_bools(w));
                    (0..v.len()).map(|i| v.get(i)).collect()
                })
                .collect();
            let Some(c) = express(bridge.kh.dim(site), &images, xm) else { continue };
            let m = combine(bridge.kh.dim(m_at), whites_m, &c);
            m_degrees.push(m_at);
            let (status, exact) = match sq2.and_then(|s| s.get(&m_at)) {
                None => (SiteStatus::NoData, None),
                Some(mat) => {
                    let v = mat.mul_vec(&BitVec::from_bools(&m));
                    let s: Vec<bool> = (0..v.len()).map(|i| v.get(i)).collect();
                    let whites_to = rd.white.get(&to).unwrap_or(&empty);
                    let mut basis = blacks_to.clone();
                    basis.extend(whites_to.iter().cloned());
                    let coeffs = express(dim_to, &basis, &s).expect("black and white dots span the block");
                    let black_part = combine(dim_to, blacks_to, &coeffs[..blacks_to.len()]);
                    let holds = black_part.iter().any(|&x| x);
                    (if holds { SiteStatus::Holds } else { SiteStatus::Violated }, Some(black_part == xm_prime))
                }
            };
            sites.push(ButterflySite { site, xm: xm.clone(), m, xm_prime, status, exact });
        }
    }
    let mut unmatched_sq2 = Vec::new();
    if let Some(sq2) = sq2 {
        for (from, mat) in sq2 {
            if m_degrees.contains(from) {
                continue;
            }
            let hits_white =
                rd.white.get(from).unwrap_or(&empty).iter().any(|w| !mat.mul_vec(&BitVec::from_bools(w)).is_zero());
            if hits_white {
                unmatched_sq2.push(*from);
            }
        }
    }
    ButterflyReport { sites, unmatched_sq2 }
}

fn page_d(page: &crate::specseq::Page, v: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = v.iter().filter_map(|&g| page.d(g)).collect();
    crate::cube::cancel_pairs(&mut out);
    out
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(dim: usize, basis: &[Vec<bool>], v: &[bool]) -> bool {
    express(dim, basis, v).is_some()
}

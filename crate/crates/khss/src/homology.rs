//! Khovanov homology of a cube complex, over F2 with canonical
//! representatives and over the integers as ranks plus torsion.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cube::{Bigrading, ChainComplex, Ring};
use crate::linalg::{homology_subquotient, sparse_invariant_factors, Overflow, SparseVec, Subquotient};
use crate::specseq::Poincare;

/// Homology of one `(t,q)` block.
#[derive(Clone, Debug)]
pub struct KhBlock {
    pub grading: Bigrading,
    pub subquotient: Subquotient,
    /// canonical representatives as sorted global generator indices
    pub reps: Vec<Vec<u32>>,
}

/// F2 Khovanov homology with canonical representatives per bidegree.
/// Every bidegree of the complex has an entry, including those with zero
/// homology, so that any cycle can be checked and reduced.
#[derive(Clone, Debug)]
pub struct KhHomology {
    pub blocks: BTreeMap<Bigrading, KhBlock>,
}

impl KhHomology {
    pub fn poincare(&self) -> Poincare {
        Poincare(self.blocks.iter().map(|(b, k)| (*b, k.reps.len())).filter(|(_, r)| *r > 0).collect())
    }

    pub fn dim(&self, b: Bigrading) -> usize {
        self.blocks.get(&b).map_or(0, |k| k.reps.len())
    }

    /// Coordinates (in the canonical basis of its block) of the class of a
    /// cycle given by global indices; `None` for a non-cycle.
    pub fn coordinates(&self, c: &ChainComplex, b: Bigrading, z: &[u32]) -> Option<Vec<bool>> {
        let Some(blk) = self.blocks.get(&b) else {
            // no generators at all in this bidegree
            return if z.is_empty() { Some(vec![]) } else { None };
        };
        let mut local: SparseVec = z.iter().map(|&g| c.position[g as usize]).collect();
        local.sort_unstable();
        blk.subquotient.coordinates(&local).ok()
    }
}

/// F2 homology of every block, in parallel.
pub fn kh_homology_f2(c: &ChainComplex) -> KhHomology {
    let keys: Vec<Bigrading> = c.bases.keys().copied().collect();
    let blocks: Vec<(Bigrading, KhBlock)> = keys
        .par_iter()
        .map(|&b| {
            let prev = Bigrading { t: b.t - 1, q: b.q };
            let d_in = c.block_differential_f2(prev);
            let d_out = c.block_differential_f2(b);
            let sq = homology_subquotient(c.block(b).len(), &d_in, &d_out).expect("d squares to zero");
            let gens = c.block(b);
            let reps = sq.reps.iter().map(|r| r.iter().map(|&l| gens[l as usize]).collect()).collect();
            (b, KhBlock { grading: b, subquotient: sq, reps })
        })
        .collect();
    KhHomology { blocks: blocks.into_iter().collect() }
}

/// Integral homology of one bidegree: free rank and torsion coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct IntegralGroup {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

/// Integer columns of the block differential `(t,q) -> (t+1,q)`.
fn integer_block(c: &ChainComplex, b: Bigrading) -> (usize, Vec<Vec<(u32, i64)>>) {
    assert_eq!(c.ring, Ring::Z, "integral homology needs an integral complex");
    let to = Bigrading { t: b.t + 1, q: b.q };
    let cols = c
        .block(b)
        .iter()
        .map(|&s| {
            let mut col: BTreeMap<u32, i64> = BTreeMap::new();
            for (&t, &v) in c.differential.image(s as u64).iter().zip(c.differential.image_coeffs(s as u64)) {
                *col.entry(c.position[t as usize]).or_insert(0) += v;
            }
            col.into_iter().filter(|&(_, v)| v != 0).collect()
        })
        .collect();
    (c.block(to).len(), cols)
}

/// Invariant factors of every block differential.
pub fn block_invariant_factors(c: &ChainComplex) -> Result<BTreeMap<Bigrading, Vec<i64>>, Overflow> {
    let keys: Vec<Bigrading> = c.bases.keys().copied().collect();
    keys.par_iter()
        .map(|&b| {
            let (rows, cols) = integer_block(c, b);
            sparse_invariant_factors(rows, &cols).map(|f| (b, f))
        })
        .collect()
}

/// Integral Khovanov homology per bidegree.
pub fn kh_homology_z(c: &ChainComplex) -> Result<BTreeMap<Bigrading, IntegralGroup>, Overflow> {
    let factors = block_invariant_factors(c)?;
    let mut out = BTreeMap::new();
    for (&b, gens) in &c.bases {
        let out_rank = factors.get(&b).map_or(0, |f| f.len());
        let incoming = factors.get(&Bigrading { t: b.t - 1, q: b.q }).cloned().unwrap_or_default();
        let rank = gens.len() - out_rank - incoming.len();
        let torsion: Vec<i64> = incoming.into_iter().map(|x| x.abs()).filter(|&x| x > 1).collect();
        if rank > 0 || !torsion.is_empty() {
            out.insert(b, IntegralGroup { rank, torsion });
        }
    }
    Ok(out)
}

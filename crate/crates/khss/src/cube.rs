//! The cube of resolutions and the Khovanov complex.
//!
//! Resolutions are `u32` bitmasks (bit `i` = smoothing of crossing `i`).
//! Circles in a resolution are numbered by their smallest arc label, and a
//! generator's labels are a bitmask over those circles (set bit = `x`).
//! Generators are indexed globally in resolution order, then label order.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::diagram::{Arc, PlanarDiagram};

/// Which strand slots are joined by each smoothing: the 0-smoothing pairs
/// slots (0,1),(2,3); the 1-smoothing pairs (3,0),(1,2).
#[inline]
pub fn partner(bit: bool, slot: usize) -> usize {
    const P0: [usize; 4] = [1, 0, 3, 2];
    const P1: [usize; 4] = [3, 2, 1, 0];
    if bit {
        P1[slot]
    } else {
        P0[slot]
    }
}

/// Coefficient ring tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Ring {
    F2,
    Z,
}

/// A cube vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Resolution {
    pub bits: u32,
}

impl Resolution {
    pub fn weight(self) -> u32 {
        self.bits.count_ones()
    }
}

/// Circles of one resolution, as a slot-to-circle map.
#[derive(Clone, Debug)]
pub struct CircleDecomposition {
    pub resolution: Resolution,
    /// circle of each slot; crossing slots first, then one pseudo-slot per loop
    pub circle_of_slot: Vec<u8>,
    pub count: usize,
}

/// `(t, q)` bigrading.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct Bigrading {
    pub t: i32,
    pub q: i32,
}

/// A basis element of the Khovanov complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KhGenerator {
    pub resolution: Resolution,
    pub labels: u32,
}

/// Resolution data for a whole diagram, shared by every complex and map
/// built over it.
#[derive(Clone, Debug)]
pub struct Cube {
    pub n: usize,
    pub n_plus: i32,
    pub n_minus: i32,
    /// slots: 4 per crossing plus one pseudo-slot per free loop
    pub nslots: usize,
    /// the slot at the far end of the arc leaving each slot
    pub other: Vec<u32>,
    pub arc_of_slot: Vec<Arc>,
    /// flat table `circle[r * nslots + slot]`
    circle: Vec<u8>,
    ncircles: Vec<u8>,
    offset: Vec<u64>,
}

/// Largest cube we are willing to enumerate.
pub const MAX_CROSSINGS: usize = 24;

impl Cube {
    pub fn new(d: &PlanarDiagram) -> Cube {
        let n = d.n_crossings();
        assert!(n <= MAX_CROSSINGS, "diagram too large for the cube ({n} crossings)");
        let nslots = 4 * n + d.loops().len();
        let mut arc_of_slot = Vec::with_capacity(nslots);
        for c in d.crossings() {
            arc_of_slot.extend_from_slice(c);
        }
        arc_of_slot.extend_from_slice(d.loops());
        let mut first: BTreeMap<Arc, u32> = BTreeMap::new();
        let mut other = vec![0u32; nslots];
        for (s, &a) in arc_of_slot.iter().enumerate() {
            if s >= 4 * n {
                other[s] = s as u32;
            } else if let Some(&t) = first.get(&a) {
                other[s] = t;
                other[t as usize] = s as u32;
            } else {
                first.insert(a, s as u32);
            }
        }
        let nres = 1usize << n;
        let tables: Vec<(Vec<u8>, u8)> =
            (0..nres as u32).into_par_iter().map(|r| resolve_raw(n, nslots, &other, &arc_of_slot, r)).collect();
        let mut circle = Vec::with_capacity(nres * nslots);
        let mut ncircles = Vec::with_capacity(nres);
        let mut offset = Vec::with_capacity(nres + 1);
        let mut acc = 0u64;
        for (t, c) in tables {
            circle.extend_from_slice(&t);
            ncircles.push(c);
            offset.push(acc);
            acc += 1u64 << c;
        }
        offset.push(acc);
        Cube {
            n,
            n_plus: d.n_plus() as i32,
            n_minus: d.n_minus() as i32,
            nslots,
            other,
            arc_of_slot,
            circle,
            ncircles,
            offset,
        }
    }

    pub fn n_resolutions(&self) -> u32 {
        1u32 << self.n
    }
    /// Circle containing `slot` in resolution `r`.
    #[inline]
    pub fn circle(&self, r: u32, slot: usize) -> usize {
        self.circle[r as usize * self.nslots + slot] as usize
    }
    #[inline]
    pub fn circles_of(&self, r: u32) -> &[u8] {
        &self.circle[r as usize * self.nslots..(r as usize + 1) * self.nslots]
    }
    #[inline]
    pub fn n_circles(&self, r: u32) -> usize {
        self.ncircles[r as usize] as usize
    }
    pub fn resolve(&self, r: Resolution) -> CircleDecomposition {
        CircleDecomposition {
            resolution: r,
            circle_of_slot: self.circles_of(r.bits).to_vec(),
            count: self.n_circles(r.bits),
        }
    }
    /// Total number of generators.
    pub fn dim(&self) -> u64 {
        *self.offset.last().unwrap()
    }
    #[inline]
    pub fn index(&self, g: KhGenerator) -> u64 {
        self.offset[g.resolution.bits as usize] + g.labels as u64
    }
    pub fn generator(&self, idx: u64) -> KhGenerator {
        let r = self.offset.partition_point(|&o| o <= idx) - 1;
        KhGenerator { resolution: Resolution { bits: r as u32 }, labels: (idx - self.offset[r]) as u32 }
    }
    #[inline]
    pub fn offset(&self, r: u32) -> u64 {
        self.offset[r as usize]
    }

    pub fn grading(&self, g: KhGenerator) -> Bigrading {
        let w = g.resolution.weight() as i32;
        let c = self.n_circles(g.resolution.bits) as i32;
        let xs = g.labels.count_ones() as i32;
        Bigrading { t: w - self.n_minus, q: (c - 2 * xs) + w + self.n_plus - 2 * self.n_minus }
    }
    pub fn grading_of(&self, idx: u64) -> Bigrading {
        self.grading(self.generator(idx))
    }

    /// Map each circle of `r` to the circle of `r2` sharing a slot with it.
    /// Only meaningful for circles untouched by the crossings where r, r2 differ.
    #[inline]
    pub fn carry_labels(&self, rep: &[u32], r2: u32, labels: u32, touched_mask: u32) -> u32 {
        let mut out = 0u32;
        let mut rest = labels & !touched_mask;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.circle(r2, rep[c] as usize);
        }
        out
    }

    /// One slot on each circle of `r`.
    pub fn representatives(&self, r: u32) -> Vec<u32> {
        let mut rep = vec![u32::MAX; self.n_circles(r)];
        for (s, &c) in self.circles_of(r).iter().enumerate() {
            if rep[c as usize] == u32::MAX {
                rep[c as usize] = s as u32;
            }
        }
        rep
    }

    /// All generators in basis order.
    pub fn generators(&self) -> impl Iterator<Item = KhGenerator> + '_ {
        (0..self.n_resolutions()).flat_map(move |r| {
            (0..(1u32 << self.n_circles(r))).map(move |l| KhGenerator { resolution: Resolution { bits: r }, labels: l })
        })
    }

    /// Khovanov differential of one generator: targets with integer
    /// coefficients (signs by the number of set bits below the flipped one).
    pub fn kh_differential(&self, g: KhGenerator, out: &mut Vec<(u64, i64)>) {
        let r = g.resolution.bits;
        let rep = self.representatives(r);
        for i in 0..self.n {
            if r >> i & 1 == 1 {
                continue;
            }
            let r2 = r | 1 << i;
            let sign = if (r & ((1u32 << i) - 1)).count_ones().is_multiple_of(2) { 1 } else { -1 };
            let a = self.circle(r, 4 * i);
            let b = self.circle(r, 4 * i + 2);
            let touched = (1u32 << a) | (1u32 << b);
            let base = self.carry_labels(&rep, r2, g.labels, touched);
            let off = self.offset(r2);
            if a != b {
                let m = self.circle(r2, 4 * i);
                let xa = g.labels >> a & 1;
                let xb = g.labels >> b & 1;
                match xa + xb {
                    0 => out.push((off + base as u64, sign)),
                    1 => out.push((off + (base | 1 << m) as u64, sign)),
                    _ => {}
                }
            } else {
                let (c1, c2) = (self.circle(r2, 4 * i), self.circle(r2, 4 * i + 1));
                if g.labels >> a & 1 == 0 {
                    out.push((off + (base | 1 << c1) as u64, sign));
                    out.push((off + (base | 1 << c2) as u64, sign));
                } else {
                    out.push((off + (base | 1 << c1 | 1 << c2) as u64, sign));
                }
            }
        }
    }
}

fn resolve_raw(n: usize, nslots: usize, other: &[u32], arc_of_slot: &[Arc], r: u32) -> (Vec<u8>, u8) {
    const NONE: u32 = u32::MAX;
    let mut raw = vec![NONE; nslots];
    let mut keys: Vec<Arc> = Vec::new();
    for s0 in 0..nslots {
        if raw[s0] != NONE {
            continue;
        }
        let id = keys.len() as u32;
        let mut key = Arc::MAX;
        let mut s = s0;
        while raw[s] == NONE {
            raw[s] = id;
            key = key.min(arc_of_slot[s]);
            let p = if s < 4 * n { 4 * (s / 4) + partner(r >> (s / 4) & 1 == 1, s % 4) } else { s };
            raw[p] = id;
            key = key.min(arc_of_slot[p]);
            s = other[p] as usize;
        }
        keys.push(key);
    }
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by_key(|&c| keys[c]);
    let mut rank = vec![0u8; keys.len()];
    for (k, &c) in order.iter().enumerate() {
        rank[c] = k as u8;
    }
    (raw.iter().map(|&c| rank[c as usize]).collect(), keys.len() as u8)
}

/// A sparse map between generator spaces, stored by source generator.
///
/// Used for the Khovanov differential, the Szabó layers, the basepoint map
/// and anything else that sends basis vectors to sums of basis vectors.
#[derive(Clone, Debug, Default)]
pub struct ChainMapLayer {
    /// (t, q) shift of every nonzero entry
    pub bidegree: (i32, i32),
    pub ring: Option<Ring>,
    pub indptr: Vec<u64>,
    pub targets: Vec<u32>,
    /// integer coefficients, empty over F2
    pub coeffs: Vec<i64>,
}

impl ChainMapLayer {
    pub fn n_sources(&self) -> usize {
        self.indptr.len().saturating_sub(1)
    }
    pub fn image(&self, src: u64) -> &[u32] {
        &self.targets[self.indptr[src as usize] as usize..self.indptr[src as usize + 1] as usize]
    }
    pub fn image_coeffs(&self, src: u64) -> &[i64] {
        &self.coeffs[self.indptr[src as usize] as usize..self.indptr[src as usize + 1] as usize]
    }
    pub fn nnz(&self) -> usize {
        self.targets.len()
    }

    /// Assemble from per-source target lists, reducing mod 2 when `coeffs`
    /// are absent (targets appearing an even number of times cancel).
    pub fn from_rows_f2(bidegree: (i32, i32), rows: Vec<Vec<u32>>) -> ChainMapLayer {
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut targets = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_unstable();
            let mut k = 0;
            while k < row.len() {
                let mut j = k;
                while j < row.len() && row[j] == row[k] {
                    j += 1;
                }
                if (j - k) % 2 == 1 {
                    targets.push(row[k]);
                }
                k = j;
            }
            indptr.push(targets.len() as u64);
        }
        ChainMapLayer { bidegree, ring: Some(Ring::F2), indptr, targets, coeffs: vec![] }
    }

    /// Apply to a set of generators (an F2 vector given by its support).
    pub fn apply_f2(&self, v: &[u32]) -> Vec<u32> {
        let mut acc: Vec<u32> = v.iter().flat_map(|&s| self.image(s as u64).iter().copied()).collect();
        cancel_pairs(&mut acc);
        acc
    }
}

/// Sort and drop pairs of equal entries (addition mod 2 of supports).
pub fn cancel_pairs(v: &mut Vec<u32>) {
    v.sort_unstable();
    let mut out = 0;
    let mut k = 0;
    while k < v.len() {
        let mut j = k;
        while j < v.len() && v[j] == v[k] {
            j += 1;
        }
        if (j - k) % 2 == 1 {
            v[out] = v[k];
            out += 1;
        }
        k = j;
    }
    v.truncate(out);
}

/// The Khovanov chain complex with its basis grouped by bigrading.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub cube: Cube,
    pub ring: Ring,
    /// generator indices of each (t, q) block, in basis order
    pub bases: BTreeMap<Bigrading, Vec<u32>>,
    /// position of each generator inside its block
    pub position: Vec<u32>,
    pub differential: ChainMapLayer,
}

#[derive(Debug, thiserror::Error)]
pub enum CubeError {
    #[error("memory cap exceeded: about {needed} bytes needed for {generators} generators, cap is {cap}")]
    MemoryCap { needed: u64, generators: u64, cap: u64 },
}

/// Rough bytes per generator for a complex with its differential.
pub const BYTES_PER_GENERATOR: u64 = 64;

pub fn build_complex(d: &PlanarDiagram, ring: Ring) -> ChainComplex {
    build_complex_capped(d, ring, u64::MAX).expect("no cap")
}

pub fn build_complex_capped(d: &PlanarDiagram, ring: Ring, mem_cap: u64) -> Result<ChainComplex, CubeError> {
    let cube = Cube::new(d);
    let gens = cube.dim();
    let needed = gens.saturating_mul(BYTES_PER_GENERATOR + 16 * cube.n as u64);
    if needed > mem_cap {
        return Err(CubeError::MemoryCap { needed, generators: gens, cap: mem_cap });
    }
    Ok(complex_on(cube, ring))
}

pub fn complex_on(cube: Cube, ring: Ring) -> ChainComplex {
    let dim = cube.dim() as usize;
    let mut bases: BTreeMap<Bigrading, Vec<u32>> = BTreeMap::new();
    let mut position = vec![0u32; dim];
    for (idx, g) in cube.generators().enumerate() {
        let v = bases.entry(cube.grading(g)).or_default();
        position[idx] = v.len() as u32;
        v.push(idx as u32);
    }
    let per_res: Vec<(Vec<u64>, Vec<u32>, Vec<i64>)> = (0..cube.n_resolutions())
        .into_par_iter()
        .map(|r| {
            let mut ptr = Vec::new();
            let mut tg = Vec::new();
            let mut cf = Vec::new();
            let mut buf = Vec::new();
            for l in 0..(1u32 << cube.n_circles(r)) {
                buf.clear();
                cube.kh_differential(KhGenerator { resolution: Resolution { bits: r }, labels: l }, &mut buf);
                buf.sort_unstable();
                for &(t, c) in &buf {
                    tg.push(t as u32);
                    if ring == Ring::Z {
                        cf.push(c);
                    }
                }
                ptr.push(tg.len() as u64);
            }
            (ptr, tg, cf)
        })
        .collect();
    let mut indptr = Vec::with_capacity(dim + 1);
    indptr.push(0u64);
    let mut targets = Vec::new();
    let mut coeffs = Vec::new();
    for (ptr, tg, cf) in per_res {
        let base = targets.len() as u64;
        indptr.extend(ptr.iter().map(|p| p + base));
        targets.extend(tg);
        coeffs.extend(cf);
    }
    let differential = ChainMapLayer { bidegree: (1, 0), ring: Some(ring), indptr, targets, coeffs };
    ChainComplex { cube, ring, bases, position, differential }
}

impl ChainComplex {
    pub fn block(&self, g: Bigrading) -> &[u32] {
        self.bases.get(&g).map(|v| v.as_slice()).unwrap_or(&[])
    }

    /// Matrix of the differential from block (t,q) to (t+1,q), as F2 columns
    /// (one column per source, entries = positions in the target block).
    pub fn block_differential_f2(&self, g: Bigrading) -> Vec<Vec<u32>> {
        self.block(g)
            .iter()
            .map(|&s| {
                let mut col: Vec<u32> = if self.ring == Ring::Z {
                    self.differential
                        .image(s as u64)
                        .iter()
                        .zip(self.differential.image_coeffs(s as u64))
                        .filter(|(_, &c)| c % 2 != 0)
                        .map(|(&t, _)| self.position[t as usize])
                        .collect()
                } else {
                    self.differential.image(s as u64).iter().map(|&t| self.position[t as usize]).collect()
                };
                cancel_pairs(&mut col);
                col
            })
            .collect()
    }

    /// Euler characteristic at chain level, as a map q -> coefficient.
    pub fn euler_characteristic(&self) -> BTreeMap<i32, i64> {
        let mut e = BTreeMap::new();
        for (g, v) in &self.bases {
            let s = if g.t.rem_euclid(2) == 0 { 1 } else { -1 };
            *e.entry(g.q).or_insert(0) += s * v.len() as i64;
        }
        e.retain(|_, v| *v != 0);
        e
    }

    /// The chain-level value of [`crate::specseq::Poincare::euler_w`].
    pub fn euler_w(&self) -> i64 {
        self.bases.iter().map(|(g, v)| crate::specseq::w_sign(g.q - 2 * g.t) * v.len() as i64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{parse_pd, torus_knot, PlanarDiagram};

    #[test]
    fn circle_counts() {
        let u = Cube::new(&PlanarDiagram::unknot());
        assert_eq!(u.n_circles(0), 1);
        let k = Cube::new(&PlanarDiagram::unknot().insert_kink(1).unwrap());
        assert_eq!((k.n_circles(0), k.n_circles(1)), (2, 1));
        let t = Cube::new(&torus_knot(2, 3).unwrap());
        assert_eq!(t.n_circles(0), 2);
        let lt = Cube::new(&parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap());
        assert_eq!(lt.n_circles(0), 3);
    }

    #[test]
    fn d_squared_zero_both_rings() {
        for d in [torus_knot(2, 3).unwrap(), torus_knot(3, 4).unwrap()] {
            let c = build_complex(&d, Ring::Z);
            let dz = &c.differential;
            for s in 0..c.cube.dim() {
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                for (&t, &a) in dz.image(s).iter().zip(dz.image_coeffs(s)) {
                    for (&u, &b) in dz.image(t as u64).iter().zip(dz.image_coeffs(t as u64)) {
                        *acc.entry(u).or_default() += a * b;
                    }
                }
                assert!(acc.values().all(|&v| v == 0));
            }
        }
    }

    #[test]
    fn unknot_euler() {
        let c = build_complex(&PlanarDiagram::unknot(), Ring::F2);
        let e = c.euler_characteristic();
        assert_eq!(e, BTreeMap::from([(-1, 1), (1, 1)]));
    }
}

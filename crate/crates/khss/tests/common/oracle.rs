//! Brute-force Khovanov homology straight from PD text: dense integer
//! matrices, naive elimination, no code shared with the library.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashMap};

pub struct Pd {
    pub crossings: Vec<[u32; 4]>,
    pub positive: Vec<bool>,
}

/// Parse `X(a,b,c,d) ... o(a>b ...)`; every crossing needs its over-strand
/// direction in the hint block.
pub fn parse(text: &str) -> Pd {
    let mut crossings = Vec::new();
    let mut hints = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find('(') {
        let head = rest[..start].trim();
        let end = rest[start..].find(')').unwrap() + start;
        let body = &rest[start + 1..end];
        match head.chars().last() {
            Some('X') => {
                let v: Vec<u32> = body.split(',').map(|s| s.trim().parse().unwrap()).collect();
                crossings.push([v[0], v[1], v[2], v[3]]);
            }
            Some('o') => {
                for h in body.split_whitespace() {
                    let (a, b) = h.split_once('>').unwrap();
                    hints.push((a.parse::<u32>().unwrap(), b.parse::<u32>().unwrap()));
                }
            }
            _ => {}
        }
        rest = &rest[end + 1..];
    }
    let positive = crossings
        .iter()
        .map(|c| {
            if hints.contains(&(c[3], c[1])) {
                true
            } else if hints.contains(&(c[1], c[3])) {
                false
            } else {
                panic!("no direction for the over-strand of {c:?}")
            }
        })
        .collect();
    Pd { crossings, positive }
}

fn find(p: &mut HashMap<u32, u32>, a: u32) -> u32 {
    let up = *p.get(&a).unwrap_or(&a);
    if up == a {
        return a;
    }
    let r = find(p, up);
    p.insert(a, r);
    r
}

/// Circles of a resolution, as a map from arc to circle id (the smallest
/// arc on the circle).
fn circles(pd: &Pd, r: u32) -> BTreeMap<u32, u32> {
    let mut p = HashMap::new();
    let join = |p: &mut HashMap<u32, u32>, a: u32, b: u32| {
        let (x, y) = (find(p, a), find(p, b));
        if x != y {
            p.insert(x.max(y), x.min(y));
        }
    };
    for (i, c) in pd.crossings.iter().enumerate() {
        if r >> i & 1 == 0 {
            join(&mut p, c[0], c[1]);
            join(&mut p, c[2], c[3]);
        } else {
            join(&mut p, c[3], c[0]);
            join(&mut p, c[1], c[2]);
        }
    }
    let arcs: Vec<u32> = pd.crossings.iter().flatten().copied().collect();
    let mut out = BTreeMap::new();
    for a in arcs {
        let root = find(&mut p, a);
        out.insert(a, root);
    }
    // relabel by the smallest arc on each circle
    let mut min_of: BTreeMap<u32, u32> = BTreeMap::new();
    for (&a, &root) in &out {
        let e = min_of.entry(root).or_insert(a);
        *e = (*e).min(a);
    }
    out.into_iter().map(|(a, root)| (a, min_of[&root])).collect()
}

/// Generator: resolution plus the set of circles labelled `x`.
type Gen = (u32, Vec<(u32, bool)>);

pub struct DenseComplex {
    pub blocks: BTreeMap<(i32, i32), Vec<Gen>>,
    /// `d` from block `(t,q)` to `(t+1,q)`, rows = targets
    pub d: BTreeMap<(i32, i32), Vec<Vec<i64>>>,
}

pub fn complex(pd: &Pd) -> DenseComplex {
    let n = pd.crossings.len();
    let n_plus = pd.positive.iter().filter(|&&p| p).count() as i32;
    let n_minus = n as i32 - n_plus;
    let mut blocks: BTreeMap<(i32, i32), Vec<Gen>> = BTreeMap::new();
    let mut circ = Vec::new();
    for r in 0..(1u32 << n) {
        let c = circles(pd, r);
        let mut ids: Vec<u32> = c.values().copied().collect();
        ids.sort();
        ids.dedup();
        let w = r.count_ones() as i32;
        for l in 0..(1u32 << ids.len()) {
            let labels: Vec<(u32, bool)> = ids.iter().enumerate().map(|(k, &id)| (id, l >> k & 1 == 1)).collect();
            let xs = labels.iter().filter(|(_, x)| *x).count() as i32;
            let q = ids.len() as i32 - 2 * xs + w + n_plus - 2 * n_minus;
            blocks.entry((w - n_minus, q)).or_default().push((r, labels));
        }
        circ.push(c);
    }
    let mut index: HashMap<Gen, usize> = HashMap::new();
    for gens in blocks.values() {
        for (k, g) in gens.iter().enumerate() {
            index.insert(g.clone(), k);
        }
    }
    let mut d = BTreeMap::new();
    for (&(t, q), gens) in &blocks {
        let Some(targets) = blocks.get(&(t + 1, q)) else { continue };
        let mut m = vec![vec![0i64; gens.len()]; targets.len()];
        for (col, (r, labels)) in gens.iter().enumerate() {
            for i in 0..n {
                if r >> i & 1 == 1 {
                    continue;
                }
                let r2 = r | 1 << i;
                let sign = if (r & ((1 << i) - 1)).count_ones() % 2 == 0 { 1 } else { -1 };
                let c1 = &circ[*r as usize];
                let c2 = &circ[r2 as usize];
                // image circles of every old circle
                let mut img: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
                for (&a, &old) in c1 {
                    let v = img.entry(old).or_default();
                    if !v.contains(&c2[&a]) {
                        v.push(c2[&a]);
                    }
                }
                let mut base: BTreeMap<u32, Option<bool>> = BTreeMap::new();
                let mut split: Option<(bool, u32, u32)> = None;
                let mut zero = false;
                for &(old, x) in labels {
                    let v = &img[&old];
                    if v.len() == 2 {
                        split = Some((x, v[0], v[1]));
                        continue;
                    }
                    match base.get(&v[0]).copied().flatten() {
                        None => {
                            base.insert(v[0], Some(x));
                        }
                        Some(prev) => {
                            if prev && x {
                                zero = true;
                            }
                            base.insert(v[0], Some(prev || x));
                        }
                    }
                }
                if zero {
                    continue;
                }
                let mut terms: Vec<BTreeMap<u32, bool>> = Vec::new();
                let fixed: BTreeMap<u32, bool> = base.into_iter().map(|(k, v)| (k, v.unwrap())).collect();
                match split {
                    None => terms.push(fixed),
                    Some((x, a, b)) => {
                        if x {
                            let mut t = fixed.clone();
                            t.insert(a, true);
                            t.insert(b, true);
                            terms.push(t);
                        } else {
                            for (xa, xb) in [(true, false), (false, true)] {
                                let mut t = fixed.clone();
                                t.insert(a, xa);
                                t.insert(b, xb);
                                terms.push(t);
                            }
                        }
                    }
                }
                for t in terms {
                    let g: Gen = (r2, t.into_iter().collect());
                    m[index[&g]][col] += sign;
                }
            }
        }
        d.insert((t, q), m);
    }
    DenseComplex { blocks, d }
}

pub fn rank_f2(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&x| x.rem_euclid(2) == 1).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c]) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && a[i][c] {
                let pivot = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Diagonal of a Smith form by repeated smallest-pivot elimination.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(k, pi);
        for r in a.iter_mut() {
            r.swap(k, pj);
        }
        let p = a[k][k];
        let mut clean = true;
        for i in k + 1..rows {
            let f = a[i][k] / p;
            if f != 0 {
                for j in k..cols {
                    a[i][j] -= f * a[k][j];
                }
            }
            clean &= a[i][k] == 0;
        }
        for j in k + 1..cols {
            let f = a[k][j] / p;
            if f != 0 {
                for i in k..rows {
                    a[i][j] -= f * a[i][k];
                }
            }
            clean &= a[k][j] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide everything left, else fold a row in
        if let Some(i) = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| a[i][j] % p != 0)) {
            for j in k..cols {
                a[k][j] += a[i][j];
            }
            continue;
        }
        out.push(p.abs() as i64);
        k += 1;
    }
    out
}

#[derive(Debug, PartialEq, Eq)]
pub struct Homology {
    /// `(t, q, dim)` over F2
    pub f2: Vec<(i32, i32, usize)>,
    /// `(t, q, rank, torsion)` over the integers
    pub z: Vec<(i32, i32, usize, Vec<i64>)>,
}

pub fn homology(pd_text: &str) -> Homology {
    let c = complex(&parse(pd_text));
    let mut f2 = Vec::new();
    let mut z = Vec::new();
    for (&(t, q), gens) in &c.blocks {
        let empty = Vec::new();
        let d_out = c.d.get(&(t, q)).unwrap_or(&empty);
        let d_in = c.d.get(&(t - 1, q)).unwrap_or(&empty);
        let dim = gens.len() - rank_f2(d_out) - rank_f2(d_in);
        if dim > 0 {
            f2.push((t, q, dim));
        }
        let fo = invariant_factors(d_out);
        let fi = invariant_factors(d_in);
        let rank = gens.len() - fo.len() - fi.len();
        let torsion: Vec<i64> = fi.into_iter().filter(|&x| x > 1).collect();
        if rank > 0 || !torsion.is_empty() {
            z.push((t, q, rank, torsion));
        }
    }
    Homology { f2, z }
}

/// `d ∘ d` vanishes on every block.
pub fn square_zero(pd_text: &str) -> bool {
    let c = complex(&parse(pd_text));
    c.d.iter().all(|(&(t, q), m1)| {
        let Some(m2) = c.d.get(&(t + 1, q)) else { return true };
        m2.iter().all(|row| (0..m1[0].len()).all(|j| row.iter().zip(m1).map(|(a, r)| a * r[j]).sum::<i64>() == 0))
    })
}

//! Integer matrices and Smith normal form with overflow detection.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("integer overflow during {0}")]
pub struct Overflow(pub &'static str);

/// Dense integer matrix (row-major).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatZ {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl MatZ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatZ { rows, cols, data: vec![0; rows * cols] }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        MatZ { rows: r, cols: c, data: rows.iter().flatten().copied().collect() }
    }
    pub fn mul(&self, o: &MatZ) -> Result<MatZ, Overflow> {
        assert_eq!(self.cols, o.rows);
        let mut out = MatZ::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let p = a.checked_mul(o[(k, j)]).ok_or(Overflow("product"))?;
                    out[(i, j)] = out[(i, j)].checked_add(p).ok_or(Overflow("product"))?;
                }
            }
        }
        Ok(out)
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: i64) -> Result<(), Overflow> {
        for j in 0..self.cols {
            let v = self[(src, j)]
                .checked_mul(f)
                .and_then(|p| self[(dst, j)].checked_add(p))
                .ok_or(Overflow("row operation"))?;
            self[(dst, j)] = v;
        }
        Ok(())
    }
    fn add_col(&mut self, dst: usize, src: usize, f: i64) -> Result<(), Overflow> {
        for i in 0..self.rows {
            let v = self[(i, src)]
                .checked_mul(f)
                .and_then(|p| self[(i, dst)].checked_add(p))
                .ok_or(Overflow("column operation"))?;
            self[(i, dst)] = v;
        }
        Ok(())
    }
    fn neg_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for MatZ {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}
impl std::ops::IndexMut<(usize, usize)> for MatZ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`smith_normal_form`]: `u * m * v = d`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: MatZ,
    pub d: MatZ,
    pub v: MatZ,
}

impl Smith {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)]).filter(|&x| x != 0).collect()
    }
}

/// Smith normal form by alternating row and column elimination.
pub fn smith_normal_form(m: &MatZ) -> Result<Smith, Overflow> {
    snf(m, true)
}

/// Invariant factors only. Skipping the transforms avoids their entry
/// growth, which overflows long before the diagonal does.
pub fn invariant_factors(m: &MatZ) -> Result<Vec<i64>, Overflow> {
    snf(m, false).map(|s| s.invariant_factors())
}

fn snf(m: &MatZ, track: bool) -> Result<Smith, Overflow> {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let (mut u, mut v) =
        if track { (MatZ::identity(r), MatZ::identity(c)) } else { (MatZ::zeros(0, 0), MatZ::zeros(0, 0)) };
    let mut t = 0;
    while t < r.min(c) {
        // smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = d[(i, j)];
                if x != 0 && best.is_none_or(|(bi, bj)| x.unsigned_abs() < d[(bi, bj)].unsigned_abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        if track {
            u.swap_rows(t, pi);
        }
        d.swap_cols(t, pj);
        if track {
            v.swap_cols(t, pj);
        }
        loop {
            let p = d[(t, t)];
            let mut dirty = false;
            for i in t + 1..r {
                let q = d[(i, t)] / p;
                if q != 0 {
                    d.add_row(i, t, -q)?;
                    if track {
                        u.add_row(i, t, -q)?;
                    }
                }
                if d[(i, t)] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..c {
                let q = d[(t, j)] / p;
                if q != 0 {
                    d.add_col(j, t, -q)?;
                    if track {
                        v.add_col(j, t, -q)?;
                    }
                }
                if d[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // a smaller remainder appeared in the pivot row or column
                let mut best = (t, t);
                for i in t..r {
                    if d[(i, t)] != 0 && d[(i, t)].unsigned_abs() < d[best].unsigned_abs() {
                        best = (i, t);
                    }
                }
                for j in t..c {
                    if d[(t, j)] != 0 && d[(t, j)].unsigned_abs() < d[best].unsigned_abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    if track {
                        u.swap_rows(t, best.0);
                    }
                } else if best.1 != t {
                    d.swap_cols(t, best.1);
                    if track {
                        v.swap_cols(t, best.1);
                    }
                }
                continue;
            }
            // divisibility: every remaining entry must be a multiple of p
            let bad = (t + 1..r).flat_map(|i| (t + 1..c).map(move |j| (i, j))).find(|&(i, j)| d[(i, j)] % p != 0);
            match bad {
                Some((i, _)) => {
                    d.add_row(t, i, 1)?;
                    if track {
                        u.add_row(t, i, 1)?;
                    }
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.neg_row(t);
            if track {
                u.neg_row(t);
            }
        }
        t += 1;
    }
    Ok(Smith { u, d, v })
}

/// Invariant factors of a sparse integer matrix given by columns of
/// `(row, value)` entries.
///
/// Unit pivots are eliminated sparsely first; whatever is left (usually a
/// handful of rows) goes through the dense [`smith_normal_form`].
pub fn sparse_invariant_factors(nrows: usize, columns: &[Vec<(u32, i64)>]) -> Result<Vec<i64>, Overflow> {
    use std::collections::{BTreeMap, BTreeSet};
    let mut cols: Vec<BTreeMap<u32, i64>> =
        columns.iter().map(|c| c.iter().copied().filter(|&(_, v)| v != 0).collect()).collect();
    let mut row_cols: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for &i in c.keys() {
            row_cols[i as usize].insert(j as u32);
        }
    }
    let mut alive = vec![true; cols.len()];
    let mut units = 0usize;
    // shortest columns first keeps fill-in low
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| cols[j].len());
    let mut progress = true;
    while progress {
        progress = false;
        for &j in &order {
            if !alive[j] {
                continue;
            }
            // the unit entry whose row is sparsest
            let Some((&i, &a)) =
                cols[j].iter().filter(|(_, v)| v.abs() == 1).min_by_key(|(i, _)| row_cols[**i as usize].len())
            else {
                continue;
            };
            let others: Vec<u32> = row_cols[i as usize].iter().copied().filter(|&k| k as usize != j).collect();
            let pivot = cols[j].clone();
            for k in others {
                let f = cols[k as usize][&i] * a; // a = ±1, so this is a_ki / a
                for (&r, &v) in &pivot {
                    let e = cols[k as usize].entry(r).or_insert(0);
                    *e = e
                        .checked_sub(f.checked_mul(v).ok_or(Overflow("sparse elimination"))?)
                        .ok_or(Overflow("sparse elimination"))?;
                    if *e == 0 {
                        cols[k as usize].remove(&r);
                        row_cols[r as usize].remove(&k);
                    } else {
                        row_cols[r as usize].insert(k);
                    }
                }
            }
            for &r in pivot.keys() {
                row_cols[r as usize].remove(&(j as u32));
            }
            alive[j] = false;
            cols[j].clear();
            units += 1;
            progress = true;
        }
    }
    // dense remainder
    let rest: Vec<usize> = (0..cols.len()).filter(|&j| alive[j] && !cols[j].is_empty()).collect();
    let rows: BTreeSet<u32> = rest.iter().flat_map(|&j| cols[j].keys().copied()).collect();
    let row_pos: BTreeMap<u32, usize> = rows.iter().enumerate().map(|(p, &r)| (r, p)).collect();
    let mut m = MatZ::zeros(rows.len(), rest.len());
    for (c, &j) in rest.iter().enumerate() {
        for (&r, &v) in &cols[j] {
            m[(row_pos[&r], c)] = v;
        }
    }
    let mut out = vec![1; units];
    out.extend(invariant_factors(&m)?);
    Ok(out)
}

/// Determinant by fraction-free elimination (tests and unimodularity checks).
pub fn determinant(m: &MatZ) -> Result<i64, Overflow> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a = m.clone();
    let mut sign = 1i64;
    let mut prev = 1i64;
    for k in 0..n {
        if a[(k, k)] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[(i, k)] != 0) else { return Ok(0) };
            a.swap_rows(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[(i, j)]
                    .checked_mul(a[(k, k)])
                    .and_then(|x| a[(i, k)].checked_mul(a[(k, j)]).and_then(|y| x.checked_sub(y)))
                    .ok_or(Overflow("determinant"))?;
                a[(i, j)] = x / prev;
            }
        }
        prev = a[(k, k)];
    }
    Ok(sign * if n == 0 { 1 } else { a[(n - 1, n - 1)] })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic() {
        let m = MatZ::from_rows(&[vec![2, 0], vec![0, 3]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.invariant_factors(), vec![1, 6]);
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
        let z = smith_normal_form(&MatZ::zeros(3, 2)).unwrap();
        assert!(z.invariant_factors().is_empty());
    }

    #[test]
    fn sparse_matches_dense() {
        let rows = [vec![2, 4, 1], vec![0, 6, 3], vec![1, 1, 1], vec![3, 0, 3]];
        let m = MatZ::from_rows(&rows);
        let cols: Vec<Vec<(u32, i64)>> = (0..3).map(|j| (0..4).map(|i| (i as u32, rows[i][j])).collect()).collect();
        let mut a = sparse_invariant_factors(4, &cols).unwrap();
        a.sort();
        let mut b = smith_normal_form(&m).unwrap().invariant_factors();
        b.sort();
        assert_eq!(a, b);
    }
}

//! Dense bit-packed F2 vectors and matrices.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }
    pub fn from_support(len: usize, support: &[u32]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.flip(i as usize);
        }
        v
    }
    pub fn from_bools(b: &[bool]) -> Self {
        let mut v = Self::zeros(b.len());
        for (i, &x) in b.iter().enumerate() {
            if x {
                v.set(i, true);
            }
        }
        v
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }
    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }
    #[inline]
    pub fn xor_assign(&mut self, o: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&o.words) {
            *a ^= b;
        }
    }
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    /// Lowest set index.
    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| 64 * k + w.trailing_zeros() as usize)
    }
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(64 * k + t)
                }
            })
        })
    }
    pub fn dot(&self, o: &BitVec) -> bool {
        self.words.iter().zip(&o.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense F2 matrix stored as bit-packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatF2 {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BitVec>,
}

impl MatF2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatF2 { rows, cols, data: (0..rows).map(|_| BitVec::zeros(cols)).collect() }
    }
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }
    /// Build from columns given by their supports.
    pub fn from_columns(rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for &i in c {
                m.data[i as usize].flip(j);
            }
        }
        m
    }
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        MatF2 { rows: rows.len(), cols, data: rows }
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].get(j)
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.data[i].set(j, b)
    }
    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }
    pub fn transpose(&self) -> MatF2 {
        let mut t = MatF2::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in self.data[i].ones() {
                t.set(j, i, true);
            }
        }
        t
    }
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows);
        for i in 0..self.rows {
            if self.data[i].dot(v) {
                out.set(i, true);
            }
        }
        out
    }
    pub fn mul(&self, o: &MatF2) -> MatF2 {
        assert_eq!(self.cols, o.rows);
        let mut out = MatF2::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in self.data[i].ones() {
                out.data[i].xor_assign(&o.data[k]);
            }
        }
        out
    }
    pub fn add(&self, o: &MatF2) -> MatF2 {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&o.data) {
            a.xor_assign(b);
        }
        out
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.data[i].get(c)) else { continue };
            self.data.swap(r, p);
            let piv = self.data[r].clone();
            for i in 0..self.rows {
                if i != r && self.data[i].get(c) {
                    self.data[i].xor_assign(&piv);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the null space {x : M x = 0}.
    pub fn kernel(&self) -> Vec<BitVec> {
        let mut m = self.clone();
        let piv = m.rref();
        let mut is_piv = vec![false; self.cols];
        for &p in &piv {
            is_piv[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_piv[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(f, true);
            for (r, &p) in piv.iter().enumerate() {
                if m.data[r].get(f) {
                    v.set(p, true);
                }
            }
            out.push(v);
        }
        out
    }

    /// Some x with M x = b, if one exists.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.rows);
        // augment with b as an extra column
        let mut aug = MatF2::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in self.data[i].ones() {
                aug.set(i, j, true);
            }
            aug.set(i, self.cols, b.get(i));
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &p) in piv.iter().enumerate() {
            if aug.get(r, self.cols) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(MatF2::zeros(4, 6).rank(), 0);
        assert_eq!(MatF2::identity(5).rank(), 5);
        let id = MatF2::identity(3);
        let b = BitVec::from_support(3, &[0, 2]);
        assert_eq!(id.solve(&b), Some(b.clone()));
        let z = MatF2::zeros(3, 3);
        assert_eq!(z.solve(&b), None);
    }
}

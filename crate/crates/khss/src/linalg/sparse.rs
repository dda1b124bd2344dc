//! Sparse F2 column reduction.
//!
//! Columns are sorted support lists. The pivot of a column is its largest
//! row index ("low" in persistence terminology). Reducing columns left to
//! right so that no two share a pivot is the workhorse behind homology,
//! membership tests and spectral sequence pages.

use std::collections::HashMap;

/// A sparse F2 vector: strictly increasing indices.
pub type SparseVec = Vec<u32>;

/// Symmetric difference of two sorted supports.
pub fn xor_into(a: &SparseVec, b: &SparseVec, out: &mut SparseVec) {
    out.clear();
    out.reserve(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

pub fn xor(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = Vec::new();
    xor_into(a, b, &mut out);
    out
}

/// A set of reduced columns with distinct pivots, optionally remembering
/// how each reduced column was formed from the inputs.
#[derive(Clone, Debug, Default)]
pub struct Reduction {
    /// reduced columns (possibly empty)
    pub cols: Vec<SparseVec>,
    /// when tracking: columns of V with R = M V
    pub v: Option<Vec<SparseVec>>,
    /// pivot row -> column
    pub pivot_of: HashMap<u32, u32>,
}

impl Reduction {
    /// Left-to-right reduction of the given columns.
    pub fn new(cols: Vec<SparseVec>, track: bool) -> Reduction {
        let n = cols.len();
        let mut red = Reduction {
            cols: Vec::with_capacity(n),
            v: if track { Some(Vec::with_capacity(n)) } else { None },
            pivot_of: HashMap::new(),
        };
        let mut scratch = Vec::new();
        for (j, mut c) in cols.into_iter().enumerate() {
            let mut vj: SparseVec = vec![j as u32];
            while let Some(&low) = c.last() {
                match red.pivot_of.get(&low) {
                    Some(&k) => {
                        xor_into(&c, &red.cols[k as usize], &mut scratch);
                        std::mem::swap(&mut c, &mut scratch);
                        if let Some(v) = &red.v {
                            xor_into(&vj, &v[k as usize], &mut scratch);
                            std::mem::swap(&mut vj, &mut scratch);
                        }
                    }
                    None => break,
                }
            }
            if let Some(&low) = c.last() {
                red.pivot_of.insert(low, j as u32);
            }
            red.cols.push(c);
            if let Some(v) = &mut red.v {
                v.push(vj);
            }
        }
        red
    }

    pub fn rank(&self) -> usize {
        self.pivot_of.len()
    }

    /// Reduce `x` against the pivots until its pivot is fresh (or it vanishes).
    /// Returns the reduced vector and the set of columns used.
    pub fn reduce_low(&self, mut x: SparseVec) -> (SparseVec, Vec<u32>) {
        let mut used = Vec::new();
        let mut scratch = Vec::new();
        while let Some(&low) = x.last() {
            match self.pivot_of.get(&low) {
                Some(&k) => {
                    xor_into(&x, &self.cols[k as usize], &mut scratch);
                    std::mem::swap(&mut x, &mut scratch);
                    used.push(k);
                }
                None => break,
            }
        }
        (x, used)
    }

    /// Clear every pivot position of `x` (not only the top one). The result
    /// depends only on x modulo the column span, which makes it canonical.
    pub fn reduce_full(&self, x: SparseVec) -> (SparseVec, Vec<u32>) {
        let mut used = Vec::new();
        let mut scratch = Vec::new();
        let mut x = x;
        // walk positions from the top down; reductions only touch lower rows
        let mut bound = u32::MAX;
        loop {
            let pos = x.iter().rev().find(|&&p| p < bound && self.pivot_of.contains_key(&p)).copied();
            let Some(p) = pos else { break };
            let k = self.pivot_of[&p];
            xor_into(&x, &self.cols[k as usize], &mut scratch);
            std::mem::swap(&mut x, &mut scratch);
            used.push(k);
            bound = p;
        }
        (x, used)
    }

    /// Whether `x` lies in the span of the columns.
    pub fn contains(&self, x: SparseVec) -> bool {
        self.reduce_low(x).0.is_empty()
    }
}

/// Dense oracle used by tests and small problems: rank of columns over F2.
pub fn rank_of_columns(cols: &[SparseVec]) -> usize {
    Reduction::new(cols.to_vec(), false).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_works() {
        assert_eq!(xor(&vec![1, 3, 5], &vec![3, 4]), vec![1, 4, 5]);
    }

    #[test]
    fn tracks_v() {
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let r = Reduction::new(cols.clone(), true);
        assert_eq!(r.rank(), 2);
        let v = r.v.as_ref().unwrap();
        // R = M V
        for (j, vj) in v.iter().enumerate() {
            let mut acc = vec![];
            for &k in vj {
                acc = xor(&acc, &cols[k as usize]);
            }
            assert_eq!(acc, r.cols[j]);
        }
        assert!(r.cols[2].is_empty());
    }
}

//! Linear algebra kernels. Over F2 there are bit-packed dense matrices and
//! sparse column reduction with canonical subquotient representatives; over
//! the integers, Smith normal form.

pub mod bits;
pub mod snf;
pub mod sparse;

pub use bits::{BitVec, MatF2};
pub use snf::{determinant, invariant_factors, smith_normal_form, sparse_invariant_factors, MatZ, Overflow, Smith};
pub use sparse::{xor, Reduction, SparseVec};

use thiserror::Error;

pub fn rank_f2(m: &MatF2) -> usize {
    m.rank()
}

pub fn solve_f2(m: &MatF2, b: &BitVec) -> Option<BitVec> {
    m.solve(b)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubquotientError {
    #[error("the outgoing map does not kill the incoming image (column {0})")]
    NotAComplex(usize),
    #[error("vector is not a cycle")]
    NotACycle,
}

/// ker(d_out) / im(d_in) with canonical representatives.
///
/// Representatives are normalised twice: first every boundary pivot is
/// cleared, then the survivors are put in reduced echelon form. The result
/// depends only on the two subspaces and the basis order.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub ambient: usize,
    pub kernel_dim: usize,
    pub boundary_rank: usize,
    boundaries: Reduction,
    outgoing: Reduction,
    /// canonical representatives, sorted by pivot
    pub reps: Vec<SparseVec>,
    pivots: Vec<u32>,
}

impl Subquotient {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Whether `z` is a cycle (killed by the outgoing map).
    pub fn is_cycle(&self, z: &SparseVec, d_out: &[SparseVec]) -> bool {
        let mut acc = Vec::new();
        for &i in z {
            acc = xor(&acc, &d_out[i as usize]);
        }
        acc.is_empty()
    }

    pub fn is_boundary(&self, z: &SparseVec) -> bool {
        self.boundaries.contains(z.clone())
    }

    /// Coordinates of the class of a cycle in the representative basis.
    pub fn coordinates(&self, z: &SparseVec) -> Result<Vec<bool>, SubquotientError> {
        let (mut r, _) = self.boundaries.reduce_full(z.clone());
        let mut coords = vec![false; self.reps.len()];
        // reps are in reduced echelon form, so read off pivots top-down
        for (k, &p) in self.pivots.iter().enumerate().rev() {
            if r.binary_search(&p).is_ok() {
                coords[k] = true;
                r = xor(&r, &self.reps[k]);
            }
        }
        if r.is_empty() {
            Ok(coords)
        } else {
            Err(SubquotientError::NotACycle)
        }
    }

    /// Dimension of the outgoing image (rank of d_out).
    pub fn outgoing_rank(&self) -> usize {
        self.outgoing.rank()
    }
}

/// Homology at the middle of `C_prev --d_in--> C --d_out--> C_next`.
///
/// `d_in` holds one column per basis vector of `C_prev` written in the basis
/// of `C`; `d_out` one column per basis vector of `C`.
pub fn homology_subquotient(
    ambient: usize,
    d_in: &[SparseVec],
    d_out: &[SparseVec],
) -> Result<Subquotient, SubquotientError> {
    assert_eq!(d_out.len(), ambient);
    for (j, c) in d_in.iter().enumerate() {
        let mut acc = Vec::new();
        for &i in c {
            acc = xor(&acc, &d_out[i as usize]);
        }
        if !acc.is_empty() {
            return Err(SubquotientError::NotAComplex(j));
        }
    }
    let boundaries = Reduction::new(d_in.to_vec(), false);
    let outgoing = Reduction::new(d_out.to_vec(), true);
    let v = outgoing.v.as_ref().unwrap();
    let kernel: Vec<usize> = (0..ambient).filter(|&j| outgoing.cols[j].is_empty()).collect();
    let kernel_dim = kernel.len();
    // essential cycles: kernel columns whose index is not a boundary pivot
    let mut cand: Vec<SparseVec> = kernel
        .iter()
        .filter(|&&j| !boundaries.pivot_of.contains_key(&(j as u32)))
        .map(|&j| boundaries.reduce_full(v[j].clone()).0)
        .collect();
    // reduced echelon form of the candidates (pivot = largest index)
    let mut reps: Vec<SparseVec> = Vec::new();
    for c in cand.drain(..) {
        let mut c = c;
        while let Some(k) = c.last().and_then(|low| reps.iter().position(|r| r.last() == Some(low))) {
            c = xor(&c, &reps[k]);
        }
        if !c.is_empty() {
            reps.push(c);
        }
    }
    reps.sort_by_key(|r| *r.last().unwrap());
    // back substitution: clear each pivot from the other representatives
    for k in (0..reps.len()).rev() {
        let p = *reps[k].last().unwrap();
        for m in 0..reps.len() {
            if m != k && reps[m].binary_search(&p).is_ok() {
                reps[m] = xor(&reps[m], &reps[k]);
            }
        }
    }
    reps.sort_by_key(|r| *r.last().unwrap());
    let pivots = reps.iter().map(|r| *r.last().unwrap()).collect();
    Ok(Subquotient { ambient, kernel_dim, boundary_rank: boundaries.rank(), boundaries, outgoing, reps, pivots })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_subquotients() {
        let zero_out = vec![vec![]; 3];
        let h = homology_subquotient(3, &[], &zero_out).unwrap();
        assert_eq!(h.dim(), 3);
        let d_in = vec![vec![0], vec![1]];
        let d_out = vec![vec![], vec![], vec![0]];
        let h = homology_subquotient(3, &d_in, &d_out).unwrap();
        assert_eq!(h.dim(), 0);
    }

    #[test]
    fn coordinates_of_boundary_shift() {
        // C = F2^3, boundaries span {e0+e1}, everything is a cycle
        let h = homology_subquotient(3, &[vec![0, 1]], &vec![vec![]; 3]).unwrap();
        assert_eq!(h.dim(), 2);
        let a = h.coordinates(&vec![0]).unwrap();
        let b = h.coordinates(&vec![1]).unwrap();
        assert_eq!(a, b);
    }
}

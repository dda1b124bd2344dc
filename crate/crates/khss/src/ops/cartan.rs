//! Page-level Künneth check for connected copies of a knot.
//!
//! The `E_m` page of a disjoint union of `n` copies is the `n`-fold tensor
//! power of the page of one copy, with `d_m` acting by the Leibniz rule and
//! `Sq^k` acting by the Cartan formula. We work with elementary tensors of
//! page labels and never build the large chain complex.

use std::collections::BTreeSet;

use crate::cube::Bigrading;
use crate::specseq::{PageMap, SpectralSequence};

/// A sum of elementary tensors over F2; each tensor is a tuple of labels.
pub type Tensor = BTreeSet<Vec<u32>>;

fn toggle(acc: &mut Tensor, t: Vec<u32>) {
    if !acc.remove(&t) {
        acc.insert(t);
    }
}

/// A single-copy page with its differential and the operations available
/// on it.
pub struct TensorPage<'a> {
    pub ss: &'a SpectralSequence,
    pub n: u32,
    /// `Sq^1` on this page
    pub sq1: &'a PageMap,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CartanVerdict {
    pub copies: usize,
    pub a: u32,
    pub b: u32,
    /// `Sq^n d (a ⊗ b ⊗ ⋯ ⊗ b)`
    pub sq_after_d: Vec<Vec<u32>>,
    /// `d Sq^n (a ⊗ b ⊗ ⋯ ⊗ b)`
    pub d_after_sq: Vec<Vec<u32>>,
    /// a higher square whose target bidegree is occupied, so its value is unknown
    pub undetermined: Option<Bigrading>,
    pub passes: bool,
}

impl<'a> TensorPage<'a> {
    fn d(&self, g: u32) -> Option<u32> {
        self.ss.page_or_last(self.n).d(g)
    }

    /// Leibniz rule; no signs over F2.
    pub fn differential(&self, x: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for t in x {
            for i in 0..t.len() {
                if let Some(h) = self.d(t[i]) {
                    let mut u = t.clone();
                    u[i] = h;
                    toggle(&mut out, u);
                }
            }
        }
        out
    }

    /// `Sq^i` on one label. Squares of order two and more are only known
    /// when the target bidegree is empty on this page.
    fn sq_label(&self, i: u32, g: u32) -> Result<Vec<u32>, Bigrading> {
        match i {
            0 => Ok(vec![g]),
            1 => Ok(self.sq1.images.get(&g).cloned().unwrap_or_default()),
            _ => {
                let b = self.ss.grading()[g as usize];
                let to = Bigrading { t: b.t + i as i32, q: b.q };
                if self.ss.page_or_last(self.n).blocks.get(&to).is_some_and(|v| !v.is_empty()) {
                    Err(to)
                } else {
                    Ok(vec![])
                }
            }
        }
    }

    /// Cartan formula: sum over all ways to split `k` among the factors.
    pub fn sq(&self, k: u32, x: &Tensor) -> Result<Tensor, Bigrading> {
        let mut out = Tensor::new();
        for t in x {
            let mut parts = vec![0u32; t.len()];
            self.cartan_terms(k, t, 0, &mut parts, &mut out)?;
        }
        Ok(out)
    }

    fn cartan_terms(
        &self,
        left: u32,
        t: &[u32],
        i: usize,
        parts: &mut Vec<u32>,
        out: &mut Tensor,
    ) -> Result<(), Bigrading> {
        if i + 1 == t.len() {
            parts[i] = left;
            // expand the product of single-factor images
            let mut partial: Vec<Vec<u32>> = vec![vec![]];
            for (j, &g) in t.iter().enumerate() {
                let img = self.sq_label(parts[j], g)?;
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        img.iter().map(move |&h| {
                            let mut q = p.clone();
                            q.push(h);
                            q
                        })
                    })
                    .collect();
            }
            for p in partial {
                toggle(out, p);
            }
            return Ok(());
        }
        for k in 0..=left {
            parts[i] = k;
            self.cartan_terms(left - k, t, i + 1, parts, out)?;
        }
        Ok(())
    }

    /// Check `Sq^n d(a ⊗ b^{n-1}) ≠ 0 = d Sq^n(a ⊗ b^{n-1})` for `b = d a`.
    pub fn check(&self, copies: usize, a: u32) -> CartanVerdict {
        let b = self.d(a).expect("a must support a nonzero differential");
        let mut x = Tensor::new();
        let mut t = vec![b; copies];
        t[0] = a;
        x.insert(t);
        let k = copies as u32;
        let lhs = self.sq(k, &self.differential(&x));
        let rhs = self.sq(k, &x).map(|s| self.differential(&s));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => CartanVerdict {
                copies,
                a,
                b,
                passes: !l.is_empty() && r.is_empty(),
                sq_after_d: l.into_iter().collect(),
                d_after_sq: r.into_iter().collect(),
                undetermined: None,
            },
            (Err(at), _) | (_, Err(at)) => CartanVerdict {
                copies,
                a,
                b,
                sq_after_d: vec![],
                d_after_sq: vec![],
                undetermined: Some(at),
                passes: false,
            },
        }
    }
}

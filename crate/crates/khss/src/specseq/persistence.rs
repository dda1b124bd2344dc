//! Filtered reduction of the total differential.
//!
//! Every layer of the total differential lowers `w = q - 2t` by 2, so `w`
//! behaves like a homological degree and the complex is a direct sum of the
//! maps `C_w -> C_{w-2}`. Inside each `C_w` generators are ordered by `t`
//! decreasing, which turns the `t`-filtration into an ordinary persistence
//! filtration. Column reduction then pairs generators: a pair joining a
//! generator at `t` to one at `t + r` is a nonzero `d_r` between the two
//! classes, and the unpaired generators span the abutment.
//!
//! The reduction also yields a filtered basis in which the total
//! differential is a partial matching. Page bases, page differentials and
//! induced maps are all read in that basis.

use std::collections::BTreeMap;

use crate::cube::Bigrading;
use crate::linalg::sparse::{xor_into, SparseVec};
use crate::szabo::SzaboDifferential;

const NONE: u32 = u32::MAX;

/// Role of a generator in the pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Role {
    /// never paired: survives to the last page
    Essential,
    /// source of a page differential of the given length
    Death(u32),
    /// target of a page differential of the given length
    Birth(u32),
}

/// One homogeneous piece `C_w`.
#[derive(Clone, Debug)]
pub struct WBlock {
    pub w: i32,
    /// global generator indices in local order (t decreasing, then index)
    pub gens: Vec<u32>,
    pub t: Vec<i32>,
    /// filtered basis: `basis[g]` has largest local index `g`
    pub basis: Vec<SparseVec>,
}

/// Pairing of all generators plus the filtered basis.
#[derive(Clone, Debug)]
pub struct Persistence {
    pub grading: Vec<Bigrading>,
    pub blocks: Vec<WBlock>,
    pub block_of: Vec<u32>,
    pub local_of: Vec<u32>,
    /// partner generator (global), `NONE` for essential ones
    pub partner: Vec<u32>,
    pub role: Vec<Role>,
    pub max_length: u32,
}

impl Persistence {
    /// Reduce the total differential of `sz`.
    pub fn new(sz: &SzaboDifferential) -> Persistence {
        let cube = &sz.complex.cube;
        let dim = sz.dim();
        let grading: Vec<Bigrading> = (0..dim as u64).map(|g| cube.grading_of(g)).collect();
        let mut by_w: BTreeMap<i32, Vec<u32>> = BTreeMap::new();
        for (g, b) in grading.iter().enumerate() {
            by_w.entry(b.q - 2 * b.t).or_default().push(g as u32);
        }
        let mut blocks: Vec<WBlock> = Vec::new();
        let mut block_of = vec![0u32; dim];
        let mut local_of = vec![0u32; dim];
        for (w, mut gens) in by_w {
            gens.sort_by_key(|&g| (-grading[g as usize].t, g));
            let bi = blocks.len() as u32;
            for (l, &g) in gens.iter().enumerate() {
                block_of[g as usize] = bi;
                local_of[g as usize] = l as u32;
            }
            let t = gens.iter().map(|&g| grading[g as usize].t).collect();
            blocks.push(WBlock { w, gens, t, basis: Vec::new() });
        }
        let mut partner = vec![NONE; dim];
        let mut role = vec![Role::Essential; dim];
        let mut max_length = 0;
        // process the largest w first so that births are known (and their
        // columns can be skipped) when their own block is reduced
        let mut births: Vec<Vec<(u32, SparseVec)>> = vec![Vec::new(); blocks.len()];
        let index_of_w: BTreeMap<i32, usize> = blocks.iter().enumerate().map(|(i, b)| (b.w, i)).collect();
        for bi in (0..blocks.len()).rev() {
            let w = blocks[bi].w;
            let target = index_of_w.get(&(w - 2)).copied();
            let n = blocks[bi].gens.len();
            let mut is_birth = vec![false; n];
            let mut basis: Vec<SparseVec> = vec![Vec::new(); n];
            for (l, r) in std::mem::take(&mut births[bi]) {
                is_birth[l as usize] = true;
                basis[l as usize] = r;
            }
            let mut pivot_of: Vec<u32> = match target {
                Some(ti) => vec![NONE; blocks[ti].gens.len()],
                None => Vec::new(),
            };
            let mut reduced: Vec<SparseVec> = vec![Vec::new(); n];
            let mut scratch = Vec::new();
            let mut new_births = Vec::new();
            for j in 0..n {
                if is_birth[j] {
                    continue;
                }
                let g = blocks[bi].gens[j];
                let mut col: SparseVec = match target {
                    Some(ti) => {
                        let mut c: Vec<u32> = sz.apply_generator(g).iter().map(|&x| local_of[x as usize]).collect();
                        debug_assert!(sz.apply_generator(g).iter().all(|&x| block_of[x as usize] as usize == ti));
                        c.sort_unstable();
                        c
                    }
                    None => Vec::new(),
                };
                let mut v: SparseVec = vec![j as u32];
                while let Some(&low) = col.last() {
                    let k = pivot_of[low as usize];
                    if k == NONE {
                        break;
                    }
                    xor_into(&col, &reduced[k as usize], &mut scratch);
                    std::mem::swap(&mut col, &mut scratch);
                    xor_into(&v, &basis[k as usize], &mut scratch);
                    std::mem::swap(&mut v, &mut scratch);
                }
                if let Some(&low) = col.last() {
                    pivot_of[low as usize] = j as u32;
                    let ti = target.unwrap();
                    let gi = blocks[ti].gens[low as usize];
                    let len = (blocks[ti].t[low as usize] - blocks[bi].t[j]) as u32;
                    max_length = max_length.max(len);
                    partner[g as usize] = gi;
                    partner[gi as usize] = g;
                    role[g as usize] = Role::Death(len);
                    role[gi as usize] = Role::Birth(len);
                    new_births.push((low, col.clone()));
                }
                reduced[j] = col;
                basis[j] = v;
            }
            if let Some(ti) = target {
                births[ti] = new_births;
            }
            blocks[bi].basis = basis;
        }
        Persistence { grading, blocks, block_of, local_of, partner, role, max_length }
    }

    pub fn dim(&self) -> usize {
        self.grading.len()
    }

    /// Whether generator `g` labels a basis element of page `n` (n >= 1).
    pub fn alive(&self, g: u32, n: u32) -> bool {
        match self.role[g as usize] {
            Role::Essential => true,
            Role::Death(r) | Role::Birth(r) => r >= n,
        }
    }

    /// Chain-level representative of the page basis element labelled `g`,
    /// as sorted global indices.
    pub fn representative(&self, g: u32) -> Vec<u32> {
        let b = &self.blocks[self.block_of[g as usize] as usize];
        let mut v: Vec<u32> = b.basis[self.local_of[g as usize] as usize].iter().map(|&l| b.gens[l as usize]).collect();
        v.sort_unstable();
        v
    }

    /// Expand `z` (global indices, all in one `C_w`) in the filtered basis,
    /// returning the coefficients at filtration level `t` only. For an
    /// element of `F_t` whose differential lies in `F_{t+n}`, the entries
    /// that label page-`n` generators give its class on page `n`.
    pub fn level_coordinates(&self, z: &[u32], t: i32) -> Vec<u32> {
        let Some(&first) = z.first() else { return Vec::new() };
        let bi = self.block_of[first as usize] as usize;
        let b = &self.blocks[bi];
        let mut x: SparseVec = z
            .iter()
            .map(|&g| {
                assert_eq!(self.block_of[g as usize] as usize, bi, "vector mixes w-degrees");
                self.local_of[g as usize]
            })
            .collect();
        x.sort_unstable();
        let mut out = Vec::new();
        let mut scratch = Vec::new();
        while let Some(&m) = x.last() {
            let tm = b.t[m as usize];
            assert!(tm >= t, "vector leaves the filtration level");
            if tm > t {
                break;
            }
            out.push(b.gens[m as usize]);
            xor_into(&x, &b.basis[m as usize], &mut scratch);
            std::mem::swap(&mut x, &mut scratch);
        }
        out.sort_unstable();
        out
    }

    /// Class on page `n` of an element of `F_t` whose differential lies in
    /// `F_{t+n}`.
    pub fn page_class(&self, z: &[u32], t: i32, n: u32) -> Vec<u32> {
        self.level_coordinates(z, t).into_iter().filter(|&g| self.alive(g, n)).collect()
    }

    /// Part of a vector at filtration level exactly `t`.
    pub fn level_part(&self, z: &[u32], t: i32) -> Vec<u32> {
        z.iter().copied().filter(|&g| self.grading[g as usize].t == t).collect()
    }

    /// Total number of stored basis entries (a memory gauge).
    pub fn basis_nnz(&self) -> usize {
        self.blocks.iter().map(|b| b.basis.iter().map(|v| v.len()).sum::<usize>()).sum()
    }
}

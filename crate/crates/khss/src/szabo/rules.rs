//! Labelled-circle rules for configurations of two or more arcs.
//!
//! Three shapes carry nonzero maps, each read directly and in its dual form
//! (the dual view starts at the far vertex, reverses every arc and swaps
//! the roles of 1 and x):
//!
//! * star-leaf: a centre circle carrying chords that come in adjacent
//!   pairs, plus leaf circles each joined to the centre by one arc, all
//!   leaf arcs pointing the same way. The centre labelled 1 and every leaf
//!   labelled x go to x on the output circle containing the leaves.
//! * parallel: two circles joined by at least two arcs whose tails all sit
//!   on the same circle. 1⊗1 goes to 1 on every output.
//! * bundle: one circle, genus one, arcs arranged as left tails, right
//!   tails, left heads, right heads. 1 goes to all 1s, and with two arcs
//!   also x goes to x.
//!
//! Everything else is zero. The direct and dual term lists are united, not
//! added, which is what makes self-dual configurations count once.

use super::config::{pointing_left, read_view, reversed, End, View};
use crate::cube::Cube;

/// Which shape produced a term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Family {
    StarLeaf,
    Parallel,
    Bundle,
}

/// One labelled-circle term: the active start circles labelled x are
/// exactly `in_x`; the output labels x on exactly `out_x` of the active end
/// circles (untouched circles carry their labels across).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub family: Family,
    pub dual: bool,
    pub in_x: u32,
    pub out_x: u32,
}

/// All terms for one configuration (start resolution plus active set).
#[derive(Clone, Debug, Default)]
pub struct ConfigMap {
    pub set: u32,
    pub in_active: u32,
    pub out_active: u32,
    pub terms: Vec<Term>,
}

/// Cheap invariants of a configuration, computed from circle tables only.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub k: usize,
    pub cin: usize,
    pub cout: usize,
    pub in_active: u32,
    pub out_active: u32,
    pub connected: bool,
}

impl Shape {
    pub fn genus(&self) -> Option<usize> {
        let e = self.k + 2;
        let c = self.cin + self.cout;
        if !self.connected || c > e || !(e - c).is_multiple_of(2) {
            None
        } else {
            Some((e - c) / 2)
        }
    }
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

pub fn shape(cube: &Cube, r: u32, set: u32) -> Shape {
    let r2 = r | set;
    let mut in_active = 0u32;
    let mut out_active = 0u32;
    for i in bits(set) {
        in_active |= 1 << cube.circle(r, 4 * i) | 1 << cube.circle(r, 4 * i + 2);
        out_active |= 1 << cube.circle(r2, 4 * i) | 1 << cube.circle(r2, 4 * i + 1);
    }
    // grow one component through the arcs
    let first = in_active.trailing_zeros();
    let mut comp = 1u32 << first;
    loop {
        let before = comp;
        for i in bits(set) {
            let e = 1u32 << cube.circle(r, 4 * i) | 1 << cube.circle(r, 4 * i + 2);
            if e & comp != 0 {
                comp |= e;
            }
        }
        if comp == before {
            break;
        }
    }
    Shape {
        k: set.count_ones() as usize,
        cin: in_active.count_ones() as usize,
        cout: out_active.count_ones() as usize,
        in_active,
        out_active,
        connected: comp == in_active,
    }
}

/// Degrees of active circles (arc ends per circle), for the start side
/// (`dual = false`) or the end side.
fn degrees(cube: &Cube, rv: u32, set: u32, dual: bool) -> [u8; 32] {
    let mut deg = [0u8; 32];
    for i in bits(set) {
        let (a, b) = if dual { (4 * i, 4 * i + 1) } else { (4 * i, 4 * i + 2) };
        deg[cube.circle(rv, a)] += 1;
        deg[cube.circle(rv, b)] += 1;
    }
    deg
}

fn star_leaf_possible(deg: &[u8; 32], active: u32) -> bool {
    bits(active).filter(|&c| deg[c] != 1).count() <= 1
}

/// Cyclic genus-one pattern: p left tails, q right tails, p left heads,
/// q right heads.
pub fn is_bundle(w: &[End]) -> bool {
    let n = w.len();
    for i0 in 0..n {
        let key = |j: usize| {
            let e = &w[(i0 + j) % n];
            (e.left, e.tail)
        };
        let mut p = 0;
        while p < n && key(p) == (true, true) {
            p += 1;
        }
        let mut q = 0;
        while p + q < n && key(p + q) == (false, true) {
            q += 1;
        }
        if p == 0 || q == 0 || 2 * (p + q) != n {
            continue;
        }
        let rest =
            (0..p).all(|j| key(p + q + j) == (true, false)) && (0..q).all(|j| key(2 * p + q + j) == (false, false));
        if rest {
            return true;
        }
    }
    false
}

/// Terms of one view. Labels are masks: `in_x` over start circles of the
/// view, `out_x` over its end circles.
fn view_terms(
    cube: &Cube,
    view: &View,
    rend: u32,
    k: usize,
    out_active: u32,
    genus: usize,
    out: &mut Vec<(Family, u32, u32)>,
) {
    let cin = view.circles.len();
    let ins: Vec<usize> = view.circles.iter().map(|(c, _)| *c as usize).collect();
    let all_in: u32 = ins.iter().map(|&c| 1u32 << c).sum();
    // circles carrying each end of each arc, in word order
    let mut arcs_on: Vec<(u16, usize, usize)> = Vec::with_capacity(k);
    for (c, w) in &view.circles {
        for e in w {
            match arcs_on.iter_mut().find(|(a, _, _)| *a == e.arc) {
                Some(slot) => slot.2 = *c as usize,
                None => arcs_on.push((e.arc, *c as usize, usize::MAX)),
            }
        }
    }
    let chord_on = |arc: u16, z: usize| arcs_on.iter().any(|&(a, x, y)| a == arc && x == z && y == z);

    if genus == 0 && cin == 2 && k >= 2 {
        let no_loops = arcs_on.iter().all(|&(_, x, y)| x != y);
        let tails: Vec<usize> =
            view.circles.iter().filter(|(_, w)| w.iter().any(|e| e.tail)).map(|(c, _)| *c as usize).collect();
        if no_loops && tails.len() == 1 {
            out.push((Family::Parallel, 0, 0));
        }
    }

    if genus == 0 {
        for (zi, (z, w)) in view.circles.iter().enumerate() {
            let z = *z as usize;
            let loops = arcs_on.iter().filter(|&&(_, x, y)| x == z && y == z).count();
            let deg = w.len();
            if deg < 2 * loops + 1 || cin != deg - 2 * loops + 1 {
                continue;
            }
            if view.circles.iter().enumerate().any(|(j, (_, w2))| j != zi && w2.len() != 1) {
                continue;
            }
            let leaves: Vec<usize> = (0..deg).filter(|&i| !chord_on(w[i].arc, z)).collect();
            let dir = pointing_left(&w[leaves[0]]);
            if leaves.iter().any(|&i| pointing_left(&w[i]) != dir) {
                continue;
            }
            let fwd = dir;
            let i0 = leaves[0];
            let ww: Vec<&End> = (0..deg).map(|j| &w[(i0 + j) % deg]).collect();
            let mut ok = true;
            let mut pos = 0;
            while pos < deg {
                if !chord_on(ww[pos].arc, z) {
                    pos += 1;
                    continue;
                }
                if pos + 1 >= deg || ww[pos].arc != ww[pos + 1].arc || ww[pos].tail != fwd {
                    ok = false;
                    break;
                }
                pos += 2;
            }
            if !ok {
                continue;
            }
            let leaf = view.circles.iter().find(|(c, _)| *c as usize != z).unwrap();
            let o = cube.circle(rend, leaf.1[0].slot as usize);
            out.push((Family::StarLeaf, all_in & !(1 << z), 1 << o));
        }
    }

    if genus == 1 && cin == 1 && is_bundle(&view.circles[0].1) {
        out.push((Family::Bundle, 0, 0));
        if k == 2 {
            debug_assert_eq!(out_active.count_ones(), 1);
            out.push((Family::Bundle, all_in, out_active));
        }
    }
}

/// All terms of the configuration `set` (crossings that are 0 in `r`).
pub fn config_map(cube: &Cube, r: u32, set: u32, orient: &[bool]) -> Option<ConfigMap> {
    let sh = shape(cube, r, set);
    let genus = sh.genus()?;
    if genus > 1 {
        return None;
    }
    let k = sh.k;
    let r2 = r | set;
    let (direct, dual) = if genus == 0 {
        let d_in = degrees(cube, r, set, false);
        let d_out = degrees(cube, r2, set, true);
        (
            sh.cin == 2 || star_leaf_possible(&d_in, sh.in_active),
            sh.cout == 2 || star_leaf_possible(&d_out, sh.out_active),
        )
    } else {
        (sh.cin == 1, sh.cout == 1 && k != 2)
    };
    if !direct && !dual {
        return None;
    }
    let list: Vec<usize> = bits(set).collect();
    let mut terms: Vec<Term> = Vec::new();
    let mut buf = Vec::new();
    let push = |terms: &mut Vec<Term>, t: Term| {
        if !terms.iter().any(|u| u.in_x == t.in_x && u.out_x == t.out_x) {
            terms.push(t);
        }
    };
    if direct {
        let v = read_view(cube, r, &list, orient, false);
        view_terms(cube, &v, r2, k, sh.out_active, genus, &mut buf);
        for (family, in_x, out_x) in buf.drain(..) {
            push(&mut terms, Term { family, dual: false, in_x, out_x });
        }
    }
    if dual {
        let flipped: Vec<bool> = orient.iter().map(|&o| !o).collect();
        let v = read_view(cube, r2, &list, &flipped, true);
        view_terms(cube, &v, r, k, sh.in_active, genus, &mut buf);
        for (family, li, lo) in buf.drain(..) {
            if family == Family::Bundle && k == 2 {
                continue;
            }
            let t = Term { family, dual: true, in_x: sh.in_active & !lo, out_x: sh.out_active & !li };
            push(&mut terms, t);
        }
    }
    if terms.is_empty() {
        return None;
    }
    Some(ConfigMap { set, in_active: sh.in_active, out_active: sh.out_active, terms })
}

/// Human-readable description of a configuration, used in diagnostics.
pub fn describe_config(cube: &Cube, r: u32, set: u32, orient: &[bool]) -> String {
    let list: Vec<usize> = bits(set).collect();
    let v = read_view(cube, r, &list, orient, false);
    format!("r={r:#b} S={set:#b}: {}", super::config::describe(&v))
}

/// Reversal is exposed for tests of word symmetry.
pub fn reverse_word(w: &[End]) -> Vec<End> {
    reversed(w)
}

//! Active configurations: the circles of a resolution touched by a set of
//! crossings, decorated with the oriented surgery arcs at those crossings.
//!
//! A configuration is read as a list of circular words. Walking once around
//! each active circle, we record every arc end we meet together with its
//! crossing, the side of the circle the arc leaves from and a tail flag.
//! All families of the Szabó differential are
//! recognised from these words.

use crate::cube::{partner, Cube};

/// One arc end met while walking around a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct End {
    /// crossing index of the arc
    pub arc: u16,
    /// the arc leaves to the left of the walking direction
    pub left: bool,
    /// this end is the arc's tail
    pub tail: bool,
    /// slot where the walk arrived at the crossing
    pub slot: u16,
}

/// Words of all active circles of one side of a configuration.
#[derive(Clone, Debug, Default)]
pub struct View {
    /// (circle id in the starting resolution, its word)
    pub circles: Vec<(u8, Vec<End>)>,
}

/// Slot pairs joined by each smoothing, in the order that fixes "left".
const ROT: [[(usize, usize); 2]; 2] = [[(0, 1), (2, 3)], [(3, 0), (1, 2)]];

/// Read the configuration of crossings `set` in resolution `rv`.
///
/// `orient[i]` picks which smoothing strand holds the tail of arc `i`;
/// `mirror` swaps left and right.
pub fn read_view(cube: &Cube, rv: u32, set: &[usize], orient: &[bool], mirror: bool) -> View {
    let n = cube.n;
    let in_set = |c: usize| set.contains(&c);
    // (pair index, is first) for each slot of an active crossing
    let pair_of = |i: usize, s: usize| -> (usize, bool) {
        let b = (rv >> i & 1) as usize;
        for (p, &(x, y)) in ROT[b].iter().enumerate() {
            if s == x {
                return (p, true);
            }
            if s == y {
                return (p, false);
            }
        }
        unreachable!()
    };
    let opp = |slot: usize| -> usize {
        let mut cur = cube.other[slot] as usize;
        while cur < 4 * n && !in_set(cur / 4) {
            let j = cur / 4;
            cur = cube.other[4 * j + partner(rv >> j & 1 == 1, cur % 4)] as usize;
        }
        cur
    };
    let mut seen = [false; 4 * 32];
    let slot_key = |slot: usize| -> usize { set.iter().position(|&c| c == slot / 4).unwrap() * 4 + slot % 4 };
    let mut view = View::default();
    for &i in set {
        for s in 0..4 {
            let d0 = 4 * i + s;
            if seen[slot_key(d0)] {
                continue;
            }
            let mut word = Vec::new();
            let mut d = d0;
            loop {
                seen[slot_key(d)] = true;
                let e = opp(d);
                seen[slot_key(e)] = true;
                let (j, se) = (e / 4, e % 4);
                let (p, first) = pair_of(j, se);
                let (x, y) = ROT[(rv >> j & 1) as usize][p];
                let out = if first { y } else { x };
                word.push(End {
                    arc: j as u16,
                    left: first != mirror,
                    tail: (orient[j] as usize) == p,
                    slot: e as u16,
                });
                d = 4 * j + out;
                if d == d0 {
                    break;
                }
            }
            view.circles.push((cube.circle(rv, d0) as u8, word));
        }
    }
    view
}

/// Reverse the walking direction: reverse the word (keeping its first
/// letter first) and swap sides.
pub fn reversed(w: &[End]) -> Vec<End> {
    let sw = |e: &End| End { left: !e.left, ..*e };
    let mut out = Vec::with_capacity(w.len());
    if let Some(f) = w.first() {
        out.push(sw(f));
    }
    out.extend(w[1..].iter().rev().map(sw));
    out
}

/// Side into which an arc points as it crosses the circle at this end.
#[inline]
pub fn pointing_left(e: &End) -> bool {
    if e.tail {
        e.left
    } else {
        !e.left
    }
}

/// Compact human-readable rendering, e.g. `aRh bLt | aLt bRh`.
pub fn describe(view: &View) -> String {
    let mut names: Vec<u16> = Vec::new();
    let mut parts = Vec::new();
    for (_, w) in &view.circles {
        let mut s = Vec::new();
        for e in w {
            let k = match names.iter().position(|&a| a == e.arc) {
                Some(k) => k,
                None => {
                    names.push(e.arc);
                    names.len() - 1
                }
            };
            let letter = (b'a' + (k % 26) as u8) as char;
            s.push(format!("{}{}{}", letter, if e.left { 'L' } else { 'R' }, if e.tail { 't' } else { 'h' }));
        }
        parts.push(s.join(" "));
    }
    parts.join(" | ")
}

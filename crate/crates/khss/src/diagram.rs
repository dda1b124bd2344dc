//! Oriented knot and link diagrams in planar-diagram (PD) form.
//!
//! A crossing `X(a,b,c,d)` lists its four incident arcs counterclockwise,
//! starting from the incoming under-strand. The under-strand therefore always
//! runs from slot 0 to slot 2. The over-strand runs either from slot 3 to
//! slot 1 (a positive crossing) or from slot 1 to slot 3 (negative).
//!
//! Orientation of the over-strands is inferred by walking each component from
//! its under-crossings. Components that never pass under anything need an
//! explicit hint in the `o(a>b ...)` block, read as "the strand flows from arc
//! `a` into arc `b`". When `a` and `b` sit opposite each other at more than
//! one crossing, the hint refers to the one where they form the over-strand.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Arc identifier as written in the PD text.
pub type Arc = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arc multiplicity: arc {arc} appears {count} time(s), expected 2")]
    ArcMultiplicity { arc: Arc, count: usize },
    #[error("inconsistent orientation: {0}")]
    Orientation(String),
    #[error("arc {0} does not exist in the diagram")]
    MissingArc(Arc),
    #[error("invalid parameters: {0}")]
    Parameters(String),
}

/// An oriented planar diagram with an optional basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDiagram {
    crossings: Vec<[Arc; 4]>,
    positive: Vec<bool>,
    loops: Vec<Arc>,
    basepoint: Option<Arc>,
    kink: Option<usize>,
}

impl PlanarDiagram {
    /// Build a diagram from crossings and free loops. Orientation hints are
    /// optional `(from, to)` arc pairs.
    pub fn new(
        crossings: Vec<[Arc; 4]>,
        loops: Vec<Arc>,
        hints: &[(Arc, Arc)],
        basepoint: Option<Arc>,
    ) -> Result<Self, DiagramError> {
        let mut count: BTreeMap<Arc, usize> = BTreeMap::new();
        for c in &crossings {
            for &a in c {
                *count.entry(a).or_default() += 1;
            }
        }
        for (&arc, &n) in &count {
            if n != 2 {
                return Err(DiagramError::ArcMultiplicity { arc, count: n });
            }
        }
        let mut seen_loops = BTreeSet::new();
        for &l in &loops {
            if count.contains_key(&l) || !seen_loops.insert(l) {
                return Err(DiagramError::ArcMultiplicity { arc: l, count: 3 });
            }
        }
        let positive = infer_orientation(&crossings, hints)?;
        let d = PlanarDiagram { crossings, positive, loops, basepoint, kink: None };
        if let Some(bp) = basepoint {
            if !d.has_arc(bp) {
                return Err(DiagramError::MissingArc(bp));
            }
        }
        Ok(d)
    }

    /// The 0-crossing unknot drawn as one free loop labelled 1.
    pub fn unknot() -> Self {
        PlanarDiagram { crossings: vec![], positive: vec![], loops: vec![1], basepoint: None, kink: None }
    }

    pub fn crossings(&self) -> &[[Arc; 4]] {
        &self.crossings
    }
    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }
    pub fn loops(&self) -> &[Arc] {
        &self.loops
    }
    pub fn is_positive(&self, i: usize) -> bool {
        self.positive[i]
    }
    pub fn n_plus(&self) -> usize {
        self.positive.iter().filter(|&&p| p).count()
    }
    pub fn n_minus(&self) -> usize {
        self.n_crossings() - self.n_plus()
    }
    /// Index of the crossing added by [`PlanarDiagram::insert_kink`], if any.
    pub fn kink_crossing(&self) -> Option<usize> {
        self.kink
    }

    /// All arc identifiers, sorted.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut v: Vec<Arc> = self.crossings.iter().flatten().copied().chain(self.loops.iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
    pub fn has_arc(&self, a: Arc) -> bool {
        self.loops.contains(&a) || self.crossings.iter().any(|c| c.contains(&a))
    }
    fn max_arc(&self) -> Arc {
        self.arcs().last().copied().unwrap_or(0)
    }

    /// The basepoint, defaulting to the lowest-numbered arc.
    pub fn basepoint(&self) -> Option<Arc> {
        self.basepoint.or_else(|| self.arcs().first().copied())
    }
    pub fn with_basepoint(mut self, bp: Arc) -> Result<Self, DiagramError> {
        if !self.has_arc(bp) {
            return Err(DiagramError::MissingArc(bp));
        }
        self.basepoint = Some(bp);
        Ok(self)
    }

    /// Whether the strand at `slot` of crossing `i` flows into the crossing.
    pub fn slot_incoming(&self, i: usize, slot: usize) -> bool {
        match slot {
            0 => true,
            2 => false,
            3 => self.positive[i],
            _ => !self.positive[i],
        }
    }

    /// Number of link components.
    pub fn components(&self) -> usize {
        let n = self.n_crossings();
        let occ = occurrences(&self.crossings);
        let mut seen = vec![false; 4 * n];
        let mut comps = self.loops.len();
        for start in 0..4 * n {
            if seen[start] {
                continue;
            }
            comps += 1;
            let mut s = start;
            loop {
                if seen[s] {
                    break;
                }
                seen[s] = true;
                // the other occurrence of this slot's arc
                let o = other_slot(&occ, &self.crossings, s);
                seen[o] = true;
                // pass straight through the crossing at o
                let (c, k) = (o / 4, o % 4);
                s = 4 * c + (k + 2) % 4;
            }
        }
        comps
    }

    /// PD text that [`parse_pd`] reads back into the same diagram.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> =
            self.crossings.iter().map(|c| format!("X({},{},{},{})", c[0], c[1], c[2], c[3])).collect();
        for l in &self.loops {
            parts.push(format!("O({l})"));
        }
        if !self.crossings.is_empty() {
            let hints: Vec<String> = self
                .crossings
                .iter()
                .enumerate()
                .map(
                    |(i, c)| if self.positive[i] { format!("{}>{}", c[3], c[1]) } else { format!("{}>{}", c[1], c[3]) },
                )
                .collect();
            parts.push(format!("o({})", hints.join(" ")));
        }
        if let Some(bp) = self.basepoint {
            parts.push(format!("bp({bp})"));
        }
        parts.join(" ")
    }

    /// Add a positive Reidemeister-1 kink on arc `at`.
    ///
    /// The new crossing is `X(at, n2, n1, n1)`: its 0-smoothing splits off a
    /// small circle made of arc `n1`, its 1-smoothing recovers the original
    /// strand. The end of `at` that used to be its head becomes `n2`.
    pub fn insert_kink(&self, at: Arc) -> Result<PlanarDiagram, DiagramError> {
        if !self.has_arc(at) {
            return Err(DiagramError::MissingArc(at));
        }
        let top = self.max_arc();
        let (n1, n2) = (top + 1, top + 2);
        let mut d = self.clone();
        if let Some(pos) = d.loops.iter().position(|&l| l == at) {
            d.loops.remove(pos);
            d.crossings.push([at, at, n1, n1]);
        } else {
            let (ci, s) = (0..self.n_crossings())
                .flat_map(|i| (0..4).map(move |s| (i, s)))
                .find(|&(i, s)| self.crossings[i][s] == at && self.slot_incoming(i, s))
                .expect("every arc has a head");
            d.crossings[ci][s] = n2;
            d.crossings.push([at, n2, n1, n1]);
        }
        d.positive.push(true);
        d.kink = Some(d.crossings.len() - 1);
        if d.basepoint.is_none() {
            d.basepoint = Some(at);
        }
        Ok(d)
    }

    /// Split union; arcs of `b` are shifted past those of `a`.
    pub fn disjoint_union(a: &PlanarDiagram, b: &PlanarDiagram) -> PlanarDiagram {
        let shift = a.max_arc();
        let mut d = a.clone();
        d.crossings.extend(b.crossings.iter().map(|c| c.map(|x| x + shift)));
        d.positive.extend_from_slice(&b.positive);
        d.loops.extend(b.loops.iter().map(|x| x + shift));
        d
    }
}

fn occurrences(crossings: &[[Arc; 4]]) -> BTreeMap<Arc, Vec<usize>> {
    let mut occ: BTreeMap<Arc, Vec<usize>> = BTreeMap::new();
    for (i, c) in crossings.iter().enumerate() {
        for (s, &a) in c.iter().enumerate() {
            occ.entry(a).or_default().push(4 * i + s);
        }
    }
    occ
}

fn other_slot(occ: &BTreeMap<Arc, Vec<usize>>, crossings: &[[Arc; 4]], s: usize) -> usize {
    let v = &occ[&crossings[s / 4][s % 4]];
    if v[0] == s {
        v[1]
    } else {
        v[0]
    }
}

/// Decide each crossing's sign from the under-strand convention plus hints.
fn infer_orientation(crossings: &[[Arc; 4]], hints: &[(Arc, Arc)]) -> Result<Vec<bool>, DiagramError> {
    let n = crossings.len();
    let occ = occurrences(crossings);
    // incoming[slot]: Some(true) if the strand enters the crossing there
    let mut incoming: Vec<Option<bool>> = vec![None; 4 * n];
    let mut queue: Vec<(usize, bool)> = Vec::new();
    for i in 0..n {
        queue.push((4 * i, true));
        queue.push((4 * i + 2, false));
    }
    for &(from, to) in hints {
        // prefer an over-strand match; a pair of arcs can be opposite at
        // two crossings (e.g. the Hopf link) and run different ways there
        let hit = |over: bool| {
            (0..n).flat_map(|i| (0..4).map(move |s| (i, s))).find(|&(i, s)| {
                let x = crossings[i];
                (s % 2 == 1) == over && x[s] == from && x[(s + 2) % 4] == to
            })
        };
        let (c, s) = hit(true)
            .or_else(|| hit(false))
            .ok_or_else(|| DiagramError::Orientation(format!("hint {from}>{to} does not match any crossing")))?;
        queue.push((4 * c + s, true));
        queue.push((4 * c + (s + 2) % 4, false));
    }
    while let Some((s, inc)) = queue.pop() {
        match incoming[s] {
            Some(v) if v == inc => continue,
            Some(_) => {
                return Err(DiagramError::Orientation(format!(
                    "arc {} at crossing {} is forced both ways",
                    crossings[s / 4][s % 4],
                    s / 4
                )))
            }
            None => {}
        }
        incoming[s] = Some(inc);
        // the same arc at its other end flows the opposite way
        queue.push((other_slot(&occ, crossings, s), !inc));
        // the opposite slot on the same strand flows the opposite way
        queue.push((4 * (s / 4) + (s % 4 + 2) % 4, !inc));
    }
    (0..n)
        .map(|i| match incoming[4 * i + 3] {
            Some(v) => Ok(v),
            None => Err(DiagramError::Orientation(format!(
                "over-strand of crossing {i} has no orientation; add an o(a>b) hint"
            ))),
        })
        .collect()
}

/// Parse PD text: `X(a,b,c,d)` crossings, `O` or `O(a)` free loops, an
/// optional `o(a>b ...)` block and an optional `bp(a)` basepoint.
pub fn parse_pd(text: &str) -> Result<PlanarDiagram, DiagramError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut crossings = Vec::new();
    let mut loops: Vec<Option<Arc>> = Vec::new();
    let mut hints = Vec::new();
    let mut basepoint = None;
    let err = |pos: usize, msg: &str| DiagramError::Syntax { pos, msg: msg.to_string() };
    while pos < bytes.len() {
        let ch = bytes[pos];
        if ch.is_ascii_whitespace() || ch == b',' || ch == b';' {
            pos += 1;
            continue;
        }
        if ch == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_alphabetic() {
            pos += 1;
        }
        let word = &text[start..pos];
        if word.is_empty() {
            return Err(err(start, &format!("unexpected character {:?}", ch as char)));
        }
        let body = if pos < bytes.len() && bytes[pos] == b'(' {
            let open = pos;
            let close = text[open..].find(')').ok_or_else(|| err(open, "unclosed parenthesis"))? + open;
            pos = close + 1;
            Some((open + 1, &text[open + 1..close]))
        } else {
            None
        };
        match (word, body) {
            ("X", Some((at, b))) => {
                let nums = parse_numbers(b, at)?;
                if nums.len() != 4 {
                    return Err(err(start, "a crossing needs exactly four arcs"));
                }
                crossings.push([nums[0], nums[1], nums[2], nums[3]]);
            }
            ("O", None) => loops.push(None),
            ("O", Some((at, b))) => {
                let nums = parse_numbers(b, at)?;
                if nums.len() != 1 {
                    return Err(err(start, "a loop takes one arc label"));
                }
                loops.push(Some(nums[0]));
            }
            ("o", Some((at, b))) => {
                let mut off = at;
                for item in b.split(|c: char| c.is_whitespace() || c == ',') {
                    if item.is_empty() {
                        off += 1;
                        continue;
                    }
                    let (l, r) = item.split_once('>').ok_or_else(|| err(off, "orientation entries look like a>b"))?;
                    let l = l.trim().parse().map_err(|_| err(off, "bad arc label"))?;
                    let r = r.trim().parse().map_err(|_| err(off, "bad arc label"))?;
                    hints.push((l, r));
                    off += item.len() + 1;
                }
            }
            ("bp", Some((at, b))) => {
                let nums = parse_numbers(b, at)?;
                if nums.len() != 1 {
                    return Err(err(start, "bp takes one arc label"));
                }
                basepoint = Some(nums[0]);
            }
            _ => return Err(err(start, &format!("unknown term {word:?}"))),
        }
    }
    let mut top = crossings.iter().flatten().copied().chain(loops.iter().flatten().copied()).max().unwrap_or(0);
    let loops = loops
        .into_iter()
        .map(|l| {
            l.unwrap_or_else(|| {
                top += 1;
                top
            })
        })
        .collect();
    PlanarDiagram::new(crossings, loops, &hints, basepoint)
}

fn parse_numbers(body: &str, at: usize) -> Result<Vec<Arc>, DiagramError> {
    let mut out = Vec::new();
    let mut off = at;
    for item in body.split(',') {
        let t = item.trim();
        out.push(t.parse().map_err(|_| DiagramError::Syntax { pos: off, msg: format!("bad arc label {t:?}") })?);
        off += item.len() + 1;
    }
    Ok(out)
}

/// Closure of the braid word (generators `±1 ..= ±(strands-1)`).
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<PlanarDiagram, DiagramError> {
    if strands < 1 {
        return Err(DiagramError::Parameters("a braid needs at least one strand".into()));
    }
    let mut lanes: Vec<Arc> = (0..strands as Arc).collect();
    let mut next = strands as Arc;
    let mut raw = Vec::with_capacity(word.len());
    let mut positive = Vec::with_capacity(word.len());
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if g == 0 || i >= strands {
            return Err(DiagramError::Parameters(format!("generator {g} out of range")));
        }
        let (l_in, r_in) = (lanes[i - 1], lanes[i]);
        let (l_out, r_out) = (next, next + 1);
        next += 2;
        if g > 0 {
            raw.push([r_in, r_out, l_out, l_in]);
        } else {
            raw.push([l_in, r_in, r_out, l_out]);
        }
        positive.push(g > 0);
        lanes[i - 1] = l_out;
        lanes[i] = r_out;
    }
    let close: BTreeMap<Arc, Arc> = lanes.iter().enumerate().map(|(j, &a)| (a, j as Arc)).collect();
    let raw: Vec<[Arc; 4]> = raw.iter().map(|c| c.map(|a| *close.get(&a).unwrap_or(&a))).collect();
    // relabel arcs 1..=2n in order of first appearance
    let mut label: BTreeMap<Arc, Arc> = BTreeMap::new();
    for c in &raw {
        for &a in c {
            let k = label.len() as Arc + 1;
            label.entry(a).or_insert(k);
        }
    }
    let crossings: Vec<[Arc; 4]> = raw.iter().map(|c| c.map(|a| label[&a])).collect();
    // strands that never cross anything close up into free loops
    let mut loops = Vec::new();
    let mut top = label.len() as Arc;
    for j in 0..strands {
        let touched = word.iter().any(|&g| {
            let i = g.unsigned_abs() as usize;
            i == j || i == j + 1
        });
        if !touched {
            top += 1;
            loops.push(top);
        }
    }
    let d = PlanarDiagram { crossings, positive, loops, basepoint: None, kink: None };
    debug_assert!(infer_orientation(&d.crossings, &[]).map(|p| p == d.positive).unwrap_or(true));
    Ok(d)
}

/// The torus link T(p,q) as the closure of `(σ1 σ2 … σ_{p-1})^q`.
pub fn torus_knot(p: usize, q: usize) -> Result<PlanarDiagram, DiagramError> {
    if p < 2 || q < 2 {
        return Err(DiagramError::Parameters(format!("torus_knot needs p, q >= 2, got ({p},{q})")));
    }
    let word: Vec<i32> = (0..q).flat_map(|_| 1..p as i32).collect();
    braid_closure(p, &word)
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_trefoil_parses() {
        let d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)").unwrap();
        assert_eq!(d.n_crossings(), 3);
        assert_eq!(d.arcs().len(), 6);
        assert_eq!(d.n_minus(), 3);
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn multiplicity_error() {
        let e = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,7)").unwrap_err();
        assert!(matches!(e, DiagramError::ArcMultiplicity { .. }), "{e}");
    }

    #[test]
    fn empty_needs_loop_marker() {
        let d = parse_pd("O").unwrap();
        assert_eq!(d.n_crossings(), 0);
        assert_eq!(d.components(), 1);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_pd("X(1,2,3,4) Y(1)").unwrap_err() {
            DiagramError::Syntax { pos, .. } => assert_eq!(pos, 11),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn torus_counts() {
        let t = torus_knot(2, 3).unwrap();
        assert_eq!((t.n_crossings(), t.n_plus()), (3, 3));
        let t = torus_knot(4, 5).unwrap();
        assert_eq!((t.n_crossings(), t.n_plus(), t.components()), (15, 15, 1));
        assert_eq!(torus_knot(2, 2).unwrap().components(), 2);
        for p in 2..=6 {
            for q in 2..=6 {
                let t = torus_knot(p, q).unwrap();
                assert_eq!(t.n_crossings(), q * (p - 1));
            }
        }
    }

    #[test]
    fn render_roundtrip() {
        for (p, q) in [(2, 3), (3, 4), (2, 2)] {
            let t = torus_knot(p, q).unwrap();
            assert_eq!(parse_pd(&t.render()).unwrap(), t);
        }
        let k = torus_knot(2, 3).unwrap().insert_kink(1).unwrap();
        let back = parse_pd(&k.render()).unwrap();
        assert_eq!(back.crossings(), k.crossings());
    }

    #[test]
    fn kink_adds_positive_crossing() {
        let t = torus_knot(3, 4).unwrap();
        let k = t.insert_kink(2).unwrap();
        assert_eq!(k.n_crossings(), t.n_crossings() + 1);
        assert_eq!(k.kink_crossing(), Some(t.n_crossings()));
        assert!(k.is_positive(t.n_crossings()));
        for i in 0..t.n_crossings() {
            assert_eq!(k.is_positive(i), t.is_positive(i));
        }
        let u = PlanarDiagram::unknot().insert_kink(1).unwrap();
        assert_eq!(u.n_crossings(), 1);
        assert!(u.loops().is_empty());
    }

    #[test]
    fn union_counts() {
        let t = torus_knot(2, 3).unwrap();
        let u = PlanarDiagram::disjoint_union(&t, &PlanarDiagram::unknot());
        assert_eq!((u.n_crossings(), u.components()), (3, 2));
        let uu = PlanarDiagram::disjoint_union(&PlanarDiagram::unknot(), &PlanarDiagram::unknot());
        assert_eq!(uu.components(), 2);
    }
}

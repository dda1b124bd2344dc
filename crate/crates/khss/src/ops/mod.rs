//! Operations on Khovanov homology and on the Szabó spectral sequence: the
//! basepoint map and its lift through the kink cone, the Bockstein, the
//! reduced splitting, and the checks built on top of them.

pub mod butterfly;
pub mod cartan;
pub mod export;
pub mod report;

use std::collections::BTreeMap;

use crate::cube::{
    cancel_pairs, Bigrading, ChainComplex, ChainMapLayer, Cube, CubeError, KhGenerator, Resolution, Ring,
};
use crate::diagram::{Arc, DiagramError, PlanarDiagram};
use crate::homology::KhHomology;
use crate::linalg::{BitVec, MatF2};
use crate::specseq::{PageMap, SpectralSequence};
use crate::szabo::{build_szabo_oriented, orientation_from_seed, SzaboDifferential};

#[derive(Debug, thiserror::Error)]
pub enum OpsError {
    #[error("basepoint arc {0} is not on the diagram")]
    MissingBasepoint(Arc),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error("the cone map is not the identity on the x-free part: generator {generator} maps to {image:?}")]
    IdentityComponent { generator: u32, image: Vec<u32> },
    #[error("integral differential of a representative in {block:?} is not divisible by 2")]
    NotDivisible { block: Bigrading },
    #[error("the integral complex does not reduce to the F2 complex")]
    RingMismatch,
    #[error("{0}")]
    Contract(String),
}

fn slot_of_arc(cube: &Cube, a: Arc) -> Option<usize> {
    cube.arc_of_slot.iter().position(|&x| x == a)
}

/// Multiplication by `x` on the circle through the basepoint, bidegree
/// `(0, -2)`.
pub fn basepoint_x(c: &ChainComplex, bp: Arc) -> Result<ChainMapLayer, OpsError> {
    let cube = &c.cube;
    let slot = slot_of_arc(cube, bp).ok_or(OpsError::MissingBasepoint(bp))?;
    let rows: Vec<Vec<u32>> = cube
        .generators()
        .map(|g| {
            let circ = cube.circle(g.resolution.bits, slot);
            if g.labels >> circ & 1 == 1 {
                vec![]
            } else {
                vec![cube.index(KhGenerator { labels: g.labels | 1 << circ, ..g }) as u32]
            }
        })
        .collect();
    Ok(ChainMapLayer::from_rows_f2((0, -2), rows))
}

/// The lift of the basepoint map to a chain map of the total complex.
#[derive(Clone, Debug)]
pub struct XSz {
    /// `layers[k]` raises `(t, q)` by `(k, 2k - 2)`; layer 0 is `X`
    pub layers: Vec<ChainMapLayer>,
    /// sum of all layers
    pub total: ChainMapLayer,
    pub kinked: PlanarDiagram,
}

impl crate::specseq::ChainMap for XSz {
    fn image(&self, g: u32) -> Vec<u32> {
        self.total.image(g as u64).to_vec()
    }
    fn bidegree(&self) -> (i32, i32) {
        (0, -2)
    }
}

/// Read `X_Sz` off the cone of the kink crossing.
///
/// Adding a positive kink at the basepoint gives a diagram whose cube splits
/// along the kink crossing: the 0-side is the original complex tensored with
/// the small kink circle, the 1-side is the original complex. The part of
/// the kinked total differential running from the 0-side to the 1-side is
/// `S = 1 + X_Sz`, where `1` comes from the kink circle labelled 1 and
/// `X_Sz` from the kink circle labelled x.
pub fn extract_x_sz(sz: &SzaboDifferential, d: &PlanarDiagram, bp: Arc) -> Result<XSz, OpsError> {
    let n = d.n_crossings();
    let kinked = d.insert_kink(bp)?;
    let mut orient = sz.orientation.clone();
    orient.push(orientation_from_seed(sz.seed.unwrap_or(0), n + 1)[n]);
    let sharp = build_szabo_oriented(&kinked, &orient);
    let cube = &sz.complex.cube;
    let kcube = &sharp.complex.cube;
    let kbit = 1u32 << n;
    // circle of the kinked cube for each circle of the plain cube, per side
    let slot_in_kinked: Vec<usize> =
        cube.arc_of_slot.iter().map(|&a| slot_of_arc(kcube, a).expect("kinking keeps every arc")).collect();
    let kink_circle_slot = 4 * n + 2;
    let dim = cube.dim() as usize;
    let nl = n + 1;
    let mut rows: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); dim]; nl];
    for r in 0..cube.n_resolutions() {
        let rep = cube.representatives(r);
        let to0: Vec<u32> = rep.iter().map(|&s| kcube.circle(r, slot_in_kinked[s as usize]) as u32).collect();
        let kc = kcube.circle(r, kink_circle_slot);
        for l in 0..(1u32 << cube.n_circles(r)) {
            let mut l0 = 0u32;
            for (c, &k) in to0.iter().enumerate() {
                if l >> c & 1 == 1 {
                    l0 |= 1 << k;
                }
            }
            let g = cube.index(KhGenerator { resolution: Resolution { bits: r }, labels: l }) as u32;
            for (with_x, src_labels) in [(false, l0), (true, l0 | 1 << kc)] {
                let src = kcube.index(KhGenerator { resolution: Resolution { bits: r }, labels: src_labels });
                let mut ident = Vec::new();
                for (k1, layer) in sharp.layers.iter().enumerate() {
                    for &t in layer.image(src) {
                        let tg = kcube.generator(t as u64);
                        if tg.resolution.bits & kbit == 0 {
                            continue;
                        }
                        let r2 = tg.resolution.bits & !kbit;
                        let back = pull_back(cube, kcube, &slot_in_kinked, r2, tg.labels);
                        let target =
                            cube.index(KhGenerator { resolution: Resolution { bits: r2 }, labels: back }) as u32;
                        if with_x {
                            rows[k1][g as usize].push(target);
                        } else {
                            ident.push(target);
                        }
                    }
                }
                cancel_pairs(&mut ident);
                if !with_x && ident != [g] {
                    return Err(OpsError::IdentityComponent { generator: g, image: ident });
                }
            }
        }
    }
    let layers: Vec<ChainMapLayer> = rows
        .into_iter()
        .enumerate()
        .map(|(k, r)| ChainMapLayer::from_rows_f2((k as i32, 2 * k as i32 - 2), r))
        .collect();
    let total_rows: Vec<Vec<u32>> = (0..dim as u64)
        .map(|g| {
            let mut v: Vec<u32> = layers.iter().flat_map(|l| l.image(g).iter().copied()).collect();
            cancel_pairs(&mut v);
            v
        })
        .collect();
    let total = ChainMapLayer::from_rows_f2((0, -2), total_rows);
    Ok(XSz { layers, total, kinked })
}

/// Labels of a 1-side generator of the kinked cube, as labels of the plain
/// cube at resolution `r`.
fn pull_back(cube: &Cube, kcube: &Cube, slot_in_kinked: &[usize], r: u32, klabels: u32) -> u32 {
    let kr = r | 1 << cube.n;
    let rep = cube.representatives(r);
    let mut out = 0;
    for (c, &s) in rep.iter().enumerate() {
        if klabels >> kcube.circle(kr, slot_in_kinked[s as usize]) & 1 == 1 {
            out |= 1 << c;
        }
    }
    out
}

/// A map on Khovanov homology written in the canonical bases: for every
/// source bidegree, a matrix whose columns are the images of the
/// canonical basis vectors in the canonical basis of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalMap {
    pub bidegree: (i32, i32),
    pub blocks: BTreeMap<Bigrading, MatF2>,
}

impl CanonicalMap {
    pub fn target(&self, b: Bigrading) -> Bigrading {
        Bigrading { t: b.t + self.bidegree.0, q: b.q + self.bidegree.1 }
    }

    /// Rank of every nonzero block.
    pub fn ranks(&self) -> BTreeMap<(Bigrading, Bigrading), usize> {
        self.blocks.iter().map(|(b, m)| ((*b, self.target(*b)), m.rank())).filter(|(_, r)| *r > 0).collect()
    }

    pub fn rank(&self, from: Bigrading) -> usize {
        self.blocks.get(&from).map_or(0, |m| m.rank())
    }

    pub fn compose(&self, first: &CanonicalMap) -> CanonicalMap {
        let mut blocks = BTreeMap::new();
        for (b, m1) in &first.blocks {
            if let Some(m2) = self.blocks.get(&first.target(*b)) {
                blocks.insert(*b, m2.mul(m1));
            }
        }
        CanonicalMap { bidegree: (self.bidegree.0 + first.bidegree.0, self.bidegree.1 + first.bidegree.1), blocks }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }
}

/// The map induced on homology by a chain map that preserves `q - 2t`
/// blocks with the given bidegree.
pub fn induced_on_homology(c: &ChainComplex, kh: &KhHomology, f: &ChainMapLayer) -> Result<CanonicalMap, OpsError> {
    let (a, b) = f.bidegree;
    let mut blocks = BTreeMap::new();
    for (g, blk) in &kh.blocks {
        let to = Bigrading { t: g.t + a, q: g.q + b };
        let dim_to = kh.dim(to);
        let mut cols = Vec::new();
        for rep in &blk.reps {
            let img = f.apply_f2(rep);
            let coords = kh
                .coordinates(c, to, &img)
                .ok_or_else(|| OpsError::Contract(format!("image of a cycle in {g:?} is not a cycle")))?;
            cols.push(coords.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i as u32).collect::<Vec<u32>>());
        }
        blocks.insert(*g, MatF2::from_columns(dim_to, &cols));
    }
    Ok(CanonicalMap { bidegree: (a, b), blocks })
}

/// The Bockstein `Sq^1` in canonical bases.
///
/// Each canonical representative is lifted to an integral chain with
/// coefficients 0 and 1; its integral differential is twice a cycle whose
/// class mod 2 is the image.
pub fn bockstein_sq1(cz: &ChainComplex, cf: &ChainComplex, kh: &KhHomology) -> Result<CanonicalMap, OpsError> {
    if cz.ring != Ring::Z || cz.cube.dim() != cf.cube.dim() {
        return Err(OpsError::RingMismatch);
    }
    let mut blocks = BTreeMap::new();
    for (g, blk) in &kh.blocks {
        let to = Bigrading { t: g.t + 1, q: g.q };
        let mut cols = Vec::new();
        for rep in &blk.reps {
            let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
            for &s in rep {
                for (&t, &v) in cz.differential.image(s as u64).iter().zip(cz.differential.image_coeffs(s as u64)) {
                    *acc.entry(t).or_insert(0) += v;
                }
            }
            if acc.values().any(|v| v % 2 != 0) {
                return Err(OpsError::NotDivisible { block: *g });
            }
            let half: Vec<u32> = acc.iter().filter(|(_, &v)| (v / 2) % 2 != 0).map(|(&t, _)| t).collect();
            let coords = kh
                .coordinates(cf, to, &half)
                .ok_or_else(|| OpsError::Contract(format!("Bockstein image from {g:?} is not a cycle")))?;
            cols.push(coords.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i as u32).collect::<Vec<u32>>());
        }
        blocks.insert(*g, MatF2::from_columns(kh.dim(to), &cols));
    }
    Ok(CanonicalMap { bidegree: (1, 0), blocks })
}

/// Translation between the canonical Khovanov basis and the page-2 labels
/// of a spectral sequence.
pub struct Page2Bridge<'a> {
    pub complex: &'a ChainComplex,
    pub kh: &'a KhHomology,
    pub ss: &'a SpectralSequence,
}

impl<'a> Page2Bridge<'a> {
    /// Canonical coordinates of a page-2 label.
    pub fn to_canonical(&self, g: u32) -> (Bigrading, Vec<bool>) {
        let pers = &self.ss.persistence;
        let b = pers.grading[g as usize];
        let lead = pers.level_part(&pers.representative(g), b.t);
        let c = self.kh.coordinates(self.complex, b, &lead).expect("page-2 representatives lead with cycles");
        (b, c)
    }

    /// Page-2 labels of a canonical vector.
    pub fn from_canonical(&self, b: Bigrading, coords: &[bool]) -> Vec<u32> {
        let Some(blk) = self.kh.blocks.get(&b) else { return vec![] };
        let mut z: Vec<u32> =
            coords.iter().zip(&blk.reps).filter(|(&x, _)| x).flat_map(|(_, r)| r.iter().copied()).collect();
        cancel_pairs(&mut z);
        self.ss.persistence.page_class(&z, b.t, 2)
    }

    /// A canonical map as a page-2 map on labels.
    pub fn page_map(&self, f: &CanonicalMap) -> PageMap {
        let page = self.ss.page_or_last(2);
        let mut images = BTreeMap::new();
        for labels in page.blocks.values() {
            for &g in labels {
                let (b, c) = self.to_canonical(g);
                let to = f.target(b);
                let img = match f.blocks.get(&b) {
                    Some(m) => {
                        let v = m.mul_vec(&BitVec::from_bools(&c));
                        let bools: Vec<bool> = (0..v.len()).map(|i| v.get(i)).collect();
                        self.from_canonical(to, &bools)
                    }
                    None => vec![],
                };
                images.insert(g, img);
            }
        }
        PageMap { n: 2, bidegree: f.bidegree, images }
    }

    /// A page-2 map on labels written in canonical bases.
    pub fn canonical(&self, f: &PageMap) -> CanonicalMap {
        let mut blocks = BTreeMap::new();
        for (b, blk) in &self.kh.blocks {
            let to = Bigrading { t: b.t + f.bidegree.0, q: b.q + f.bidegree.1 };
            let dim_to = self.kh.dim(to);
            let mut cols = Vec::new();
            for i in 0..blk.reps.len() {
                let mut e = vec![false; blk.reps.len()];
                e[i] = true;
                let img = f.apply(&self.from_canonical(*b, &e));
                let mut acc = vec![false; dim_to];
                for g in img {
                    let (tb, c) = self.to_canonical(g);
                    debug_assert_eq!(tb, to);
                    for (x, y) in acc.iter_mut().zip(c) {
                        *x ^= y;
                    }
                }
                cols.push(acc.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i as u32).collect::<Vec<u32>>());
            }
            blocks.insert(*b, MatF2::from_columns(dim_to, &cols));
        }
        CanonicalMap { bidegree: f.bidegree, blocks }
    }
}

/// The splitting `Kh = im X_* ⊕ complement` per bidegree.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ReducedDecomposition {
    /// canonical coordinates of the image basis ("black dots")
    pub black: BTreeMap<Bigrading, Vec<Vec<bool>>>,
    /// echelon complement ("white dots")
    pub white: BTreeMap<Bigrading, Vec<Vec<bool>>>,
}

impl ReducedDecomposition {
    pub fn n_black(&self) -> usize {
        self.black.values().map(|v| v.len()).sum()
    }
    pub fn n_white(&self) -> usize {
        self.white.values().map(|v| v.len()).sum()
    }
}

/// Image of `X_*` and its echelon complement; checks `X_*² = 0`,
/// `ker X_* = im X_*` and the even split of the total rank.
pub fn reduced_decomposition(kh: &KhHomology, x_star: &CanonicalMap) -> Result<ReducedDecomposition, OpsError> {
    if !x_star.compose(x_star).is_zero() {
        return Err(OpsError::Contract("X_* does not square to zero".into()));
    }
    let mut black = BTreeMap::new();
    let mut white = BTreeMap::new();
    for (b, blk) in &kh.blocks {
        let dim = blk.reps.len();
        let src = Bigrading { t: b.t, q: b.q + 2 };
        // rows of the image span, reduced
        let mut img = match x_star.blocks.get(&src) {
            Some(m) => m.transpose(),
            None => MatF2::zeros(0, dim),
        };
        let pivots = img.rref();
        let rank = pivots.len();
        let blk_black: Vec<Vec<bool>> = (0..rank).map(|i| (0..dim).map(|j| img.get(i, j)).collect()).collect();
        let blk_white: Vec<Vec<bool>> =
            (0..dim).filter(|j| !pivots.contains(j)).map(|j| (0..dim).map(|i| i == j).collect()).collect();
        // kernel of X_* out of this block has the same dimension as the image
        let ker = dim - x_star.rank(*b);
        if ker != rank {
            return Err(OpsError::Contract(format!("ker X_* ≠ im X_* in {b:?}: {ker} vs {rank}")));
        }
        if !blk_black.is_empty() {
            black.insert(*b, blk_black);
        }
        if !blk_white.is_empty() {
            white.insert(*b, blk_white);
        }
    }
    let rd = ReducedDecomposition { black, white };
    if rd.n_black() != rd.n_white() {
        return Err(OpsError::Contract(format!("{} black vs {} white", rd.n_black(), rd.n_white())));
    }
    Ok(rd)
}

//! Canonical page-2 basis in a stable JSON form.
//!
//! Each basis vector is a sum of cube generators. A generator is written as
//! the resolution bit string (crossing 0 first) plus one label per circle,
//! where the circles of a resolution are numbered in increasing order of the
//! smallest arc label they contain. External tools that produce `Sq^2`
//! matrices can rebuild every vector from this file and the diagram.

use serde::Serialize;

use crate::cube::{Bigrading, ChainComplex};
use crate::diagram::PlanarDiagram;
use crate::homology::KhHomology;

pub const BASIS_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorDescriptor {
    pub index: u32,
    /// `'0'`/`'1'` per crossing
    pub resolution: String,
    /// `'1'`/`'x'` per circle
    pub labels: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisBlock {
    pub t: i32,
    pub q: i32,
    pub vectors: Vec<Vec<GeneratorDescriptor>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisExport {
    pub version: u32,
    pub diagram: String,
    pub total: usize,
    pub blocks: Vec<BasisBlock>,
}

pub fn export_basis(d: &PlanarDiagram, c: &ChainComplex, kh: &KhHomology) -> BasisExport {
    let cube = &c.cube;
    let describe = |g: u32| {
        let gen = cube.generator(g as u64);
        let r = gen.resolution.bits;
        GeneratorDescriptor {
            index: g,
            resolution: (0..cube.n).map(|i| if r >> i & 1 == 1 { '1' } else { '0' }).collect(),
            labels: (0..cube.n_circles(r)).map(|k| if gen.labels >> k & 1 == 1 { 'x' } else { '1' }).collect(),
        }
    };
    let blocks: Vec<BasisBlock> = kh
        .blocks
        .iter()
        .filter(|(_, b)| !b.reps.is_empty())
        .map(|(Bigrading { t, q }, b)| BasisBlock {
            t: *t,
            q: *q,
            vectors: b.reps.iter().map(|v| v.iter().map(|&g| describe(g)).collect()).collect(),
        })
        .collect();
    BasisExport {
        version: BASIS_FORMAT_VERSION,
        diagram: d.render(),
        total: blocks.iter().map(|b| b.vectors.len()).sum(),
        blocks,
    }
}

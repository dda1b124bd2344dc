//! Khovanov homology and Szabó's geometric spectral sequence, together with
//! the Bockstein and basepoint operations on them.

pub mod cli;
pub mod cube;
pub mod diagram;
pub mod homology;
pub mod linalg;
pub mod ops;
pub mod specseq;
pub mod szabo;

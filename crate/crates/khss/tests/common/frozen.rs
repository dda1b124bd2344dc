//! Dense brute-force oracle for small knots. The oracle values were computed
//! once and frozen below; both the oracle and the library are checked
//! against them.

use super::oracle;
use khss::cube::{build_complex, Ring};
use khss::diagram::{parse_pd, torus_knot};
use khss::homology::{kh_homology_f2, kh_homology_z};

pub const TREFOIL: &str = "X(1,2,3,4) X(2,5,6,3) X(5,1,4,6) o(4>2 3>5 6>1)";
pub const T34: &str = "X(1,2,3,4) X(5,6,7,2) X(7,8,9,3) X(6,10,11,8) X(11,12,13,9) X(10,14,15,12) \
                       X(15,16,4,13) X(14,5,1,16) o(4>2 2>6 3>8 8>10 9>12 12>14 13>16 16>5)";

type F2 = &'static [(i32, i32, usize)];
type Z = &'static [(i32, i32, usize, &'static [i64])];

const TREFOIL_F2: F2 = &[(0, 1, 1), (0, 3, 1), (2, 5, 1), (2, 7, 1), (3, 7, 1), (3, 9, 1)];
const TREFOIL_Z: Z = &[(0, 1, 1, &[]), (0, 3, 1, &[]), (2, 5, 1, &[]), (3, 7, 0, &[2]), (3, 9, 1, &[])];

const T34_F2: F2 = &[
    (0, 5, 1),
    (0, 7, 1),
    (2, 9, 1),
    (2, 11, 1),
    (3, 11, 1),
    (3, 13, 1),
    (4, 11, 1),
    (4, 13, 1),
    (5, 15, 1),
    (5, 17, 1),
];
const T34_Z: Z = &[
    (0, 5, 1, &[]),
    (0, 7, 1, &[]),
    (2, 9, 1, &[]),
    (3, 11, 0, &[2]),
    (3, 13, 1, &[]),
    (4, 11, 1, &[]),
    (4, 13, 1, &[]),
    (5, 15, 1, &[]),
    (5, 17, 1, &[]),
];

fn frozen(f2: F2, z: Z) -> oracle::Homology {
    oracle::Homology { f2: f2.to_vec(), z: z.iter().map(|&(t, q, r, tor)| (t, q, r, tor.to_vec())).collect() }
}

fn library(pd: &str) -> oracle::Homology {
    let d = parse_pd(pd).unwrap();
    let f2 = kh_homology_f2(&build_complex(&d, Ring::F2)).poincare();
    let z = kh_homology_z(&build_complex(&d, Ring::Z)).unwrap();
    oracle::Homology {
        f2: f2.0.iter().map(|(b, &r)| (b.t, b.q, r)).collect(),
        z: z.iter().map(|(b, g)| (b.t, b.q, g.rank, g.torsion.clone())).collect(),
    }
}

pub fn oracle_reproduces_frozen_values() {
    assert_eq!(oracle::homology(TREFOIL), frozen(TREFOIL_F2, TREFOIL_Z));
    assert_eq!(oracle::homology(T34), frozen(T34_F2, T34_Z));
}

pub fn oracle_differential_squares_to_zero() {
    assert!(oracle::square_zero(TREFOIL));
    assert!(oracle::square_zero(T34));
}

pub fn library_matches_oracle_on_trefoil() {
    assert_eq!(library(TREFOIL), frozen(TREFOIL_F2, TREFOIL_Z));
}

pub fn library_matches_oracle_on_t34() {
    assert_eq!(library(T34), frozen(T34_F2, T34_Z));
}

pub fn frozen_diagrams_are_the_generated_torus_knots() {
    assert_eq!(parse_pd(TREFOIL).unwrap().render(), torus_knot(2, 3).unwrap().render());
    assert_eq!(parse_pd(T34).unwrap().render(), torus_knot(3, 4).unwrap().render());
}

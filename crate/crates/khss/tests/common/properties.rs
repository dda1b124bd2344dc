//! Property suites over random and small diagrams and random matrices.
//! Every function panics on the first counterexample.

use khss::cube::{build_complex, Ring};
use khss::homology::kh_homology_f2;
use khss::linalg::sparse::rank_of_columns;
use khss::linalg::{invariant_factors, smith_normal_form, sparse_invariant_factors, BitVec, MatF2, MatZ};
use khss::ops::{basepoint_x, bockstein_sq1, extract_x_sz, induced_on_homology, reduced_decomposition};
use khss::specseq::{chain_commutation_failure, compute_pages, default_max_page, same_pages};
use khss::szabo::{build_szabo, verify_square_zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn total_differential_squares_to_zero_on_random_six_crossing_knots() {
    for (word, d) in super::random_knots(50, 6, 7) {
        let s = build_szabo(&d, 0);
        assert_eq!(verify_square_zero(&s), Ok(()), "braid word {word:?}");
        assert_eq!(s.bidegree_violation(), None, "braid word {word:?}");
    }
}

pub fn total_differential_squares_to_zero_on_small_torus_knots() {
    let knots = super::small_torus_knots(12);
    assert!(knots.len() >= 10);
    for ((p, q), d) in knots {
        let s = build_szabo(&d, 0);
        assert_eq!(verify_square_zero(&s), Ok(()), "T({p},{q})");
    }
}

pub fn integral_differential_squares_to_zero() {
    let mut knots = super::corpus();
    knots.extend(super::random_knots(10, 6, 11).into_iter().map(|(_, d)| ("random", d)));
    for (name, d) in knots {
        let c = build_complex(&d, Ring::Z);
        let dd = &c.differential;
        for g in 0..c.cube.dim() {
            let mut acc = std::collections::BTreeMap::new();
            for (&t, &a) in dd.image(g).iter().zip(dd.image_coeffs(g)) {
                for (&u, &b) in dd.image(t as u64).iter().zip(dd.image_coeffs(t as u64)) {
                    *acc.entry(u).or_insert(0i64) += a * b;
                }
            }
            assert!(acc.values().all(|&v| v == 0), "{name}: d^2 != 0 at generator {g}");
        }
    }
}

pub fn bockstein_squares_to_zero() {
    for (name, d) in super::corpus() {
        let f = build_complex(&d, Ring::F2);
        let z = build_complex(&d, Ring::Z);
        let kh = kh_homology_f2(&f);
        let sq = bockstein_sq1(&z, &f, &kh).unwrap();
        assert!(sq.compose(&sq).is_zero(), "{name}");
    }
}

pub fn bockstein_ignores_basis_sign_flips() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, d) in super::corpus() {
        let f = build_complex(&d, Ring::F2);
        let z = build_complex(&d, Ring::Z);
        let kh = kh_homology_f2(&f);
        let plain = bockstein_sq1(&z, &f, &kh).unwrap();
        let signs: Vec<i64> = (0..z.cube.dim()).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let mut flipped = z.clone();
        for g in 0..flipped.cube.dim() as usize {
            let (a, b) = (flipped.differential.indptr[g] as usize, flipped.differential.indptr[g + 1] as usize);
            for k in a..b {
                let t = flipped.differential.targets[k] as usize;
                flipped.differential.coeffs[k] *= signs[g] * signs[t];
            }
        }
        assert_eq!(bockstein_sq1(&flipped, &f, &kh).unwrap(), plain, "{name}");
    }
}

pub fn basepoint_map_squares_to_zero_and_commutes_with_d() {
    for (name, d) in super::corpus() {
        let c = build_complex(&d, Ring::F2);
        let bp = d.basepoint().unwrap_or(d.arcs()[0]);
        let x = basepoint_x(&c, bp).unwrap();
        for g in 0..c.cube.dim() as u32 {
            assert!(x.apply_f2(x.image(g as u64)).is_empty(), "{name}: X^2 != 0");
            let dx = c.differential.apply_f2(x.image(g as u64));
            let xd = x.apply_f2(c.differential.image(g as u64));
            assert_eq!(dx, xd, "{name}: X d != d X at {g}");
        }
    }
}

pub fn lifted_basepoint_map_is_a_chain_map() {
    let mut knots = super::corpus();
    knots.extend(super::random_knots(5, 6, 13).into_iter().map(|(_, d)| ("random", d)));
    for (name, d) in knots {
        let s = build_szabo(&d, 1);
        let bp = d.basepoint().unwrap_or(d.arcs()[0]);
        let x = extract_x_sz(&s, &d, bp).unwrap();
        assert_eq!(chain_commutation_failure(&s, &x), None, "{name}");
        let plain = basepoint_x(&s.complex, bp).unwrap();
        assert_eq!((&plain.indptr, &plain.targets), (&x.layers[0].indptr, &x.layers[0].targets), "{name}");
    }
}

pub fn reduced_homology_splits_evenly() {
    for (name, d) in super::corpus() {
        let c = build_complex(&d, Ring::F2);
        let kh = kh_homology_f2(&c);
        let x = basepoint_x(&c, d.basepoint().unwrap_or(d.arcs()[0])).unwrap();
        let xs = induced_on_homology(&c, &kh, &x).unwrap();
        let rd = reduced_decomposition(&kh, &xs).unwrap();
        assert_eq!(2 * rd.n_black(), kh.poincare().total(), "{name}");
    }
}

pub fn euler_characteristic_is_the_same_on_every_page() {
    let mut knots = super::corpus();
    knots.push(("T(3,5)", khss::diagram::torus_knot(3, 5).unwrap()));
    for (name, d) in knots {
        let s = build_szabo(&d, 0);
        let chi = s.complex.euler_w();
        let ss = compute_pages(&s, default_max_page(&s));
        for p in &ss.pages {
            assert_eq!(p.poincare().euler_w(), chi, "{name}, page {}", p.n);
        }
        assert_eq!(ss.infinity().euler_w(), chi, "{name}");
        // page 2 is Khovanov homology, so the ordinary graded count holds there
        assert_eq!(ss.pages[0].poincare().euler(), s.complex.euler_characteristic(), "{name}");
    }
}

pub fn pages_do_not_depend_on_the_orientation_seed() {
    let mut knots = super::corpus();
    knots.push(("T(3,5)", khss::diagram::torus_knot(3, 5).unwrap()));
    knots.extend(super::random_knots(10, 6, 17).into_iter().map(|(_, d)| ("random", d)));
    for (name, d) in knots {
        let reference = build_szabo(&d, 0);
        let max = default_max_page(&reference);
        let base = compute_pages(&reference, max);
        for seed in 1..=3 {
            let other = compute_pages(&build_szabo(&d, seed), max);
            assert!(same_pages(&base, &other, max), "{name}, seed {seed}");
        }
    }
}

fn random_f2(rng: &mut ChaCha8Rng) -> Vec<Vec<bool>> {
    let rows = rng.gen_range(1..=24);
    let cols = rng.gen_range(1..=24);
    let density = rng.gen_range(0.05..0.6);
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(density)).collect()).collect()
}

pub fn f2_linear_algebra_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let a = random_f2(&mut rng);
        let (rows, cols) = (a.len(), a[0].len());
        let m = MatF2::from_rows(cols, a.iter().map(|r| BitVec::from_bools(r)).collect());
        let rank = super::dense_rank(&a);
        assert_eq!(m.rank(), rank, "case {case}");
        let columns: Vec<Vec<u32>> =
            (0..cols).map(|j| (0..rows).filter(|&i| a[i][j]).map(|i| i as u32).collect()).collect();
        assert_eq!(rank_of_columns(&columns), rank, "case {case}: sparse rank");
        let ker = m.kernel();
        assert_eq!(ker.len(), cols - rank, "case {case}: kernel dimension");
        for v in &ker {
            assert!(m.mul_vec(v).is_zero(), "case {case}: kernel vector");
        }
        let kb: Vec<Vec<bool>> = ker.iter().map(|v| (0..cols).map(|i| v.get(i)).collect()).collect();
        assert_eq!(super::dense_rank(&kb), ker.len(), "case {case}: kernel basis independent");
        let b: Vec<bool> = (0..rows).map(|_| rng.gen_bool(0.5)).collect();
        let aug: Vec<Vec<bool>> = a.iter().zip(&b).map(|(r, &x)| r.iter().copied().chain([x]).collect()).collect();
        let solvable = super::dense_rank(&aug) == rank;
        match m.solve(&BitVec::from_bools(&b)) {
            Some(x) => {
                assert!(solvable, "case {case}: solved an inconsistent system");
                assert_eq!(m.mul_vec(&x), BitVec::from_bools(&b), "case {case}");
            }
            None => assert!(!solvable, "case {case}: missed a solution"),
        }
    }
}

pub fn smith_normal_form_matches_determinantal_divisors() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..100 {
        let range = [1, 2, 3, 6][case % 4];
        let mut a = super::random_int_matrix(&mut rng, 8, 8, range);
        // make some cases rank deficient
        if case % 5 == 0 {
            let r0 = a[0].clone();
            for (x, y) in a[7].iter_mut().zip(&r0) {
                *x = 2 * y;
            }
        }
        let want = super::naive_invariant_factors(&a);
        let m = MatZ::from_rows(&a);
        let got: Vec<i64> = invariant_factors(&m).unwrap().iter().map(|x| x.abs()).collect();
        assert_eq!(got, want, "case {case}: {a:?}");
        // the full form, when its transforms fit in i64, must agree and factor m
        if let Ok(s) = smith_normal_form(&m) {
            assert_eq!(s.invariant_factors(), want, "case {case}: full form");
            if let Ok(umv) = s.u.mul(&m).and_then(|um| um.mul(&s.v)) {
                assert_eq!(umv, s.d, "case {case}: U M V = D");
            }
        }
        let columns: Vec<Vec<(u32, i64)>> =
            (0..8).map(|j| (0..8).filter(|&i| a[i][j] != 0).map(|i| (i as u32, a[i][j])).collect()).collect();
        let sparse: Vec<i64> = sparse_invariant_factors(8, &columns).unwrap().iter().map(|x| x.abs()).collect();
        assert_eq!(sparse, want, "case {case}: sparse elimination");
    }
}

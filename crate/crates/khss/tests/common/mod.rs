#![allow(dead_code)]

pub mod frozen;
pub mod oracle;
pub mod properties;

use khss::diagram::{braid_closure, torus_knot, PlanarDiagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Braid words of the given length whose closure is a knot, drawn on 2 to
/// 4 strands with random signs.
pub fn random_knots(count: usize, crossings: usize, seed: u64) -> Vec<(Vec<i32>, PlanarDiagram)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let strands = rng.gen_range(2..=4);
        let word: Vec<i32> = (0..crossings)
            .map(|_| {
                let g = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        // permutation of the closure must be a single cycle
        let mut perm: Vec<usize> = (0..strands).collect();
        for g in &word {
            let i = g.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        let mut seen = 1;
        let mut k = perm[0];
        while k != 0 {
            k = perm[k];
            seen += 1;
        }
        if seen != strands {
            continue;
        }
        out.push((word.clone(), braid_closure(strands, &word).expect("valid braid word")));
    }
    out
}

/// Torus knots whose standard braid closure has at most `max` crossings.
pub fn small_torus_knots(max: usize) -> Vec<((usize, usize), PlanarDiagram)> {
    let mut out = Vec::new();
    for p in 2..=max + 1 {
        for q in 2..=max + 1 {
            if (p - 1) * q <= max && gcd(p, q) == 1 {
                out.push(((p, q), torus_knot(p, q).unwrap()));
            }
        }
    }
    out
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Small knots used by several suites.
pub fn corpus() -> Vec<(&'static str, PlanarDiagram)> {
    vec![
        ("unknot", PlanarDiagram::unknot()),
        ("trefoil", torus_knot(2, 3).unwrap()),
        ("figure-eight", braid_closure(3, &[1, -2, 1, -2]).unwrap()),
        ("T(3,4)", torus_knot(3, 4).unwrap()),
        ("T(2,5)", torus_knot(2, 5).unwrap()),
    ]
}

/// Random dense matrix with entries in `-range..=range`.
pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, range: i64) -> Vec<Vec<i64>> {
    (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-range..=range)).collect()).collect()
}

fn det(m: &[Vec<i128>]) -> i128 {
    // fraction-free (Bareiss) elimination
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd_i(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut with: Vec<Vec<usize>> = subsets(n - 1, k - 1);
    for s in &mut with {
        s.push(n - 1);
    }
    let mut out = subsets(n - 1, k);
    out.extend(with);
    out
}

/// Invariant factors from determinantal divisors: `d_k` is the gcd of all
/// `k x k` minors and the factors are `d_k / d_{k-1}`.
pub fn naive_invariant_factors(m: &[Vec<i64>]) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect()).collect();
                g = gcd_i(g, det(&sub));
            }
        }
        if g == 0 {
            break;
        }
        out.push((g / prev) as i64);
        prev = g;
    }
    out
}

/// Dense F2 rank by plain Gaussian elimination on `Vec<Vec<bool>>`.
pub fn dense_rank(m: &[Vec<bool>]) -> usize {
    let mut a = m.to_vec();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c]) else { continue };
        a.swap(rank, p);
        for i in 0..a.len() {
            if i != rank && a[i][c] {
                let pivot = a[rank].clone();
                for (x, y) in a[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#![allow(dead_code)]

use waring_core::{Instance, PointSet, PrimeField};

pub const OPTICS_POINTS: [[i64; 3]; 14] = [
    [42, -4, 17],
    [-50, -36, -28],
    [39, -16, 37],
    [9, -6, -22],
    [-15, -32, -19],
    [-22, 31, 45],
    [50, -32, -8],
    [45, -38, -31],
    [-29, 31, -9],
    [-39, 24, 32],
    [30, -42, -4],
    [19, -50, 4],
    [-38, -41, -2],
    [2, 15, 24],
];

pub const T2_LAMBDA: [i64; 14] = [
    -6395, -1019, 2227, 13599, -2136, -1329, 5500, -4082, 7252, -2038, 13457, 8366, 8750, -10807,
];

pub fn optics_points(field: PrimeField) -> PointSet {
    let pts: Vec<Vec<i64>> = OPTICS_POINTS.iter().map(|p| p.to_vec()).collect();
    PointSet::from_signed(field, 2, &pts).unwrap()
}

pub fn instance(points: PointSet, degree: u32, lambda: &[i64]) -> Instance {
    let f = points.field();
    let lambda = lambda.iter().map(|&l| f.from_i64(l)).collect();
    Instance::new(points, degree, lambda).unwrap()
}

pub fn optics_t1() -> Instance {
    instance(optics_points(PrimeField::default()), 8, &[1; 14])
}

pub fn optics_t2() -> Instance {
    instance(optics_points(PrimeField::default()), 8, &T2_LAMBDA)
}

pub fn signed_points(field: PrimeField, pts: &[[i64; 3]]) -> PointSet {
    let v: Vec<Vec<i64>> = pts.iter().map(|p| p.to_vec()).collect();
    PointSet::from_signed(field, 2, &v).unwrap()
}

// ---- independent oracles -------------------------------------------------

use rand::seq::SliceRandom;
use rand::Rng;

/// Exponent tuples of total degree `d` in `nvars` variables, lex-descending.
pub fn oracle_monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..nvars {
        all = all
            .into_iter()
            .flat_map(|prefix| {
                (0..=d).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .collect();
    }
    all.retain(|e| e.iter().sum::<u32>() == d);
    all.sort_by(|a, b| b.cmp(a));
    all
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Rank by column-by-column elimination with Fermat inverses.
pub fn oracle_rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for r in rank + 1..m.len() {
            if m[r][c] == 0 {
                continue;
            }
            let factor = (m[r][c] as u128 * inv as u128 % p as u128) as u64;
            for k in c..cols {
                let sub = (factor as u128 * m[rank][k] as u128 % p as u128) as u64;
                m[r][k] = (m[r][k] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

pub fn oracle_eval_rows(points: &[Vec<u64>], d: u32, p: u64) -> Vec<Vec<u64>> {
    let monos = oracle_monomials(points[0].len(), d);
    points
        .iter()
        .map(|pt| {
            monos
                .iter()
                .map(|e| {
                    pt.iter()
                        .zip(e)
                        .fold(1u64, |acc, (&x, &k)| (acc as u128 * pow_mod(x, k as u64, p) as u128 % p as u128) as u64)
                })
                .collect()
        })
        .collect()
}

pub fn oracle_h(points: &[Vec<u64>], j: u32, p: u64) -> usize {
    if points.is_empty() {
        return 0;
    }
    oracle_rank(&oracle_eval_rows(points, j, p), p)
}

/// Random distinct points of `P^n`, some of them forced onto a line or a
/// conic so Hilbert functions are not always generic.
pub fn structured_points(rng: &mut impl Rng, field: PrimeField, n: usize, len: usize) -> PointSet {
    let p = field.modulus();
    let mut out: Vec<Vec<u64>> = Vec::new();
    let push = |pt: Vec<u64>, out: &mut Vec<Vec<u64>>| {
        if pt.iter().any(|&c| c != 0) && !out.iter().any(|q| waring_core::points::projectively_equal(field, q, &pt)) {
            out.push(pt);
        }
    };
    let style = rng.gen_range(0..3);
    let special = if style == 0 { 0 } else { rng.gen_range(0..=len) };
    let mut guard = 0;
    while out.len() < special && guard < 10 * len + 100 {
        guard += 1;
        let t = rng.gen_range(0..p);
        let mut pt = vec![0u64; n + 1];
        if style == 1 || n < 2 {
            // the line x_2 = ... = x_n = 0
            pt[0] = 1;
            pt[1] = t;
        } else {
            // the conic x0 x2 = x1^2 inside the plane x_3 = ... = 0
            pt[0] = 1;
            pt[1] = t;
            pt[2] = t * t % p;
        }
        push(pt, &mut out);
    }
    guard = 0;
    while out.len() < len && guard < 100 * len + 100 {
        guard += 1;
        let pt: Vec<u64> = (0..=n).map(|_| rng.gen_range(0..p)).collect();
        push(pt, &mut out);
    }
    out.shuffle(rng);
    PointSet::new(field, n, out).unwrap()
}

pub fn random_generic_points(rng: &mut impl Rng, field: PrimeField, n: usize, len: usize) -> PointSet {
    let p = field.modulus();
    loop {
        let pts: Vec<Vec<u64>> = (0..len).map(|_| (0..=n).map(|_| rng.gen_range(1..p)).collect()).collect();
        if let Ok(set) = PointSet::new(field, n, pts) {
            return set;
        }
    }
}

/// The partial-sum inequality for CB(d): for 0 <= j <= d+1,
/// Dh(0) + .. + Dh(j) <= Dh(d+1-j) + .. + Dh(d+1).
pub fn cb_partial_sums_hold(dh: &[usize], d: usize) -> bool {
    let at = |i: usize| dh.get(i).copied().unwrap_or(0);
    (0..=d + 1).all(|j| (0..=j).map(at).sum::<usize>() <= (d + 1 - j..=d + 1).map(at).sum::<usize>())
}

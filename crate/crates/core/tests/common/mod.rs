//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use kanloop::lie::GroupElement;
use kanloop::{FreeSimplicialGroup, GenRef, GroupSpec, Letter, MonotoneMap, Word};
use num_complex::Complex64;
use rand::Rng;

/// Free reduction by repeated scanning, without a stack.
pub fn naive_reduce(mut letters: Vec<(String, i64)>) -> Vec<(String, i64)> {
    loop {
        let pos = letters
            .windows(2)
            .position(|w| w[0].0 == w[1].0 && w[0].1 == -w[1].1);
        match pos {
            Some(i) => {
                letters.drain(i..i + 2);
            }
            None => return letters,
        }
    }
}

pub fn word_as_pairs(w: &Word) -> Vec<(String, i64)> {
    w.letters()
        .iter()
        .map(|l| (l.gen.to_string(), l.exponent()))
        .collect()
}

pub fn random_word<R: Rng>(k: &FreeSimplicialGroup, q: usize, max_len: usize, rng: &mut R) -> Word {
    let gens = k.enumerate_generators(q);
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<Letter> = (0..len)
        .map(|_| {
            let g = gens[rng.gen_range(0..gens.len())].clone();
            if rng.gen_bool(0.5) {
                Letter::pos(g)
            } else {
                Letter::neg(g)
            }
        })
        .collect();
    Word::reduce(q, letters).unwrap()
}

pub fn random_monotone<R: Rng>(source: usize, target: usize, rng: &mut R) -> MonotoneMap {
    let mut values: Vec<usize> = (0..=source).map(|_| rng.gen_range(0..=target)).collect();
    values.sort_unstable();
    MonotoneMap::new(target, values).unwrap()
}

pub fn generator(cell: &kanloop::Cell, ops: &[usize]) -> Word {
    Word::generator(GenRef::with_degeneracies(cell.clone(), ops).unwrap())
}

/// Exact integer determinant by Laplace expansion along the first row.
pub fn laplace_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    (0..n)
        .map(|c| {
            if m[0][c] == 0 {
                return 0;
            }
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] as i128 * laplace_det(&minor)
        })
        .sum()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors by determinantal divisors `d_k = gcd of k×k minors`.
pub fn invariant_factors_by_minors(m: &[Vec<i64>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                d = gcd(d, laplace_det(&minor));
            }
        }
        if d == 0 {
            break;
        }
        out.push(d / prev);
        prev = d;
    }
    out
}

/// Homology `(betti, torsion)` of a chain complex given by its boundary
/// matrices `boundary[n]: C_n -> C_{n-1}` (rows by `C_{n-1}`) and ranks `dims[n]`.
pub fn chain_homology(dims: &[usize], boundary: &[Vec<Vec<i64>>]) -> Vec<(usize, Vec<i128>)> {
    let rank = |n: usize| -> usize {
        if n == 0 || n >= dims.len() {
            return 0;
        }
        invariant_factors_by_minors(&boundary[n], dims[n]).len()
    };
    (0..dims.len())
        .map(|n| {
            let incoming = if n + 1 < dims.len() {
                invariant_factors_by_minors(&boundary[n + 1], dims[n + 1])
            } else {
                Vec::new()
            };
            let betti = dims[n] - rank(n) - incoming.len();
            (betti, incoming.into_iter().filter(|&t| t > 1).collect())
        })
        .collect()
}

/// Plain 2×2 complex matrix product.
pub fn matmul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

/// A U(1) loop of winding `n` with a random smooth wiggle that vanishes at
/// both ends.
pub fn u1_winding_loop<R: Rng>(n: i64, m: usize, amplitude: f64, rng: &mut R) -> Vec<GroupElement> {
    let modes: Vec<f64> = (0..4).map(|_| rng.gen_range(-amplitude..=amplitude)).collect();
    (0..=m)
        .map(|k| {
            let t = k as f64 / m as f64;
            let wiggle: f64 = modes
                .iter()
                .enumerate()
                .map(|(j, a)| a * ((j + 1) as f64 * PI * t).sin())
                .sum();
            GroupElement::u1(2.0 * PI * n as f64 * t + wiggle)
        })
        .collect()
}

/// `geodesic(e -> g) · exp(sin(πt) X)` with a random algebra vector `X`.
pub fn wiggly_path<R: Rng>(spec: &GroupSpec, g: &GroupElement, m: usize, amplitude: f64, rng: &mut R) -> Vec<GroupElement> {
    let x = spec.random_algebra(rng, amplitude);
    let geo = spec.geodesic_path(g, m);
    geo.iter()
        .enumerate()
        .map(|(k, p)| {
            let s = (PI * k as f64 / m as f64).sin();
            if k == 0 || k == m {
                *p
            } else {
                p.mul(&spec.exp([s * x[0], s * x[1], s * x[2]]))
            }
        })
        .collect()
}

/// A random loop `Δ_1 -> G^rank` with `φ(0) = φ(1) = e`.
pub fn random_loop<R: Rng>(spec: &GroupSpec, rank: usize, m: usize, rng: &mut R) -> Vec<Vec<GroupElement>> {
    let data: Vec<Vec<[f64; 3]>> = (0..rank)
        .map(|_| (0..3).map(|_| spec.random_algebra(rng, 1.0)).collect())
        .collect();
    (0..=m)
        .map(|k| {
            if k == 0 || k == m {
                return vec![GroupElement::identity(); rank];
            }
            let t = k as f64 / m as f64;
            data.iter()
                .map(|modes| {
                    modes.iter().enumerate().fold(GroupElement::identity(), |acc, (j, v)| {
                        let s = ((j + 1) as f64 * PI * t).sin();
                        acc.mul(&spec.exp([s * v[0], s * v[1], s * v[2]]))
                    })
                })
                .collect()
        })
        .collect()
}

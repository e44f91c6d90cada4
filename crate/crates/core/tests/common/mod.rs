#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use treerep::arith::LaurentSeries;
use treerep::bttree::{act, LMatrix, Vertex};
use treerep::matrix::Matrix2;
use treerep::treeharm::{GainEdge, GainGraph, TreeAssignment};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact Laurent polynomial with exponents in `lo..=hi`.
pub fn laurent_poly(rng: &mut ChaCha8Rng, p: u32, lo: i64, hi: i64) -> LaurentSeries {
    let terms: Vec<(i64, i64)> = (lo..=hi).map(|e| (e, rng.gen_range(0..p as i64))).collect();
    LaurentSeries::from_terms(p, &terms, None).unwrap()
}

pub fn upper(x: LaurentSeries) -> LMatrix {
    let p = x.modulus();
    Matrix2::new(LaurentSeries::one(p), x, LaurentSeries::zero(p), LaurentSeries::one(p))
}

pub fn lower(x: LaurentSeries) -> LMatrix {
    let p = x.modulus();
    Matrix2::new(LaurentSeries::one(p), LaurentSeries::zero(p), x, LaurentSeries::one(p))
}

pub fn diag(p: u32, c: i64, k: i64) -> LMatrix {
    let inv = (1..p as i64).find(|d| (c * d).rem_euclid(p as i64) == 1).unwrap();
    Matrix2::new(LaurentSeries::monomial(p, c, k), LaurentSeries::zero(p), LaurentSeries::zero(p), LaurentSeries::monomial(p, inv, -k))
}

/// Exact SL(2) element built from a few elementary factors with small exponents.
pub fn sl2(rng: &mut ChaCha8Rng, p: u32, factors: usize, spread: i64) -> LMatrix {
    let mut m = diag(p, 1, 0);
    for _ in 0..factors {
        let f = match rng.gen_range(0..3) {
            0 => upper(laurent_poly(rng, p, -spread, spread)),
            1 => lower(laurent_poly(rng, p, -spread, spread)),
            _ => diag(p, rng.gen_range(1..p as i64), rng.gen_range(-spread..=spread)),
        };
        m = m.mul(&f);
    }
    m
}

/// An element of SL(2, F_p[[t]]) fixing the standard vertex.
pub fn integral_sl2(rng: &mut ChaCha8Rng, p: u32, factors: usize) -> LMatrix {
    let mut m = diag(p, 1, 0);
    for _ in 0..factors {
        let f = match rng.gen_range(0..3) {
            0 => upper(laurent_poly(rng, p, 0, 2)),
            1 => lower(laurent_poly(rng, p, 0, 2)),
            _ => diag(p, rng.gen_range(1..p as i64), 0),
        };
        m = m.mul(&f);
    }
    m
}

pub fn with_prec(m: &LMatrix, prec: i64) -> LMatrix {
    m.map(|x| x.with_prec(prec))
}

/// A connected gain graph whose gains are conjugates of integral matrices, so
/// that it admits a zero-energy assignment; returns that assignment too.
pub fn bounded_graph(seed: u64, p: u32, n: usize, extra: usize) -> (GainGraph, TreeAssignment) {
    let mut r = rng(seed);
    let conj: Vec<_> = (0..n).map(|_| sl2(&mut r, p, 3, 2)).collect();
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (r.gen_range(0..v), v)).collect();
    for _ in 0..extra {
        pairs.push((r.gen_range(0..n), r.gen_range(0..n)));
    }
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(k, (u, v))| {
            let gain = conj[u].mul(&integral_sl2(&mut r, p, 3)).mul(&conj[v].inverse());
            GainEdge { from: u, to: v, gain, label: format!("e{k}") }
        })
        .collect();
    let g = GainGraph::new((0..n).map(|i| format!("x{i}")).collect(), edges).unwrap();
    let base = Vertex::base(p);
    let flat = TreeAssignment::new(&g, conj.iter().map(|h| act(h, &base).unwrap()).collect()).unwrap();
    (g, flat)
}

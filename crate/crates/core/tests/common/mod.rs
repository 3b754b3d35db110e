//! Brute-force oracles and helpers shared by the integration tests. Nothing
//! here calls into the library's linear algebra or factorization code.

#![allow(dead_code)]

use std::path::PathBuf;

use wedderburn::algebra::AlgebraPresentation;
use wedderburn::document::parse_cayley;
use wedderburn::generators::CayleyTable;
use wedderburn::idempotents::DEFAULT_SPLIT_CAP;
use wedderburn::semisimple::require_semisimple;
use wedderburn::wedderburn::{full_isomorphism, DecompositionResult};
use wedderburn::Result;

pub fn decompose(alg: &AlgebraPresentation, seed: u64) -> Result<DecompositionResult> {
    let s = require_semisimple(alg.clone())?;
    full_isomorphism(&s, seed, DEFAULT_SPLIT_CAP)
}

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn cayley_fixture(name: &str) -> CayleyTable {
    let path = fixture_dir().join(format!("{name}.cayley"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_cayley(&text).unwrap()
}

pub const GROUPS: [&str; 6] = ["c2", "c3", "c4", "s3", "d4", "q8"];

/// Product in `alg` computed straight from the structure constants.
pub fn mul(alg: &AlgebraPresentation, x: &[u64], y: &[u64]) -> Vec<u64> {
    let n = alg.dim();
    let p = alg.modulus();
    let mut out = vec![0u64; n];
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] == 0 {
                continue;
            }
            let c = x[i] * y[j] % p;
            for (k, o) in out.iter_mut().enumerate() {
                *o = (*o + c * alg.sc(i, j, k)) % p;
            }
        }
    }
    out
}

pub fn add(p: u64, x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).map(|(a, b)| (a + b) % p).collect()
}

pub fn unit(n: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Polynomials over F_p as coefficient vectors, constant term first.
fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Quotient of `f` by monic `g` when the division is exact.
fn divide_exact(f: &[u64], g: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return None;
    }
    let mut q = vec![0; r.len() - dg];
    for s in (0..q.len()).rev() {
        let c = r[s + dg];
        q[s] = c;
        for (t, &gt) in g.iter().enumerate() {
            r[s + t] = (r[s + t] + (p - c) * gt % p) % p;
        }
    }
    trim(r).is_empty().then_some(q)
}

/// Distinct irreducible factors and multiplicities of monic `f`, by trial
/// division against every monic polynomial in increasing degree.
pub fn brute_factor(f: &[u64], p: u64) -> Vec<(Vec<u64>, usize)> {
    let mut rest = trim(f.to_vec());
    let mut out = Vec::new();
    let mut d = 1;
    while rest.len() > 1 {
        if d > rest.len() - 1 {
            out.push((rest.clone(), 1));
            break;
        }
        for code in 0..p.pow(d as u32) {
            let mut g = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            let mut mult = 0;
            while let Some(q) = divide_exact(&rest, &g, p) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((g, mult));
            }
        }
        d += 1;
    }
    out
}

/// Blocks of `F_p[C_m]` for `p` not dividing `m`: one `(1, deg q)` per
/// irreducible factor `q` of `T^m - 1`.
pub fn cyclic_blocks(m: usize, p: u64) -> Vec<(usize, usize)> {
    let mut f = vec![0; m + 1];
    f[0] = p - 1;
    f[m] = 1;
    let mut blocks: Vec<_> = brute_factor(&f, p).into_iter().map(|(q, _)| (1, q.len() - 1)).collect();
    blocks.sort();
    blocks
}

fn gaussian_binomial(n: usize, k: usize, q: u128) -> u128 {
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Number of idempotents of `M_n(F_q)`: a rank-`k` idempotent is a choice
/// of image and complementary kernel.
pub fn matrix_idempotent_count(n: usize, q: u128) -> u128 {
    (0..=n)
        .map(|k| gaussian_binomial(n, k, q) * q.pow((k * (n - k)) as u32))
        .sum()
}

/// (idempotents, central idempotents) predicted by a block multiset.
pub fn predicted_idempotent_counts(blocks: &[(usize, usize)], p: u64) -> (u128, u128) {
    let total = blocks
        .iter()
        .map(|&(n, d)| matrix_idempotent_count(n, (p as u128).pow(d as u32)))
        .product();
    (total, 1u128 << blocks.len())
}

/// (idempotents, central idempotents) found by enumerating every element.
pub fn enumerate_idempotents(alg: &AlgebraPresentation) -> (u128, u128) {
    let n = alg.dim();
    let p = alg.modulus();
    let mut x = vec![0u64; n];
    let (mut all, mut central) = (0u128, 0u128);
    loop {
        if mul(alg, &x, &x) == x {
            all += 1;
            if (0..n).all(|j| {
                let b = unit(n, j);
                mul(alg, &x, &b) == mul(alg, &b, &x)
            }) {
                central += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return (all, central);
            }
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Whether `x^k = 0` for some `k <= dim`.
pub fn is_nilpotent(alg: &AlgebraPresentation, x: &[u64]) -> bool {
    let mut power = x.to_vec();
    for _ in 0..alg.dim() {
        if power.iter().all(|&c| c == 0) {
            return true;
        }
        power = mul(alg, &power, x);
    }
    power.iter().all(|&c| c == 0)
}

/// Image of the basis element `b_j` under the computed isomorphism.
pub fn image(result: &DecompositionResult, j: usize) -> Vec<u64> {
    result.iso.column(j)
}

pub fn apply(result: &DecompositionResult, x: &[u64]) -> Vec<u64> {
    let p = result.iso.field().modulus();
    let n = x.len();
    let mut out = vec![0u64; result.iso.rows()];
    for j in 0..n {
        if x[j] == 0 {
            continue;
        }
        for (r, o) in out.iter_mut().enumerate() {
            *o = (*o + x[j] * result.iso.get(r, j)) % p;
        }
    }
    out
}

/// Product in the target ring, computed entrywise from the layout and the
/// division algebras' structure constants.
pub fn target_mul(result: &DecompositionResult, x: &[u64], y: &[u64]) -> Vec<u64> {
    let p = result.iso.field().modulus();
    let layout = result.layout();
    let blocks = result.target.blocks();
    let index: std::collections::HashMap<_, _> = layout
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.block, e.row, e.col, e.index), i))
        .collect();
    let pos = |b: usize, r: usize, c: usize, t: usize| index[&(b, r, c, t)];
    let mut out = vec![0u64; x.len()];
    for (bi, block) in blocks.iter().enumerate() {
        let d = block.division.dim();
        let n = block.n;
        for r in 0..n {
            for c in 0..n {
                for k in 0..n {
                    for s in 0..d {
                        let xs = x[pos(bi, r, k, s)];
                        if xs == 0 {
                            continue;
                        }
                        for t in 0..d {
                            let yt = y[pos(bi, k, c, t)];
                            if yt == 0 {
                                continue;
                            }
                            for u in 0..d {
                                let o = pos(bi, r, c, u);
                                out[o] = (out[o] + xs * yt % p * block.division.sc(s, t, u)) % p;
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

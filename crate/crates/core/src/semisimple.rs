//! Semisimplicity certificate via the trace form.
//!
//! The Gram matrix of `k(x, y) = tr(L_{xy})` always contains the Jacobson
//! radical in its kernel, so a nondegenerate form certifies semisimplicity.
//! For `p > dim A` the kernel is exactly the radical. For `p <= dim A` the
//! kernel is cut down with the higher trace functions
//! `g_i(x) = tr(L^^_x^{p^i}) / p^i mod p` computed on integer lifts, and the
//! result is checked to be a nilpotent two-sided ideal.

use crate::algebra::{AlgebraElement, AlgebraPresentation};
use crate::error::{Error, Result};
use crate::exactfield::{Matrix, SpanBasis};

#[derive(Clone, Debug)]
pub struct RadicalReport {
    pub gram: Matrix,
    pub radical_basis: Vec<AlgebraElement>,
    pub semisimple: bool,
}

/// An algebra whose radical has been computed and found to be zero.
#[derive(Clone, Debug)]
pub struct SemisimpleAlgebra {
    alg: AlgebraPresentation,
}

impl SemisimpleAlgebra {
    pub fn presentation(&self) -> &AlgebraPresentation {
        &self.alg
    }

    pub fn into_presentation(self) -> AlgebraPresentation {
        self.alg
    }
}

impl std::ops::Deref for SemisimpleAlgebra {
    type Target = AlgebraPresentation;

    fn deref(&self) -> &AlgebraPresentation {
        &self.alg
    }
}

pub fn trace_form(alg: &AlgebraPresentation) -> Matrix {
    let n = alg.dim();
    let f = alg.field();
    let traces: Vec<u64> = (0..n)
        .map(|l| (0..n).fold(0, |acc, k| f.add(acc, alg.sc(l, k, k))))
        .collect();
    let mut gram = Matrix::zeros(f, n, n);
    for i in 0..n {
        for j in 0..n {
            gram.set(i, j, f.dot(alg.basis_product(i, j), &traces));
        }
    }
    gram
}

pub fn radical_report(alg: &AlgebraPresentation) -> Result<RadicalReport> {
    let n = alg.dim();
    let p = alg.modulus();
    let gram = trace_form(alg);
    let mut radical = gram.kernel_basis();
    if !radical.is_empty() && p <= n as u64 {
        let unsupported = Error::UnsupportedCharacteristic { p, dim: n };
        radical = refine_radical(alg, radical).ok_or(unsupported.clone())?;
        if !is_nilpotent_ideal(alg, &radical) {
            return Err(unsupported);
        }
    }
    let radical_basis: Vec<AlgebraElement> = radical
        .into_iter()
        .map(|v| alg.element(v).expect("kernel vector has length n"))
        .collect();
    let semisimple = radical_basis.is_empty();
    Ok(RadicalReport {
        gram,
        radical_basis,
        semisimple,
    })
}

fn refine_radical(alg: &AlgebraPresentation, mut ideal: Vec<Vec<u64>>) -> Option<Vec<Vec<u64>>> {
    let n = alg.dim();
    let p = alg.modulus();
    let f = alg.field();
    let mut q = p;
    while q <= n as u64 && !ideal.is_empty() {
        let span = SpanBasis::from_spanning(f, n, &ideal);
        let r = span.dim();
        let mut g = Matrix::zeros(f, n, r);
        for (k, v) in span.vectors().iter().enumerate() {
            for j in 0..n {
                let x = alg.mul_coords(v, alg.basis_element(j).coords());
                g.set(j, k, higher_trace(alg, &x, q)?);
            }
        }
        ideal = g.kernel_basis().iter().map(|c| span.combine(c)).collect();
        q *= p;
    }
    Some(ideal)
}

/// `tr(L^q) / q mod p` for an integer lift `L` of the left action of `x`,
/// or `None` if the trace is not divisible by `q`.
fn higher_trace(alg: &AlgebraPresentation, x: &[u64], q: u64) -> Option<u64> {
    let n = alg.dim();
    let p = alg.modulus();
    let m = (q * p) as u128;
    let lift = alg.left_regular_coords(x);
    let base: Vec<u128> = lift.as_slice().iter().map(|&v| v as u128).collect();
    let mul = |a: &[u128], b: &[u128]| -> Vec<u128> {
        let mut out = vec![0u128; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + aik * b[k * n + j]) % m;
                }
            }
        }
        out
    };
    let mut acc: Vec<u128> = (0..n * n).map(|i| u128::from(i % (n + 1) == 0)).collect();
    let mut sq = base;
    let mut e = q;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &sq);
        }
        e >>= 1;
        if e > 0 {
            sq = mul(&sq, &sq);
        }
    }
    let trace = (0..n).fold(0u128, |t, i| (t + acc[i * n + i]) % m) as u64;
    (trace % q == 0).then(|| (trace / q) % p)
}

/// Whether the span of `vectors` is a two-sided ideal with `I^k = 0` for
/// some `k <= dim A`.
pub fn is_nilpotent_ideal(alg: &AlgebraPresentation, vectors: &[Vec<u64>]) -> bool {
    let n = alg.dim();
    let f = alg.field();
    let ideal = SpanBasis::from_spanning(f, n, vectors);
    for v in ideal.vectors() {
        for j in 0..n {
            let b = alg.basis_element(j);
            if !ideal.contains(&alg.mul_coords(v, b.coords())) || !ideal.contains(&alg.mul_coords(b.coords(), v)) {
                return false;
            }
        }
    }
    let mut power = ideal.clone();
    for _ in 0..=n {
        if power.dim() == 0 {
            return true;
        }
        let products: Vec<Vec<u64>> = power
            .vectors()
            .iter()
            .flat_map(|u| ideal.vectors().iter().map(move |v| (u, v)))
            .map(|(u, v)| alg.mul_coords(u, v))
            .collect();
        power = SpanBasis::from_spanning(f, n, &products);
    }
    false
}

pub fn require_semisimple(alg: AlgebraPresentation) -> Result<SemisimpleAlgebra> {
    let report = radical_report(&alg)?;
    if !report.semisimple {
        return Err(Error::NotSemisimple {
            radical: report
                .radical_basis
                .into_iter()
                .map(AlgebraElement::into_coords)
                .collect(),
        });
    }
    Ok(SemisimpleAlgebra { alg })
}

/// Whether left multiplication by `v`, restricted to the span of
/// `radical`, is nilpotent. `radical` must be a left ideal containing `v`.
pub fn acts_nilpotently_on(alg: &AlgebraPresentation, v: &[u64], radical: &[Vec<u64>]) -> bool {
    let span = SpanBasis::from_spanning(alg.field(), alg.dim(), radical);
    let d = span.dim();
    let mut columns = Vec::with_capacity(d);
    for r in span.vectors() {
        match span.coords(&alg.mul_coords(v, r)) {
            Some(c) => columns.push(c),
            None => return false,
        }
    }
    let m = Matrix::from_columns(alg.field(), d, &columns);
    let mut power = Matrix::identity(alg.field(), d);
    for _ in 0..d {
        power = power.mul(&m).expect("square");
    }
    power.is_zero()
}

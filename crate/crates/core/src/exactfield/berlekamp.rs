//! Berlekamp factorization over `F_p`.
//!
//! The fixed space of the Frobenius map `a -> a^p` on `F_p[T]/(f)` has one
//! dimension per distinct irreducible factor of `f`, squarefree or not, and
//! every fixed element is constant modulo each primary component `q^e`.
//! Random fixed elements therefore separate the primary components; each
//! component is then reduced to its irreducible radical `q`, and
//! multiplicities are recovered by repeated division.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactfield::matrix::Matrix;
use crate::exactfield::poly::Poly;

const DEFAULT_SEED: u64 = 0x5eed_0f_be71e_ca4;

/// Matrix of the Frobenius map on `F_p[T]/(g)`; column `i` holds the
/// coefficients of `T^(i p) mod g`.
pub fn frobenius_matrix(g: &Poly) -> Result<Matrix> {
    let field = g.field();
    let d = g
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::InvalidInput("Frobenius matrix needs degree >= 1".into()))?;
    let xp = Poly::x(field).pow_mod(field.modulus(), g)?;
    let mut columns = Vec::with_capacity(d);
    let mut current = Poly::one(field);
    for _ in 0..d {
        let mut col = current.coeffs().to_vec();
        col.resize(d, 0);
        columns.push(col);
        current = current.mul(&xp).rem(g)?;
    }
    Ok(Matrix::from_columns(field, d, &columns))
}

/// Basis of `{a : a^p = a}` in `F_p[T]/(g)`, as coefficient vectors.
pub fn fixed_space(g: &Poly) -> Result<Vec<Vec<u64>>> {
    let q = frobenius_matrix(g)?;
    let d = q.rows();
    let shifted = q.sub(&Matrix::identity(g.field(), d))?;
    Ok(shifted.kernel_basis())
}

/// True when `g` has degree at least one, is squarefree and its Frobenius
/// fixed space is one-dimensional.
pub fn is_irreducible(g: &Poly) -> bool {
    match g.degree() {
        None | Some(0) => false,
        Some(1) => true,
        Some(_) => {
            g.gcd(&g.derivative()).is_one()
                && fixed_space(g).map(|b| b.len() == 1).unwrap_or(false)
        }
    }
}

/// Irreducible monic factors of `f` with multiplicities, sorted by degree
/// and then coefficients.
pub fn berlekamp_factor(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    factor_with_seed(f, DEFAULT_SEED)
}

pub fn factor_with_seed(f: &Poly, seed: u64) -> Result<Vec<(Poly, usize)>> {
    if f.degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidInput("factorization needs degree >= 1".into()));
    }
    let monic = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut radicals: Vec<Poly> = primary_components(&monic, &mut rng)?
        .iter()
        .map(radical_of_primary)
        .collect::<Result<_>>()?;
    radicals.sort_by(|a, b| (a.degree(), a.coeffs()).cmp(&(b.degree(), b.coeffs())));

    let mut out = Vec::with_capacity(radicals.len());
    let mut rest = monic.clone();
    for q in radicals {
        if !is_irreducible(&q) {
            return Err(Error::InvalidInput(format!("factor {q} failed irreducibility check")));
        }
        let mut mult = 0;
        while let Some(next) = rest.div_exact(&q) {
            rest = next;
            mult += 1;
        }
        debug_assert!(mult > 0);
        out.push((q, mult));
    }
    debug_assert!(rest.is_one());
    Ok(out)
}

/// Splits monic `g` into its coprime primary components `q_i^{e_i}`.
fn primary_components(g: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let field = g.field();
    if g.degree() == Some(1) {
        return Ok(vec![g.clone()]);
    }
    let basis = fixed_space(g)?;
    let target = basis.len();
    let mut pieces = vec![g.clone()];
    let exponent = (field.modulus() - 1) / 2;
    while pieces.len() < target {
        let mut w = vec![0; g.degree().unwrap_or(0)];
        for b in &basis {
            let c = rng.gen_range(0..field.modulus());
            field.axpy(&mut w, c, b);
        }
        let w = Poly::new(field, w);
        let mut next = Vec::with_capacity(pieces.len() + 1);
        for h in pieces {
            if h.degree() == Some(1) {
                next.push(h);
                continue;
            }
            let probe = w.pow_mod(exponent, &h)?.sub(&Poly::one(field));
            let d = h.gcd(&probe);
            match d.degree() {
                Some(k) if k >= 1 && Some(k) < h.degree() => {
                    let other = h.div_exact(&d).expect("gcd divides");
                    next.push(d);
                    next.push(other);
                }
                _ => next.push(h),
            }
        }
        pieces = next;
    }
    Ok(pieces)
}

/// For `h = q^e` with `q` irreducible, returns `q`.
fn radical_of_primary(h: &Poly) -> Result<Poly> {
    let field = h.field();
    let p = field.modulus() as usize;
    let mut h = h.monic();
    loop {
        let dh = h.derivative();
        if dh.is_zero() {
            // h(T) = u(T^p) = u(T)^p
            let root: Vec<u64> = h.coeffs().iter().step_by(p).copied().collect();
            h = Poly::new(field, root);
            continue;
        }
        let g = h.gcd(&dh);
        return h
            .div_exact(&g)
            .map(|q| q.monic())
            .ok_or_else(|| Error::InvalidInput("gcd does not divide".into()));
    }
}

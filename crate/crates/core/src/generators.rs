//! Test-corpus constructors with known block structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::exactfield::matrix::mul_into;
use crate::exactfield::{berlekamp_factor, Matrix, Poly, PrimeField};

const MAX_SCRAMBLE_DRAWS: usize = 64;

/// Multiplication table of a finite group: `table[g][h]` is the index of `gh`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyTable {
    pub order: usize,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
}

impl CayleyTable {
    pub fn validate(&self) -> Result<()> {
        let m = self.order;
        let bad = |msg: String| Err(Error::InvalidCayley(msg));
        if m == 0 {
            return bad("order must be positive".into());
        }
        if self.table.len() != m || self.table.iter().any(|r| r.len() != m) {
            return bad(format!("table must be {m}x{m}"));
        }
        if self.identity >= m {
            return bad("identity index out of range".into());
        }
        for g in 0..m {
            let mut row_seen = vec![false; m];
            let mut col_seen = vec![false; m];
            for h in 0..m {
                let (r, c) = (self.table[g][h], self.table[h][g]);
                if r >= m || c >= m || row_seen[r] || col_seen[c] {
                    return bad(format!("row or column {g} is not a permutation"));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
            if self.table[self.identity][g] != g || self.table[g][self.identity] != g {
                return bad(format!("identity does not fix element {g}"));
            }
        }
        for g in 0..m {
            for h in 0..m {
                for k in 0..m {
                    let t = &self.table;
                    if t[t[g][h]][k] != t[g][t[h][k]] {
                        return bad(format!("not associative at ({g}, {h}, {k})"));
                    }
                }
            }
        }
        Ok(())
    }

    fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        CayleyTable {
            order,
            identity: 0,
            table: (0..order).map(|g| (0..order).map(|h| mul(g, h)).collect()).collect(),
        }
    }

    pub fn cyclic(m: usize) -> Self {
        Self::from_fn(m, |g, h| (g + h) % m)
    }

    /// S3 as permutations of {0,1,2} in lexicographic order, `gh = g . h`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        Self::from_fn(6, |g, h| {
            let (pg, ph) = (perms[g], perms[h]);
            let composed = [pg[ph[0]], pg[ph[1]], pg[ph[2]]];
            perms.iter().position(|p| *p == composed).expect("closed")
        })
    }

    /// D4 of order 8; index `2k + j` stands for `r^k s^j`.
    pub fn dihedral4() -> Self {
        Self::from_fn(8, |g, h| {
            let (a, b) = (g / 2, g % 2);
            let (c, d) = (h / 2, h % 2);
            let rot = if b == 0 { (a + c) % 4 } else { (a + 4 - c) % 4 };
            2 * rot + (b + d) % 2
        })
    }

    /// Q8; index `2u + s` stands for `(-1)^s * unit[u]` with units 1, i, j, k.
    pub fn quaternion8() -> Self {
        // unit products as (unit, sign flip)
        const UNITS: [[(usize, usize); 4]; 4] = [
            [(0, 0), (1, 0), (2, 0), (3, 0)],
            [(1, 0), (0, 1), (3, 0), (2, 1)],
            [(2, 0), (3, 1), (0, 1), (1, 0)],
            [(3, 0), (2, 0), (1, 1), (0, 1)],
        ];
        Self::from_fn(8, |g, h| {
            let (u, s) = (g / 2, g % 2);
            let (v, t) = (h / 2, h % 2);
            let (w, flip) = UNITS[u][v];
            2 * w + (s + t + flip) % 2
        })
    }

    /// Built-in tables: `C2`, `C3`, `C4`, `S3`, `D4`, `Q8`.
    pub fn named(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "C2" => Some(Self::cyclic(2)),
            "C3" => Some(Self::cyclic(3)),
            "C4" => Some(Self::cyclic(4)),
            "S3" => Some(Self::symmetric3()),
            "D4" => Some(Self::dihedral4()),
            "Q8" => Some(Self::quaternion8()),
            _ => None,
        }
    }
}

/// An algebra built with a known block multiset `[(n_i, d_i)]`.
#[derive(Clone, Debug)]
pub struct PlantedDecomposition {
    pub spec: Vec<(usize, usize)>,
    pub presentation: AlgebraPresentation,
    pub scramble_matrix: Option<Matrix>,
}

impl PlantedDecomposition {
    pub fn sorted_spec(&self) -> Vec<(usize, usize)> {
        let mut s = self.spec.clone();
        s.sort();
        s
    }
}

pub fn group_algebra(table: &CayleyTable, p: u64) -> Result<AlgebraPresentation> {
    table.validate()?;
    let field = PrimeField::new(p)?;
    let m = table.order;
    let mut sc = vec![0; m * m * m];
    for g in 0..m {
        for h in 0..m {
            sc[(g * m + h) * m + table.table[g][h]] = 1;
        }
    }
    let mut one = vec![0; m];
    one[table.identity] = 1;
    AlgebraPresentation::new(field, m, sc, Some(one))
}

/// `M_n(F_p[T]/(f))` with basis `E_ab T^t` at index `(a n + b) d + t`.
pub fn matrix_algebra_over_extension(n: usize, p: u64, defining_poly: &Poly) -> Result<PlantedDecomposition> {
    let field = PrimeField::new(p)?;
    if defining_poly.field() != field {
        return Err(Error::ModulusMismatch);
    }
    let d = defining_poly
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::InvalidInput("defining polynomial must have degree >= 1".into()))?;
    if n == 0 {
        return Err(Error::InvalidInput("matrix size must be positive".into()));
    }
    let factors = berlekamp_factor(defining_poly)?;
    if factors.len() != 1 || factors[0].1 != 1 {
        return Err(Error::ReduciblePolynomial(p));
    }
    let modulus = defining_poly.monic();
    // T^k mod f for k < 2d - 1
    let powers: Vec<Vec<u64>> = (0..2 * d - 1)
        .map(|k| {
            let mut c = Poly::x(field).pow_mod(k as u64, &modulus).expect("nonzero modulus").coeffs().to_vec();
            c.resize(d, 0);
            c
        })
        .collect();
    let dim = n * n * d;
    let idx = |a: usize, b: usize, t: usize| (a * n + b) * d + t;
    let mut sc = vec![0; dim * dim * dim];
    for a in 0..n {
        for b in 0..n {
            for s in 0..d {
                for dd in 0..n {
                    for t in 0..d {
                        let i = idx(a, b, s);
                        let j = idx(b, dd, t);
                        for (u, &c) in powers[s + t].iter().enumerate() {
                            sc[(i * dim + j) * dim + idx(a, dd, u)] = c;
                        }
                    }
                }
            }
        }
    }
    let mut one = vec![0; dim];
    for a in 0..n {
        one[idx(a, a, 0)] = 1;
    }
    Ok(PlantedDecomposition {
        spec: vec![(n, d)],
        presentation: AlgebraPresentation::new(field, dim, sc, Some(one))?,
        scramble_matrix: None,
    })
}

/// First monic irreducible polynomial of degree `d` in lexicographic order
/// of its lower coefficients.
pub fn first_irreducible(p: u64, d: usize) -> Result<Poly> {
    let field = PrimeField::new(p)?;
    if d == 1 {
        return Ok(Poly::x(field));
    }
    let total = (p as u128).pow(d as u32);
    for code in 0..total {
        let mut c = Vec::with_capacity(d + 1);
        let mut rest = code;
        for _ in 0..d {
            c.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        c.push(1);
        let f = Poly::new(field, c);
        let factors = berlekamp_factor(&f)?;
        if factors.len() == 1 && factors[0].1 == 1 {
            return Ok(f);
        }
    }
    Err(Error::InvalidInput(format!("no irreducible polynomial of degree {d}")))
}

pub fn direct_sum(parts: &[AlgebraPresentation]) -> Result<AlgebraPresentation> {
    let first = parts
        .first()
        .ok_or_else(|| Error::InvalidInput("direct sum of no algebras".into()))?;
    let field = first.field();
    if parts.iter().any(|a| a.field() != field) {
        return Err(Error::ModulusMismatch);
    }
    let dim: usize = parts.iter().map(AlgebraPresentation::dim).sum();
    let mut sc = vec![0; dim * dim * dim];
    let mut one = Vec::with_capacity(dim);
    let mut offset = 0;
    for a in parts {
        let m = a.dim();
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    sc[((offset + i) * dim + offset + j) * dim + offset + k] = a.sc(i, j, k);
                }
            }
        }
        one.extend_from_slice(a.one_coords());
        offset += m;
    }
    AlgebraPresentation::new(field, dim, sc, Some(one))
}

pub fn direct_sum_planted(parts: &[PlantedDecomposition]) -> Result<PlantedDecomposition> {
    let presentations: Vec<AlgebraPresentation> = parts.iter().map(|p| p.presentation.clone()).collect();
    let mut spec: Vec<(usize, usize)> = parts.iter().flat_map(|p| p.spec.iter().copied()).collect();
    spec.sort();
    Ok(PlantedDecomposition {
        spec,
        presentation: direct_sum(&presentations)?,
        scramble_matrix: None,
    })
}

/// Direct sum of `M_n(F_{p^d})` over the requested `(n, d)` pairs.
pub fn planted(spec: &[(usize, usize)], p: u64) -> Result<PlantedDecomposition> {
    let parts = spec
        .iter()
        .map(|&(n, d)| matrix_algebra_over_extension(n, p, &first_irreducible(p, d)?))
        .collect::<Result<Vec<_>>>()?;
    direct_sum_planted(&parts)
}

/// Rewrites `alg` in the basis `b'_j = sum_i s[i][j] b_i`.
pub fn change_basis(alg: &AlgebraPresentation, s: &Matrix) -> Result<AlgebraPresentation> {
    let n = alg.dim();
    let field = alg.field();
    if s.rows() != n || s.cols() != n || s.field() != field {
        return Err(Error::ShapeMismatch("change of basis must be n x n over the same field".into()));
    }
    let s_inv = s.inverse().ok_or_else(|| Error::InvalidInput("change of basis is singular".into()))?;
    let st = s.transpose();
    // t1[a][(j, k)] = sum_i s[i][a] c[i][j][k]
    let mut t1 = vec![0; n * n * n];
    mul_into(field, st.as_slice(), n, n, alg.flat_structure_constants(), n * n, &mut t1);
    // t2[a][b][k] = sum_j s[j][b] t1[a][j][k]
    let mut t2 = vec![0; n * n * n];
    for a in 0..n {
        mul_into(field, st.as_slice(), n, n, &t1[a * n * n..(a + 1) * n * n], n, &mut t2[a * n * n..(a + 1) * n * n]);
    }
    // new[a][b][.] = s_inv * t2[a][b][.]
    let mut sc = vec![0; n * n * n];
    let s_inv_t = s_inv.transpose();
    mul_into(field, &t2, n * n, n, s_inv_t.as_slice(), n, &mut sc);
    let one = s_inv.mul_vec(alg.one_coords())?;
    AlgebraPresentation::new(field, n, sc, Some(one))
}

/// Random invertible change of basis. Returns the new presentation and the
/// matrix `S` whose column `j` holds the old coordinates of `b'_j`.
pub fn scramble(alg: &AlgebraPresentation, seed: u64) -> Result<(AlgebraPresentation, Matrix)> {
    let n = alg.dim();
    let field = alg.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SCRAMBLE_DRAWS {
        let data: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..field.modulus())).collect();
        let s = Matrix::from_flat(field, n, n, data);
        if s.rank() == n {
            return Ok((change_basis(alg, &s)?, s));
        }
    }
    Err(Error::InternalSamplingFailure(MAX_SCRAMBLE_DRAWS))
}

pub fn scramble_planted(planted: &PlantedDecomposition, seed: u64) -> Result<PlantedDecomposition> {
    let (presentation, s) = scramble(&planted.presentation, seed)?;
    Ok(PlantedDecomposition {
        spec: planted.spec.clone(),
        presentation,
        scramble_matrix: Some(s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_groups() {
        for name in ["C2", "C3", "C4", "S3", "D4", "Q8"] {
            let t = CayleyTable::named(name).unwrap();
            t.validate().unwrap();
        }
        assert!(CayleyTable::named("A5").is_none());
    }

    #[test]
    fn group_shapes() {
        let abelian = |t: &CayleyTable| (0..t.order).all(|g| (0..t.order).all(|h| t.table[g][h] == t.table[h][g]));
        assert!(!abelian(&CayleyTable::symmetric3()));
        assert!(!abelian(&CayleyTable::dihedral4()));
        assert!(!abelian(&CayleyTable::quaternion8()));
        // Q8 has a unique element of order 2, D4 has five
        let involutions = |t: &CayleyTable| (1..t.order).filter(|&g| t.table[g][g] == t.identity).count();
        assert_eq!(involutions(&CayleyTable::quaternion8()), 1);
        assert_eq!(involutions(&CayleyTable::dihedral4()), 5);
    }

    #[test]
    fn invalid_tables() {
        let mut t = CayleyTable::cyclic(3);
        t.table[0][0] = 1;
        assert!(matches!(t.validate(), Err(Error::InvalidCayley(_))));
        let t = CayleyTable { order: 2, identity: 5, table: vec![vec![0, 1], vec![1, 0]] };
        assert!(t.validate().is_err());
        assert!(group_algebra(&t, 5).is_err());
    }

    #[test]
    fn group_algebras() {
        let trivial = group_algebra(&CayleyTable::cyclic(1), 5).unwrap();
        assert_eq!(trivial.dim(), 1);
        let c3 = group_algebra(&CayleyTable::cyclic(3), 7).unwrap();
        assert_eq!(c3.dim(), 3);
        assert!(c3.is_commutative());
        let s3 = group_algebra(&CayleyTable::symmetric3(), 5).unwrap();
        assert_eq!(s3.dim(), 6);
        assert!(!s3.is_commutative());
    }

    #[test]
    fn matrix_algebras() {
        let f5 = PrimeField::new(5).unwrap();
        let f = matrix_algebra_over_extension(1, 5, &Poly::x(f5)).unwrap();
        assert_eq!(f.presentation.dim(), 1);
        let m2 = matrix_algebra_over_extension(2, 7, &Poly::x(PrimeField::new(7).unwrap())).unwrap();
        assert_eq!(m2.presentation.dim(), 4);
        assert_eq!(m2.spec, vec![(2, 1)]);
        let f25 = matrix_algebra_over_extension(1, 5, &Poly::new(f5, vec![1, 1, 1])).unwrap();
        assert_eq!(f25.presentation.dim(), 2);
        assert!(matches!(
            matrix_algebra_over_extension(1, 5, &Poly::new(f5, vec![1, 0, 1])),
            Err(Error::ReduciblePolynomial(5))
        ));
    }

    #[test]
    fn sums() {
        let f5 = PrimeField::new(5).unwrap();
        let one = matrix_algebra_over_extension(1, 5, &Poly::x(f5)).unwrap().presentation;
        assert_eq!(direct_sum(&[one.clone()]).unwrap(), one);
        let pair = direct_sum(&[one.clone(), one.clone()]).unwrap();
        assert_eq!(pair.one_coords(), &[1, 1]);
        let p = planted(&[(2, 1), (1, 2)], 5).unwrap();
        assert_eq!(p.presentation.dim(), 6);
        assert_eq!(p.spec, vec![(1, 2), (2, 1)]);
        let seven = matrix_algebra_over_extension(1, 7, &Poly::x(PrimeField::new(7).unwrap())).unwrap();
        assert_eq!(direct_sum(&[one, seven.presentation]), Err(Error::ModulusMismatch));
    }

    #[test]
    fn identity_change_of_basis_is_noop() {
        let a = planted(&[(2, 1)], 7).unwrap().presentation;
        let id = Matrix::identity(a.field(), a.dim());
        assert_eq!(change_basis(&a, &id).unwrap(), a);
    }

    #[test]
    fn scramble_is_deterministic_and_valid() {
        let a = planted(&[(1, 1), (1, 1)], 5).unwrap().presentation;
        let (x, s) = scramble(&a, 4).unwrap();
        let (y, t) = scramble(&a, 4).unwrap();
        assert_eq!(x, y);
        assert_eq!(s, t);
        assert_eq!(s.rank(), 2);
        // mapping back recovers the original
        let back = change_basis(&x, &s.inverse().unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn irreducible_search() {
        let f = first_irreducible(5, 2).unwrap();
        assert_eq!(f.coeffs(), &[2, 0, 1]);
        assert!((0..5).all(|r| f.eval(r) != 0));
        assert_eq!(first_irreducible(7, 3).unwrap().degree(), Some(3));
    }
}

//! Orthogonal primitive idempotent decompositions and equivalence witnesses.
//!
//! An idempotent `e` is split inside its corner `B = eAe`. If the center of
//! `B` has a Frobenius fixed space of dimension above one it contains a
//! nontrivial central idempotent, found deterministically from the minimal
//! polynomial of a fixed element. Otherwise the center is a field `K`; if
//! `B = K` then `e` is primitive, and if not, `B` is a full matrix algebra
//! over `K` and random elements of `B` are tried until one has a minimal
//! polynomial with two coprime factors. Every split is exact: a Bezout
//! identity `s g + t h = 1` turns `m = g h` into the idempotent `(s g)(x)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    center_basis_coords, corner_coords, frobenius_fixed_space, hom_space_coords, AlgebraElement,
    AlgebraPresentation, CornerAlgebra, Subalgebra,
};
use crate::error::{Error, Result};
use crate::exactfield::{berlekamp_factor, bezout, Matrix, Poly, SpanBasis};
use crate::semisimple::SemisimpleAlgebra;

pub const DEFAULT_SPLIT_CAP: usize = 256;

/// An element `e` with `e^2 = e`, stored as parent coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Idempotent {
    coords: Vec<u64>,
}

impl Idempotent {
    pub fn new(alg: &AlgebraPresentation, coords: Vec<u64>) -> Result<Self> {
        if coords.len() != alg.dim() {
            return Err(Error::ShapeMismatch("idempotent of wrong length".into()));
        }
        if !alg.is_idempotent_coords(&coords) {
            return Err(Error::NotIdempotent);
        }
        Ok(Idempotent { coords })
    }

    pub fn from_element(alg: &AlgebraPresentation, x: &AlgebraElement) -> Result<Self> {
        Self::new(alg, x.coords().to_vec())
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn element(&self, alg: &AlgebraPresentation) -> Result<AlgebraElement> {
        alg.element(self.coords.clone())
    }
}

/// Evidence that `eAe` is a field, hence that `e` is primitive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitivityCertificate {
    pub e: Idempotent,
    pub corner_dim: usize,
    pub frobenius_fixed_dim: usize,
    pub corner_commutative: bool,
}

impl PrimitivityCertificate {
    fn from_corner(e: &Idempotent, corner: &CornerAlgebra) -> Result<Self> {
        let local = corner.local();
        let corner_commutative = local.is_commutative();
        let frobenius_fixed_dim = if corner_commutative {
            frobenius_fixed_space(local)?.len()
        } else {
            0
        };
        Ok(PrimitivityCertificate {
            e: e.clone(),
            corner_dim: corner.dim(),
            frobenius_fixed_dim,
            corner_commutative,
        })
    }

    pub fn is_valid(&self) -> bool {
        self.corner_commutative && self.frobenius_fixed_dim == 1 && self.corner_dim >= 1
    }

    /// Rebuilds the corner from scratch and compares.
    pub fn recheck(&self, alg: &AlgebraPresentation) -> Result<bool> {
        let corner = corner_coords(alg, self.e.coords())?;
        let fresh = Self::from_corner(&self.e, &corner)?;
        Ok(fresh == *self && fresh.is_valid())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitOutcome {
    Primitive(PrimitivityCertificate),
    Split(Idempotent, Idempotent),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalDecomposition {
    pub of: Idempotent,
    pub parts: Vec<Idempotent>,
    pub certificates: Vec<PrimitivityCertificate>,
}

impl OrthogonalDecomposition {
    /// Exhaustive check of the sum, orthogonality and idempotency.
    pub fn check(&self, alg: &AlgebraPresentation) -> Result<()> {
        let n = alg.dim();
        let mut sum = vec![0; n];
        for (i, part) in self.parts.iter().enumerate() {
            if part.is_zero() || !alg.is_idempotent_coords(part.coords()) {
                return Err(Error::InvariantViolation(format!("part {i} is not a nonzero idempotent")));
            }
            sum = alg.add_coords(&sum, part.coords());
            for (j, other) in self.parts.iter().enumerate() {
                if i != j && alg.mul_coords(part.coords(), other.coords()).iter().any(|&c| c != 0) {
                    return Err(Error::InvariantViolation(format!("parts {i} and {j} are not orthogonal")));
                }
            }
        }
        if sum != self.of.coords() {
            return Err(Error::InvariantViolation("parts do not sum to the target".into()));
        }
        Ok(())
    }
}

/// Elements `a` in `fAe` and `b` in `eAf` with `ab = f` and `ba = e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub e: Idempotent,
    pub f: Idempotent,
    pub a: Vec<u64>,
    pub b: Vec<u64>,
}

impl EquivalenceWitness {
    pub fn check(&self, alg: &AlgebraPresentation) -> bool {
        let (e, f) = (self.e.coords(), self.f.coords());
        alg.mul_coords(&self.a, &self.b) == f
            && alg.mul_coords(&self.b, &self.a) == e
            && alg.mul_coords(&alg.mul_coords(f, &self.a), e) == self.a
            && alg.mul_coords(&alg.mul_coords(e, &self.b), f) == self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent(EquivalenceWitness),
    Inequivalent,
}

/// Deterministic sub-seed for the `index`-th split (splitmix64).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splits `e` once, or certifies that it is primitive.
pub fn split_once(
    alg: &SemisimpleAlgebra,
    e: &Idempotent,
    seed: u64,
    max_iters: usize,
) -> Result<SplitOutcome> {
    if e.is_zero() {
        return Err(Error::InvalidInput("cannot split the zero idempotent".into()));
    }
    let corner = corner_coords(alg, e.coords())?;
    if corner.dim() == 1 {
        return Ok(SplitOutcome::Primitive(PrimitivityCertificate::from_corner(e, &corner)?));
    }
    let local = corner.local();

    let center = Subalgebra::from_spanning(local, &center_basis_coords(local), local.one_coords())?;
    let fixed = frobenius_fixed_space(center.local())?;
    if fixed.len() > 1 {
        let unit = SpanBasis::from_spanning(local.field(), center.dim(), &[center.local().one_coords().to_vec()]);
        let v = fixed
            .iter()
            .find(|v| !unit.contains(v))
            .ok_or_else(|| Error::InvariantViolation("fixed space inside the scalars".into()))?;
        let x = center.lift(v);
        let m = local.element_min_poly(&x);
        return split_by_min_poly(alg, e, &corner, &x, &m)?
            .ok_or_else(|| Error::InvariantViolation("central fixed element did not split".into()));
    }

    if corner.dim() == center.dim() {
        return Ok(SplitOutcome::Primitive(PrimitivityCertificate::from_corner(e, &corner)?));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = alg.modulus();
    for _ in 0..max_iters {
        let x: Vec<u64> = (0..corner.dim()).map(|_| rng.gen_range(0..p)).collect();
        let m = local.element_min_poly(&x);
        if let Some(outcome) = split_by_min_poly(alg, e, &corner, &x, &m)? {
            return Ok(outcome);
        }
    }
    Err(Error::SplitIterationCapExceeded(max_iters))
}

/// If `m = g h` with `g`, `h` coprime and nonconstant, returns the split
/// `((s g)(x), e - (s g)(x))`.
fn split_by_min_poly(
    alg: &AlgebraPresentation,
    e: &Idempotent,
    corner: &CornerAlgebra,
    x: &[u64],
    m: &Poly,
) -> Result<Option<SplitOutcome>> {
    if m.degree().unwrap_or(0) < 2 {
        return Ok(None);
    }
    let factors = berlekamp_factor(m)?;
    if factors.len() < 2 {
        return Ok(None);
    }
    let (q, mult) = &factors[0];
    let g = (0..*mult).fold(Poly::one(m.field()), |acc, _| acc.mul(q));
    let h = m
        .div_exact(&g)
        .ok_or_else(|| Error::InvariantViolation("primary factor does not divide".into()))?;
    let (s, _t, d) = bezout(&g, &h)?;
    if !d.is_one() {
        return Err(Error::InvariantViolation("primary factors are not coprime".into()));
    }
    let projector = s.mul(&g).rem(m)?;
    let local = corner.local();
    let eps_local = local.eval_poly_coords(&projector, x);
    let first = corner.lift(&eps_local);
    let second = alg.sub_coords(e.coords(), &first);
    let first = Idempotent::new(alg, first)?;
    let second = Idempotent::new(alg, second)?;
    if first.is_zero() || second.is_zero() {
        return Err(Error::InvariantViolation("coprime split produced a zero idempotent".into()));
    }
    if alg.mul_coords(first.coords(), second.coords()).iter().any(|&c| c != 0)
        || alg.mul_coords(second.coords(), first.coords()).iter().any(|&c| c != 0)
    {
        return Err(Error::InvariantViolation("split idempotents are not orthogonal".into()));
    }
    Ok(Some(SplitOutcome::Split(first, second)))
}

/// Splits `1_A` into pairwise orthogonal primitive idempotents. Children
/// replace their parent in place, first child first.
pub fn decompose_identity(
    alg: &SemisimpleAlgebra,
    seed: u64,
    max_iters: usize,
) -> Result<OrthogonalDecomposition> {
    let one = Idempotent::new(alg, alg.one_coords().to_vec())?;
    let mut parts = vec![one.clone()];
    let mut certificates = Vec::new();
    let mut calls = 0u64;
    let mut i = 0;
    while i < parts.len() {
        let outcome = split_once(alg, &parts[i], derive_seed(seed, calls), max_iters)?;
        calls += 1;
        match outcome {
            SplitOutcome::Primitive(cert) => {
                certificates.push(cert);
                i += 1;
            }
            SplitOutcome::Split(a, b) => {
                parts.splice(i..=i, [a, b]);
            }
        }
    }
    let decomposition = OrthogonalDecomposition {
        of: one,
        parts,
        certificates,
    };
    decomposition.check(alg)?;
    Ok(decomposition)
}

/// Decides whether `eA` and `fA` are isomorphic, and if so returns a
/// witness. Intended for primitive idempotents of a semisimple algebra.
pub fn equivalence_witness(
    alg: &AlgebraPresentation,
    e: &Idempotent,
    f: &Idempotent,
) -> Result<Equivalence> {
    if e == f {
        return Ok(Equivalence::Equivalent(EquivalenceWitness {
            e: e.clone(),
            f: f.clone(),
            a: e.coords().to_vec(),
            b: e.coords().to_vec(),
        }));
    }
    let fae = hom_space_coords(alg, f.coords(), e.coords())?;
    if fae.is_zero() {
        return Ok(Equivalence::Inequivalent);
    }
    let a = fae.basis.vectors()[0].clone();
    let eaf = hom_space_coords(alg, e.coords(), f.coords())?;
    if eaf.is_zero() {
        return Err(Error::WitnessSolveFailed("fAe is nonzero but eAf is zero".into()));
    }
    let images: Vec<Vec<u64>> = eaf.basis.vectors().iter().map(|k| alg.mul_coords(&a, k)).collect();
    let system = Matrix::from_columns(alg.field(), alg.dim(), &images);
    let beta = system
        .solve(f.coords())?
        .ok_or_else(|| Error::WitnessSolveFailed("a b = f has no solution in eAf".into()))?;
    let b = eaf.basis.combine(&beta);
    let witness = EquivalenceWitness {
        e: e.clone(),
        f: f.clone(),
        a,
        b,
    };
    if !witness.check(alg) {
        return Err(Error::WitnessSolveFailed("b a != e".into()));
    }
    Ok(Equivalence::Equivalent(witness))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_presentation;
    use crate::semisimple::require_semisimple;

    fn f5_squared() -> SemisimpleAlgebra {
        let mut sc = vec![vec![vec![0; 2]; 2]; 2];
        sc[0][0][0] = 1;
        sc[1][1][1] = 1;
        require_semisimple(make_presentation(5, 2, &sc, None).unwrap()).unwrap()
    }

    fn m2_f7() -> SemisimpleAlgebra {
        let mut sc = vec![vec![vec![0; 4]; 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for d in 0..2 {
                    sc[2 * a + b][2 * b + d][2 * a + d] = 1;
                }
            }
        }
        require_semisimple(make_presentation(7, 4, &sc, None).unwrap()).unwrap()
    }

    fn idem(alg: &AlgebraPresentation, v: Vec<u64>) -> Idempotent {
        Idempotent::new(alg, v).unwrap()
    }

    #[test]
    fn rejects_non_idempotents() {
        let a = m2_f7();
        assert_eq!(Idempotent::new(&a, vec![0, 1, 0, 0]), Err(Error::NotIdempotent));
    }

    #[test]
    fn field_is_primitive() {
        let a = require_semisimple(make_presentation(5, 1, &[vec![vec![1]]], None).unwrap()).unwrap();
        let one = idem(&a, vec![1]);
        match split_once(&a, &one, 0, 8).unwrap() {
            SplitOutcome::Primitive(c) => {
                assert_eq!(c.corner_dim, 1);
                assert!(c.is_valid());
            }
            other => panic!("{other:?}"),
        }
        let d = decompose_identity(&a, 0, 8).unwrap();
        assert_eq!(d.parts, vec![one]);
    }

    #[test]
    fn central_split_of_f5_squared() {
        let a = f5_squared();
        let one = idem(&a, vec![1, 1]);
        match split_once(&a, &one, 0, 0).unwrap() {
            SplitOutcome::Split(x, y) => {
                let mut got = vec![x.coords().to_vec(), y.coords().to_vec()];
                got.sort();
                assert_eq!(got, vec![vec![0, 1], vec![1, 0]]);
            }
            other => panic!("{other:?}"),
        }
        let d = decompose_identity(&a, 3, 0).unwrap();
        let mut parts: Vec<_> = d.parts.iter().map(|p| p.coords().to_vec()).collect();
        parts.sort();
        assert_eq!(parts, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn matrix_algebra_splits_into_rank_one_idempotents() {
        let a = m2_f7();
        let one = idem(&a, a.one_coords().to_vec());
        match split_once(&a, &one, 11, DEFAULT_SPLIT_CAP).unwrap() {
            SplitOutcome::Split(x, y) => {
                assert_eq!(a.add_coords(x.coords(), y.coords()), vec![1, 0, 0, 1]);
                assert!(a.mul_coords(x.coords(), y.coords()).iter().all(|&c| c == 0));
            }
            other => panic!("{other:?}"),
        }
        let d = decompose_identity(&a, 11, DEFAULT_SPLIT_CAP).unwrap();
        assert_eq!(d.parts.len(), 2);
        for cert in &d.certificates {
            assert_eq!(cert.corner_dim, 1);
            assert!(cert.recheck(&a).unwrap());
        }
    }

    #[test]
    fn cap_zero_fails_on_matrix_algebra() {
        let a = m2_f7();
        let one = idem(&a, a.one_coords().to_vec());
        assert_eq!(
            split_once(&a, &one, 0, 0),
            Err(Error::SplitIterationCapExceeded(0))
        );
    }

    #[test]
    fn decomposition_is_deterministic() {
        let a = m2_f7();
        for seed in [0, 1, 99] {
            assert_eq!(
                decompose_identity(&a, seed, DEFAULT_SPLIT_CAP).unwrap(),
                decompose_identity(&a, seed, DEFAULT_SPLIT_CAP).unwrap()
            );
        }
    }

    #[test]
    fn witness_examples() {
        let a = m2_f7();
        let e11 = idem(&a, vec![1, 0, 0, 0]);
        let e22 = idem(&a, vec![0, 0, 0, 1]);
        match equivalence_witness(&a, &e11, &e11).unwrap() {
            Equivalence::Equivalent(w) => {
                assert_eq!(w.a, e11.coords());
                assert_eq!(w.b, e11.coords());
            }
            other => panic!("{other:?}"),
        }
        match equivalence_witness(&a, &e11, &e22).unwrap() {
            Equivalence::Equivalent(w) => {
                assert_eq!(w.a, vec![0, 0, 1, 0]);
                assert_eq!(w.b, vec![0, 1, 0, 0]);
                assert!(w.check(&a));
            }
            other => panic!("{other:?}"),
        }
        let s = f5_squared();
        let x = idem(&s, vec![1, 0]);
        let y = idem(&s, vec![0, 1]);
        assert_eq!(equivalence_witness(&s, &x, &y).unwrap(), Equivalence::Inequivalent);
    }

    #[test]
    fn witnesses_compose() {
        // M_3(F_7) with diagonal idempotents E11, E22, E33
        let mut sc = vec![vec![vec![0; 9]; 9]; 9];
        for a in 0..3 {
            for b in 0..3 {
                for d in 0..3 {
                    sc[3 * a + b][3 * b + d][3 * a + d] = 1;
                }
            }
        }
        let alg = make_presentation(7, 9, &sc, None).unwrap();
        let unit = |k: usize| {
            let mut v = vec![0; 9];
            v[4 * k] = 1;
            idem(&alg, v)
        };
        let (e, f, g) = (unit(0), unit(1), unit(2));
        let w = |x: &Idempotent, y: &Idempotent| match equivalence_witness(&alg, x, y).unwrap() {
            Equivalence::Equivalent(w) => w,
            Equivalence::Inequivalent => panic!("inequivalent"),
        };
        let (w1, w2) = (w(&e, &f), w(&f, &g));
        let composed = EquivalenceWitness {
            e: e.clone(),
            f: g.clone(),
            a: alg.mul_coords(&w2.a, &w1.a),
            b: alg.mul_coords(&w1.b, &w2.b),
        };
        assert!(composed.check(&alg));
    }
}

//! Finite-dimensional unital associative algebras over `F_p` given by
//! structure constants, with corner algebras `eAe` and corner spaces `fAe`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactfield::matrix::{first_linear_dependence, mul_into, Matrix, SpanBasis};
use crate::exactfield::{PrimeField, Poly};

/// An algebra with basis `b_0..b_{n-1}` and `b_i b_j = sum_k c[i][j][k] b_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    field: PrimeField,
    dim: usize,
    // c[i][j][k] at (i * dim + j) * dim + k
    sc: Vec<u64>,
    one: Vec<u64>,
    labels: Option<Vec<String>>,
    fingerprint: u64,
}

/// An element tagged with the presentation it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    parent: u64,
    coords: Vec<u64>,
}

impl AlgebraElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<u64> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

/// Validates and builds a presentation from a nested `n x n x n` tensor.
/// The identity is always solved for; a supplied identity must agree with it.
pub fn make_presentation(
    p: u64,
    n: usize,
    sc: &[Vec<Vec<u64>>],
    one: Option<&[u64]>,
) -> Result<AlgebraPresentation> {
    let field = PrimeField::new(p)?;
    if sc.len() != n || sc.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
        return Err(Error::InvalidInput(format!(
            "structure constants must have shape {n}x{n}x{n}"
        )));
    }
    let flat: Vec<u64> = sc.iter().flatten().flatten().copied().collect();
    AlgebraPresentation::new(field, n, flat, one.map(<[u64]>::to_vec))
}

impl AlgebraPresentation {
    /// Validating constructor from a flat tensor.
    pub fn new(field: PrimeField, dim: usize, sc: Vec<u64>, one: Option<Vec<u64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if sc.len() != dim * dim * dim {
            return Err(Error::InvalidInput(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                sc.len()
            )));
        }
        if let Some(bad) = sc.iter().find(|&&c| c >= field.modulus()) {
            return Err(Error::InvalidInput(format!(
                "structure constant {bad} outside [0, {})",
                field.modulus()
            )));
        }
        if let Some(u) = &one {
            if u.len() != dim || u.iter().any(|&c| c >= field.modulus()) {
                return Err(Error::InvalidInput("identity must be n residues in [0, p)".into()));
            }
        }
        if let Some((i, j, k)) = associativity_witness(field, dim, &sc) {
            return Err(Error::NotAssociative { i, j, k });
        }
        let solved = solve_identity(field, dim, &sc)?.ok_or(Error::NoIdentity)?;
        if let Some(given) = one {
            if given != solved {
                return Err(Error::InvalidInput(
                    "supplied identity is not a two-sided identity".into(),
                ));
            }
        }
        Ok(Self::assemble(field, dim, sc, solved))
    }

    /// Builds a presentation whose associativity is inherited from a parent
    /// algebra. Only the identity is checked.
    pub(crate) fn trusted(field: PrimeField, dim: usize, sc: Vec<u64>, one: Vec<u64>) -> Self {
        let alg = Self::assemble(field, dim, sc, one);
        debug_assert!(alg.identity_holds());
        alg
    }

    fn assemble(field: PrimeField, dim: usize, sc: Vec<u64>, one: Vec<u64>) -> Self {
        let mut h = DefaultHasher::new();
        (field.modulus(), dim, &sc, &one).hash(&mut h);
        AlgebraPresentation {
            field,
            dim,
            sc,
            one,
            labels: None,
            fingerprint: h.finish(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "{} labels for dimension {}",
                labels.len(),
                self.dim
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modulus(&self) -> u64 {
        self.field.modulus()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn sc(&self, i: usize, j: usize, k: usize) -> u64 {
        self.sc[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `b_i b_j`.
    #[inline]
    pub fn basis_product(&self, i: usize, j: usize) -> &[u64] {
        let n = self.dim;
        &self.sc[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn flat_structure_constants(&self) -> &[u64] {
        &self.sc
    }

    pub fn nested_structure_constants(&self) -> Vec<Vec<Vec<u64>>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.basis_product(i, j).to_vec()).collect())
            .collect()
    }

    pub fn one_coords(&self) -> &[u64] {
        &self.one
    }

    // ---- elements ----

    pub fn element(&self, coords: Vec<u64>) -> Result<AlgebraElement> {
        if coords.len() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "element of length {} in dimension {}",
                coords.len(),
                self.dim
            )));
        }
        Ok(AlgebraElement {
            parent: self.fingerprint,
            coords: coords.into_iter().map(|c| self.field.reduce(c)).collect(),
        })
    }

    pub(crate) fn wrap(&self, coords: Vec<u64>) -> AlgebraElement {
        debug_assert_eq!(coords.len(), self.dim);
        AlgebraElement {
            parent: self.fingerprint,
            coords,
        }
    }

    pub fn one(&self) -> AlgebraElement {
        self.wrap(self.one.clone())
    }

    pub fn zero(&self) -> AlgebraElement {
        self.wrap(vec![0; self.dim])
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        self.wrap(v)
    }

    fn check_parent(&self, x: &AlgebraElement) -> Result<()> {
        if x.parent != self.fingerprint || x.coords.len() != self.dim {
            return Err(Error::ParentMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_parent(x)?;
        self.check_parent(y)?;
        Ok(self.wrap(self.mul_coords(&x.coords, &y.coords)))
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_parent(x)?;
        self.check_parent(y)?;
        Ok(self.wrap(self.add_coords(&x.coords, &y.coords)))
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_parent(x)?;
        self.check_parent(y)?;
        Ok(self.wrap(self.sub_coords(&x.coords, &y.coords)))
    }

    /// Product on raw coordinate vectors.
    pub fn mul_coords(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let n = self.dim;
        let f = self.field;
        let p = f.modulus();
        let mut out = vec![0u64; n];
        let lazy = f.lazy_dot_ok(n * n);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let c = f.mul(xi, yj);
                let row = self.basis_product(i, j);
                if lazy {
                    for (o, r) in out.iter_mut().zip(row) {
                        *o += c * r;
                    }
                } else {
                    for (o, r) in out.iter_mut().zip(row) {
                        *o = (*o + c * r) % p;
                    }
                }
            }
        }
        if lazy {
            out.iter_mut().for_each(|o| *o %= p);
        }
        out
    }

    pub fn add_coords(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| self.field.add(*a, *b)).collect()
    }

    pub fn sub_coords(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| self.field.sub(*a, *b)).collect()
    }

    pub fn scale_coords(&self, x: &[u64], c: u64) -> Vec<u64> {
        x.iter().map(|a| self.field.mul(*a, c)).collect()
    }

    pub fn is_idempotent_coords(&self, x: &[u64]) -> bool {
        self.mul_coords(x, x) == x
    }

    pub fn is_idempotent(&self, x: &AlgebraElement) -> bool {
        self.check_parent(x).is_ok() && self.is_idempotent_coords(&x.coords)
    }

    /// Whether `z b_i = b_i z` for every basis element.
    pub fn is_central_coords(&self, z: &[u64]) -> bool {
        let l = self.left_regular_coords(z);
        let r = self.right_regular_coords(z);
        l == r
    }

    /// Matrix of `y -> x y`; column `j` holds the coordinates of `x b_j`.
    pub fn left_regular_coords(&self, x: &[u64]) -> Matrix {
        let n = self.dim;
        // rows[j][k] = sum_i x_i c[i][j][k]
        let mut rows = vec![0u64; n * n];
        mul_into(self.field, x, 1, n, &self.sc, n * n, &mut rows);
        Matrix::from_flat(self.field, n, n, rows).transpose()
    }

    /// Matrix of `y -> y x`; column `j` holds the coordinates of `b_j x`.
    pub fn right_regular_coords(&self, x: &[u64]) -> Matrix {
        let n = self.dim;
        let f = self.field;
        let mut m = Matrix::zeros(f, n, n);
        for j in 0..n {
            let col = self.mul_coords(&self.basis_element(j).coords, x);
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    pub fn left_regular(&self, x: &AlgebraElement) -> Result<Matrix> {
        self.check_parent(x)?;
        Ok(self.left_regular_coords(&x.coords))
    }

    pub fn right_regular(&self, x: &AlgebraElement) -> Result<Matrix> {
        self.check_parent(x)?;
        Ok(self.right_regular_coords(&x.coords))
    }

    pub fn pow_coords(&self, x: &[u64], mut exp: u64) -> Vec<u64> {
        let mut acc = self.one.clone();
        let mut base = x.to_vec();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_coords(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul_coords(&base, &base);
            }
        }
        acc
    }

    /// Minimal polynomial of an element: the first dependence among
    /// `1, x, x^2, ...`. Agrees with the minimal polynomial of its left
    /// regular matrix because the representation is faithful.
    pub fn element_min_poly(&self, x: &[u64]) -> Poly {
        let mut power = self.one.clone();
        let relation = first_linear_dependence(self.field, self.dim + 1, || {
            let current = power.clone();
            power = self.mul_coords(&power, x);
            current
        });
        Poly::new(self.field, relation)
    }

    /// `poly(x)` by Horner's rule.
    pub fn eval_poly_coords(&self, poly: &Poly, x: &[u64]) -> Vec<u64> {
        let mut acc = vec![0; self.dim];
        for &c in poly.coeffs().iter().rev() {
            acc = self.mul_coords(&acc, x);
            let unit = self.scale_coords(&self.one, c);
            acc = self.add_coords(&acc, &unit);
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        self.commutativity_witness().is_none()
    }

    pub fn commutativity_witness(&self) -> Option<(usize, usize)> {
        let n = self.dim;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.basis_product(i, j) != self.basis_product(j, i))
    }

    fn identity_holds(&self) -> bool {
        (0..self.dim).all(|i| {
            let b = self.basis_element(i).coords;
            self.mul_coords(&self.one, &b) == b && self.mul_coords(&b, &self.one) == b
        })
    }

    /// Exhaustive associativity check; returns the first failing triple.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        associativity_witness(self.field, self.dim, &self.sc)
    }
}

fn associativity_witness(field: PrimeField, n: usize, sc: &[u64]) -> Option<(usize, usize, usize)> {
    (0..n).into_par_iter().find_map_first(|i| {
        let ci = &sc[i * n * n..(i + 1) * n * n];
        // left[j][(k, m)] = sum_l c[i][j][l] c[l][k][m]  ((b_i b_j) b_k)
        let mut left = vec![0u64; n * n * n];
        mul_into(field, ci, n, n, sc, n * n, &mut left);
        // right[(j, k)][m] = sum_l c[j][k][l] c[i][l][m]  (b_i (b_j b_k))
        let mut right = vec![0u64; n * n * n];
        mul_into(field, sc, n * n, n, ci, n, &mut right);
        left.iter()
            .zip(&right)
            .position(|(a, b)| a != b)
            .map(|pos| (i, pos / (n * n), (pos / n) % n))
    })
}

/// Solves `u b_i = b_i u = b_i` for all `i`.
fn solve_identity(field: PrimeField, n: usize, sc: &[u64]) -> Result<Option<Vec<u64>>> {
    let mut m = Matrix::zeros(field, 2 * n * n, n);
    let mut rhs = vec![0; 2 * n * n];
    for i in 0..n {
        for t in 0..n {
            let row_left = i * n + t;
            let row_right = n * n + i * n + t;
            for k in 0..n {
                m.set(row_left, k, sc[(k * n + i) * n + t]);
                m.set(row_right, k, sc[(i * n + k) * n + t]);
            }
            if i == t {
                rhs[row_left] = 1;
                rhs[row_right] = 1;
            }
        }
    }
    m.solve(&rhs)
}

/// Basis of the center, as the kernel of the stacked commutator system.
pub fn center_basis(alg: &AlgebraPresentation) -> Vec<AlgebraElement> {
    center_basis_coords(alg)
        .into_iter()
        .map(|v| alg.wrap(v))
        .collect()
}

pub(crate) fn center_basis_coords(alg: &AlgebraPresentation) -> Vec<Vec<u64>> {
    let n = alg.dim();
    let f = alg.field();
    let mut m = Matrix::zeros(f, n * n, n);
    for i in 0..n {
        for t in 0..n {
            for k in 0..n {
                m.set(i * n + t, k, f.sub(alg.sc(k, i, t), alg.sc(i, k, t)));
            }
        }
    }
    let basis = m.kernel_basis();
    debug_assert!(SpanBasis::from_spanning(f, n, &basis).contains(alg.one_coords()));
    basis
}

/// A unital subalgebra given by a basis of parent coordinates together
/// with its own presentation.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    basis: SpanBasis,
    local: AlgebraPresentation,
}

impl Subalgebra {
    /// `vectors` must span a subspace closed under multiplication that
    /// contains `identity`, which acts as the identity on that subspace.
    pub fn from_spanning(
        parent: &AlgebraPresentation,
        vectors: &[Vec<u64>],
        identity: &[u64],
    ) -> Result<Self> {
        let basis = SpanBasis::from_spanning(parent.field(), parent.dim(), vectors);
        Self::from_basis(parent, basis, identity)
    }

    pub fn from_basis(parent: &AlgebraPresentation, basis: SpanBasis, identity: &[u64]) -> Result<Self> {
        let d = basis.dim();
        let f = parent.field();
        let mut sc = vec![0; d * d * d];
        for (a, u) in basis.vectors().iter().enumerate() {
            let lu = parent.left_regular_coords(u);
            for (b, v) in basis.vectors().iter().enumerate() {
                let prod = lu.mul_vec(v)?;
                let coords = basis.coords(&prod).ok_or_else(|| {
                    Error::InvalidInput("subspace is not closed under multiplication".into())
                })?;
                sc[(a * d + b) * d..(a * d + b + 1) * d].copy_from_slice(&coords);
            }
        }
        let one = basis
            .coords(identity)
            .ok_or_else(|| Error::InvalidInput("identity outside the subspace".into()))?;
        let local = AlgebraPresentation::trusted(f, d, sc, one);
        if !local.identity_holds() {
            return Err(Error::InvalidInput("identity does not act as identity on the subspace".into()));
        }
        Ok(Subalgebra { basis, local })
    }

    pub fn local(&self) -> &AlgebraPresentation {
        &self.local
    }

    pub fn basis(&self) -> &SpanBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Local coordinates to parent coordinates.
    pub fn lift(&self, local: &[u64]) -> Vec<u64> {
        self.basis.combine(local)
    }

    /// Parent coordinates to local coordinates, if inside.
    pub fn restrict(&self, parent: &[u64]) -> Option<Vec<u64>> {
        self.basis.coords(parent)
    }
}

/// The corner algebra `eAe`, whose identity is `e`.
#[derive(Clone, Debug)]
pub struct CornerAlgebra {
    e: Vec<u64>,
    sub: Subalgebra,
}

impl CornerAlgebra {
    pub fn idempotent(&self) -> &[u64] {
        &self.e
    }

    pub fn basis_lift(&self) -> &[Vec<u64>] {
        self.sub.basis().vectors()
    }

    pub fn local(&self) -> &AlgebraPresentation {
        self.sub.local()
    }

    pub fn dim(&self) -> usize {
        self.sub.dim()
    }

    pub fn subalgebra(&self) -> &Subalgebra {
        &self.sub
    }

    pub fn lift(&self, local: &[u64]) -> Vec<u64> {
        self.sub.lift(local)
    }

    pub fn restrict(&self, parent: &[u64]) -> Option<Vec<u64>> {
        self.sub.restrict(parent)
    }
}

/// The corner space `fAe`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub f: Vec<u64>,
    pub e: Vec<u64>,
    pub basis: SpanBasis,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.dim() == 0
    }
}

/// Span of `f b_k e` over all basis elements.
pub fn sandwich_span(alg: &AlgebraPresentation, f: &[u64], e: &[u64]) -> SpanBasis {
    let lf = alg.left_regular_coords(f);
    let re = alg.right_regular_coords(e);
    let m = lf.mul(&re).expect("square");
    SpanBasis::from_spanning(alg.field(), alg.dim(), &m.transpose().to_rows())
}

pub fn corner(alg: &AlgebraPresentation, e: &AlgebraElement) -> Result<CornerAlgebra> {
    alg.check_parent(e)?;
    corner_coords(alg, &e.coords)
}

pub(crate) fn corner_coords(alg: &AlgebraPresentation, e: &[u64]) -> Result<CornerAlgebra> {
    if !alg.is_idempotent_coords(e) {
        return Err(Error::NotIdempotent);
    }
    let basis = sandwich_span(alg, e, e);
    let sub = Subalgebra::from_basis(alg, basis, e)?;
    Ok(CornerAlgebra { e: e.to_vec(), sub })
}

pub fn hom_space(alg: &AlgebraPresentation, f: &AlgebraElement, e: &AlgebraElement) -> Result<HomSpace> {
    alg.check_parent(f)?;
    alg.check_parent(e)?;
    hom_space_coords(alg, &f.coords, &e.coords)
}

pub(crate) fn hom_space_coords(alg: &AlgebraPresentation, f: &[u64], e: &[u64]) -> Result<HomSpace> {
    if !alg.is_idempotent_coords(f) || !alg.is_idempotent_coords(e) {
        return Err(Error::NotIdempotent);
    }
    Ok(HomSpace {
        f: f.to_vec(),
        e: e.to_vec(),
        basis: sandwich_span(alg, f, e),
    })
}

/// Matrix of `x -> x^p` on a commutative algebra; column `i` holds `b_i^p`.
pub fn frobenius_matrix_of(alg: &AlgebraPresentation) -> Result<Matrix> {
    if let Some((i, j)) = alg.commutativity_witness() {
        return Err(Error::NotCommutative { i, j });
    }
    let p = alg.modulus();
    let columns: Vec<Vec<u64>> = (0..alg.dim())
        .map(|i| alg.pow_coords(&alg.basis_element(i).coords, p))
        .collect();
    Ok(Matrix::from_columns(alg.field(), alg.dim(), &columns))
}

pub fn frobenius_matrix(corner: &CornerAlgebra) -> Result<Matrix> {
    frobenius_matrix_of(corner.local())
}

/// Kernel of `Frobenius - identity`, in local coordinates.
pub fn frobenius_fixed_space(alg: &AlgebraPresentation) -> Result<Vec<Vec<u64>>> {
    let fr = frobenius_matrix_of(alg)?;
    let id = Matrix::identity(alg.field(), alg.dim());
    Ok(fr.sub(&id)?.kernel_basis())
}

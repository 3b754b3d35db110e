//! Dense matrices over `F_p` and exact row reduction.

use crate::error::{Error, Result};
use crate::exactfield::field::PrimeField;
use crate::exactfield::poly::Poly;

/// Row-major dense matrix over a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
            data.extend(r.iter().map(|&x| field.reduce(x)));
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_flat(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|x| field.reduce(x)).collect();
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: PrimeField, height: usize, columns: &[Vec<u64>]) -> Self {
        let mut m = Matrix::zeros(field, height, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), height);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = field.reduce(x);
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.field.reduce(v);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn trace(&self) -> u64 {
        (0..self.rows.min(self.cols)).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.add(*a, *b))
            .collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f.sub(*a, *b))
            .collect();
        Ok(Matrix { data, ..*self })
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let mut m = self.clone();
        self.field.scale(&mut m.data, c);
        m
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ParentMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::ParentMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        mul_into(
            self.field,
            &self.data,
            self.rows,
            self.cols,
            &other.data,
            other.cols,
            &mut out.data,
        );
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows).map(|i| self.field.dot(self.row(i), v)).collect())
    }

    /// Reduced row echelon form using first-nonzero pivoting.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place(self.cols);
        let rank = pivots.len();
        Rref {
            reduced: m,
            pivots,
            rank,
        }
    }

    /// Row reduces in place, choosing pivots only among the first
    /// `pivot_cols` columns. Returns the pivot columns.
    fn rref_in_place(&mut self, pivot_cols: usize) -> Vec<usize> {
        let f = self.field;
        let p = f.modulus();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(found) = (r..self.rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if found != r {
                for j in 0..cols {
                    self.data.swap(found * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                let x = &mut self.data[r * cols + j];
                *x = f.mul(*x, inv);
            }
            let (before, rest) = self.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            for row in before
                .chunks_exact_mut(cols)
                .chain(after.chunks_exact_mut(cols))
            {
                let factor = row[c];
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                for j in c..cols {
                    row[j] = (row[j] + neg * pivot_row[j]) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// One solution of `self * x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let n = self.cols;
        let mut aug = Matrix::zeros(self.field, self.rows, n + 1);
        for i in 0..self.rows {
            aug.data[i * (n + 1)..i * (n + 1) + n].copy_from_slice(self.row(i));
            aug.data[i * (n + 1) + n] = self.field.reduce(b[i]);
        }
        let pivots = aug.rref_in_place(n);
        let rank = pivots.len();
        if (rank..self.rows).any(|i| aug.get(i, n) != 0) {
            return Ok(None);
        }
        let mut x = vec![0; n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, n);
        }
        Ok(Some(x))
    }

    /// Basis of the right kernel `{v : self * v = 0}`, one vector per free
    /// column in increasing column order.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let f = self.field;
        let mut is_pivot = vec![None; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            is_pivot[c] = Some(r);
        }
        (0..self.cols)
            .filter(|&c| is_pivot[c].is_none())
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = f.neg(reduced.get(r, free));
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        if aug.rref_in_place(n).len() < n {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Some(inv)
    }

    /// Minimal polynomial: the first linear dependence among the flattened
    /// powers `I, M, M^2, ...`.
    pub fn min_poly(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("minimal polynomial of a non-square matrix".into()));
        }
        let mut power = Matrix::identity(self.field, self.rows);
        let relation = first_linear_dependence(self.field, self.rows + 1, || {
            let current = power.data.clone();
            power = power.mul(self).expect("square");
            current
        });
        Ok(Poly::new(self.field, relation))
    }

    /// Evaluates a polynomial at this square matrix by Horner's rule.
    pub fn eval_poly(&self, poly: &Poly) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("polynomial of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut acc = Matrix::zeros(self.field, n, n);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                let x = &mut acc.data[i * n + i];
                *x = self.field.add(*x, c);
            }
        }
        Ok(acc)
    }
}

/// `out = a * b` for row-major slices. `out` must be zeroed.
pub(crate) fn mul_into(
    f: PrimeField,
    a: &[u64],
    rows: usize,
    inner: usize,
    b: &[u64],
    cols: usize,
    out: &mut [u64],
) {
    let p = f.modulus();
    let lazy = f.lazy_dot_ok(inner);
    for i in 0..rows {
        let acc = &mut out[i * cols..(i + 1) * cols];
        for k in 0..inner {
            let x = a[i * inner + k];
            if x == 0 {
                continue;
            }
            let brow = &b[k * cols..(k + 1) * cols];
            if lazy {
                for (o, y) in acc.iter_mut().zip(brow) {
                    *o += x * y;
                }
            } else {
                for (o, y) in acc.iter_mut().zip(brow) {
                    *o = (*o + x * y) % p;
                }
            }
        }
        if lazy {
            for o in acc.iter_mut() {
                *o %= p;
            }
        }
    }
}

/// Feeds vectors `v_0, v_1, ...` from `next` until one is a linear
/// combination of its predecessors, and returns the monic relation
/// `[c_0, ..., c_{k-1}, 1]` with `sum c_i v_i = 0`. At most `max_terms`
/// vectors are requested; the caller guarantees a dependence exists by then.
pub(crate) fn first_linear_dependence<F>(field: PrimeField, max_terms: usize, mut next: F) -> Vec<u64>
where
    F: FnMut() -> Vec<u64>,
{
    let mut reduced: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
    for k in 0..max_terms {
        let mut v = next();
        let mut comb = vec![0; max_terms];
        comb[k] = 1;
        for (pc, row, rc) in &reduced {
            let c = v[*pc];
            if c != 0 {
                let neg = field.neg(c);
                field.axpy(&mut v, neg, row);
                field.axpy(&mut comb, neg, rc);
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => {
                comb.truncate(k + 1);
                return comb;
            }
            Some(pc) => {
                let inv = field.inv(v[pc]).expect("nonzero");
                field.scale(&mut v, inv);
                field.scale(&mut comb, inv);
                reduced.push((pc, v, comb));
            }
        }
    }
    panic!("no linear dependence among {max_terms} vectors");
}

/// A fixed, linearly independent list of vectors together with what is
/// needed to read off coordinates of vectors in their span.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    field: PrimeField,
    basis: Vec<Vec<u64>>,
    reduced: Matrix,
    pivots: Vec<usize>,
    // transform * basis = reduced
    transform: Matrix,
}

impl SpanBasis {
    /// Uses the reduced row echelon rows of the span of `vectors` as basis.
    pub fn from_spanning(field: PrimeField, ambient: usize, vectors: &[Vec<u64>]) -> Self {
        let m = if vectors.is_empty() {
            Matrix::zeros(field, 0, ambient)
        } else {
            Matrix::from_rows(field, vectors).expect("uniform length")
        };
        let rref = m.rref();
        let basis: Vec<Vec<u64>> = (0..rref.rank).map(|i| rref.reduced.row(i).to_vec()).collect();
        Self::from_independent(field, ambient, basis).expect("rref rows are independent")
    }

    /// Keeps `basis` as given. Fails if the vectors are dependent.
    pub fn from_independent(field: PrimeField, ambient: usize, basis: Vec<Vec<u64>>) -> Option<Self> {
        let d = basis.len();
        if basis.iter().any(|b| b.len() != ambient) {
            return None;
        }
        let mut aug = Matrix::zeros(field, d, ambient + d);
        for (i, b) in basis.iter().enumerate() {
            for (j, &x) in b.iter().enumerate() {
                aug.data[i * (ambient + d) + j] = field.reduce(x);
            }
            aug.data[i * (ambient + d) + ambient + i] = 1;
        }
        let pivots = aug.rref_in_place(ambient);
        if pivots.len() != d {
            return None;
        }
        let mut reduced = Matrix::zeros(field, d, ambient);
        let mut transform = Matrix::zeros(field, d, d);
        for i in 0..d {
            let row = aug.row(i);
            reduced.data[i * ambient..(i + 1) * ambient].copy_from_slice(&row[..ambient]);
            transform.data[i * d..(i + 1) * d].copy_from_slice(&row[ambient..]);
        }
        let basis = basis
            .into_iter()
            .map(|b| b.into_iter().map(|x| field.reduce(x)).collect())
            .collect();
        Some(SpanBasis {
            field,
            basis,
            reduced,
            pivots,
            transform,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.reduced.cols
    }

    pub fn vectors(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` against the basis, or `None` if `v` is outside
    /// the span.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        if v.len() != self.ambient() {
            return None;
        }
        let f = self.field;
        let lead: Vec<u64> = self.pivots.iter().map(|&c| f.reduce(v[c])).collect();
        let mut residual: Vec<u64> = v.iter().map(|&x| f.reduce(x)).collect();
        for (r, &c) in lead.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut residual, f.neg(c), self.reduced.row(r));
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        // lead^T * transform gives coordinates against `basis`.
        let d = self.dim();
        let mut out = vec![0; d];
        for (r, &c) in lead.iter().enumerate() {
            f.axpy(&mut out, c, &self.transform.data[r * d..(r + 1) * d]);
        }
        Some(out)
    }

    /// Coordinates of a vector known to lie in the span, given only its
    /// entries at the pivot columns.
    pub fn coords_from_pivots(&self, lead: &[u64]) -> Vec<u64> {
        let d = self.dim();
        let mut out = vec![0; d];
        for (r, &c) in lead.iter().enumerate() {
            self.field.axpy(&mut out, c, &self.transform.data[r * d..(r + 1) * d]);
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.coords(v).is_some()
    }

    /// `sum coords[t] * basis[t]`.
    pub fn combine(&self, coords: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.ambient()];
        for (c, b) in coords.iter().zip(&self.basis) {
            self.field.axpy(&mut out, *c, b);
        }
        out
    }
}

//! Prime field arithmetic on `u64` residues.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted. Keeps `a + b` and `a * b` inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// The prime field `F_p` for an odd prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= MAX_MODULUS || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::DivisionByZero(self.p));
        }
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.from_i64(t0))
    }

    /// Whether `p^2 * terms` fits in a `u64`, so dot products of that length
    /// can be accumulated without intermediate reduction.
    #[inline]
    pub(crate) fn lazy_dot_ok(&self, terms: usize) -> bool {
        let sq = (self.p - 1) * (self.p - 1);
        sq.checked_mul(terms as u64 + 1).is_some()
    }

    /// Dot product of two residue slices.
    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        debug_assert_eq!(a.len(), b.len());
        if self.lazy_dot_ok(a.len()) {
            let s: u64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            s % self.p
        } else {
            a.iter()
                .zip(b)
                .fold(0, |acc, (x, y)| self.add(acc, self.mul(*x, *y)))
        }
    }

    /// `dst += c * src`, entrywise.
    #[inline]
    pub fn axpy(&self, dst: &mut [u64], c: u64, src: &[u64]) {
        if c == 0 {
            return;
        }
        for (d, s) in dst.iter_mut().zip(src) {
            *d = (*d + c * s) % self.p;
        }
    }

    pub fn scale(&self, v: &mut [u64], c: u64) {
        for x in v.iter_mut() {
            *x = self.mul(*x, c);
        }
    }

    pub fn element(&self, value: u64) -> Fp {
        Fp {
            value: value % self.p,
            field: *self,
        }
    }
}

/// Trial division. Moduli are below 2^31 so this is at most ~46k divisions.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A residue tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    field: PrimeField,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

impl Fp {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Applies `op` to `self` (and `other` for the binary operations).
    /// Unary operations ignore `other`.
    pub fn apply(self, op: FieldOp, other: Fp) -> Result<Fp> {
        let f = self.field;
        if matches!(op, FieldOp::Add | FieldOp::Sub | FieldOp::Mul) && other.field != f {
            return Err(Error::ParentMismatch);
        }
        let value = match op {
            FieldOp::Add => f.add(self.value, other.value),
            FieldOp::Sub => f.sub(self.value, other.value),
            FieldOp::Mul => f.mul(self.value, other.value),
            FieldOp::Neg => f.neg(self.value),
            FieldOp::Inv => f.inv(self.value)?,
        };
        Ok(Fp { value, field: f })
    }

    pub fn inv(self) -> Result<Fp> {
        self.apply(FieldOp::Inv, self)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.field.p)
    }
}

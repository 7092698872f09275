//! The prime field F_p with word-sized residues.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported characteristic. Products of two residues fit in a `u64`.
pub const MAX_CHARACTERISTIC: u64 = (1 << 31) - 1;

/// A field element, always stored as the least non-negative residue.
pub type Coeff = u32;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    /// Builds F_p, rejecting composite or out-of-range characteristics.
    pub fn new(p: u64) -> Result<Self> {
        if !(2..=MAX_CHARACTERISTIC).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into the canonical range.
    pub fn from_i64(&self, v: i64) -> Coeff {
        v.rem_euclid(self.p as i64) as Coeff
    }

    pub fn from_u64(&self, v: u64) -> Coeff {
        (v % self.p as u64) as Coeff
    }

    #[inline]
    pub fn add(&self, a: Coeff, b: Coeff) -> Coeff {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as Coeff
        } else {
            s as Coeff
        }
    }

    #[inline]
    pub fn sub(&self, a: Coeff, b: Coeff) -> Coeff {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Coeff) -> Coeff {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: Coeff, b: Coeff) -> Coeff {
        ((a as u64 * b as u64) % self.p as u64) as Coeff
    }

    pub fn pow(&self, mut base: Coeff, mut exp: u64) -> Coeff {
        let mut acc: Coeff = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `a` must be nonzero.
    pub fn inv(&self, a: Coeff) -> Coeff {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    /// A square root of `a`, if one exists (Tonelli-Shanks).
    pub fn sqrt(&self, a: Coeff) -> Option<Coeff> {
        let p = self.p as u64;
        if a == 0 || p == 2 {
            return Some(a);
        }
        if self.pow(a, (p - 1) / 2) != 1 {
            return None;
        }
        let (mut q, mut s) = (p - 1, 0u32);
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..self.p)
            .find(|&z| self.pow(z, (p - 1) / 2) == p as u32 - 1)
            .expect("non-residue exists");
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    /// Signed representative in (-p/2, p/2], used only for pretty output.
    pub fn centered(&self, a: Coeff) -> i64 {
        if a as u64 > self.p as u64 / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

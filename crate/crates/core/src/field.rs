//! Arithmetic in the prime field F_p.
//!
//! Scalars are plain `u32` residues in `[0, p)`; the [`Prime`] value acts as
//! the field context and carries out every operation on them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue in `[0, p)`. Which `p` is tracked by the surrounding value.
pub type Scalar = u32;

/// Largest prime accepted unless a caller supplies its own ceiling.
pub const DEFAULT_MAX_P: u32 = 97;

/// An odd prime, used as the field context for all modular arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        Self::with_ceiling(p, DEFAULT_MAX_P)
    }

    pub fn with_ceiling(p: u32, ceiling: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > ceiling {
            return Err(Error::PrimeTooLarge { p, ceiling });
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn reduce(self, x: u64) -> Scalar {
        (x % self.0 as u64) as Scalar
    }

    #[inline]
    pub fn reduce_i64(self, x: i64) -> Scalar {
        x.rem_euclid(self.0 as i64) as Scalar
    }

    #[inline]
    pub fn add(self, x: Scalar, y: Scalar) -> Scalar {
        let s = x + y;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, x: Scalar, y: Scalar) -> Scalar {
        if x >= y {
            x - y
        } else {
            x + self.0 - y
        }
    }

    #[inline]
    pub fn neg(self, x: Scalar) -> Scalar {
        if x == 0 {
            0
        } else {
            self.0 - x
        }
    }

    #[inline]
    pub fn mul(self, x: Scalar, y: Scalar) -> Scalar {
        ((x as u64 * y as u64) % self.0 as u64) as Scalar
    }

    pub fn pow(self, base: Scalar, mut exp: u64) -> Scalar {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// `x^(p-2)`: the inverse of a nonzero residue, and 0 for `x = 0`.
    ///
    /// The closed-form solution formulas multiply by `j^(p-2)` and rely on the
    /// vanishing at `j = 0`.
    pub fn fermat_inv(self, x: Scalar) -> Scalar {
        self.pow(x, self.0 as u64 - 2)
    }

    /// Signed integer with `|value| <= (p-1)/2` congruent to `x`.
    pub fn centered(self, x: Scalar) -> i64 {
        let x = x as i64;
        let p = self.0 as i64;
        if x > p / 2 {
            x - p
        } else {
            x
        }
    }

    /// Binomial coefficient `C(n, k) mod p` (zero when `k > n`), via Lucas' theorem.
    pub fn binom(self, mut n: u64, mut k: u64) -> Scalar {
        if k > n {
            return 0;
        }
        let p = self.0 as u64;
        let mut acc = 1;
        while n > 0 || k > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            acc = self.mul(acc, self.small_binom(nd as u32, kd as u32));
            n /= p;
            k /= p;
        }
        acc
    }

    // n, k < p, so every factor is a unit
    fn small_binom(self, n: u32, k: u32) -> Scalar {
        let k = k.min(n - k);
        let mut num = 1;
        let mut den = 1;
        for i in 0..k {
            num = self.mul(num, n - i);
            den = self.mul(den, i + 1);
        }
        self.mul(num, self.fermat_inv(den))
    }

    /// `(-1)^e` as a residue.
    #[inline]
    pub fn sign(self, e: u64) -> Scalar {
        if e.is_multiple_of(2) {
            1
        } else {
            self.0 - 1
        }
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = u32::deserialize(d)?;
        Prime::with_ceiling(raw, u32::MAX).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact binomial coefficient over the integers; `None` on overflow.
pub fn binom_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

//! The group algebra F_p[G] for G = <g> cyclic of order p.
//!
//! Elements are dense coefficient vectors in the basis `1, g, ..., g^(p-1)`.
//! Besides the ring operations this module provides the inversion
//! automorphism `g -> g^-1`, the augmentation, and factorization with respect
//! to the ideal generated by `g - 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{binom_exact, Prime, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupAlgebraElement {
    p: Prime,
    coeffs: Vec<Scalar>,
}

/// `x = (g-1)^k * btilde`, with `btilde` a unit whenever `k < p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub k: usize,
    pub btilde: GroupAlgebraElement,
}

impl GroupAlgebraElement {
    pub fn zero(p: Prime) -> Self {
        Self {
            p,
            coeffs: vec![0; p.as_usize()],
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::monomial(p, 0, 1)
    }

    /// `c * g^i`, with `i` taken mod p.
    pub fn monomial(p: Prime, i: usize, c: Scalar) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[i % p.as_usize()] = c % p.get();
        x
    }

    /// The group element `g^i`.
    pub fn g_pow(p: Prime, i: usize) -> Self {
        Self::monomial(p, i, 1)
    }

    pub fn from_coeffs(p: Prime, coeffs: Vec<Scalar>) -> Result<Self> {
        if coeffs.len() != p.as_usize() {
            return Err(Error::Length {
                expected: p.as_usize(),
                got: coeffs.len(),
            });
        }
        let coeffs = coeffs.into_iter().map(|c| c % p.get()).collect();
        Ok(Self { p, coeffs })
    }

    pub fn from_signed(p: Prime, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(p, coeffs.iter().map(|&c| p.reduce_i64(c)).collect())
    }

    /// The element whose coefficient vector is the base-p expansion of `index`,
    /// most significant digit first. Indices `0..p^p` enumerate F_pG in
    /// lexicographic order of coefficient vectors.
    pub fn from_index(p: Prime, mut index: u64) -> Self {
        let n = p.as_usize();
        let mut coeffs = vec![0; n];
        for slot in coeffs.iter_mut().rev() {
            *slot = (index % p.get() as u64) as Scalar;
            index /= p.get() as u64;
        }
        Self { p, coeffs }
    }

    pub fn index(&self) -> u64 {
        self.coeffs
            .iter()
            .fold(0u64, |acc, &c| acc * self.p.get() as u64 + c as u64)
    }

    /// Number of elements of F_pG, if it fits in a `u64`.
    pub fn cardinality(p: Prime) -> Option<u64> {
        (p.get() as u64).checked_pow(p.get())
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs[i % self.coeffs.len()]
    }

    pub fn set_coeff(&mut self, i: usize, c: Scalar) {
        let n = self.coeffs.len();
        self.coeffs[i % n] = c % self.p.get();
    }

    pub fn add_to_coeff(&mut self, i: usize, c: Scalar) {
        let n = self.coeffs.len();
        let slot = &mut self.coeffs[i % n];
        *slot = self.p.add(*slot, c % self.p.get());
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p.get(),
                right: other.p.get(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| p.add(x, y))
            .collect();
        Ok(Self { p, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&x, &y)| p.sub(x, y))
            .collect();
        Ok(Self { p, coeffs })
    }

    /// Cyclic convolution of the coefficient vectors.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let n = self.coeffs.len();
        let mut acc = vec![0u64; n];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                let l = if i + j >= n { i + j - n } else { i + j };
                acc[l] += x as u64 * y as u64;
            }
            // keep the accumulators far from overflow for large p
            if i % 1024 == 1023 {
                acc.iter_mut().for_each(|a| *a %= self.p.get() as u64);
            }
        }
        Ok(Self {
            p: self.p,
            coeffs: acc.into_iter().map(|a| self.p.reduce(a)).collect(),
        })
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let p = self.p;
        Self {
            p,
            coeffs: self.coeffs.iter().map(|&x| p.mul(x, c % p.get())).collect(),
        }
    }

    /// Multiplication by the group element `g^i`.
    pub fn shift(&self, i: usize) -> Self {
        let n = self.coeffs.len();
        let i = i % n;
        let mut coeffs = vec![0; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[(i + j) % n] = c;
        }
        Self { p: self.p, coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The automorphism induced by `g -> g^-1`.
    pub fn sigma(&self) -> Self {
        let n = self.coeffs.len();
        let coeffs = (0..n).map(|i| self.coeffs[(n - i) % n]).collect();
        Self { p: self.p, coeffs }
    }

    /// Sum of the coefficients.
    pub fn augmentation(&self) -> Scalar {
        self.p
            .reduce(self.coeffs.iter().map(|&c| c as u64).sum::<u64>())
    }

    /// `(g - 1)^k`.
    pub fn gminus1_pow(p: Prime, k: usize) -> Self {
        // (g-1)^k = sum_j C(k,j) (-1)^(k-j) g^j
        let mut x = Self::zero(p);
        if k >= p.as_usize() {
            return x;
        }
        for j in 0..=k {
            let c = p.mul(binom_mod(p, k, j), p.sign((k - j) as u64));
            x.coeffs[j] = c;
        }
        x
    }

    /// Coordinates `z` with `self = sum_i z_i (g-1)^i`.
    pub fn to_gminus1_basis(&self) -> Vec<Scalar> {
        // g^j = (1 + (g-1))^j = sum_i C(j,i) (g-1)^i
        let p = self.p;
        let n = p.as_usize();
        let mut z = vec![0; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, zi) in z.iter_mut().enumerate().take(j + 1) {
                *zi = p.add(*zi, p.mul(c, binom_mod(p, j, i)));
            }
        }
        z
    }

    pub fn from_gminus1_basis(p: Prime, z: &[Scalar]) -> Result<Self> {
        if z.len() != p.as_usize() {
            return Err(Error::Length {
                expected: p.as_usize(),
                got: z.len(),
            });
        }
        let mut x = Self::zero(p);
        for (i, &zi) in z.iter().enumerate() {
            if zi != 0 {
                x = &x + &Self::gminus1_pow(p, i).scale(zi);
            }
        }
        Ok(x)
    }

    /// The unique `(k, btilde)` with `self = (g-1)^k btilde` and
    /// `augmentation(btilde) != 0`; `(p, 1)` for the zero element.
    pub fn gminus1_factor(&self) -> Factorization {
        let p = self.p;
        let z = self.to_gminus1_basis();
        match z.iter().position(|&c| c != 0) {
            None => Factorization {
                k: p.as_usize(),
                btilde: Self::one(p),
            },
            Some(k) => {
                let mut shifted = vec![0; p.as_usize()];
                shifted[..p.as_usize() - k].copy_from_slice(&z[k..]);
                let btilde =
                    Self::from_gminus1_basis(p, &shifted).expect("coordinate vector has length p");
                Factorization { k, btilde }
            }
        }
    }

    /// Multiplicative inverse, found by solving the circulant system
    /// `self * y = 1` over F_p.
    pub fn invert(&self) -> Result<Self> {
        if self.augmentation() == 0 {
            return Err(Error::NotAUnit);
        }
        let p = self.p;
        let n = p.as_usize();
        // column j of the multiplication matrix is self * g^j
        let mut rows: Vec<Vec<Scalar>> = (0..n)
            .map(|l| {
                let mut row: Vec<Scalar> = (0..n).map(|j| self.coeffs[(l + n - j) % n]).collect();
                row.push(u32::from(l == 0));
                row
            })
            .collect();
        let y = solve_augmented(p, &mut rows).ok_or(Error::NotAUnit)?;
        Ok(Self { p, coeffs: y })
    }

    /// Iterator over all p^p elements in lexicographic order.
    pub fn all(p: Prime) -> impl Iterator<Item = Self> {
        let total = Self::cardinality(p).expect("F_pG too large to enumerate");
        (0..total).map(move |i| Self::from_index(p, i))
    }

    /// Display with coefficients taken in `(-p/2, p/2)`, e.g. `-1 + g + g^2`.
    pub fn signed(&self) -> SignedDisplay<'_> {
        SignedDisplay(self)
    }

    /// Parse the textual grammar `c0 + c1*g + ... + c*g^k`.
    ///
    /// Accepts signed terms (`-1+g+g^2`), omitted unit coefficients, an
    /// optional `*` between coefficient and `g`, and arbitrary whitespace.
    /// Coefficients and exponents are reduced mod p.
    pub fn parse(p: Prime, input: &str) -> Result<Self> {
        Parser::new(p, input).parse()
    }
}

fn binom_mod(p: Prime, n: usize, k: usize) -> Scalar {
    match binom_exact(n as u64, k as u64) {
        Some(v) => (v % p.get() as u128) as Scalar,
        None => p.binom(n as u64, k as u64),
    }
}

/// Gauss-Jordan elimination on an `n x (n+1)` augmented system over F_p.
/// Returns `None` when the system is singular.
pub(crate) fn solve_augmented(p: Prime, rows: &mut [Vec<Scalar>]) -> Option<Vec<Scalar>> {
    let n = rows.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| rows[r][col] != 0)?;
        rows.swap(col, pivot);
        let inv = p.fermat_inv(rows[col][col]);
        for x in rows[col].iter_mut() {
            *x = p.mul(*x, inv);
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = p.sub(*x, p.mul(factor, y));
            }
        }
    }
    Some(rows.iter().map(|r| r[n]).collect())
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&GroupAlgebraElement> for &GroupAlgebraElement {
            type Output = GroupAlgebraElement;
            /// Panics when the operands live over different primes; use the
            /// `try_` method to get an error instead.
            fn $method(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
                self.$inner(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<GroupAlgebraElement> for GroupAlgebraElement {
            type Output = GroupAlgebraElement;
            fn $method(self, rhs: GroupAlgebraElement) -> GroupAlgebraElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&GroupAlgebraElement> for GroupAlgebraElement {
            type Output = GroupAlgebraElement;
            fn $method(self, rhs: &GroupAlgebraElement) -> GroupAlgebraElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn neg(self) -> GroupAlgebraElement {
        let p = self.p;
        GroupAlgebraElement {
            p,
            coeffs: self.coeffs.iter().map(|&c| p.neg(c)).collect(),
        }
    }
}

impl Neg for GroupAlgebraElement {
    type Output = GroupAlgebraElement;
    fn neg(self) -> GroupAlgebraElement {
        -&self
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, x: &GroupAlgebraElement, signed: bool) -> fmt::Result {
    let mut first = true;
    for (i, &c) in x.coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (negative, mag) = if signed {
            let s = x.p.centered(c);
            (s < 0, s.unsigned_abs())
        } else {
            (false, c as u64)
        };
        match (first, negative) {
            (true, true) => f.write_str("-")?,
            (true, false) => {}
            (false, true) => f.write_str(" - ")?,
            (false, false) => f.write_str(" + ")?,
        }
        first = false;
        match (i, mag) {
            (0, m) => write!(f, "{m}")?,
            (1, 1) => f.write_str("g")?,
            (1, m) => write!(f, "{m}*g")?,
            (i, 1) => write!(f, "g^{i}")?,
            (i, m) => write!(f, "{m}*g^{i}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self, false)
    }
}

pub struct SignedDisplay<'a>(&'a GroupAlgebraElement);

impl fmt::Display for SignedDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.0, true)
    }
}

struct Parser<'a> {
    p: Prime,
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(p: Prime, input: &'a str) -> Self {
        Self {
            p,
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            input: self.input.to_string(),
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<Option<u64>> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        self.input[start..self.pos]
            .parse::<u64>()
            .map(Some)
            .map_err(|_| {
                self.pos = start;
                self.err("integer literal too large")
            })
    }

    fn parse(mut self) -> Result<GroupAlgebraElement> {
        let mut x = GroupAlgebraElement::zero(self.p);
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty expression"));
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let negative = match self.peek() {
                Some(b'+') if !first => {
                    self.pos += 1;
                    false
                }
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(_) if first => false,
                Some(_) => return Err(self.err("expected '+' or '-'")),
                None => break,
            };
            first = false;
            self.skip_ws();
            let (exp, coeff) = self.term()?;
            let c = self.p.reduce(coeff);
            let c = if negative { self.p.neg(c) } else { c };
            x.add_to_coeff((exp % self.p.get() as u64) as usize, c);
        }
        Ok(x)
    }

    // term := number | number '*'? g ('^' number)? | g ('^' number)?
    fn term(&mut self) -> Result<(u64, u64)> {
        let coeff = self.number()?;
        let mut star = false;
        if coeff.is_some() {
            let before = self.pos;
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                star = true;
                self.skip_ws();
            } else {
                self.pos = before;
            }
        }
        if self.peek() == Some(b'g') {
            self.pos += 1;
            self.skip_ws();
            let exp = if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                self.number()?
                    .ok_or_else(|| self.err("expected exponent after '^'"))?
            } else {
                1
            };
            Ok((exp, coeff.unwrap_or(1)))
        } else if star {
            Err(self.err("expected 'g' after '*'"))
        } else {
            coeff
                .map(|c| (0, c))
                .ok_or_else(|| self.err("expected a coefficient or 'g'"))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ElementJson {
    p: u32,
    coeffs: Vec<Scalar>,
}

impl Serialize for GroupAlgebraElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ElementJson {
            p: self.p.get(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupAlgebraElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ElementJson::deserialize(d)?;
        let p = Prime::with_ceiling(raw.p, u32::MAX).map_err(D::Error::custom)?;
        if raw.coeffs.iter().any(|&c| c >= p.get()) {
            return Err(D::Error::custom("coefficient not reduced mod p"));
        }
        GroupAlgebraElement::from_coeffs(p, raw.coeffs).map_err(D::Error::custom)
    }
}


/// Serde helpers that write elements as bare coefficient arrays.
pub mod as_coeffs {
    use super::GroupAlgebraElement;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(x: &GroupAlgebraElement, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(x.coeffs())
    }

    pub fn serialize_vec<S: Serializer>(
        xs: &[GroupAlgebraElement],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(x.coeffs())?;
        }
        seq.end()
    }
}

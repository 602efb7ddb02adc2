//! The transvection action of G on V = F_p^2 and the small modules built
//! from V that the PBW conditions take values in.
//!
//! `g^i` acts by `v1 -> v1`, `v2 -> i*v1 + v2`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{Prime, Scalar};
use crate::group_algebra::GroupAlgebraElement;

/// `x1*v1 + x2*v2`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct Vector {
    pub x1: Scalar,
    pub x2: Scalar,
}

impl Vector {
    pub const V1: Vector = Vector { x1: 1, x2: 0 };
    pub const V2: Vector = Vector { x1: 0, x2: 1 };
    pub const ZERO: Vector = Vector { x1: 0, x2: 0 };

    pub fn new(p: Prime, x1: Scalar, x2: Scalar) -> Self {
        Vector {
            x1: x1 % p.get(),
            x2: x2 % p.get(),
        }
    }

    pub fn basis() -> [Vector; 2] {
        [Self::V1, Self::V2]
    }

    pub fn is_zero(self) -> bool {
        self.x1 == 0 && self.x2 == 0
    }

    pub fn add(self, p: Prime, o: Vector) -> Vector {
        Vector {
            x1: p.add(self.x1, o.x1),
            x2: p.add(self.x2, o.x2),
        }
    }

    pub fn sub(self, p: Prime, o: Vector) -> Vector {
        Vector {
            x1: p.sub(self.x1, o.x1),
            x2: p.sub(self.x2, o.x2),
        }
    }

    pub fn scale(self, p: Prime, c: Scalar) -> Vector {
        Vector {
            x1: p.mul(self.x1, c),
            x2: p.mul(self.x2, c),
        }
    }

    /// The determinant of the 2x2 matrix with columns `self`, `o`.
    pub fn det(self, p: Prime, o: Vector) -> Scalar {
        p.sub(p.mul(self.x1, o.x2), p.mul(self.x2, o.x1))
    }
}

/// `^{g^i} v`.
pub fn act(p: Prime, i: usize, v: Vector) -> Vector {
    let i = (i % p.as_usize()) as Scalar;
    Vector {
        x1: p.add(v.x1, p.mul(i, v.x2)),
        x2: v.x2,
    }
}

/// Matrix of `g^i` in the basis `v1, v2`, row major.
pub fn action_matrix(p: Prime, i: usize) -> [[Scalar; 2]; 2] {
    let a = act(p, i, Vector::V1);
    let b = act(p, i, Vector::V2);
    [[a.x1, b.x1], [a.x2, b.x2]]
}

/// An element of `V (x) F_pG`: `v1 (x) v1_part + v2 (x) v2_part`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VGroupElement {
    pub v1: GroupAlgebraElement,
    pub v2: GroupAlgebraElement,
}

impl VGroupElement {
    pub fn zero(p: Prime) -> Self {
        Self {
            v1: GroupAlgebraElement::zero(p),
            v2: GroupAlgebraElement::zero(p),
        }
    }

    pub fn new(v1: GroupAlgebraElement, v2: GroupAlgebraElement) -> Result<Self> {
        v1.try_sub(&v2)?;
        Ok(Self { v1, v2 })
    }

    /// `v (x) x`.
    pub fn tensor(v: Vector, x: &GroupAlgebraElement) -> Self {
        Self {
            v1: x.scale(v.x1),
            v2: x.scale(v.x2),
        }
    }

    pub fn prime(&self) -> Prime {
        self.v1.prime()
    }

    pub fn is_zero(&self) -> bool {
        self.v1.is_zero() && self.v2.is_zero()
    }

    /// The coefficient vector of `g^m`.
    pub fn column(&self, m: usize) -> Vector {
        Vector {
            x1: self.v1.coeff(m),
            x2: self.v2.coeff(m),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            v1: &self.v1 + &o.v1,
            v2: &self.v2 + &o.v2,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            v1: &self.v1 - &o.v1,
            v2: &self.v2 - &o.v2,
        }
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Self {
            v1: self.v1.scale(c),
            v2: self.v2.scale(c),
        }
    }

    /// Right multiplication of the group part by `x`.
    pub fn mul_group(&self, x: &GroupAlgebraElement) -> Self {
        Self {
            v1: &self.v1 * x,
            v2: &self.v2 * x,
        }
    }
}

/// `^{g^h} x`, acting on the V factor of every column.
pub fn act_ga(x: &VGroupElement, h: usize) -> VGroupElement {
    let p = x.prime();
    let h = (h % p.as_usize()) as Scalar;
    VGroupElement {
        v1: &x.v1 + &x.v2.scale(h),
        v2: x.v2.clone(),
    }
}

/// An element of `S^2(V) (x) F_pG` in the monomial basis `v1^2, v1*v2, v2^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quad2GroupElement {
    pub v1v1: GroupAlgebraElement,
    pub v1v2: GroupAlgebraElement,
    pub v2v2: GroupAlgebraElement,
}

impl Quad2GroupElement {
    pub fn zero(p: Prime) -> Self {
        Self {
            v1v1: GroupAlgebraElement::zero(p),
            v1v2: GroupAlgebraElement::zero(p),
            v2v2: GroupAlgebraElement::zero(p),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v1v1.is_zero() && self.v1v2.is_zero() && self.v2v2.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            v1v1: &self.v1v1 + &o.v1v1,
            v1v2: &self.v1v2 + &o.v1v2,
            v2v2: &self.v2v2 + &o.v2v2,
        }
    }

    /// Multiplication of the group part by `g^m`.
    pub fn shift(&self, m: usize) -> Self {
        Self {
            v1v1: self.v1v1.shift(m),
            v1v2: self.v1v2.shift(m),
            v2v2: self.v2v2.shift(m),
        }
    }
}

/// The commutative product `u*w` in `S(V)`, placed at the identity of G.
pub fn sym_mul(p: Prime, u: Vector, w: Vector) -> Quad2GroupElement {
    let cross = p.add(p.mul(u.x1, w.x2), p.mul(u.x2, w.x1));
    Quad2GroupElement {
        v1v1: GroupAlgebraElement::monomial(p, 0, p.mul(u.x1, w.x1)),
        v1v2: GroupAlgebraElement::monomial(p, 0, cross),
        v2v2: GroupAlgebraElement::monomial(p, 0, p.mul(u.x2, w.x2)),
    }
}

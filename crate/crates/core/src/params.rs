//! Deformation parameters `(lambda, kappa)` and their constructions.
//!
//! `lambda` is stored on pairs `(g^i, v_j)`; `kappa = kappa^C + kappa^L` is
//! stored by its value on `(v1, v2)` and extended antisymmetrically.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::action::{VGroupElement, Vector};
use crate::error::{Error, Result};
use crate::field::{Prime, Scalar};
use crate::group_algebra::GroupAlgebraElement;

type Ga = GroupAlgebraElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeformationParams {
    p: Prime,
    /// `lambda[i] = [lambda(g^i, v1), lambda(g^i, v2)]`.
    pub lambda: Vec<[Ga; 2]>,
    /// `kappa^C(v1, v2)`.
    pub kappa_c: Ga,
    /// `kappa^L(v1, v2)`.
    pub kappa_l: VGroupElement,
}

/// A linear map `f: V -> F_pG`, given by `f(v1)` and `f(v2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoboundaryData {
    pub f1: Ga,
    pub f2: Ga,
}

impl CoboundaryData {
    pub fn zero(p: Prime) -> Self {
        Self {
            f1: Ga::zero(p),
            f2: Ga::zero(p),
        }
    }
}

/// Result of matching parameters against the candidate shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateMatch {
    Candidate { a: Ga, b: Ga },
    NotOfCandidateForm,
}

impl DeformationParams {
    pub fn zero(p: Prime) -> Self {
        Self {
            p,
            lambda: (0..p.as_usize())
                .map(|_| [Ga::zero(p), Ga::zero(p)])
                .collect(),
            kappa_c: Ga::zero(p),
            kappa_l: VGroupElement::zero(p),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `lambda(g^i, v)`, linear in `v`.
    pub fn lambda_at(&self, i: usize, v: Vector) -> Ga {
        let [l1, l2] = &self.lambda[i % self.p.as_usize()];
        &l1.scale(v.x1) + &l2.scale(v.x2)
    }

    /// `lambda(x, v)` for `x` in F_pG, extended linearly in `x`.
    pub fn lambda_ext(&self, x: &Ga, v: Vector) -> Ga {
        let p = self.p;
        let mut acc = vec![0u64; p.as_usize()];
        for (i, &c) in x.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            let [l1, l2] = &self.lambda[i];
            for (m, slot) in acc.iter_mut().enumerate() {
                let t = p.add(p.mul(l1.coeff(m), v.x1), p.mul(l2.coeff(m), v.x2));
                *slot += c as u64 * t as u64;
            }
        }
        Ga::from_coeffs(p, acc.into_iter().map(|a| p.reduce(a)).collect()).expect("length p")
    }

    /// `kappa^C(u, w) = det[u w] * kappa^C(v1, v2)`.
    pub fn kappa_c_on(&self, u: Vector, w: Vector) -> Ga {
        self.kappa_c.scale(u.det(self.p, w))
    }

    /// `kappa^L(u, w) = det[u w] * kappa^L(v1, v2)`.
    pub fn kappa_l_on(&self, u: Vector, w: Vector) -> VGroupElement {
        self.kappa_l.scale(u.det(self.p, w))
    }

    /// True when `lambda(1, v) = 0` for both basis vectors.
    pub fn identity_lambda_vanishes(&self) -> bool {
        self.lambda[0].iter().all(Ga::is_zero)
    }

    pub fn with_kappa_c(mut self, kappa_c: Ga) -> Self {
        self.kappa_c = kappa_c;
        self
    }

    /// Recover `(a, b)` when these parameters have exactly the candidate shape
    /// (with any `kappa^C`).
    pub fn to_ab(&self) -> CandidateMatch {
        let p = self.p;
        let b = self.lambda[1][0].shift(p.as_usize() - 1);
        let mut a = self.lambda[1][1].shift(p.as_usize() - 1);
        if a.coeff(0) != 0 {
            return CandidateMatch::NotOfCandidateForm;
        }
        a.set_coeff(0, self.kappa_l.v1.coeff(0));
        let rebuilt = build_candidate(&a, &b).map(|c| c.with_kappa_c(self.kappa_c.clone()));
        match rebuilt {
            Ok(r) if &r == self => CandidateMatch::Candidate { a, b },
            _ => CandidateMatch::NotOfCandidateForm,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ParamsJson::from(self)).expect("serializable")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&ParamsJson::from(self)).expect("serializable")
    }

    /// Load parameters from JSON. Elements may be coefficient arrays or
    /// strings in the textual grammar; unknown fields are ignored.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: ParamsJson =
            serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        raw.into_params()
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let raw: ParamsJson =
            serde_json::from_value(v).map_err(|e| Error::Malformed(e.to_string()))?;
        raw.into_params()
    }

    /// Stable line-oriented rendering.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p = {}", self.p);
        for (i, [l1, l2]) in self.lambda.iter().enumerate() {
            let _ = writeln!(out, "lambda(g^{i}, v1) = {}", l1.signed());
            let _ = writeln!(out, "lambda(g^{i}, v2) = {}", l2.signed());
        }
        let _ = writeln!(out, "kappaC(v1, v2) = {}", self.kappa_c.signed());
        let _ = writeln!(
            out,
            "kappaL(v1, v2) = v1 (x) ({}) + v2 (x) ({})",
            self.kappa_l.v1.signed(),
            self.kappa_l.v2.signed()
        );
        out
    }
}

fn check_prime(p: Prime, x: &Ga) -> Result<()> {
    if x.prime() != p {
        return Err(Error::PrimeMismatch {
            left: p.get(),
            right: x.prime().get(),
        });
    }
    Ok(())
}

/// Candidate parameters from `(a, b)`, with `kappa^C = 0`:
///
/// - `lambda(g^i, v1) = i b g^i`
/// - `lambda(g^i, v2) = C(i,2) b g^i + i (sum_{j>=1} a_j g^j) g^i`
/// - `kappa^L(v1, v2) = a_0 v1 + sum_j j b_j v2 g^j`
pub fn build_candidate(a: &Ga, b: &Ga) -> Result<DeformationParams> {
    let p = b.prime();
    check_prime(p, a)?;
    let mut a_tail = a.clone();
    a_tail.set_coeff(0, 0);
    let lambda = (0..p.as_usize())
        .map(|i| {
            let is = i as Scalar;
            let bi = b.shift(i);
            let l1 = bi.scale(is);
            let l2 = &bi.scale(p.binom(i as u64, 2)) + &a_tail.shift(i).scale(is);
            [l1, l2]
        })
        .collect();
    let mut kl2 = Ga::zero(p);
    for j in 1..p.as_usize() {
        kl2.set_coeff(j, p.mul(j as Scalar, b.coeff(j)));
    }
    Ok(DeformationParams {
        p,
        lambda,
        kappa_c: Ga::zero(p),
        kappa_l: VGroupElement {
            v1: Ga::monomial(p, 0, a.coeff(0)),
            v2: kl2,
        },
    })
}

/// Add the coboundary of `f`:
///
/// - `lambda(g^i, v2) += -i f(v1) g^i`
/// - `kappa^L(v1, v2) += sum_j j f_j(v1) v1 g^j`
///
/// `f(v2)` does not contribute.
pub fn add_coboundary(params: &DeformationParams, f: &CoboundaryData) -> Result<DeformationParams> {
    let p = params.p;
    check_prime(p, &f.f1)?;
    check_prime(p, &f.f2)?;
    let mut out = params.clone();
    for (i, slot) in out.lambda.iter_mut().enumerate() {
        let shift = f.f1.shift(i).scale(p.neg(i as Scalar));
        slot[1] = &slot[1] + &shift;
    }
    for j in 1..p.as_usize() {
        out.kappa_l
            .v1
            .add_to_coeff(j, p.mul(j as Scalar, f.f1.coeff(j)));
    }
    Ok(out)
}

/// `mu(d, j) = (-1)^(p-j) sum_{m=1..k} (-1)^(m+1) C(p-m, p-j) d_m`.
pub fn mu(p: Prime, d: &[Scalar], j: usize) -> Scalar {
    let pu = p.as_usize();
    let j = j % pu;
    let mut acc = 0;
    for (idx, &dm) in d.iter().enumerate() {
        let m = idx + 1;
        if m > pu {
            break;
        }
        let term = p.mul(p.binom((pu - m) as u64, (pu - j) as u64), dm % p.get());
        acc = p.add(acc, p.mul(p.sign(m as u64 + 1), term));
    }
    p.mul(p.sign((pu - j) as u64), acc)
}

/// The `a` determined by `b` and a d-vector:
/// `a_0 = d_1 - d_2 + ...`, `a_j = j^(p-2) (mu(d, j) + C(j+1, 2) b_j)`.
pub fn implied_a(b: &Ga, d: &[Scalar]) -> Result<Ga> {
    let p = b.prime();
    let k = b.gminus1_factor().k;
    if d.len() != k {
        return Err(Error::DLengthMismatch { k, got: d.len() });
    }
    let mut a = Ga::zero(p);
    let a0 = d.iter().enumerate().fold(0, |acc, (idx, &dm)| {
        p.add(acc, p.mul(p.sign(idx as u64), dm % p.get()))
    });
    a.set_coeff(0, a0);
    for j in 1..p.as_usize() {
        let inner = p.add(mu(p, d, j), p.mul(p.binom(j as u64 + 1, 2), b.coeff(j)));
        a.set_coeff(j, p.mul(p.fermat_inv(j as Scalar), inner));
    }
    Ok(a)
}

/// The closed-form solution family indexed by `(b, d, kappa^C)`.
pub fn closed_form(b: &Ga, d: &[Scalar], kappa_c: &Ga) -> Result<DeformationParams> {
    check_prime(b.prime(), kappa_c)?;
    let a = implied_a(b, d)?;
    Ok(build_candidate(&a, b)?.with_kappa_c(kappa_c.clone()))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ElemJson {
    Coeffs(Vec<i64>),
    Text(String),
}

impl ElemJson {
    fn from_ga(x: &Ga) -> Self {
        ElemJson::Coeffs(x.coeffs().iter().map(|&c| c as i64).collect())
    }

    fn into_ga(self, p: Prime, field: &str) -> Result<Ga> {
        match self {
            ElemJson::Text(s) => Ga::parse(p, &s),
            ElemJson::Coeffs(c) => {
                if c.len() != p.as_usize() {
                    return Err(Error::Malformed(format!(
                        "{field}: expected {} coefficients, got {}",
                        p,
                        c.len()
                    )));
                }
                if let Some(bad) = c.iter().find(|&&x| x < 0 || x >= p.get() as i64) {
                    return Err(Error::Malformed(format!(
                        "{field}: coefficient {bad} is not a residue mod {p}"
                    )));
                }
                Ga::from_coeffs(p, c.into_iter().map(|x| x as Scalar).collect())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct KappaLJson {
    v1: ElemJson,
    v2: ElemJson,
}

#[derive(Serialize, Deserialize)]
struct ParamsJson {
    p: u32,
    lambda: Vec<[ElemJson; 2]>,
    #[serde(rename = "kappaC")]
    kappa_c: ElemJson,
    #[serde(rename = "kappaL")]
    kappa_l: KappaLJson,
}

impl From<&DeformationParams> for ParamsJson {
    fn from(d: &DeformationParams) -> Self {
        ParamsJson {
            p: d.p.get(),
            lambda: d
                .lambda
                .iter()
                .map(|[a, b]| [ElemJson::from_ga(a), ElemJson::from_ga(b)])
                .collect(),
            kappa_c: ElemJson::from_ga(&d.kappa_c),
            kappa_l: KappaLJson {
                v1: ElemJson::from_ga(&d.kappa_l.v1),
                v2: ElemJson::from_ga(&d.kappa_l.v2),
            },
        }
    }
}

impl ParamsJson {
    fn into_params(self) -> Result<DeformationParams> {
        let p = Prime::with_ceiling(self.p, crate::Guards::from_env().max_p)?;
        if self.lambda.len() != p.as_usize() {
            return Err(Error::Malformed(format!(
                "lambda: expected {} rows, got {}",
                p,
                self.lambda.len()
            )));
        }
        let lambda = self
            .lambda
            .into_iter()
            .enumerate()
            .map(|(i, [x, y])| {
                Ok([
                    x.into_ga(p, &format!("lambda[{i}][0]"))?,
                    y.into_ga(p, &format!("lambda[{i}][1]"))?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DeformationParams {
            p,
            lambda,
            kappa_c: self.kappa_c.into_ga(p, "kappaC")?,
            kappa_l: VGroupElement {
                v1: self.kappa_l.v1.into_ga(p, "kappaL.v1")?,
                v2: self.kappa_l.v2.into_ga(p, "kappaL.v2")?,
            },
        })
    }
}

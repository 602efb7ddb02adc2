//! The condition-(2) system for candidate parameters, its linearization
//! `phi_b(c) = b * sigma(c)` for fixed `b`, kernels, enumeration of all
//! solutions and the census by `(g-1)`-adic class.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{Prime, Scalar};
use crate::group_algebra::{as_coeffs, GroupAlgebraElement};
use crate::guards::Guards;

type Ga = GroupAlgebraElement;

/// `t_j = -C(j+1, 2) b_j + j a_j`, with `t_0 = 0`.
fn t_vector(a: &[Scalar], b: &[Scalar], p: Prime, out: &mut [Scalar]) {
    out[0] = 0;
    for j in 1..out.len() {
        let bj = p.mul(p.binom(j as u64 + 1, 2), b[j]);
        out[j] = p.sub(p.mul(j as Scalar, a[j]), bj);
    }
}

/// The residuals `a_0 b_l + sum_{j+k=l} b_k (-C(j+1,2) b_j + j a_j)` as the
/// coefficients of an element; zero exactly when `(a, b)` solves the system.
pub fn system_residual(a: &Ga, b: &Ga) -> Result<Ga> {
    let p = b.prime();
    a.try_add(b)?;
    let mut t = vec![0; p.as_usize()];
    t_vector(a.coeffs(), b.coeffs(), p, &mut t);
    let t = Ga::from_coeffs(p, t)?;
    Ok(&b.scale(a.coeff(0)) + &(b * &t))
}

/// Scratch-buffer form of [`system_residual`]` == 0` on raw coefficient slices.
pub fn residual_is_zero(p: Prime, a: &[Scalar], b: &[Scalar], scratch: &mut Vec<Scalar>) -> bool {
    let n = p.as_usize();
    scratch.resize(n, 0);
    t_vector(a, b, p, scratch);
    let q = p.get() as u64;
    for l in 0..n {
        let mut acc = a[0] as u64 * b[l] as u64;
        for (k, &bk) in b.iter().enumerate().take(n) {
            let j = if l >= k { l - k } else { l + n - k };
            acc += bk as u64 * scratch[j] as u64;
        }
        if !acc.is_multiple_of(q) {
            return false;
        }
    }
    true
}

/// `c_0 = a_0`, `c_m = -C(j+1,2) b_j + j a_j` for `m + j = p`.
pub fn c_from_ab(a: &Ga, b: &Ga) -> Result<Ga> {
    let p = b.prime();
    a.try_add(b)?;
    let n = p.as_usize();
    let mut t = vec![0; n];
    t_vector(a.coeffs(), b.coeffs(), p, &mut t);
    let mut c = vec![0; n];
    c[0] = a.coeff(0);
    for m in 1..n {
        c[m] = t[n - m];
    }
    Ga::from_coeffs(p, c)
}

/// `a_0 = c_0`, `a_j = j^(p-2) (c_{p-j} + C(j+1,2) b_j)`.
pub fn a_from_c(c: &Ga, b: &Ga) -> Result<Ga> {
    let p = b.prime();
    c.try_add(b)?;
    let n = p.as_usize();
    let mut a = vec![0; n];
    a[0] = c.coeff(0);
    for (j, slot) in a.iter_mut().enumerate().skip(1) {
        let inner = p.add(c.coeff(n - j), p.mul(p.binom(j as u64 + 1, 2), b.coeff(j)));
        *slot = p.mul(p.fermat_inv(j as Scalar), inner);
    }
    Ga::from_coeffs(p, a)
}

/// `phi_b(c) = b * sigma(c)`.
pub fn phi_b(b: &Ga, c: &Ga) -> Result<Ga> {
    b.try_mul(&c.sigma())
}

fn phi_is_zero(p: Prime, b: &[Scalar], c: &[Scalar]) -> bool {
    // (b * sigma(c))_l = sum_k b_k c_{k - l}
    let n = p.as_usize();
    let q = p.get() as u64;
    (0..n).all(|l| {
        let acc: u64 = (0..n)
            .map(|k| b[k] as u64 * c[(k + n - l) % n] as u64)
            .sum();
        acc.is_multiple_of(q)
    })
}

/// `[(g-1)^(p-1), (g-1)^(p-2), ..., (g-1)^(p-k)]` for `k` the class of `b`.
pub fn kernel_basis(b: &Ga) -> Vec<Ga> {
    let p = b.prime();
    let k = b.gminus1_factor().k;
    (1..=k)
        .map(|j| Ga::gminus1_pow(p, p.as_usize() - j))
        .collect()
}

/// `sum_j d_j basis_j`.
pub fn combine(p: Prime, basis: &[Ga], d: &[Scalar]) -> Ga {
    basis
        .iter()
        .zip(d)
        .fold(Ga::zero(p), |acc, (x, &dj)| &acc + &x.scale(dj))
}

/// All coordinate tuples in `F_p^k`, lexicographic with the first entry most
/// significant.
pub fn coordinate_tuples(p: Prime, k: usize) -> impl Iterator<Item = Vec<Scalar>> {
    let q = p.get() as u64;
    let total = q.checked_pow(k as u32).expect("coordinate space too large");
    (0..total).map(move |mut idx| {
        let mut d = vec![0; k];
        for slot in d.iter_mut().rev() {
            *slot = (idx % q) as Scalar;
            idx /= q;
        }
        d
    })
}

/// Every element of the span of `basis`, ordered by coordinates.
pub fn span(p: Prime, basis: &[Ga]) -> Vec<Ga> {
    coordinate_tuples(p, basis.len())
        .map(|d| combine(p, basis, &d))
        .collect()
}

/// `{c : phi_b(c) = 0}` by sweeping all of F_pG, in lexicographic order.
pub fn kernel_bruteforce(b: &Ga) -> Result<Vec<Ga>> {
    kernel_bruteforce_with(b, &Guards::from_env())
}

pub fn kernel_bruteforce_with(b: &Ga, guards: &Guards) -> Result<Vec<Ga>> {
    let p = b.prime();
    guards.kernel(p, "kernel sweep")?;
    let total = Ga::cardinality(p).ok_or(Error::TooLarge {
        what: "kernel sweep",
        p: p.get(),
        limit: guards.kernel_max_p,
    })?;
    let mut out = Vec::new();
    let mut c = Ga::zero(p);
    for idx in 0..total {
        c = next_or_index(c, p, idx);
        if phi_is_zero(p, b.coeffs(), c.coeffs()) {
            out.push(c.clone());
        }
    }
    Ok(out)
}

// odometer increment; cheaper than rebuilding from the index
fn next_or_index(mut c: Ga, p: Prime, idx: u64) -> Ga {
    if idx == 0 {
        return Ga::zero(p);
    }
    let n = p.as_usize();
    for i in (0..n).rev() {
        let v = c.coeff(i) + 1;
        if v == p.get() {
            c.set_coeff(i, 0);
        } else {
            c.set_coeff(i, v);
            break;
        }
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Kernel basis per `b`, then `a` from each kernel element.
    ClosedForm,
    /// Every pair `(a, b)` against the residual.
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Solution {
    /// Coordinates of `c` in the kernel basis.
    pub d: Vec<Scalar>,
    #[serde(serialize_with = "as_coeffs::serialize")]
    pub c: Ga,
    #[serde(serialize_with = "as_coeffs::serialize")]
    pub a: Ga,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionRecord {
    #[serde(serialize_with = "as_coeffs::serialize")]
    pub b: Ga,
    pub k: usize,
    #[serde(serialize_with = "as_coeffs::serialize")]
    pub btilde: Ga,
    #[serde(rename = "kernel", serialize_with = "as_coeffs::serialize_vec")]
    pub kernel_basis: Vec<Ga>,
    pub solutions: Vec<Solution>,
}

/// Solutions for one `b` via the kernel description.
pub fn solutions_for_b(b: &Ga) -> SolutionRecord {
    let p = b.prime();
    let f = b.gminus1_factor();
    let basis = kernel_basis(b);
    let solutions = coordinate_tuples(p, basis.len())
        .map(|d| {
            let c = combine(p, &basis, &d);
            let a = a_from_c(&c, b).expect("same prime");
            Solution { d, c, a }
        })
        .collect();
    SolutionRecord {
        b: b.clone(),
        k: f.k,
        btilde: f.btilde,
        kernel_basis: basis,
        solutions,
    }
}

/// Solutions for one `b` by sweeping every `a`, returned in kernel-coordinate order.
pub fn solutions_for_b_bruteforce(b: &Ga) -> SolutionRecord {
    let p = b.prime();
    let n = p.as_usize();
    let f = b.gminus1_factor();
    let basis = kernel_basis(b);
    let total = Ga::cardinality(p).expect("guarded");
    let mut scratch = Vec::with_capacity(n);
    let mut solutions = Vec::new();
    let mut a = Ga::zero(p);
    for idx in 0..total {
        a = next_or_index(a, p, idx);
        if residual_is_zero(p, a.coeffs(), b.coeffs(), &mut scratch) {
            let c = c_from_ab(&a, b).expect("same prime");
            // c = sum_j d_j (g-1)^(p-j)
            let z = c.to_gminus1_basis();
            let d = (1..=basis.len()).map(|j| z[n - j]).collect();
            solutions.push(Solution { d, c, a: a.clone() });
        }
    }
    solutions.sort_by(|x, y| x.d.cmp(&y.d));
    SolutionRecord {
        b: b.clone(),
        k: f.k,
        btilde: f.btilde,
        kernel_basis: basis,
        solutions,
    }
}

pub fn enumerate_solutions(p: Prime, mode: Mode) -> Result<Vec<SolutionRecord>> {
    enumerate_solutions_with(p, mode, Exec::default(), &Guards::from_env())
}

/// All solution records, ordered by `b` (lexicographic coefficients).
pub fn enumerate_solutions_with(
    p: Prime,
    mode: Mode,
    exec: Exec,
    guards: &Guards,
) -> Result<Vec<SolutionRecord>> {
    match mode {
        Mode::ClosedForm => guards.kernel(p, "closed-form enumeration")?,
        Mode::BruteForce => guards.pairs(p, "brute-force enumeration")?,
    }
    let total = Ga::cardinality(p).ok_or(Error::TooLarge {
        what: "enumeration",
        p: p.get(),
        limit: guards.kernel_max_p,
    })?;
    Ok(exec.map_range(total, |idx| {
        let b = Ga::from_index(p, idx);
        match mode {
            Mode::ClosedForm => solutions_for_b(&b),
            Mode::BruteForce => solutions_for_b_bruteforce(&b),
        }
    }))
}

/// Sizes for one `(g-1)`-adic class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub k: usize,
    #[serde(serialize_with = "decimal")]
    pub b_class_size: BigUint,
    #[serde(serialize_with = "decimal")]
    pub a_class_size_per_b: BigUint,
}

fn decimal<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(x) {
        Ok(v) => s.serialize_u64(v),
        Err(_) => s.serialize_str(&x.to_string()),
    }
}

impl CensusRow {
    pub fn solutions(&self) -> BigUint {
        &self.b_class_size * &self.a_class_size_per_b
    }
}

/// `b_class_size = p^(p-k-1) (p-1)` for `k < p` and 1 for `k = p`;
/// `a_class_size_per_b = p^k`.
pub fn census(p: Prime) -> Vec<CensusRow> {
    let q = BigUint::from(p.get());
    let n = p.as_usize();
    (0..=n)
        .map(|k| {
            let b_class_size = if k == n {
                BigUint::from(1u32)
            } else {
                q.pow((n - k - 1) as u32) * BigUint::from(p.get() - 1)
            };
            CensusRow {
                k,
                b_class_size,
                a_class_size_per_b: q.pow(k as u32),
            }
        })
        .collect()
}

/// Census rows tallied from an enumeration. Errors if some class has an
/// inconsistent number of solutions per `b`.
pub fn census_from_records(p: Prime, records: &[SolutionRecord]) -> Result<Vec<CensusRow>> {
    let mut tally: BTreeMap<usize, (u64, Option<usize>)> =
        (0..=p.as_usize()).map(|k| (k, (0, None))).collect();
    for r in records {
        let entry = tally.entry(r.k).or_insert((0, None));
        entry.0 += 1;
        match entry.1 {
            None => entry.1 = Some(r.solutions.len()),
            Some(n) if n != r.solutions.len() => {
                return Err(Error::Malformed(format!(
                    "class k = {} mixes {} and {} solutions per b",
                    r.k,
                    n,
                    r.solutions.len()
                )))
            }
            _ => {}
        }
    }
    Ok(tally
        .into_iter()
        .map(|(k, (count, per_b))| CensusRow {
            k,
            b_class_size: BigUint::from(count),
            a_class_size_per_b: BigUint::from(per_b.unwrap_or(0) as u64),
        })
        .collect())
}

pub fn total_solutions(rows: &[CensusRow]) -> BigUint {
    rows.iter().map(CensusRow::solutions).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn el(s: &str) -> Ga {
        Ga::parse(p3(), s).unwrap()
    }

    #[test]
    fn residual_examples() {
        let p = p3();
        assert!(system_residual(&el("-1+g+g^2"), &el("1-g"))
            .unwrap()
            .is_zero());
        let z = Ga::zero(p);
        assert!(system_residual(&z, &z).unwrap().is_zero());
        assert_eq!(system_residual(&el("g^2"), &el("1")).unwrap(), el("2g^2"));
    }

    #[test]
    fn c_vector_examples() {
        let p = p3();
        assert_eq!(
            c_from_ab(&el("-1+g+g^2"), &el("1-g")).unwrap(),
            el("-1-g-g^2")
        );
        let z = Ga::zero(p);
        assert!(c_from_ab(&z, &z).unwrap().is_zero());
        assert_eq!(c_from_ab(&z, &el("g")).unwrap(), el("-g^2"));
        assert_eq!(
            a_from_c(&el("-1-g-g^2"), &el("1-g")).unwrap(),
            el("-1+g+g^2")
        );
    }

    #[test]
    fn phi_identity_coefficient() {
        let p = p3();
        for b in Ga::all(p).step_by(4) {
            for c in Ga::all(p).step_by(3) {
                let x = phi_b(&b, &c).unwrap();
                let dot = (0..3).fold(0, |acc, i| p.add(acc, p.mul(b.coeff(i), c.coeff(i))));
                assert_eq!(x.coeff(0), dot);
            }
        }
        assert!(phi_b(&el("1+g"), &Ga::zero(p)).unwrap().is_zero());
    }

    #[test]
    fn kernel_examples() {
        let p = p3();
        assert_eq!(kernel_basis(&el("1-g")), vec![el("1+g+g^2")]);
        assert_eq!(
            kernel_bruteforce(&el("1-g")).unwrap(),
            vec![Ga::zero(p), el("1+g+g^2"), el("2+2g+2g^2")]
        );
        assert!(kernel_basis(&el("1")).is_empty());
        assert_eq!(kernel_bruteforce(&el("1+g")).unwrap(), vec![Ga::zero(p)]);
        assert_eq!(span(p, &kernel_basis(&Ga::zero(p))).len(), 27);
        let too_big = Guards {
            kernel_max_p: 3,
            ..Guards::default()
        };
        assert!(matches!(
            kernel_bruteforce_with(&Ga::zero(Prime::new(5).unwrap()), &too_big),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn fast_residual_matches_reference() {
        for q in [3u32, 5] {
            let p = Prime::new(q).unwrap();
            let mut scratch = Vec::new();
            for bi in (0..Ga::cardinality(p).unwrap()).step_by(7) {
                let b = Ga::from_index(p, bi);
                for ai in (0..Ga::cardinality(p).unwrap()).step_by(11) {
                    let a = Ga::from_index(p, ai);
                    assert_eq!(
                        residual_is_zero(p, a.coeffs(), b.coeffs(), &mut scratch),
                        system_residual(&a, &b).unwrap().is_zero()
                    );
                }
            }
        }
    }

    #[test]
    fn census_p3() {
        let rows = census(p3());
        let sizes: Vec<(u32, u32)> = rows
            .iter()
            .map(|r| {
                (
                    r.b_class_size.to_u32_digits().first().copied().unwrap_or(0),
                    r.a_class_size_per_b
                        .to_u32_digits()
                        .first()
                        .copied()
                        .unwrap_or(0),
                )
            })
            .collect();
        assert_eq!(sizes, vec![(18, 1), (6, 3), (2, 9), (1, 27)]);
        assert_eq!(total_solutions(&rows), BigUint::from(81u32));
        for q in [5u32, 7, 97] {
            let p = Prime::new(q).unwrap();
            assert_eq!(total_solutions(&census(p)), BigUint::from(q).pow(q + 1));
        }
    }

    #[test]
    fn enumeration_p3_both_modes() {
        let p = p3();
        for exec in [Exec::Sequential, Exec::Parallel] {
            let g = Guards::default();
            let cf = enumerate_solutions_with(p, Mode::ClosedForm, exec, &g).unwrap();
            let bf = enumerate_solutions_with(p, Mode::BruteForce, exec, &g).unwrap();
            assert_eq!(cf, bf);
            assert_eq!(cf.iter().map(|r| r.solutions.len()).sum::<usize>(), 81);
            assert_eq!(census_from_records(p, &cf).unwrap(), census(p));
        }
        let rec = solutions_for_b(&el("1+g+g^2"));
        let a_set: Vec<Ga> = rec.solutions.iter().map(|s| s.a.clone()).collect();
        for expected in ["1", "g", "-g^2", "1+g+g^2"] {
            assert!(a_set.contains(&el(expected)), "{expected}");
        }
        assert!(matches!(
            enumerate_solutions_with(
                Prime::new(7).unwrap(),
                Mode::BruteForce,
                Exec::Sequential,
                &Guards::default()
            ),
            Err(Error::TooLarge { .. })
        ));
    }
}

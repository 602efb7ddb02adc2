//! Direct evaluation of the six PBW conditions on a parameter pair.
//!
//! Conditions (2) and (3) are antisymmetric in `(u, v)` and are evaluated on
//! `(v1, v2)` only; condition (6) runs over all ordered triples of basis
//! vectors. Conditions (4) and (5) hold trivially when `dim V = 2`.

use serde::Serialize;

use crate::action::{act, sym_mul, Quad2GroupElement, Vector};
use crate::exec::Exec;
use crate::field::Scalar;
use crate::group_algebra::GroupAlgebraElement;
use crate::params::DeformationParams;

type Ga = GroupAlgebraElement;

/// Note attached to the conditions that are vacuous in dimension 2.
pub const DIM2_NOTE: &str = "dim-2 trivial";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Residual {
    Group(Ga),
    Vector(Vector),
    Quad(Quad2GroupElement),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Group exponents the residual was evaluated at, e.g. `[i, j]` for `(g^i, g^j)`.
    pub group: Vec<usize>,
    /// Basis vectors involved, as `"v1"` / `"v2"`.
    pub vectors: Vec<&'static str>,
    pub residual: Residual,
    /// Human-readable form of the residual.
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: u8,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub witnesses: Vec<Witness>,
}

impl ConditionResult {
    fn from_witnesses(condition: u8, witnesses: Vec<Witness>) -> Self {
        Self {
            condition,
            passed: witnesses.is_empty(),
            note: None,
            witnesses,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub passed: bool,
    pub conditions: Vec<ConditionResult>,
}

impl ConditionReport {
    pub fn condition(&self, n: u8) -> &ConditionResult {
        &self.conditions[n as usize - 1]
    }

    pub fn failed(&self) -> Vec<u8> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.condition)
            .collect()
    }
}

fn name(v: Vector) -> &'static str {
    match (v.x1, v.x2) {
        (1, 0) => "v1",
        (0, 1) => "v2",
        _ => "v",
    }
}

fn vec_text(v: Vector) -> String {
    format!("{}*v1 + {}*v2", v.x1, v.x2)
}

fn quad_text(q: &Quad2GroupElement) -> String {
    format!(
        "v1^2 (x) ({}) + v1v2 (x) ({}) + v2^2 (x) ({})",
        q.v1v1.signed(),
        q.v1v2.signed(),
        q.v2v2.signed()
    )
}

fn group_witness(group: Vec<usize>, vectors: Vec<&'static str>, r: Ga) -> Witness {
    let text = r.signed().to_string();
    Witness {
        group,
        vectors,
        residual: Residual::Group(r),
        text,
    }
}

/// `lambda(g^i g^j, v) - lambda(g^i, ^{g^j} v) g^j - g^i lambda(g^j, v)`.
pub fn check_condition1(params: &DeformationParams) -> ConditionResult {
    check_condition1_with(params, Exec::Sequential)
}

pub fn check_condition1_with(params: &DeformationParams, exec: Exec) -> ConditionResult {
    let p = params.prime();
    let n = p.as_usize();
    let rows = exec.map_range(n as u64, |i| {
        let i = i as usize;
        let mut out = Vec::new();
        for j in 0..n {
            for v in Vector::basis() {
                let lhs = params.lambda_at((i + j) % n, v);
                let t1 = params.lambda_at(i, act(p, j, v)).shift(j);
                let t2 = params.lambda_at(j, v).shift(i);
                let r = &(&lhs - &t1) - &t2;
                if !r.is_zero() {
                    out.push(group_witness(vec![i, j], vec![name(v)], r));
                }
            }
        }
        out
    });
    ConditionResult::from_witnesses(1, rows.into_iter().flatten().collect())
}

/// `lambda(lambda(g,v),u) - lambda(lambda(g,u),v) + sum_a lambda(g, kappa^L_a(u,v)) a`
/// against `kappa^C(^g u, ^g v) g - g kappa^C(u, v)`, for `(u, v) = (v1, v2)`.
///
/// `lambda` is extended linearly in its group-algebra argument.
pub fn check_condition2(params: &DeformationParams) -> ConditionResult {
    check_condition2_with(params, Exec::Sequential)
}

pub fn check_condition2_with(params: &DeformationParams, exec: Exec) -> ConditionResult {
    let p = params.prime();
    let n = p.as_usize();
    let (u, v) = (Vector::V1, Vector::V2);
    let rows = exec.map_range(n as u64, |i| {
        let i = i as usize;
        let mut rhs = &params.lambda_ext(&params.lambda_at(i, v), u)
            - &params.lambda_ext(&params.lambda_at(i, u), v);
        for a in 0..n {
            let col = params.kappa_l.column(a);
            if !col.is_zero() {
                rhs = &rhs + &params.lambda_at(i, col).shift(a);
            }
        }
        let lhs = &params.kappa_c_on(act(p, i, u), act(p, i, v)).shift(i)
            - &params.kappa_c_on(u, v).shift(i);
        let r = &rhs - &lhs;
        (!r.is_zero()).then(|| group_witness(vec![i], vec!["v1", "v2"], r))
    });
    ConditionResult::from_witnesses(2, rows.into_iter().flatten().collect())
}

/// For `g = g^i`, `h = g^m`, `(u, v) = (v1, v2)`:
/// `^g(kappa^L_{g^-1 h}(u,v)) - kappa^L_{h g^-1}(^g u, ^g v)`
/// against `(^h v - ^g v) lambda_h(g,u) - (^h u - ^g u) lambda_h(g,v)`,
/// where `lambda_h(g, u)` is the coefficient of `h` in `lambda(g, u)`.
pub fn check_condition3(params: &DeformationParams) -> ConditionResult {
    check_condition3_with(params, Exec::Sequential)
}

pub fn check_condition3_with(params: &DeformationParams, exec: Exec) -> ConditionResult {
    let p = params.prime();
    let n = p.as_usize();
    let (u, v) = (Vector::V1, Vector::V2);
    let rows = exec.map_range(n as u64, |i| {
        let i = i as usize;
        let mut out = Vec::new();
        for m in 0..n {
            let idx = (m + n - i) % n;
            let k1 = params.kappa_l_on(u, v).column(idx);
            let k2 = params.kappa_l_on(act(p, i, u), act(p, i, v)).column(idx);
            let lhs = act(p, i, k1).sub(p, k2);
            let lu: Scalar = params.lambda_at(i, u).coeff(m);
            let lv: Scalar = params.lambda_at(i, v).coeff(m);
            let rhs = act(p, m, v)
                .sub(p, act(p, i, v))
                .scale(p, lu)
                .sub(p, act(p, m, u).sub(p, act(p, i, u)).scale(p, lv));
            let r = lhs.sub(p, rhs);
            if !r.is_zero() {
                out.push(Witness {
                    group: vec![i, m],
                    vectors: vec!["v1", "v2"],
                    residual: Residual::Vector(r),
                    text: vec_text(r),
                });
            }
        }
        out
    });
    ConditionResult::from_witnesses(3, rows.into_iter().flatten().collect())
}

fn dim2_trivial(condition: u8) -> ConditionResult {
    ConditionResult {
        condition,
        passed: true,
        note: Some(DIM2_NOTE.to_string()),
        witnesses: Vec::new(),
    }
}

/// Always passes: the condition is vacuous for a two-dimensional V.
pub fn check_condition4(_params: &DeformationParams) -> ConditionResult {
    dim2_trivial(4)
}

/// Always passes: the condition is vacuous for a two-dimensional V.
pub fn check_condition5(_params: &DeformationParams) -> ConditionResult {
    dim2_trivial(5)
}

/// `kappa^L_g(u,v)(w - ^g w) + kappa^L_g(v,w)(u - ^g u) + kappa^L_g(w,u)(v - ^g v)`
/// in `S^2(V)`, for every `g` and every ordered triple of basis vectors.
pub fn check_condition6(params: &DeformationParams) -> ConditionResult {
    let p = params.prime();
    let n = p.as_usize();
    let mut out = Vec::new();
    for i in 0..n {
        for u in Vector::basis() {
            for v in Vector::basis() {
                for w in Vector::basis() {
                    let term = |x: Vector, y: Vector, z: Vector| {
                        let k = params.kappa_l_on(x, y).column(i);
                        sym_mul(p, k, z.sub(p, act(p, i, z)))
                    };
                    let r = term(u, v, w).add(&term(v, w, u)).add(&term(w, u, v));
                    if !r.is_zero() {
                        let r = r.shift(i);
                        out.push(Witness {
                            group: vec![i],
                            vectors: vec![name(u), name(v), name(w)],
                            text: quad_text(&r),
                            residual: Residual::Quad(r),
                        });
                    }
                }
            }
        }
    }
    ConditionResult::from_witnesses(6, out)
}

pub fn check_all(params: &DeformationParams) -> ConditionReport {
    check_all_with(params, Exec::Sequential)
}

pub fn check_all_with(params: &DeformationParams, exec: Exec) -> ConditionReport {
    let conditions = vec![
        check_condition1_with(params, exec),
        check_condition2_with(params, exec),
        check_condition3_with(params, exec),
        check_condition4(params),
        check_condition5(params),
        check_condition6(params),
    ];
    ConditionReport {
        passed: conditions.iter().all(|c| c.passed),
        conditions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Prime;
    use crate::params::build_candidate;
    use crate::VGroupElement;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn el(s: &str) -> Ga {
        Ga::parse(p3(), s).unwrap()
    }

    #[test]
    fn zero_params_pass_everything() {
        for q in [3, 5, 7] {
            let report = check_all(&DeformationParams::zero(Prime::new(q).unwrap()));
            assert!(report.passed);
            assert_eq!(report.condition(4).note.as_deref(), Some(DIM2_NOTE));
        }
    }

    #[test]
    fn condition1_single_entry_defect() {
        let mut params = DeformationParams::zero(p3());
        params.lambda[1][0] = el("1");
        let c1 = check_condition1(&params);
        assert!(!c1.passed);
        let w = c1
            .witnesses
            .iter()
            .find(|w| w.group == vec![1, 1] && w.vectors == vec!["v1"])
            .expect("witness at (g, g)");
        // lambda(g^2, v1) - lambda(g, v1) g - g lambda(g, v1) = -2g
        assert_eq!(w.residual, Residual::Group(el("-2g")));
    }

    #[test]
    fn condition2_running_example() {
        let p = p3();
        let b = el("1-g");
        assert!(check_condition2(&build_candidate(&el("-1+g+g^2"), &b).unwrap()).passed);
        let bad = check_all(&build_candidate(&el("g"), &b).unwrap());
        assert_eq!(bad.failed(), vec![2]);
        let mut only_c = DeformationParams::zero(p);
        only_c.kappa_c = el("1+2g");
        assert!(check_condition2(&only_c).passed);
    }

    #[test]
    fn condition3_constant_kappa_l_fails() {
        let p = p3();
        let mut params = DeformationParams::zero(p);
        params.kappa_l = VGroupElement::tensor(Vector::V2, &Ga::one(p));
        let c3 = check_condition3(&params);
        assert!(!c3.passed);
        // g = h = g^1: ^g(v2) - v2 = v1
        let w = c3.witnesses.iter().find(|w| w.group == vec![1, 1]).unwrap();
        assert_eq!(w.residual, Residual::Vector(Vector::V1));
        assert!(check_condition3(&DeformationParams::zero(p)).passed);
    }

    #[test]
    fn condition6_is_identically_satisfied_in_dimension_two() {
        let p = p3();
        let mut params = DeformationParams::zero(p);
        for a in Ga::all(p).step_by(5) {
            for b in Ga::all(p).step_by(7) {
                params.kappa_l = VGroupElement::new(a.clone(), b.clone()).unwrap();
                assert!(check_condition6(&params).passed);
            }
        }
    }

    #[test]
    fn candidates_satisfy_cocycle_conditions_at_p3() {
        let p = p3();
        for a in Ga::all(p) {
            for b in Ga::all(p) {
                let params = build_candidate(&a, &b).unwrap();
                assert!(check_condition1(&params).passed);
                assert!(check_condition3(&params).passed);
                assert!(check_condition6(&params).passed);
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let p = Prime::new(5).unwrap();
        let mut params =
            build_candidate(&Ga::from_index(p, 1234), &Ga::from_index(p, 777)).unwrap();
        params.lambda[2][1] = Ga::from_index(p, 99);
        assert_eq!(
            check_all_with(&params, Exec::Sequential),
            check_all_with(&params, Exec::Parallel)
        );
    }
}

use orbifold_core::checker::check_condition2;
use orbifold_core::solver::{
    a_from_c, c_from_ab, combine, enumerate_solutions_with, kernel_basis, kernel_bruteforce, phi_b,
    span, system_residual,
};
use orbifold_core::{
    build_candidate, check_all, closed_form, Exec, GroupAlgebraElement as Ga, Guards, Mode, Prime,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_el(p: Prime, rng: &mut impl Rng) -> Ga {
    Ga::from_index(p, rng.gen_range(0..Ga::cardinality(p).unwrap()))
}

#[test]
fn kernel_is_spanned_by_powers_of_g_minus_1() {
    for q in [3, 5] {
        let p = Prime::new(q).unwrap();
        for b in Ga::all(p) {
            let mut spanned = span(p, &kernel_basis(&b));
            spanned.sort_by_key(Ga::index);
            assert_eq!(kernel_bruteforce(&b).unwrap(), spanned, "b = {b}");
        }
    }
}

#[test]
fn residual_matches_linearized_kernel_p3() {
    let p = Prime::new(3).unwrap();
    for a in Ga::all(p) {
        for b in Ga::all(p) {
            let c = c_from_ab(&a, &b).unwrap();
            assert_eq!(
                system_residual(&a, &b).unwrap().is_zero(),
                phi_b(&b, &c).unwrap().is_zero(),
                "a = {a}, b = {b}"
            );
        }
    }
}

#[test]
fn residual_matches_linearized_kernel_p5_sampled() {
    let p = Prime::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut hits = 0;
    for n in 0..100_000 {
        let b = random_el(p, &mut rng);
        // half the samples are drawn from the solution set so both sides get exercised
        let a = if n % 2 == 0 {
            random_el(p, &mut rng)
        } else {
            let basis = kernel_basis(&b);
            let d: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..5)).collect();
            a_from_c(&combine(p, &basis, &d), &b).unwrap()
        };
        let lhs = system_residual(&a, &b).unwrap().is_zero();
        hits += lhs as u32;
        assert_eq!(
            lhs,
            phi_b(&b, &c_from_ab(&a, &b).unwrap()).unwrap().is_zero()
        );
    }
    assert!(hits >= 50_000);
}

#[test]
fn a_and_c_are_inverse_bijections() {
    let p = Prime::new(3).unwrap();
    for b in Ga::all(p) {
        for c in span(p, &kernel_basis(&b)) {
            let a = a_from_c(&c, &b).unwrap();
            assert!(system_residual(&a, &b).unwrap().is_zero());
            assert_eq!(c_from_ab(&a, &b).unwrap(), c);
        }
        for a in Ga::all(p) {
            assert_eq!(a_from_c(&c_from_ab(&a, &b).unwrap(), &b).unwrap(), a);
        }
    }
}

#[test]
fn closed_form_matches_kernel_description() {
    for q in [3, 5] {
        let p = Prime::new(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        for _ in 0..300 {
            let b = random_el(p, &mut rng);
            let basis = kernel_basis(&b);
            let d: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..q)).collect();
            let kc = random_el(p, &mut rng);
            let a = a_from_c(&combine(p, &basis, &d), &b).unwrap();
            assert_eq!(
                closed_form(&b, &d, &kc).unwrap(),
                build_candidate(&a, &b).unwrap().with_kappa_c(kc)
            );
        }
    }
}

#[test]
fn solutions_pass_and_non_solutions_fail_condition_2() {
    let p = Prime::new(3).unwrap();
    let records =
        enumerate_solutions_with(p, Mode::ClosedForm, Exec::default(), &Guards::default()).unwrap();
    let mut solutions = std::collections::HashSet::new();
    for r in &records {
        for s in &r.solutions {
            solutions.insert((s.a.clone(), r.b.clone()));
        }
    }
    assert_eq!(solutions.len(), 81);
    for a in Ga::all(p) {
        for b in Ga::all(p) {
            let params = build_candidate(&a, &b).unwrap();
            let report = check_all(&params);
            if solutions.contains(&(a.clone(), b.clone())) {
                assert!(report.passed, "a = {a}, b = {b}");
            } else {
                assert_eq!(report.failed(), vec![2], "a = {a}, b = {b}");
                assert!(!check_condition2(&params).witnesses.is_empty());
            }
        }
    }
}

#[test]
fn enumeration_modes_agree_at_p5() {
    let p = Prime::new(5).unwrap();
    let g = Guards::default();
    let cf = enumerate_solutions_with(p, Mode::ClosedForm, Exec::default(), &g).unwrap();
    let bf = enumerate_solutions_with(p, Mode::BruteForce, Exec::default(), &g).unwrap();
    assert_eq!(cf.iter().map(|r| r.solutions.len()).sum::<usize>(), 15625);
    assert_eq!(cf, bf);
}

use orbifold_core::{
    build_candidate, check_all, check_associativity, check_dimension, Exec,
    GroupAlgebraElement as Ga, Prime, RuleSet,
};

#[test]
fn checker_agrees_with_rewriting_at_p3() {
    let p = Prime::new(3).unwrap();
    for kc in ["0", "1", "g"] {
        let kc = Ga::parse(p, kc).unwrap();
        let mut passes = 0;
        for a in Ga::all(p) {
            for b in Ga::all(p) {
                let params = build_candidate(&a, &b).unwrap().with_kappa_c(kc.clone());
                let rules = RuleSet::from_params(&params);
                let checker = check_all(&params).passed;
                let oracle = check_associativity(&rules, 4, Exec::default()).unwrap();
                assert_eq!(checker, oracle.passed, "a = {a}, b = {b}, kappaC = {kc}");
                if checker {
                    passes += 1;
                    assert!(check_dimension(&rules, 4).passed);
                } else {
                    assert!(oracle.witness.is_some());
                }
            }
        }
        assert_eq!(passes, 81);
    }
}

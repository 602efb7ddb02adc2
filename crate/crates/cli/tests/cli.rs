mod common;

use std::collections::BTreeMap;

use orbifold_cli::{run, Outcome, EXIT_ERROR, EXIT_FAIL, EXIT_PASS};
use orbifold_core::{DeformationParams, GroupAlgebraElement as Ga, Prime};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("orbifold").chain(args.iter().copied()))
}

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

fn write_params(dir: &tempfile::TempDir, name: &str, json: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn golden_parser_reads_factored_forms() {
    let p = p3();
    assert_eq!(common::factored(p, "-(g-1)"), Ga::parse(p, "1-g").unwrap());
    assert_eq!(
        common::factored(p, "g(g-1)"),
        Ga::parse(p, "-g+g^2").unwrap()
    );
    assert_eq!(
        common::factored(p, "(g-1)^2"),
        Ga::parse(p, "1+g+g^2").unwrap()
    );
    assert_eq!(
        common::factored(p, "-(g+1)(g-1)"),
        Ga::parse(p, "1-g^2").unwrap()
    );
    assert_eq!(common::golden_pairs(p, common::GOLDEN_TABLE_P3).len(), 27);
}

#[test]
fn table_p3_matches_golden() {
    let p = p3();
    let out = cli(&["table", "--p", "3", "--format", "csv"]);
    assert_eq!(out.code, EXIT_PASS);
    let got = common::table_csv_pairs(p, &out.stdout);
    let want = common::golden_pairs(p, common::GOLDEN_TABLE_P3);
    let got_sets: BTreeMap<_, _> = got
        .iter()
        .map(|(b, (_, a))| (b.clone(), a.clone()))
        .collect();
    assert_eq!(got_sets, want);
    let mut classes: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (k, a) in got.values() {
        let e = classes.entry(*k).or_insert((0, a.len()));
        e.0 += 1;
        assert_eq!(e.1, a.len());
    }
    assert_eq!(
        classes,
        BTreeMap::from([(0, (18, 1)), (1, (6, 3)), (2, (2, 9)), (3, (1, 27))])
    );
}

#[test]
fn table_text_layout() {
    let out = cli(&["table"]);
    let row = out
        .stdout
        .lines()
        .find(|l| l.starts_with("  b = 1 + g + g^2 |"))
        .unwrap();
    assert_eq!(row.matches(", ").count(), 8);
    assert!(row.contains("1 + g + g^2,"));
    assert_eq!(out.stdout.lines().next().unwrap(), "k = 3: 1 b, 27 a each");
}

#[test]
fn table_p5_has_every_solution() {
    let out = cli(&["table", "--p", "5", "--format", "csv"]);
    assert_eq!(out.code, EXIT_PASS);
    assert_eq!(out.stdout.lines().count(), 1 + 15625);
}

#[test]
fn enumerate_counts_and_census() {
    let out = cli(&["enumerate", "--p", "3"]);
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.stdout.contains("solutions: 81 (expected 81)"));
    let json = cli(&[
        "enumerate",
        "--p",
        "3",
        "--format",
        "json",
        "--mode",
        "brute-force",
    ]);
    let v: serde_json::Value = serde_json::from_str(&json.stdout).unwrap();
    let census: Vec<(u64, u64)> = v["census"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["b_class_size"].as_u64().unwrap(),
                r["a_class_size_per_b"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(census, vec![(18, 1), (6, 3), (2, 9), (1, 27)]);
    let out = cli(&[
        "enumerate",
        "--p",
        "5",
        "--mode",
        "closed-form",
        "--format",
        "csv",
    ]);
    assert_eq!(out.code, EXIT_PASS);
    assert_eq!(out.stdout.lines().count(), 1 + 15625);
    let out = cli(&["enumerate", "--p", "7", "--mode", "brute-force"]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stderr.contains("guard"));
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let built = cli(&["build", "--p", "3", "--b", "1-g", "--d", "-1"]);
    assert_eq!(built.code, EXIT_PASS);
    let good = write_params(&dir, "good.json", &built.stdout);
    let out = cli(&["check", &good, "--oracle"]);
    assert_eq!(out.code, EXIT_PASS, "{}", out.stdout);
    assert!(out.stdout.contains("PBW: yes"));

    let non_solution = orbifold_core::build_candidate(
        &Ga::parse(p3(), "g").unwrap(),
        &Ga::parse(p3(), "1-g").unwrap(),
    )
    .unwrap();
    let bad = write_params(&dir, "bad.json", &non_solution.to_json_string());
    let out = cli(&["check", &bad, "--format", "json"]);
    assert_eq!(out.code, EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["pbw"], false);
    let cond2 = &v["checker"]["conditions"][1];
    assert_eq!(cond2["passed"], false);
    assert!(!cond2["witnesses"].as_array().unwrap().is_empty());
    let out = cli(&["check", &bad, "--oracle"]);
    assert_eq!(out.code, EXIT_FAIL);
    let line = out
        .stdout
        .lines()
        .find(|l| l.starts_with("rewriting oracle"))
        .unwrap();
    assert!(
        line.starts_with("rewriting oracle (degree 4, ") && line.ends_with("triples): FAIL"),
        "{line}"
    );

    let malformed = write_params(&dir, "malformed.json", "{\"p\": 3, \"lambda\": [");
    assert_eq!(cli(&["check", &malformed]).code, EXIT_ERROR);
    assert_eq!(cli(&["check", "/nonexistent/params.json"]).code, EXIT_ERROR);
    assert_eq!(cli(&["check", &good, "--p", "5"]).code, EXIT_ERROR);
}

#[test]
fn check_paranoid_notes_dimension_two() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_params(
        &dir,
        "zero.json",
        &DeformationParams::zero(p3()).to_json_string(),
    );
    let out = cli(&["check", &zero, "--paranoid"]);
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.stdout.contains("condition 4: pass (dim-2 trivial)"));
    assert!(out.stdout.contains("condition 5: pass (dim-2 trivial)"));
    assert!(out
        .stdout
        .contains("normal-form dimension: pass (3, 9, 18, 30, 45)"));
}

#[test]
fn build_examples() {
    let p = p3();
    let out = cli(&[
        "build", "--p", "3", "--b", "1-g", "--d", "-1", "--format", "text",
    ]);
    assert!(out.stdout.contains("implied a = -1 + g + g^2"));
    assert!(out
        .stdout
        .contains("kappaL(v1, v2) = v1 (x) (-1) + v2 (x) (-g)"));
    let out = cli(&["build", "--p", "3", "--b", "1-g", "--d", "1,1"]);
    assert_eq!(out.code, EXIT_ERROR);
    assert!(out.stderr.contains("k = 1"));

    let dir = tempfile::tempdir().unwrap();
    let out = cli(&[
        "build",
        "--p",
        "3",
        "--b",
        "1-g",
        "--d",
        "-1",
        "--kappa-c",
        "g",
        "--f",
        "v1:g",
    ]);
    assert_eq!(out.code, EXIT_PASS);
    let params = DeformationParams::from_json_str(&out.stdout).unwrap();
    let plain =
        DeformationParams::from_json_str(&cli(&["build", "--b", "1-g", "--d", "-1"]).stdout)
            .unwrap();
    assert_ne!(params, plain);
    assert_eq!(params.kappa_c, Ga::g_pow(p, 1));
    let file = write_params(&dir, "shifted.json", &out.stdout);
    assert_eq!(cli(&["check", &file, "--oracle"]).code, EXIT_PASS);
    assert_eq!(
        cli(&["build", "--b", "1-g", "--d", "-1", "--f", "v3:g"]).code,
        EXIT_ERROR
    );
    assert_eq!(cli(&["build", "--b", "1-", "--d", "-1"]).code, EXIT_ERROR);
}

#[test]
fn json_outputs_round_trip() {
    let out = cli(&["build", "--p", "5", "--b", "(g-1)", "--d", "1"]);
    assert_eq!(out.code, EXIT_ERROR);
    let out = cli(&[
        "build",
        "--p",
        "5",
        "--b",
        "-1+g",
        "--d",
        "2",
        "--kappa-c",
        "1+g^4",
        "--f",
        "v2:3g^2",
    ]);
    assert_eq!(out.code, EXIT_PASS);
    let params = DeformationParams::from_json_str(&out.stdout).unwrap();
    let again = DeformationParams::from_json_str(&params.to_json_string()).unwrap();
    assert_eq!(params, again);
}

#[test]
fn chaincheck_examples() {
    for p in ["3", "5"] {
        let out = cli(&["chaincheck", "--p", p, "--max-degree", "4"]);
        assert_eq!(out.code, EXIT_PASS, "{}", out.stdout);
        assert!(out.stdout.contains("all identities: pass"));
    }
    let out = cli(&["chaincheck", "--p", "3", "--max-degree", "7"]);
    assert_eq!(out.code, EXIT_ERROR);
    let out = cli(&["chaincheck", "--p", "5", "--format", "json", "--seed", "9"]);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn census_and_kernel() {
    let out = cli(&["census", "--p", "97", "--format", "csv"]);
    assert_eq!(out.code, EXIT_PASS);
    assert_eq!(out.stdout.lines().count(), 1 + 98);
    let out = cli(&["census", "--p", "3"]);
    assert!(out.stdout.contains("total: 81"));
    let out = cli(&["kernel", "--p", "3", "--b", "1-g", "--brute-force"]);
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.stdout.contains("k = 1"));
    assert!(out.stdout.contains("  (g-1)^2 = 1 + g + g^2"));
    assert!(out.stdout.contains("3 elements, equal to the span"));
    assert_eq!(
        cli(&["kernel", "--p", "11", "--b", "1", "--brute-force"]).code,
        EXIT_ERROR
    );
    assert_eq!(cli(&["kernel", "--p", "11", "--b", "1"]).code, EXIT_PASS);
}

#[test]
fn usage_errors_and_determinism() {
    assert_eq!(cli(&["table", "--p", "4"]).code, EXIT_ERROR);
    assert_eq!(cli(&["table", "--p", "2"]).code, EXIT_ERROR);
    assert_eq!(cli(&["table", "--p", "101"]).code, EXIT_ERROR);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_ERROR);
    assert_eq!(cli(&["table", "--workers", "0"]).code, EXIT_ERROR);
    assert_eq!(cli(&["--help"]).code, EXIT_PASS);
    let a = cli(&["enumerate", "--p", "3", "--format", "json"]);
    let b = cli(&[
        "enumerate",
        "--p",
        "3",
        "--format",
        "json",
        "--workers",
        "1",
    ]);
    let c = cli(&[
        "enumerate",
        "--p",
        "3",
        "--format",
        "json",
        "--workers",
        "2",
    ]);
    assert_eq!(a, b);
    assert_eq!(a, c);
}

use std::fmt::Write as _;
use std::path::Path;

use orbifold_core::chain::{verify_chain_maps_with, OuterFactors};
use orbifold_core::checker::check_all_with;
use orbifold_core::params::CandidateMatch;
use orbifold_core::solver::{
    census as census_rows, census_from_records, enumerate_solutions_with, kernel_basis,
    kernel_bruteforce_with, span, total_solutions, SolutionRecord,
};
use orbifold_core::{
    add_coboundary, check_associativity, check_dimension, closed_form, implied_a, CoboundaryData,
    DeformationParams, Error, GroupAlgebraElement as Ga, Mode, Prime, Result, RuleSet, Scalar,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::{Context, Format, ModeArg, Outcome, EXIT_ERROR};

fn s(x: &Ga) -> String {
    x.signed().to_string()
}

fn to_csv<R, S>(header: &[&str], rows: impl IntoIterator<Item = R>) -> String
where
    R: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("serializable");
    out.push('\n');
    out
}

/// `"1,-1"` as reduced coordinates; the empty string is the empty vector.
pub fn parse_d(p: Prime, text: &str) -> Result<Vec<Scalar>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut pos = 0;
    text.split(',')
        .map(|part| {
            let start = pos + part.len() - part.trim_start().len();
            pos += part.len() + 1;
            part.trim()
                .parse::<i64>()
                .map(|v| p.reduce_i64(v))
                .map_err(|e| Error::Parse {
                    input: text.to_string(),
                    pos: start,
                    msg: format!("bad coordinate: {e}"),
                })
        })
        .collect()
}

/// Coboundary data from `v1:<elem>` / `v2:<elem>` entries; repeated keys add up.
pub fn parse_f(p: Prime, entries: &[String]) -> Result<CoboundaryData> {
    let mut f = CoboundaryData::zero(p);
    for entry in entries {
        let (key, value) = entry.split_once(':').ok_or_else(|| Error::Parse {
            input: entry.clone(),
            pos: 0,
            msg: "expected v1:<element> or v2:<element>".into(),
        })?;
        let x = Ga::parse(p, value).map_err(|e| match e {
            Error::Parse { pos, msg, .. } => Error::Parse {
                input: entry.clone(),
                pos: pos + key.len() + 1,
                msg,
            },
            other => other,
        })?;
        match key.trim() {
            "v1" => f.f1 = &f.f1 + &x,
            "v2" => f.f2 = &f.f2 + &x,
            _ => {
                return Err(Error::Parse {
                    input: entry.clone(),
                    pos: 0,
                    msg: format!("unknown basis vector {key:?}"),
                })
            }
        }
    }
    Ok(f)
}

fn parse_el(p: Prime, text: &str) -> Result<Ga> {
    Ga::parse(p, text)
}

/// `(b, a)` pairs in table order: b = 0 first, then by class, then by b.
fn table_order(records: &[SolutionRecord], p: Prime) -> Vec<&SolutionRecord> {
    let n = p.as_usize();
    let mut out: Vec<&SolutionRecord> = records.iter().filter(|r| r.k == n).collect();
    for k in 0..n {
        out.extend(records.iter().filter(|r| r.k == k));
    }
    out
}

pub fn enumerate(ctx: &Context, mode: ModeArg) -> Result<Outcome> {
    let (mode, name) = match mode {
        ModeArg::ClosedForm => (Mode::ClosedForm, "closed-form"),
        ModeArg::BruteForce => (Mode::BruteForce, "brute-force"),
    };
    let p = ctx.p;
    let records = enumerate_solutions_with(p, mode, ctx.exec, &ctx.guards)?;
    let rows = census_rows(p);
    let tallied = census_from_records(p, &records)?;
    let total: usize = records.iter().map(|r| r.solutions.len()).sum();
    let expected = total_solutions(&rows);
    let passed = u64::try_from(&expected).ok() == Some(total as u64) && tallied == rows;
    let out = match ctx.format {
        Format::Json => to_json(&json!({
            "p": p.get(),
            "mode": name,
            "total": total,
            "expected": expected.to_string(),
            "census": tallied,
            "records": records,
        })),
        Format::Csv => to_csv(
            &["b", "k", "d", "c", "a"],
            records.iter().flat_map(|r| {
                r.solutions.iter().map(move |sol| {
                    let d: Vec<String> = sol.d.iter().map(u32::to_string).collect();
                    [s(&r.b), r.k.to_string(), d.join(" "), s(&sol.c), s(&sol.a)]
                })
            }),
        ),
        Format::Text => {
            let mut out = format!(
                "p = {}, mode = {name}\nsolutions: {total} (expected {expected})\n",
                p.get()
            );
            out.push_str(&census_text(&tallied));
            for r in &records {
                let _ = writeln!(
                    out,
                    "b = {}  k = {}  btilde = {}",
                    s(&r.b),
                    r.k,
                    s(&r.btilde)
                );
                for sol in &r.solutions {
                    let _ = writeln!(
                        out,
                        "  d = {:?}  c = {}  a = {}",
                        sol.d,
                        s(&sol.c),
                        s(&sol.a)
                    );
                }
            }
            out
        }
    };
    Ok(Outcome::verdict(out, passed))
}

fn census_text(rows: &[orbifold_core::solver::CensusRow]) -> String {
    let mut out = String::from("census:\n  k  b-class size  a-class size per b\n");
    for r in rows {
        let _ = writeln!(
            out,
            "  {:<2} {:<13} {}",
            r.k, r.b_class_size, r.a_class_size_per_b
        );
    }
    out
}

pub fn census(ctx: &Context) -> Result<Outcome> {
    let rows = census_rows(ctx.p);
    let total = total_solutions(&rows);
    let out = match ctx.format {
        Format::Json => {
            to_json(&json!({ "p": ctx.p.get(), "rows": rows, "total": total.to_string() }))
        }
        Format::Csv => to_csv(
            &["k", "b_class_size", "a_class_size_per_b"],
            rows.iter().map(|r| {
                [
                    r.k.to_string(),
                    r.b_class_size.to_string(),
                    r.a_class_size_per_b.to_string(),
                ]
            }),
        ),
        Format::Text => format!(
            "p = {}\n{}total: {total} = p^(p+1)\n",
            ctx.p.get(),
            census_text(&rows)
        ),
    };
    Ok(Outcome::ok(out))
}

pub fn table(ctx: &Context) -> Result<Outcome> {
    let p = ctx.p;
    let records = enumerate_solutions_with(p, Mode::ClosedForm, ctx.exec, &ctx.guards)?;
    let ordered = table_order(&records, p);
    let out = match ctx.format {
        Format::Json => {
            let rows: Vec<_> = ordered
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "b": s(&r.b),
                        "a": r.solutions.iter().map(|x| s(&x.a)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            to_json(&json!({ "p": p.get(), "rows": rows }))
        }
        Format::Csv => to_csv(
            &["k", "b", "a"],
            ordered.iter().flat_map(|r| {
                r.solutions
                    .iter()
                    .map(move |sol| [r.k.to_string(), s(&r.b), s(&sol.a)])
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            let mut current = None;
            for r in &ordered {
                if current != Some(r.k) {
                    current = Some(r.k);
                    let count = ordered.iter().filter(|x| x.k == r.k).count();
                    let _ = writeln!(
                        out,
                        "k = {}: {} b, {} a each",
                        r.k,
                        count,
                        r.solutions.len()
                    );
                }
                let a: Vec<String> = r.solutions.iter().map(|x| s(&x.a)).collect();
                let _ = writeln!(out, "  b = {} | a = {}", s(&r.b), a.join(", "));
            }
            out
        }
    };
    Ok(Outcome::ok(out))
}

pub fn check(
    ctx: &Context,
    file: &Path,
    oracle: bool,
    paranoid: bool,
    explicit_p: bool,
) -> Result<Outcome> {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return Ok(Outcome::error(format!("{}: {e}", file.display()))),
    };
    let params = DeformationParams::from_json_str(&text)?;
    if explicit_p && params.prime() != ctx.p {
        return Err(Error::PrimeMismatch {
            left: ctx.p.get(),
            right: params.prime().get(),
        });
    }
    let report = check_all_with(&params, ctx.exec);
    let rules = RuleSet::from_params(&params);
    let assoc = if oracle || paranoid {
        Some(check_associativity(&rules, ctx.degree, ctx.exec)?)
    } else {
        None
    };
    let dimension = paranoid.then(|| check_dimension(&rules, ctx.degree));
    let candidate = match params.to_ab() {
        CandidateMatch::Candidate { a, b } => Some((a, b)),
        CandidateMatch::NotOfCandidateForm => None,
    };
    let disagreement = assoc.as_ref().is_some_and(|r| r.passed != report.passed);
    let pbw = report.passed
        && assoc.as_ref().is_none_or(|r| r.passed)
        && dimension.as_ref().is_none_or(|r| r.passed);

    let out = match ctx.format {
        Format::Json => to_json(&json!({
            "pbw": pbw,
            "candidate": candidate.as_ref().map(|(a, b)| json!({ "a": s(a), "b": s(b) })),
            "checker": report,
            "oracle": assoc,
            "dimension": dimension,
        })),
        Format::Csv => {
            let mut rows: Vec<[String; 4]> = report
                .conditions
                .iter()
                .map(|c| {
                    [
                        format!("condition {}", c.condition),
                        c.passed.to_string(),
                        c.witnesses.len().to_string(),
                        c.note.clone().unwrap_or_default(),
                    ]
                })
                .collect();
            if let Some(r) = &assoc {
                rows.push([
                    "oracle".into(),
                    r.passed.to_string(),
                    usize::from(r.witness.is_some()).to_string(),
                    format!("degree {}", r.degree),
                ]);
            }
            if let Some(r) = &dimension {
                rows.push([
                    "dimension".into(),
                    r.passed.to_string(),
                    r.failures.len().to_string(),
                    String::new(),
                ]);
            }
            to_csv(&["check", "passed", "witnesses", "note"], rows)
        }
        Format::Text => {
            let mut out = format!("p = {}\n", params.prime().get());
            if let Some((a, b)) = &candidate {
                let _ = writeln!(out, "candidate form: a = {}, b = {}", s(a), s(b));
            }
            for c in &report.conditions {
                let verdict = if c.passed { "pass" } else { "FAIL" };
                match &c.note {
                    Some(note) => {
                        let _ = writeln!(out, "condition {}: {verdict} ({note})", c.condition);
                    }
                    None => {
                        let _ = writeln!(out, "condition {}: {verdict}", c.condition);
                    }
                }
                for w in c.witnesses.iter().take(3) {
                    let _ = writeln!(out, "  at g^{:?} on {:?}: {}", w.group, w.vectors, w.text);
                }
                if c.witnesses.len() > 3 {
                    let _ = writeln!(out, "  ... {} more", c.witnesses.len() - 3);
                }
            }
            if let Some(r) = &assoc {
                let verdict = if r.passed { "pass" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "rewriting oracle (degree {}, {} triples): {verdict}",
                    r.degree, r.triples_checked
                );
                if let Some(w) = &r.witness {
                    let _ = writeln!(out, "  {}", serde_json::to_string(w).expect("serializable"));
                }
            }
            if let Some(r) = &dimension {
                let verdict = if r.passed { "pass" } else { "FAIL" };
                let counts: Vec<String> = r.rows.iter().map(|x| x.found.to_string()).collect();
                let _ = writeln!(
                    out,
                    "normal-form dimension: {verdict} ({})",
                    counts.join(", ")
                );
                for f in &r.failures {
                    let _ = writeln!(out, "  {f}");
                }
            }
            let _ = writeln!(out, "PBW: {}", if pbw { "yes" } else { "no" });
            out
        }
    };
    if disagreement {
        return Ok(Outcome {
            stdout: out,
            stderr: "error: the condition checker and the rewriting oracle disagree\n".into(),
            code: EXIT_ERROR,
        });
    }
    Ok(Outcome::verdict(out, pbw))
}

pub fn chaincheck(ctx: &Context, max_degree: usize) -> Result<Outcome> {
    let p = ctx.p;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let outer = OuterFactors::List(
        (0..8)
            .map(|_| (rng.gen_range(0..p.get()), rng.gen_range(0..p.get())))
            .collect(),
    );
    let report = verify_chain_maps_with(p, max_degree, &outer, ctx.exec, &ctx.guards)?;
    let out = match ctx.format {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(
            &["identity", "degree", "passed", "cases", "witness"],
            report.checks.iter().map(|c| {
                [
                    c.identity.to_string(),
                    c.degree.to_string(),
                    c.passed.to_string(),
                    c.cases.to_string(),
                    c.witness.clone().unwrap_or_default(),
                ]
            }),
        ),
        Format::Text => {
            let mut out = format!("p = {}, degrees 0..={max_degree}\n", p.get());
            for c in &report.checks {
                let verdict = if c.passed { "pass" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "n = {}  {:<22} {verdict} ({} cases)",
                    c.degree, c.identity, c.cases
                );
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "  {w}");
                }
            }
            let _ = writeln!(
                out,
                "all identities: {}",
                if report.passed { "pass" } else { "FAIL" }
            );
            out
        }
    };
    Ok(Outcome::verdict(out, report.passed))
}

pub fn build(ctx: &Context, b: &str, d: &str, kappa_c: &str, f: &[String]) -> Result<Outcome> {
    let p = ctx.p;
    let b = parse_el(p, b)?;
    let d = parse_d(p, d)?;
    let kc = parse_el(p, kappa_c)?;
    let a = implied_a(&b, &d)?;
    let mut params = closed_form(&b, &d, &kc)?;
    if !f.is_empty() {
        params = add_coboundary(&params, &parse_f(p, f)?)?;
    }
    let out = match ctx.format {
        Format::Json => {
            let mut v = params.to_json();
            v["implied_a"] = json!(s(&a));
            to_json(&v)
        }
        Format::Csv => {
            let pretty = params.pretty();
            let mut rows: Vec<[String; 2]> = pretty
                .lines()
                .filter_map(|line| line.split_once(" = "))
                .map(|(k, v)| [k.to_string(), v.to_string()])
                .collect();
            rows.push(["implied a".into(), s(&a)]);
            to_csv(&["slot", "value"], rows)
        }
        Format::Text => format!("{}implied a = {}\n", params.pretty(), s(&a)),
    };
    Ok(Outcome::ok(out))
}

pub fn kernel(ctx: &Context, b: &str, brute_force: bool) -> Result<Outcome> {
    let p = ctx.p;
    let b = parse_el(p, b)?;
    let factor = b.gminus1_factor();
    let basis = kernel_basis(&b);
    let swept = if brute_force {
        let mut expected = span(p, &basis);
        expected.sort_by_key(Ga::index);
        let found = kernel_bruteforce_with(&b, &ctx.guards)?;
        let agrees = found == expected;
        Some((found, agrees))
    } else {
        None
    };
    let passed = swept.as_ref().is_none_or(|(_, ok)| *ok);
    let size = (p.get() as u128).checked_pow(basis.len() as u32);
    let out = match ctx.format {
        Format::Json => to_json(&json!({
            "p": p.get(),
            "b": s(&b),
            "k": factor.k,
            "btilde": s(&factor.btilde),
            "basis": basis.iter().map(s).collect::<Vec<_>>(),
            "size": size.map(|x| x.to_string()),
            "brute_force": swept.as_ref().map(|(found, ok)| json!({
                "elements": found.iter().map(s).collect::<Vec<_>>(),
                "matches_basis_span": ok,
            })),
        })),
        Format::Csv => {
            let found = swept.as_ref().map(|(f, _)| f.as_slice()).unwrap_or(&[]);
            let rows = basis
                .iter()
                .map(|x| ["basis".to_string(), s(x)])
                .chain(found.iter().map(|x| ["element".to_string(), s(x)]));
            to_csv(&["kind", "element"], rows)
        }
        Format::Text => {
            let mut out = format!(
                "b = {}\nk = {}\nbtilde = {}\nbasis:\n",
                s(&b),
                factor.k,
                s(&factor.btilde)
            );
            let n = p.as_usize();
            for (j, x) in basis.iter().enumerate() {
                let _ = writeln!(out, "  (g-1)^{} = {}", n - 1 - j, s(x));
            }
            if let Some(size) = size {
                let _ = writeln!(out, "kernel size: {size}");
            }
            if let Some((found, ok)) = &swept {
                let _ = writeln!(
                    out,
                    "brute-force sweep: {} elements, {}",
                    found.len(),
                    if *ok {
                        "equal to the span of the basis"
                    } else {
                        "DIFFERS from the span of the basis"
                    }
                );
                for x in found {
                    let _ = writeln!(out, "  {}", s(x));
                }
            }
            out
        }
    };
    Ok(Outcome::verdict(out, passed))
}

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use orbifold_core::{GroupAlgebraElement as Ga, Prime};

pub const GOLDEN_TABLE_P3: &str = include_str!("../golden/table_p3.txt");

/// A product such as `-(g+1)(g-1)`, `g(g-1)` or `(g-1)^2`.
pub fn factored(p: Prime, text: &str) -> Ga {
    let text = text.trim();
    if !text.contains('(') {
        return Ga::parse(p, text).unwrap();
    }
    let (sign, mut rest) = match text.strip_prefix('-') {
        Some(r) => (p.get() - 1, r),
        None => (1, text),
    };
    let mut out = Ga::one(p);
    while !rest.is_empty() {
        let (factor, tail) = if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').unwrap();
            (Ga::parse(p, &r[..close]).unwrap(), &r[close + 1..])
        } else {
            let r = rest.strip_prefix('g').unwrap();
            (Ga::g_pow(p, 1), r)
        };
        let (power, tail) = match tail.strip_prefix('^') {
            Some(r) => {
                let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
                (r[..end].parse::<u64>().unwrap(), &r[end..])
            }
            None => (1, tail),
        };
        out = &out * &factor.pow(power);
        rest = tail;
    }
    out.scale(sign)
}

/// The golden table expanded to `b -> {a}`.
pub fn golden_pairs(p: Prime, golden: &str) -> BTreeMap<Ga, BTreeSet<Ga>> {
    let mut out = BTreeMap::new();
    for line in golden
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let (bs, as_) = line.split_once('|').unwrap();
        let (bs, as_) = (bs.trim(), as_.trim());
        if bs == "sum != 0" {
            assert_eq!(as_, "b1 g");
            for b in Ga::all(p).filter(|b| b.augmentation() != 0) {
                out.insert(b.clone(), BTreeSet::from([Ga::monomial(p, 1, b.coeff(1))]));
            }
            continue;
        }
        let a_set: BTreeSet<Ga> = if as_ == "*" {
            Ga::all(p).collect()
        } else {
            as_.split(',')
                .map(|a| Ga::parse(p, a.trim()).unwrap())
                .collect()
        };
        for b in split_top_level(bs) {
            assert!(
                out.insert(factored(p, b), a_set.clone()).is_none(),
                "duplicate b {b}"
            );
        }
    }
    out
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

/// `k,b,a` CSV rows to `b -> (k, {a})`.
pub fn table_csv_pairs(p: Prime, csv: &str) -> BTreeMap<Ga, (usize, BTreeSet<Ga>)> {
    let mut out: BTreeMap<Ga, (usize, BTreeSet<Ga>)> = BTreeMap::new();
    for line in csv.lines().skip(1) {
        let mut cols = line.split(',');
        let k: usize = cols.next().unwrap().parse().unwrap();
        let b = Ga::parse(p, cols.next().unwrap()).unwrap();
        let a = Ga::parse(p, cols.next().unwrap()).unwrap();
        let entry = out.entry(b).or_insert((k, BTreeSet::new()));
        assert_eq!(entry.0, k);
        assert!(entry.1.insert(a), "repeated pair in {line}");
    }
    out
}

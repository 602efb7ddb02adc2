//! An independent PBW verifier based on rewriting.
//!
//! The algebra is presented by generators `v1, v2, g^1, ..., g^(p-1)` and the
//! rules
//!
//! - R1: `g^m v1 -> v1 g^m + lambda(g^m, v1)`
//! - R2: `g^m v2 -> m v1 g^m + v2 g^m + lambda(g^m, v2)`
//! - R3: `v2 v1 -> v1 v2 - kappa^C - kappa^L`
//! - R4: `g^m g^n -> g^(m+n)` (the empty word when `m + n = p`)
//!
//! Irreducible words are exactly `v1^i v2^j g^m`. Every rule lowers
//! `(v-degree, #(g before v), #(v2 before v1), length)` lexicographically,
//! so reduction terminates. The PBW property is certified up to a degree
//! bound by associativity of the reduced product on normal words.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::action::VGroupElement;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::{Prime, Scalar};
use crate::group_algebra::GroupAlgebraElement;
use crate::params::DeformationParams;

type Ga = GroupAlgebraElement;

/// Smallest and largest degree bound accepted by the associativity check.
pub const MIN_DEGREE: usize = 3;
pub const MAX_DEGREE: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    V1,
    V2,
    /// `g^m` with `1 <= m < p`.
    G(u32),
}

impl Letter {
    fn is_v(self) -> bool {
        !matches!(self, Letter::G(_))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::V1 => f.write_str("v1"),
            Letter::V2 => f.write_str("v2"),
            Letter::G(1) => f.write_str("g"),
            Letter::G(m) => write!(f, "g^{m}"),
        }
    }
}

/// A word in the free algebra; ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeWord(pub Vec<Letter>);

impl FreeWord {
    pub fn v_degree(&self) -> usize {
        self.0.iter().filter(|l| l.is_v()).count()
    }
}

impl Ord for FreeWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.0.len(), &self.0).cmp(&(other.0.len(), &other.0))
    }
}

impl PartialOrd for FreeWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of free words with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCPolynomial {
    p: Prime,
    terms: BTreeMap<FreeWord, Scalar>,
}

impl NCPolynomial {
    pub fn zero(p: Prime) -> Self {
        Self {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn word(p: Prime, w: FreeWord) -> Self {
        let mut x = Self::zero(p);
        x.add_term(w, 1);
        x
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn terms(&self) -> &BTreeMap<FreeWord, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: FreeWord, c: Scalar) {
        let c = c % self.p.get();
        if c == 0 {
            return;
        }
        let sum = self.p.add(self.terms.get(&w).copied().unwrap_or(0), c);
        if sum == 0 {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let mut out = Self::zero(self.p);
        for (w, &x) in &self.terms {
            out.add_term(w.clone(), self.p.mul(x, c));
        }
        out
    }

    /// True when every word is a normal word.
    pub fn is_normal(&self) -> bool {
        self.terms
            .keys()
            .all(|w| NormalWord::from_word(w).is_some())
    }
}

impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, &c)) in self.terms.iter().enumerate() {
            let s = self.p.centered(c);
            match (i, s < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = s.unsigned_abs();
            if mag == 1 {
                write!(f, "{w}")?;
            } else if w.0.is_empty() {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag} {w}")?;
            }
        }
        Ok(())
    }
}

/// `v1^i v2^j g^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NormalWord {
    pub i: u32,
    pub j: u32,
    pub m: u32,
}

impl NormalWord {
    pub fn new(i: u32, j: u32, m: u32) -> Self {
        Self { i, j, m }
    }

    pub fn degree(self) -> usize {
        (self.i + self.j) as usize
    }

    pub fn letters(self) -> Vec<Letter> {
        let mut w = Vec::with_capacity(self.degree() + 1);
        w.extend(std::iter::repeat_n(Letter::V1, self.i as usize));
        w.extend(std::iter::repeat_n(Letter::V2, self.j as usize));
        if self.m != 0 {
            w.push(Letter::G(self.m));
        }
        w
    }

    pub fn to_word(self) -> FreeWord {
        FreeWord(self.letters())
    }

    pub fn from_word(w: &FreeWord) -> Option<Self> {
        let mut i = 0;
        let mut j = 0;
        let mut m = 0;
        for (pos, &l) in w.0.iter().enumerate() {
            match l {
                Letter::V1 if j == 0 && m == 0 => i += 1,
                Letter::V2 if m == 0 => j += 1,
                Letter::G(x) if pos + 1 == w.0.len() => m = x,
                _ => return None,
            }
        }
        Some(Self { i, j, m })
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

type Replacement = Vec<(Vec<Letter>, Scalar)>;

/// The rewriting rules of one parameter pair.
#[derive(Clone, Debug)]
pub struct RuleSet {
    p: Prime,
    lambda: Vec<[Ga; 2]>,
    kappa_c: Ga,
    kappa_l: VGroupElement,
    identity_defect: bool,
}

fn g_word(p: Prime, c: usize) -> Vec<Letter> {
    let c = c % p.as_usize();
    if c == 0 {
        Vec::new()
    } else {
        vec![Letter::G(c as u32)]
    }
}

impl RuleSet {
    pub fn from_params(params: &DeformationParams) -> Self {
        Self {
            p: params.prime(),
            lambda: params.lambda.clone(),
            kappa_c: params.kappa_c.clone(),
            kappa_l: params.kappa_l.clone(),
            identity_defect: !params.identity_lambda_vanishes(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// True when the parameters assign a nonzero `lambda` to the identity,
    /// which no rule can express since the identity is not a letter.
    pub fn identity_defect(&self) -> bool {
        self.identity_defect
    }

    fn push_group(&self, out: &mut Replacement, prefix: &[Letter], x: &Ga, sign: Scalar) {
        for (c, &coef) in x.coeffs().iter().enumerate() {
            if coef != 0 {
                let mut w = prefix.to_vec();
                w.extend(g_word(self.p, c));
                out.push((w, self.p.mul(coef, sign)));
            }
        }
    }

    /// The rule with left side `l r`, if any.
    pub fn rewrite_pair(&self, l: Letter, r: Letter) -> Option<(RuleId, Replacement)> {
        let p = self.p;
        let mut out = Vec::new();
        match (l, r) {
            (Letter::G(m), Letter::V1) => {
                out.push((vec![Letter::V1, Letter::G(m)], 1));
                self.push_group(&mut out, &[], &self.lambda[m as usize][0], 1);
                Some((RuleId::R1, out))
            }
            (Letter::G(m), Letter::V2) => {
                out.push((vec![Letter::V1, Letter::G(m)], m % p.get()));
                out.push((vec![Letter::V2, Letter::G(m)], 1));
                self.push_group(&mut out, &[], &self.lambda[m as usize][1], 1);
                out.retain(|(_, c)| *c != 0);
                Some((RuleId::R2, out))
            }
            (Letter::V2, Letter::V1) => {
                let minus = p.neg(1);
                out.push((vec![Letter::V1, Letter::V2], 1));
                self.push_group(&mut out, &[], &self.kappa_c, minus);
                self.push_group(&mut out, &[Letter::V1], &self.kappa_l.v1, minus);
                self.push_group(&mut out, &[Letter::V2], &self.kappa_l.v2, minus);
                Some((RuleId::R3, out))
            }
            (Letter::G(m), Letter::G(n)) => {
                Some((RuleId::R4, vec![(g_word(p, (m + n) as usize), 1)]))
            }
            _ => None,
        }
    }

    pub fn is_redex(&self, l: Letter, r: Letter) -> bool {
        matches!((l, r), (Letter::G(_), _) | (Letter::V2, Letter::V1))
    }

    /// The alphabet `v1, v2, g^1, ..., g^(p-1)`.
    pub fn alphabet(&self) -> Vec<Letter> {
        let mut a = vec![Letter::V1, Letter::V2];
        a.extend((1..self.p.get()).map(Letter::G));
        a
    }

    /// One line per rule instance, `left -> right [id]`.
    pub fn describe(&self) -> Vec<String> {
        let mut lines = Vec::new();
        let alphabet = self.alphabet();
        for &l in &alphabet {
            for &r in &alphabet {
                if let Some((id, rep)) = self.rewrite_pair(l, r) {
                    lines.push(format!(
                        "{} -> {} [{id}]",
                        FreeWord(vec![l, r]),
                        replacement_poly(self.p, &rep)
                    ));
                }
            }
        }
        lines
    }
}

fn replacement_poly(p: Prime, rep: &Replacement) -> NCPolynomial {
    let mut x = NCPolynomial::zero(p);
    for (w, c) in rep {
        x.add_term(FreeWord(w.clone()), *c);
    }
    x
}

/// `(v-degree, #(g before v), #(v2 before v1), length)`.
pub fn termination_measure(w: &FreeWord) -> (usize, usize, usize, usize) {
    let mut gs = 0;
    let mut v2s = 0;
    let mut g_inv = 0;
    let mut v_inv = 0;
    for &l in &w.0 {
        match l {
            Letter::G(_) => gs += 1,
            Letter::V2 => {
                g_inv += gs;
                v2s += 1;
            }
            Letter::V1 => {
                g_inv += gs;
                v_inv += v2s;
            }
        }
    }
    (w.v_degree(), g_inv, v_inv, w.0.len())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

fn find_redex(rules: &RuleSet, w: &[Letter], strategy: Strategy) -> Option<usize> {
    let mut it = (0..w.len().saturating_sub(1)).filter(|&k| rules.is_redex(w[k], w[k + 1]));
    match strategy {
        Strategy::Leftmost => it.next(),
        Strategy::Rightmost => it.next_back(),
    }
}

fn splice(w: &[Letter], k: usize, mid: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(w.len() + mid.len());
    out.extend_from_slice(&w[..k]);
    out.extend_from_slice(mid);
    out.extend_from_slice(&w[k + 2..]);
    out
}

/// A normal form as a sorted list of `(normal word, coefficient)`.
pub type NormalForm = Vec<(NormalWord, Scalar)>;

/// Word reduction with a memo table.
pub struct Reducer<'a> {
    rules: &'a RuleSet,
    strategy: Strategy,
    memo: HashMap<Vec<Letter>, NormalForm>,
}

impl<'a> Reducer<'a> {
    pub fn new(rules: &'a RuleSet) -> Self {
        Self::with_strategy(rules, Strategy::Leftmost)
    }

    pub fn with_strategy(rules: &'a RuleSet, strategy: Strategy) -> Self {
        Self {
            rules,
            strategy,
            memo: HashMap::new(),
        }
    }

    /// Normal form of a single word.
    pub fn normal_form(&mut self, w: &[Letter]) -> NormalForm {
        if let Some(nf) = self.memo.get(w) {
            return nf.clone();
        }
        let nf = match find_redex(self.rules, w, self.strategy) {
            None => {
                let nw = NormalWord::from_word(&FreeWord(w.to_vec()))
                    .expect("irreducible words are normal");
                vec![(nw, 1)]
            }
            Some(k) => {
                let p = self.rules.p;
                let (_, rep) = self
                    .rules
                    .rewrite_pair(w[k], w[k + 1])
                    .expect("redex has a rule");
                let mut acc: BTreeMap<NormalWord, Scalar> = BTreeMap::new();
                for (mid, c) in rep {
                    for (nw, d) in self.normal_form(&splice(w, k, &mid)) {
                        let slot = acc.entry(nw).or_insert(0);
                        *slot = p.add(*slot, p.mul(c, d));
                    }
                }
                acc.into_iter().filter(|&(_, c)| c != 0).collect()
            }
        };
        self.memo.insert(w.to_vec(), nf.clone());
        nf
    }

    pub fn reduce(&mut self, x: &NCPolynomial) -> NCPolynomial {
        let p = x.prime();
        let mut out = NCPolynomial::zero(p);
        for (w, &c) in x.terms() {
            for (nw, d) in self.normal_form(&w.0) {
                out.add_term(nw.to_word(), p.mul(c, d));
            }
        }
        out
    }

    /// Reduced product of two normal words.
    pub fn multiply(&mut self, x: NormalWord, y: NormalWord) -> NormalForm {
        let mut w = x.letters();
        w.extend(y.letters());
        self.normal_form(&w)
    }
}

/// Reduce a polynomial one rule application at a time, recording each step
/// as `word -> replacement [rule]`.
pub fn reduce_traced(
    x: &NCPolynomial,
    rules: &RuleSet,
    strategy: Strategy,
) -> (NCPolynomial, Vec<String>) {
    let p = x.prime();
    let mut cur = x.clone();
    let mut trace = Vec::new();
    loop {
        let target = cur
            .terms()
            .iter()
            .find_map(|(w, &c)| find_redex(rules, &w.0, strategy).map(|k| (w.clone(), c, k)));
        let Some((w, c, k)) = target else { break };
        let (id, rep) = rules
            .rewrite_pair(w.0[k], w.0[k + 1])
            .expect("redex has a rule");
        let mut step = NCPolynomial::zero(p);
        for (mid, d) in &rep {
            step.add_term(FreeWord(splice(&w.0, k, mid)), *d);
        }
        trace.push(format!("{w} -> {step} [{id}]"));
        cur.add_term(w, p.neg(c));
        cur = cur.add(&step.scale(c));
    }
    (cur, trace)
}

/// `reduce(x y)` for normal words.
pub fn oracle_multiply(x: NormalWord, y: NormalWord, rules: &RuleSet) -> NCPolynomial {
    let mut r = Reducer::new(rules);
    let p = rules.prime();
    let mut out = NCPolynomial::zero(p);
    for (nw, c) in r.multiply(x, y) {
        out.add_term(nw.to_word(), c);
    }
    out
}

/// All normal words of degree at most `d`, by degree, then `j`, then `m`.
pub fn normal_words(p: Prime, d: usize) -> Vec<NormalWord> {
    let mut out = Vec::new();
    for deg in 0..=d as u32 {
        for j in 0..=deg {
            for m in 0..p.get() {
                out.push(NormalWord::new(deg - j, j, m));
            }
        }
    }
    out
}

fn normal_index(p: Prime, w: NormalWord) -> usize {
    let d = w.degree();
    (d * (d + 1) / 2 + w.j as usize) * p.as_usize() + w.m as usize
}

fn form_text(p: Prime, f: &[(NormalWord, Scalar)]) -> String {
    let mut x = NCPolynomial::zero(p);
    for &(w, c) in f {
        x.add_term(w.to_word(), c);
    }
    x.to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AssociativityWitness {
    /// `(x y) z != x (y z)` after reduction.
    Triple {
        x: String,
        y: String,
        z: String,
        left: String,
        right: String,
    },
    /// `lambda(1, v) != 0`, which the relations cannot represent.
    IdentityDefect,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssociativityReport {
    pub passed: bool,
    pub degree: usize,
    /// Triples examined, up to and including the witness when there is one.
    pub triples_checked: u64,
    pub witness: Option<AssociativityWitness>,
}

/// Products of all pairs of normal words with total degree at most `d`,
/// indexed by [`normal_index`].
struct PairTable {
    n: usize,
    products: Vec<Option<Vec<(usize, Scalar)>>>,
}

impl PairTable {
    fn build(rules: &RuleSet, words: &[NormalWord], d: usize) -> Self {
        let p = rules.prime();
        let n = words.len();
        let mut reducer = Reducer::new(rules);
        let mut products = vec![None; n * n];
        for (xi, &x) in words.iter().enumerate() {
            for (yi, &y) in words.iter().enumerate() {
                if x.degree() + y.degree() <= d {
                    let f = reducer.multiply(x, y);
                    products[xi * n + yi] = Some(
                        f.into_iter()
                            .map(|(w, c)| (normal_index(p, w), c))
                            .collect(),
                    );
                }
            }
        }
        Self { n, products }
    }

    fn get(&self, x: usize, y: usize) -> &[(usize, Scalar)] {
        self.products[x * self.n + y]
            .as_deref()
            .expect("degree within bound")
    }
}

/// Check `reduce((x y) z) = reduce(x (y z))` for all normal words with
/// `deg x + deg y + deg z <= d`.
pub fn check_associativity(rules: &RuleSet, d: usize, exec: Exec) -> Result<AssociativityReport> {
    if !(MIN_DEGREE..=MAX_DEGREE).contains(&d) {
        return Err(Error::DegreeBound {
            got: d,
            min: MIN_DEGREE,
            max: MAX_DEGREE,
        });
    }
    if rules.identity_defect() {
        return Ok(AssociativityReport {
            passed: false,
            degree: d,
            triples_checked: 0,
            witness: Some(AssociativityWitness::IdentityDefect),
        });
    }
    let p = rules.prime();
    let words = normal_words(p, d);
    let table = PairTable::build(rules, &words, d);
    let n = words.len();
    let triples = ordered_triples(&words, d);
    let chunks: Vec<(usize, &[Triple])> = triples
        .chunks(256)
        .enumerate()
        .map(|(c, chunk)| (c * 256, chunk))
        .collect();
    let q = p.get() as u64;
    let first = exec.find_map_first_init(
        &chunks,
        || (vec![0u64; n], vec![0u64; n]),
        |(left, right), &(start, chunk)| {
            chunk.iter().enumerate().find_map(|(pos, &(xi, yi, zi))| {
                let (xi, yi, zi) = (xi as usize, yi as usize, zi as usize);
                left.iter_mut().for_each(|v| *v = 0);
                right.iter_mut().for_each(|v| *v = 0);
                for &(w, c) in table.get(xi, yi) {
                    for &(t, e) in table.get(w, zi) {
                        left[t] += c as u64 * e as u64;
                    }
                }
                for &(w, c) in table.get(yi, zi) {
                    for &(t, e) in table.get(xi, w) {
                        right[t] += c as u64 * e as u64;
                    }
                }
                if left.iter().zip(right.iter()).all(|(a, b)| a % q == b % q) {
                    return None;
                }
                let collect = |v: &[u64]| -> Vec<(NormalWord, Scalar)> {
                    v.iter()
                        .enumerate()
                        .filter(|(_, &c)| c % q != 0)
                        .map(|(t, &c)| (words[t], (c % q) as Scalar))
                        .collect()
                };
                let witness = AssociativityWitness::Triple {
                    x: words[xi].to_string(),
                    y: words[yi].to_string(),
                    z: words[zi].to_string(),
                    left: form_text(p, &collect(left)),
                    right: form_text(p, &collect(right)),
                };
                Some((start + pos + 1, witness))
            })
        },
    );
    let (checked, witness) = match first {
        Some((k, w)) => (k as u64, Some(w)),
        None => (triples.len() as u64, None),
    };
    Ok(AssociativityReport {
        passed: witness.is_none(),
        degree: d,
        triples_checked: checked,
        witness,
    })
}

/// Index triples with total degree at most `d`, smallest overlaps first:
/// ordered by total degree, then total number of letters.
type Triple = (u32, u32, u32);

fn ordered_triples(words: &[NormalWord], d: usize) -> Vec<Triple> {
    let letters = |w: NormalWord| w.degree() + usize::from(w.m != 0);
    let mut keyed = Vec::new();
    for (xi, &x) in words.iter().enumerate() {
        for (yi, &y) in words.iter().enumerate() {
            for (zi, &z) in words.iter().enumerate() {
                let total = x.degree() + y.degree() + z.degree();
                if total <= d {
                    let len = letters(x) + letters(y) + letters(z);
                    keyed.push(((total, len), (xi as u32, yi as u32, zi as u32)));
                }
            }
        }
    }
    keyed.sort();
    keyed.into_iter().map(|(_, t)| t).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub degree: usize,
    pub found: u64,
    pub expected: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub passed: bool,
    /// Cumulative irreducible-word counts for degrees `0..=d`.
    pub rows: Vec<DimensionRow>,
    pub failures: Vec<String>,
}

/// Irreducible words of v-degree at most `d`, found by extending words one
/// letter at a time and discarding any that contain a left side of a rule.
pub fn irreducible_words(rules: &RuleSet, d: usize) -> Vec<FreeWord> {
    let alphabet = rules.alphabet();
    let mut out = vec![FreeWord(Vec::new())];
    let mut frontier = vec![Vec::<Letter>::new()];
    while let Some(w) = frontier.pop() {
        for &l in &alphabet {
            if l.is_v() && w.iter().filter(|x| x.is_v()).count() == d {
                continue;
            }
            if let Some(&last) = w.last() {
                if rules.is_redex(last, l) {
                    continue;
                }
            }
            let mut next = w.clone();
            next.push(l);
            out.push(FreeWord(next.clone()));
            frontier.push(next);
        }
    }
    out.sort();
    out
}

/// The leading part of `x y` in `S(V) # G`:
/// `v1^i v2^j (^{g^m} (v1^i' v2^j')) g^(m+m')` with `^{g^m} v2 = v2 + m v1`.
fn graded_product(p: Prime, x: NormalWord, y: NormalWord) -> BTreeMap<NormalWord, Scalar> {
    let mut out = BTreeMap::new();
    let m = x.m;
    for t in 0..=y.j {
        let c = p.mul(p.binom(y.j as u64, t as u64), p.pow(m, t as u64));
        if c != 0 {
            let w = NormalWord::new(x.i + y.i + t, x.j + y.j - t, (x.m + y.m) % p.get());
            out.insert(w, c);
        }
    }
    out
}

/// Count irreducible words per degree against `p C(d+2, 2)`, check that
/// reduction fixes them, and check that products of normal words respect
/// the filtration with leading part equal to the product in `S(V) # G`.
pub fn check_dimension(rules: &RuleSet, d: usize) -> DimensionReport {
    let p = rules.prime();
    let words = irreducible_words(rules, d);
    let mut failures = Vec::new();
    let rows: Vec<DimensionRow> = (0..=d)
        .map(|e| {
            let found = words.iter().filter(|w| w.v_degree() <= e).count() as u64;
            let expected = p.get() as u64 * ((e as u64 + 2) * (e as u64 + 1) / 2);
            DimensionRow {
                degree: e,
                found,
                expected,
            }
        })
        .collect();
    for r in &rows {
        if r.found != r.expected {
            failures.push(format!(
                "degree <= {}: {} irreducible words, expected {}",
                r.degree, r.found, r.expected
            ));
        }
    }
    let mut reducer = Reducer::new(rules);
    for w in &words {
        let nf = reducer.normal_form(&w.0);
        match NormalWord::from_word(w) {
            Some(nw) if nf == vec![(nw, 1)] => {}
            _ => failures.push(format!("reduce is not the identity on {w}")),
        }
    }
    let normal = normal_words(p, d);
    for &x in &normal {
        for &y in &normal {
            let top = x.degree() + y.degree();
            if top > d {
                continue;
            }
            let nf = reducer.multiply(x, y);
            if let Some((w, _)) = nf.iter().find(|(w, _)| w.degree() > top) {
                failures.push(format!("{x} * {y} has a term {w} above degree {top}"));
                continue;
            }
            let lead: BTreeMap<NormalWord, Scalar> =
                nf.into_iter().filter(|(w, _)| w.degree() == top).collect();
            if lead != graded_product(p, x, y) {
                failures.push(format!("{x} * {y} has the wrong leading part"));
            }
        }
    }
    DimensionReport {
        passed: failures.is_empty(),
        rows,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::build_candidate;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn el(s: &str) -> Ga {
        Ga::parse(p3(), s).unwrap()
    }

    fn running() -> RuleSet {
        RuleSet::from_params(&build_candidate(&el("-1+g+g^2"), &el("1-g")).unwrap())
    }

    fn poly(p: Prime, letters: &[Letter]) -> NCPolynomial {
        NCPolynomial::word(p, FreeWord(letters.to_vec()))
    }

    use Letter::{G, V1, V2};

    #[test]
    fn rule_examples() {
        let p = p3();
        let zero = RuleSet::from_params(&DeformationParams::zero(p));
        let (id, rep) = zero.rewrite_pair(G(1), V1).unwrap();
        assert_eq!(id, RuleId::R1);
        assert_eq!(rep, vec![(vec![V1, G(1)], 1)]);
        let lines = running().describe();
        assert!(
            lines.contains(&"v2 v1 -> v1 + v1 v2 + v2 g [R3]".to_string()),
            "{lines:?}"
        );
        let (_, rep) = zero.rewrite_pair(G(1), V2).unwrap();
        assert_eq!(rep, vec![(vec![V1, G(1)], 1), (vec![V2, G(1)], 1)]);
        let (_, rep) = zero.rewrite_pair(G(1), G(2)).unwrap();
        assert_eq!(rep, vec![(vec![], 1)]);
    }

    #[test]
    fn reduce_examples() {
        let p = p3();
        let rules = running();
        let mut r = Reducer::new(&rules);
        let got = r.reduce(&poly(p, &[G(1), V1]));
        let mut want = poly(p, &[V1, G(1)]);
        want.add_term(FreeWord(vec![G(1)]), 1);
        want.add_term(FreeWord(vec![G(2)]), 2);
        assert_eq!(got, want);
        let normal = poly(p, &[V1, V2, G(1)]);
        assert_eq!(r.reduce(&normal), normal);
    }

    #[test]
    fn oracle_multiply_examples() {
        let p = p3();
        let rules = running();
        assert_eq!(
            oracle_multiply(NormalWord::new(1, 0, 0), NormalWord::new(0, 1, 0), &rules),
            poly(p, &[V1, V2])
        );
        assert_eq!(
            oracle_multiply(NormalWord::new(0, 0, 1), NormalWord::new(0, 0, 1), &rules),
            poly(p, &[G(2)])
        );
        let got = oracle_multiply(NormalWord::new(0, 1, 0), NormalWord::new(1, 0, 0), &rules);
        let (_, rep) = rules.rewrite_pair(V2, V1).unwrap();
        assert_eq!(got, replacement_poly(p, &rep));
    }

    #[test]
    fn rules_lower_the_termination_measure() {
        let rules = running();
        let alphabet = rules.alphabet();
        for &a in &alphabet {
            for &l in &alphabet {
                for &r in &alphabet {
                    let Some((_, rep)) = rules.rewrite_pair(l, r) else {
                        continue;
                    };
                    let w = vec![a, l, r];
                    let before = termination_measure(&FreeWord(w.clone()));
                    for (mid, _) in rep {
                        let after = termination_measure(&FreeWord(splice(&w, 1, &mid)));
                        assert!(after < before, "{w:?} -> {mid:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn traced_reduction_agrees_with_memoized() {
        let p = p3();
        let rules = running();
        let x = poly(p, &[G(1), V2, V1]);
        let (left, trace) = reduce_traced(&x, &rules, Strategy::Leftmost);
        let (right, _) = reduce_traced(&x, &rules, Strategy::Rightmost);
        assert_eq!(left, right);
        assert_eq!(left, Reducer::new(&rules).reduce(&x));
        assert!(trace[0].starts_with("g v2 v1 -> "));
        assert!(trace[0].ends_with("[R2]"));
    }

    #[test]
    fn associativity_examples() {
        let p = p3();
        let zero = RuleSet::from_params(&DeformationParams::zero(p));
        for exec in [Exec::Sequential, Exec::Parallel] {
            let r = check_associativity(&zero, 4, exec).unwrap();
            assert!(r.passed);
            assert_eq!(r.triples_checked, 210 * 27);
            assert!(check_associativity(&running(), 4, exec).unwrap().passed);
        }
        let bad = RuleSet::from_params(&build_candidate(&el("g"), &el("1-g")).unwrap());
        let r = check_associativity(&bad, 3, Exec::Sequential).unwrap();
        match r.witness {
            Some(AssociativityWitness::Triple { x, y, z, .. }) => {
                let all = format!("{x} {y} {z}");
                assert!(
                    all.contains('g') && all.contains("v2") && all.contains("v1"),
                    "{all}"
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(check_associativity(&zero, 2, Exec::Sequential).is_err());
        let mut defect = DeformationParams::zero(p);
        defect.lambda[0][0] = el("1");
        let r = check_associativity(&RuleSet::from_params(&defect), 3, Exec::Sequential).unwrap();
        assert_eq!(r.witness, Some(AssociativityWitness::IdentityDefect));
    }

    #[test]
    fn dimension_counts() {
        let report = check_dimension(&running(), 4);
        assert!(report.passed, "{:?}", report.failures);
        let found: Vec<u64> = report.rows.iter().map(|r| r.found).collect();
        assert_eq!(found, vec![3, 9, 18, 30, 45]);
        let bad = RuleSet::from_params(&build_candidate(&el("g"), &el("1-g")).unwrap());
        assert!(check_dimension(&bad, 2).passed);
    }
}

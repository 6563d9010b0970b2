//! Expansion of `(T + θ)^n` under `θT = (θT) + Tθ`.
//!
//! A composition word `(i_1, ..., i_l)` stands for the product
//! `(θ^{i_1-1}T)···(θ^{i_l-1}T)`; a trailing power `θ^e` may follow during
//! brute-force expansion.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{is_prime, FieldElem};
use crate::ring::Ring;

/// Weight bound for [`expand_brute`], which tracks `2^n` words.
pub const BRUTE_MAX: u32 = 12;
/// Largest prime for which [`pcurvature_formula`] materializes its `2^{p-1}` terms.
pub const FORMULA_MAX_P: u64 = 23;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub comp: Vec<u32>,
    pub trailing: u32,
}

impl Word {
    pub fn new(comp: Vec<u32>, trailing: u32) -> Self {
        Word { comp, trailing }
    }

    pub fn weight(&self) -> u32 {
        self.comp.iter().sum::<u32>() + self.trailing
    }
}

/// Integer-coefficient noncommutative polynomial.
pub type NCPoly = BTreeMap<Word, u64>;

/// Full expansion of `(T + θ)^n` by repeated left multiplication.
pub fn expand_brute(n: u32) -> Result<NCPoly> {
    if n > BRUTE_MAX {
        return Err(Error::TooLarge(n));
    }
    let mut cur: NCPoly = BTreeMap::new();
    cur.insert(Word::new(vec![], 0), 1);
    for _ in 0..n {
        let mut next: NCPoly = BTreeMap::new();
        for (w, &c) in &cur {
            // T · w
            let mut comp = vec![1];
            comp.extend_from_slice(&w.comp);
            *next.entry(Word::new(comp, w.trailing)).or_default() += c;
            // θ · w: θ either lands on a factor or passes all of them
            for j in 0..w.comp.len() {
                let mut comp = w.comp.clone();
                comp[j] += 1;
                *next.entry(Word::new(comp, w.trailing)).or_default() += c;
            }
            *next.entry(Word::new(w.comp.clone(), w.trailing + 1)).or_default() += c;
        }
        cur = next;
    }
    Ok(cur)
}

fn check_comp(n: u32, word: &[u32]) -> Result<()> {
    if word.contains(&0) {
        return Err(Error::BadComposition(format!("{word:?} has a zero entry")));
    }
    if word.iter().sum::<u32>() != n {
        return Err(Error::BadComposition(format!("{word:?} does not sum to {n}")));
    }
    Ok(())
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// The coefficient `n_𝔦` of a word without trailing θ, as
/// `(n-1)! / (∏ (i_j - 1)! · ∏_{j<l} (i_1 + ... + i_j))`.
pub fn coeff_closed_form(n: u32, word: &[u32]) -> Result<BigUint> {
    check_comp(n, word)?;
    if word.is_empty() {
        return if n == 0 { Ok(BigUint::one()) } else { Err(Error::BadComposition("empty word".into())) };
    }
    let mut den = BigUint::one();
    let mut prefix = 0;
    for (j, &i) in word.iter().enumerate() {
        den *= factorial(i - 1);
        prefix += i;
        if j + 1 < word.len() {
            den *= prefix;
        }
    }
    let num = factorial(n - 1);
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

fn binom_big(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Coefficient of a word followed by `θ^{trailing}`: `binom(n, e)` times the
/// coefficient of the bare word.
pub fn coeff_with_trailing(n: u32, word: &Word) -> Result<BigUint> {
    if word.weight() != n {
        return Err(Error::BadComposition(format!("{word:?} does not have weight {n}")));
    }
    let base = n - word.trailing;
    let inner = if word.comp.is_empty() { BigUint::one() } else { coeff_closed_form(base, &word.comp)? };
    Ok(binom_big(n, word.trailing) * inner)
}

/// `Σ_{σ} n_{σ(𝔦)}` over permutations preserving the relative order of the
/// positions in `lambda` (0-based), in closed form.
pub fn ordered_coeff(n: u32, word: &[u32], lambda: &[usize]) -> Result<BigRational> {
    check_comp(n, word)?;
    if let Some(&bad) = lambda.iter().find(|&&j| j >= word.len()) {
        return Err(Error::BadComposition(format!("index {bad} outside word of length {}", word.len())));
    }
    let mut den = BigUint::one();
    for (j, &i) in word.iter().enumerate() {
        den *= factorial(i - 1);
        let mut s = i;
        if lambda.contains(&j) {
            s += lambda.iter().filter(|&&m| m < j).map(|&m| word[m]).sum::<u32>();
        }
        den *= s;
    }
    Ok(BigRational::new(factorial(n).into(), den.into()))
}

/// One term `coeff · word` of a p-curvature formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCTerm {
    pub coeff: u64,
    pub word: Vec<u32>,
}

/// The p-curvature `ψ(θ) = Σ n_𝔦 T_𝔦 − f_{θ^p} T`; the correction term is
/// implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCFormula {
    pub p: u64,
    pub terms: Vec<NCTerm>,
}

/// All compositions of `n`, in lexicographic order.
pub fn compositions(n: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for i in 1..=rest {
            cur.push(i);
            rec(rest - i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

pub fn pcurvature_formula(p: u64) -> Result<PCFormula> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > FORMULA_MAX_P {
        return Err(Error::TooLarge(p as u32));
    }
    let pb = BigUint::from(p);
    let terms = compositions(p as u32)
        .into_iter()
        .map(|word| {
            let c = coeff_closed_form(p as u32, &word)?;
            let coeff = (c % &pb).to_u64().unwrap();
            Ok(NCTerm { coeff, word })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PCFormula { p, terms })
}

fn fmt_word(word: &[u32]) -> String {
    let mut s = String::new();
    let mut j = 0;
    while j < word.len() {
        let mut k = j;
        while k < word.len() && word[k] == word[j] {
            k += 1;
        }
        let base = if word[j] == 1 { "T".to_string() } else { format!("(t{} T)", word[j] - 1) };
        s.push_str(&base);
        if k - j > 1 {
            s.push_str(&format!("^{}", k - j));
        }
        j = k;
    }
    s
}

impl PCFormula {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .filter(|t| t.coeff != 0)
            .map(|t| {
                let w = fmt_word(&t.word);
                if t.coeff == 1 {
                    w
                } else {
                    format!("{} {w}", t.coeff)
                }
            })
            .collect();
        parts.push(format!("- f_{{t^{}}} T", self.p));
        let mut s = parts[..parts.len() - 1].join(" + ");
        s.push(' ');
        s.push_str(&parts[parts.len() - 1]);
        s
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms.iter().map(|t| json!({"coeff": t.coeff, "word": t.word})).collect();
        json!({
            "p": self.p,
            "terms": terms,
            "correction": {"coeff": self.p - 1, "factor": format!("f_{{theta^{}}}", self.p), "word": [1]},
        })
    }

    /// Evaluates the sum of linear terms at `derivs[i] = θ^i T` in any ring,
    /// by summing over the stored words.
    pub fn evaluate_terms<M: Ring>(&self, derivs: &[M]) -> M {
        let mut acc = derivs[0].zero();
        for t in &self.terms {
            let mut prod = derivs[0].one();
            for &i in &t.word {
                prod = prod.mul(&derivs[i as usize - 1]);
            }
            acc = acc.add(&prod.scale_int(t.coeff as i64));
        }
        acc
    }
}

impl fmt::Display for PCFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

/// Parses the text form produced by [`PCFormula::to_text`] back into
/// `(coeff, word)` pairs; the correction term is dropped.
pub fn parse_formula_text(s: &str) -> Result<Vec<NCTerm>> {
    let bad = |m: &str| Error::Parse(format!("{m} in formula text"));
    let body = match s.find(" - f_") {
        Some(i) => &s[..i],
        None => s,
    };
    let mut out = Vec::new();
    for raw in body.split(" + ") {
        let raw = raw.trim();
        let (coeff, rest) = match raw.split_once(' ') {
            Some((c, r)) if c.chars().all(|ch| ch.is_ascii_digit()) => {
                (c.parse::<u64>().map_err(|_| bad("bad coefficient"))?, r)
            }
            _ => (1, raw),
        };
        let b = rest.as_bytes();
        let mut i = 0;
        let mut word = Vec::new();
        while i < b.len() {
            let entry = if b[i] == b'T' {
                i += 1;
                1
            } else if rest[i..].starts_with("(t") {
                let close = rest[i..].find(" T)").ok_or_else(|| bad("unclosed factor"))? + i;
                let k: u32 = rest[i + 2..close].parse().map_err(|_| bad("bad θ power"))?;
                i = close + 3;
                k + 1
            } else {
                return Err(bad("unexpected character"));
            };
            let mut reps = 1;
            if i < b.len() && b[i] == b'^' {
                let start = i + 1;
                i = start;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                reps = rest[start..i].parse().map_err(|_| bad("bad exponent"))?;
            }
            word.extend(std::iter::repeat_n(entry, reps));
        }
        out.push(NCTerm { coeff, word });
    }
    Ok(out)
}

/// `binom(n, k) mod p` from Pascal's triangle.
fn binom_mod(n: usize, k: usize, p: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut row = vec![0u64; n + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=i).rev() {
            row[j] = (row[j] + row[j - 1]) % p;
        }
    }
    row[k]
}

/// `Σ_𝔦 n_𝔦 T_𝔦` over all compositions of `n`, evaluated without
/// enumerating words: with `R(0) = 1` and
/// `R(s) = Σ_i binom(n-1-s+i, i-1) · derivs[i-1] · R(s-i)`, the sum is `R(n)`.
/// Coefficients are reduced modulo the ring characteristic.
pub fn evaluate_linear_terms<M: Ring>(n: usize, derivs: &[M]) -> M {
    assert!(derivs.len() >= n, "need θ^i T for i < n");
    let p = derivs[0].characteristic();
    let mut r: Vec<M> = vec![derivs[0].one()];
    for s in 1..=n {
        let mut acc = derivs[0].zero();
        for i in 1..=s {
            let c = binom_mod(n + i - 1 - s, i - 1, p);
            if c != 0 {
                acc = acc.add(&derivs[i - 1].mul(&r[s - i]).scale_int(c as i64));
            }
        }
        r.push(acc);
    }
    r.pop().unwrap()
}

/// Coefficients of `formula` grouped by the multiset of word entries and
/// summed mod p: the formula seen with commuting symbols.
pub fn commutative_collapse(formula: &PCFormula) -> BTreeMap<Vec<u32>, u64> {
    let mut out: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for t in &formula.terms {
        let mut key = t.word.clone();
        key.sort_unstable();
        let e = out.entry(key).or_default();
        *e = (*e + t.coeff) % formula.p;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Coefficient of a word as an F_p element.
pub fn coeff_mod_p(p: u64, word: &[u32]) -> Result<FieldElem> {
    let c = coeff_closed_form(word.iter().sum(), word)? % BigUint::from(p);
    Ok(FieldElem::new(c.to_u64().unwrap() as i64, p))
}

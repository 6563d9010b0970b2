use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::UPoly;
use crate::ring::{Field, Ring};

pub const MAX_VARS: usize = 10;

/// Exponent vector indexed by the ring's variable positions.
pub type Mono = [u16; MAX_VARS];

/// An ordered list of distinct variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<Vec<String>>);

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let v: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if v.len() > MAX_VARS {
            return Err(Error::Invalid(format!("at most {MAX_VARS} variables are supported")));
        }
        for (i, a) in v.iter().enumerate() {
            if v[..i].contains(a) {
                return Err(Error::Invalid(format!("duplicate variable {a}")));
            }
        }
        Ok(VarSet(Arc::new(v)))
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    fn idx(&self, name: &str) -> usize {
        self.index(name).unwrap_or_else(|| panic!("unknown variable {name}"))
    }
}

fn total(m: &Mono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// Graded lexicographic comparison; the first variable is the largest.
pub fn grlex(a: &Mono, b: &Mono) -> Ordering {
    total(a).cmp(&total(b)).then_with(|| a.cmp(b))
}

fn mono_add(a: &Mono, b: &Mono) -> Mono {
    let mut m = *a;
    for i in 0..MAX_VARS {
        m[i] += b[i];
    }
    m
}

fn mono_div(a: &Mono, b: &Mono) -> Option<Mono> {
    let mut m = *a;
    for i in 0..MAX_VARS {
        m[i] = a[i].checked_sub(b[i])?;
    }
    Some(m)
}

/// Sparse multivariate polynomial. Terms are kept in strictly descending
/// graded-lex order with no zero coefficients.
#[derive(Clone, PartialEq)]
pub struct MPoly<R> {
    vars: VarSet,
    terms: Vec<(Mono, R)>,
    zero: R,
}

impl<R: Ring> MPoly<R> {
    pub fn zero(vars: &VarSet, proto: &R) -> Self {
        MPoly { vars: vars.clone(), terms: Vec::new(), zero: proto.zero() }
    }

    pub fn constant(vars: &VarSet, c: R) -> Self {
        let zero = c.zero();
        Self::from_terms(vars, vec![([0; MAX_VARS], c)], zero)
    }

    pub fn var(vars: &VarSet, name: &str, proto: &R) -> Self {
        let mut m = [0; MAX_VARS];
        m[vars.idx(name)] = 1;
        Self::from_terms(vars, vec![(m, proto.one())], proto.zero())
    }

    pub fn var_at(vars: &VarSet, i: usize, proto: &R) -> Self {
        let mut m = [0; MAX_VARS];
        m[i] = 1;
        Self::from_terms(vars, vec![(m, proto.one())], proto.zero())
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(vars: &VarSet, terms: Vec<(Mono, R)>, zero: R) -> Self {
        let mut acc: FxHashMap<Mono, R> = FxHashMap::default();
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(x) => *x = x.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(vars, acc, zero)
    }

    fn from_map(vars: &VarSet, acc: FxHashMap<Mono, R>, zero: R) -> Self {
        let mut terms: Vec<(Mono, R)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| grlex(&b.0, &a.0));
        MPoly { vars: vars.clone(), terms, zero }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn terms(&self) -> &[(Mono, R)] {
        &self.terms
    }

    pub fn coeff_zero(&self) -> &R {
        &self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| total(m) == 0)
    }

    /// The constant coefficient.
    pub fn constant_term(&self) -> R {
        self.terms
            .last()
            .filter(|(m, _)| total(m) == 0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.zero.clone())
    }

    /// Leading term under graded lex.
    pub fn lead_term(&self) -> Option<&(Mono, R)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| total(m))
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m[var] as u32).max()
    }

    /// Total degree restricted to the given variable positions.
    pub fn degree_in_vars(&self, vars: &[usize]) -> Option<u32> {
        self.terms.iter().map(|(m, _)| vars.iter().map(|&i| m[i] as u32).sum()).max()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(m, _)| m[var] > 0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.vars, rhs.vars);
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let (a, b) = (&self.terms[i], &rhs.terms[j]);
            match grlex(&a.0, &b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.1.add(&b.1);
                    if !c.is_zero() {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        MPoly { vars: self.vars.clone(), terms: out, zero: self.zero.clone() }
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (*m, c.neg())).collect();
        MPoly { vars: self.vars.clone(), terms, zero: self.zero.clone() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.vars, rhs.vars);
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.vars, &self.zero);
        }
        if rhs.terms.len() == 1 {
            return self.mul_term(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: FxHashMap<Mono, R> = FxHashMap::default();
        acc.reserve(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = mono_add(ma, mb);
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(x) => *x = x.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Self::from_map(&self.vars, acc, self.zero.clone())
    }

    /// Multiplication by `c * m`, which preserves term order.
    pub fn mul_term(&self, m: &Mono, c: &R) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(a, x)| (mono_add(a, m), x.mul(c)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        MPoly { vars: self.vars.clone(), terms, zero: self.zero.clone() }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.mul_term(&[0; MAX_VARS], c)
    }

    pub fn map_coeffs<S: Ring>(&self, f: impl Fn(&R) -> S, zero: S) -> MPoly<S> {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).filter(|(_, c)| !c.is_zero()).collect();
        MPoly { vars: self.vars.clone(), terms, zero }
    }

    /// Coefficient of `var^d`, as a polynomial not involving `var`.
    pub fn coeff_of(&self, var: usize, d: u16) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[var] == d)
            .map(|(m, c)| {
                let mut m = *m;
                m[var] = 0;
                (m, c.clone())
            })
            .collect();
        // removing one coordinate can break the grlex order
        Self::from_terms(&self.vars, terms, self.zero.clone())
    }

    /// Views `self` as a univariate polynomial in `var`.
    pub fn to_univariate(&self, var: usize) -> UPoly<MPoly<R>> {
        let deg = self.degree_in(var).unwrap_or(0);
        let mut buckets: Vec<Vec<(Mono, R)>> = vec![Vec::new(); deg as usize + 1];
        for (m, c) in &self.terms {
            let mut mm = *m;
            let d = mm[var] as usize;
            mm[var] = 0;
            buckets[d].push((mm, c.clone()));
        }
        let c = buckets.into_iter().map(|t| Self::from_terms(&self.vars, t, self.zero.clone())).collect();
        UPoly::new(c, Self::zero(&self.vars, &self.zero))
    }

    pub fn from_univariate(u: &UPoly<MPoly<R>>, var: usize) -> Self {
        let x = Self::var_at(&u.base_zero().vars, var, &u.base_zero().zero);
        let mut acc = u.base_zero().clone();
        for c in u.coeffs().iter().rev() {
            acc = acc.mul(&x).add(c);
        }
        acc
    }

    /// Substitutes a polynomial for `var`.
    pub fn substitute(&self, var: usize, val: &Self) -> Self {
        let u = self.to_univariate(var);
        let mut acc = Self::zero(&self.vars, &self.zero);
        for c in u.coeffs().iter().rev() {
            acc = acc.mul(val).add(c);
        }
        acc
    }

    /// Substitutes a coefficient-ring value for `var`.
    pub fn substitute_value(&self, var: usize, val: &R) -> Self {
        self.substitute(var, &Self::constant(&self.vars, val.clone()))
    }

    /// Evaluates at a full assignment (one value per variable).
    pub fn eval(&self, vals: &[R]) -> R {
        assert_eq!(vals.len(), self.vars.len());
        let mut acc = self.zero.clone();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in vals.iter().enumerate() {
                if m[i] > 0 {
                    t = t.mul(&v.pow(m[i] as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Re-expresses `self` over a different variable list; every variable
    /// in use must appear in `target`.
    pub fn remap(&self, target: &VarSet) -> Result<Self> {
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index(n)).collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut mm = [0; MAX_VARS];
            for (i, &e) in m.iter().enumerate().take(self.vars.len()) {
                if e > 0 {
                    let j = map[i].ok_or_else(|| {
                        Error::Invalid(format!("variable {} missing from target ring", self.vars.names()[i]))
                    })?;
                    mm[j] = e;
                }
            }
            terms.push((mm, c.clone()));
        }
        Ok(Self::from_terms(target, terms, self.zero.clone()))
    }

    pub fn pow(&self, e: u64) -> Self {
        Ring::pow(self, e)
    }

    pub fn fmt_terms(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let names = self.vars.names();
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut factors = Vec::new();
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            let is_const = total(m) == 0;
            if is_const || !c.is_one() {
                factors.push(cs);
            }
            for (i, &e) in m.iter().enumerate().take(names.len()) {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{e}", names[i])),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl<R: Field> MPoly<R> {
    /// Exact division; errors when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (lm, lc) = d.lead_term().ok_or(Error::ZeroPolynomial)?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, R)> = Vec::new();
        while let Some((m, c)) = rem.lead_term() {
            let qm = mono_div(m, lm).ok_or_else(|| Error::Invalid("inexact multivariate division".into()))?;
            let qc = c.mul(&lc_inv);
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Ok(MPoly { vars: self.vars.clone(), terms: quot, zero: self.zero.clone() })
    }

    /// Scales so that the grlex-leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.lead_term() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// Converts a polynomial in the single variable `var` to a `UPoly`.
    pub fn to_upoly(&self, var: usize) -> Result<UPoly<R>> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut c = vec![self.zero.clone(); deg + 1];
        for (m, x) in &self.terms {
            if m.iter().enumerate().any(|(i, &e)| i != var && e > 0) {
                return Err(Error::Invalid(format!(
                    "polynomial involves variables other than {}",
                    self.vars.names()[var]
                )));
            }
            c[m[var] as usize] = x.clone();
        }
        Ok(UPoly::new(c, self.zero.clone()))
    }

    pub fn from_upoly(u: &UPoly<R>, vars: &VarSet, var: usize) -> Self {
        let terms = u
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut m = [0; MAX_VARS];
                m[var] = i as u16;
                (m, c.clone())
            })
            .collect();
        Self::from_terms(vars, terms, u.base_zero().clone())
    }
}

impl MPoly<FieldElem> {
    /// Canonical JSON form `{"vars": [...], "terms": [{"exp": [...], "coeff": n}]}`.
    pub fn to_json(&self) -> Value {
        let n = self.vars.len();
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({"exp": m[..n].to_vec(), "coeff": c.value()}))
            .collect();
        json!({"vars": self.vars.names(), "terms": terms})
    }

    pub fn from_json(v: &Value, p: u64) -> Result<Self> {
        let bad = || Error::Parse("malformed polynomial JSON".into());
        let names: Vec<String> = v["vars"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|n| n.as_str().map(str::to_string).ok_or_else(bad))
            .collect::<Result<_>>()?;
        let vars = VarSet::new(&names)?;
        let zero = FieldElem::new(0, p);
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(bad)? {
            let exp = t["exp"].as_array().ok_or_else(bad)?;
            if exp.len() != vars.len() {
                return Err(bad());
            }
            let mut m = [0; MAX_VARS];
            for (i, e) in exp.iter().enumerate() {
                m[i] = e.as_u64().ok_or_else(bad)? as u16;
            }
            let c = t["coeff"].as_i64().ok_or_else(bad)?;
            terms.push((m, FieldElem::new(c, p)));
        }
        Ok(Self::from_terms(&vars, terms, zero))
    }
}

impl<R: Ring> fmt::Display for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_terms())
    }
}

impl<R: Ring> fmt::Debug for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_terms())
    }
}

impl<R: Ring> Ring for MPoly<R> {
    fn zero(&self) -> Self {
        MPoly::zero(&self.vars, &self.zero)
    }
    fn one(&self) -> Self {
        MPoly::constant(&self.vars, self.zero.one())
    }
    fn from_int(&self, n: i64) -> Self {
        MPoly::constant(&self.vars, self.zero.from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        MPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        MPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        MPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        MPoly::neg(self)
    }
    fn characteristic(&self) -> u64 {
        self.zero.characteristic()
    }
    fn scale_int(&self, n: i64) -> Self {
        self.scale(&self.zero.from_int(n))
    }
}

/// Parses expressions built from integers, variable names, `+ - * ^` and
/// parentheses, e.g. `3*a1^2*a2 - (u1 + 2)^3`.
pub fn parse<R: Ring>(src: &str, vars: &VarSet, proto: &R) -> Result<MPoly<R>> {
    let mut p = Parser { s: src.as_bytes(), i: 0, vars, proto };
    let e = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(Error::Parse(format!("unexpected input at offset {} in {src:?}", p.i)));
    }
    Ok(e)
}

struct Parser<'a, R> {
    s: &'a [u8],
    i: usize,
    vars: &'a VarSet,
    proto: &'a R,
}

impl<R: Ring> Parser<'_, R> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<MPoly<R>> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.i += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.i += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MPoly<R>> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = acc.mul(&self.power()?);
                }
                // implicit multiplication: "3 x" or "2(a1 + 1)"
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MPoly<R>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let e = self.number()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse(format!("expected a number at offset {start}")))
    }

    fn atom(&mut self) -> Result<MPoly<R>> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Parse(format!("missing ')' at offset {}", self.i)));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let p = self.proto.characteristic();
                Ok(MPoly::constant(self.vars, self.proto.from_int((n % p) as i64)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.i]).unwrap();
                let idx = self.vars.index(name).ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                Ok(MPoly::var_at(self.vars, idx, self.proto))
            }
            other => Err(Error::Parse(format!(
                "unexpected {:?} at offset {}",
                other.map(|c| c as char),
                self.i
            ))),
        }
    }
}

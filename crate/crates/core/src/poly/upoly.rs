use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Field, Ring};

/// Dense univariate polynomial, low degree first, never with a zero leading
/// coefficient. `zero` fixes the coefficient ring even when the polynomial
/// itself is zero.
#[derive(Clone, PartialEq)]
pub struct UPoly<R> {
    c: Vec<R>,
    zero: R,
}

impl<R: Ring> UPoly<R> {
    pub fn new(mut c: Vec<R>, zero: R) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c, zero }
    }

    pub fn zero_like(proto: &R) -> Self {
        UPoly { c: Vec::new(), zero: proto.zero() }
    }

    pub fn constant(c: R) -> Self {
        let zero = c.zero();
        UPoly::new(vec![c], zero)
    }

    /// `c * t^d`.
    pub fn monomial(c: R, d: usize) -> Self {
        let zero = c.zero();
        let mut v = vec![zero.clone(); d];
        v.push(c);
        UPoly::new(v, zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.c
    }

    pub fn base_zero(&self) -> &R {
        &self.zero
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> &R {
        self.c.last().unwrap_or(&self.zero)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.c.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n)
            .map(|i| match (self.c.get(i), rhs.c.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        UPoly::new(c, self.zero.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        UPoly { c: self.c.iter().map(|a| a.neg()).collect(), zero: self.zero.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero_like(&self.zero);
        }
        let mut c = vec![self.zero.clone(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        UPoly::new(c, self.zero.clone())
    }

    pub fn scale(&self, s: &R) -> Self {
        UPoly::new(self.c.iter().map(|a| a.mul(s)).collect(), self.zero.clone())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![self.zero.clone(); k];
        c.extend(self.c.iter().cloned());
        UPoly { c, zero: self.zero.clone() }
    }

    pub fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, a)| a.scale_int(i as i64)).collect();
        UPoly::new(c, self.zero.clone())
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.zero.clone();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }

    /// Composition `self(q(t))`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = UPoly::zero_like(&self.zero);
        for a in self.c.iter().rev() {
            acc = acc.mul(q).add(&UPoly::constant(a.clone()));
        }
        acc
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S, zero: S) -> UPoly<S> {
        UPoly::new(self.c.iter().map(f).collect(), zero)
    }

    pub fn fmt_var(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coef = a.to_string();
            let coef = if coef.contains(' ') { format!("({coef})") } else { coef };
            parts.push(if i == 0 {
                coef
            } else if a.is_one() {
                mono
            } else {
                format!("{coef}*{mono}")
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl<R: Field> UPoly<R> {
    /// `(q, r)` with `self = q * d + r` and `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial)?;
        let lc_inv = d.lead().inv()?;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((UPoly::zero_like(&self.zero), self.clone()));
        }
        let mut q = vec![self.zero.clone(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let f = r[i].mul(&lc_inv);
            for (j, b) in d.c.iter().enumerate() {
                r[i - dd + j] = r[i - dd + j].sub(&f.mul(b));
            }
            q[i - dd] = f;
        }
        r.truncate(dd);
        Ok((UPoly::new(q, self.zero.clone()), UPoly::new(r, self.zero.clone())))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.divrem(d)?.1)
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.divrem(d)?;
        if !r.is_zero() {
            return Err(Error::Invalid("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Ok(inv) => self.scale(&inv),
            Err(_) => self.clone(),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `g` monic and `s * self + t * rhs = g`.
    pub fn ext_gcd(&self, rhs: &Self) -> Result<(Self, Self, Self)> {
        let zero = UPoly::zero_like(&self.zero);
        let one = UPoly::constant(self.zero.one());
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        if r0.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let inv = r0.lead().inv()?;
        Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut acc = UPoly::constant(self.zero.one()).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m)?;
            }
        }
        Ok(acc)
    }

    /// `self^(p^times) mod m`.
    pub fn frobenius_mod(&self, times: u32, m: &Self) -> Result<Self> {
        let p = self.zero.characteristic();
        let mut h = self.rem(m)?;
        for _ in 0..times {
            h = h.pow_mod(p, m)?;
        }
        Ok(h)
    }

    /// Product of the distinct monic irreducible factors of `self`.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let f = self.monic();
        if f.degree() == Some(0) {
            return Ok(f);
        }
        let df = f.derivative();
        if df.is_zero() {
            // f(t) = h(t^p) = (sum c_i^{1/p} t^i)^p
            let p = self.zero.characteristic() as usize;
            let root = UPoly::new(f.c.iter().step_by(p).map(|c| c.pth_root()).collect(), self.zero.clone());
            return root.squarefree_part();
        }
        let g = f.gcd(&df);
        let w = f.div_exact(&g)?;
        if g.degree() == Some(0) {
            return Ok(w);
        }
        // factors of multiplicity divisible by p survive only in g
        let rg = g.squarefree_part()?;
        let common = w.gcd(&rg);
        Ok(w.mul(&rg.div_exact(&common)?).monic())
    }

    /// Number of distinct roots in the algebraic closure.
    pub fn count_distinct_roots(&self) -> Result<usize> {
        Ok(self.squarefree_part()?.degree().unwrap_or(0))
    }

    /// Distinct-degree factorization of a squarefree polynomial over F_q:
    /// pairs `(d, product of all monic irreducible factors of degree d)`.
    pub fn ddf(&self) -> Result<Vec<(usize, Self)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let k = self.zero.degree();
        let t = UPoly::monomial(self.zero.one(), 1);
        let mut f = self.monic();
        let mut out = Vec::new();
        let mut h = t.clone();
        let mut d = 0;
        while f.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.frobenius_mod(k, &f)?;
            let g = h.sub(&t).gcd(&f);
            if g.degree() != Some(0) {
                f = f.div_exact(&g)?;
                h = h.rem(&f)?;
                out.push((d, g));
            }
        }
        if let Some(n) = f.degree().filter(|&n| n > 0) {
            out.push((n, f));
        }
        Ok(out)
    }
}

impl<R: Ring> fmt::Display for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("t"))
    }
}

impl<R: fmt::Debug> fmt::Debug for UPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.c).finish()
    }
}

impl<R: Ring> Ring for UPoly<R> {
    fn zero(&self) -> Self {
        UPoly::zero_like(&self.zero)
    }
    fn one(&self) -> Self {
        UPoly::constant(self.zero.one())
    }
    fn from_int(&self, n: i64) -> Self {
        UPoly::constant(self.zero.from_int(n))
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        UPoly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        UPoly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        UPoly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        UPoly::neg(self)
    }
    fn characteristic(&self) -> u64 {
        self.zero.characteristic()
    }
}

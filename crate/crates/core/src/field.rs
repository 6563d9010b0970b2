//! Prime fields F_p (odd p, machine-word size) and extension fields
//! F_{p^k} = F_p[t]/(m(t)).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
use crate::poly::UPoly;
use crate::ring::{Field, Ring};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The prime field F_p for an odd prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::EvenPrime);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u32::MAX as u64 / 2 {
            return Err(Error::Invalid(format!("p = {p} exceeds the supported word size")));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn elem(&self, n: i64) -> FieldElem {
        FieldElem::new(n, self.p as u64)
    }

    pub fn zero(&self) -> FieldElem {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.p as i64).map(move |v| self.elem(v))
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> FieldElem {
        self.elem(rng.gen_range(0..self.p as i64))
    }
}

/// An element of F_p stored as its canonical representative in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    v: u32,
    p: u32,
}

impl FieldElem {
    pub fn new(n: i64, p: u64) -> Self {
        let v = n.rem_euclid(p as i64) as u32;
        FieldElem { v, p: p as u32 }
    }

    pub fn value(&self) -> u64 {
        self.v as u64
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.v.cmp(&other.v)
    }
}

impl Ring for FieldElem {
    fn zero(&self) -> Self {
        FieldElem { v: 0, p: self.p }
    }
    fn one(&self) -> Self {
        FieldElem { v: 1, p: self.p }
    }
    fn from_int(&self, n: i64) -> Self {
        FieldElem::new(n, self.p as u64)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let s = self.v + rhs.v;
        FieldElem { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let v = if self.v >= rhs.v { self.v - rhs.v } else { self.v + self.p - rhs.v };
        FieldElem { v, p: self.p }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        FieldElem { v: ((self.v as u64 * rhs.v as u64) % self.p as u64) as u32, p: self.p }
    }
    fn neg(&self) -> Self {
        FieldElem { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
}

impl Field for FieldElem {
    fn inv(&self) -> Result<Self> {
        if self.v == 0 {
            return Err(Error::ZeroInverse);
        }
        // extended Euclid on (v, p)
        let (mut r0, mut r1) = (self.p as i64, self.v as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Ok(FieldElem::new(s0, self.p as u64))
    }

    fn degree(&self) -> u32 {
        1
    }

    fn frobenius(&self) -> Self {
        *self
    }

    fn pth_root(&self) -> Self {
        *self
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self {
        FieldElem { v: rng.gen_range(0..self.p), p: self.p }
    }
}

/// F_{p^k} presented as F_p[t]/(modulus) with a monic irreducible modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    p: u32,
    k: u32,
    /// Monic, low degree first, length `k + 1`.
    modulus: Vec<u32>,
}

impl ExtField {
    /// Builds the extension defined by `modulus`, which must be monic and
    /// irreducible over F_p.
    pub fn new(modulus: &UPoly<FieldElem>) -> Result<Arc<Self>> {
        let deg = modulus.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Err(Error::Invalid("extension modulus must have positive degree".into()));
        }
        if !modulus.lead().is_one() {
            return Err(Error::Invalid("extension modulus must be monic".into()));
        }
        if !is_irreducible(modulus) {
            return Err(Error::Invalid(format!("{modulus} is reducible")));
        }
        let p = modulus.lead().characteristic() as u32;
        Ok(Arc::new(ExtField {
            p,
            k: deg as u32,
            modulus: modulus.coeffs().iter().map(|c| c.value() as u32).collect(),
        }))
    }

    /// The canonical F_{p^k}, built from [`find_irreducible`] and cached per `(p, k)`.
    pub fn canonical(field: PrimeField, k: u32) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<ExtField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&(field.p, k)) {
            return f.clone();
        }
        let m = find_irreducible(field, k);
        let ext = Arc::new(ExtField {
            p: field.p,
            k,
            modulus: m.coeffs().iter().map(|c| c.value() as u32).collect(),
        });
        cache.lock().unwrap().entry((field.p, k)).or_insert(ext).clone()
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn prime_field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn modulus(&self) -> UPoly<FieldElem> {
        let pf = self.prime_field();
        UPoly::new(self.modulus.iter().map(|&c| pf.elem(c as i64)).collect(), pf.zero())
    }

    pub fn modulus_coeffs(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> ExtElem {
        ExtElem { field: self.clone(), c: vec![0; self.k as usize] }
    }

    pub fn one(self: &Arc<Self>) -> ExtElem {
        self.from_base(1)
    }

    pub fn from_base(self: &Arc<Self>, n: i64) -> ExtElem {
        let mut c = vec![0; self.k as usize];
        c[0] = n.rem_euclid(self.p as i64) as u32;
        ExtElem { field: self.clone(), c }
    }

    /// The class of `t`.
    pub fn generator(self: &Arc<Self>) -> ExtElem {
        if self.k == 1 {
            // t = -m_0 in F_p[t]/(t + m_0)
            return self.from_base(-(self.modulus[0] as i64));
        }
        let mut c = vec![0; self.k as usize];
        c[1] = 1;
        ExtElem { field: self.clone(), c }
    }

    pub fn elem(self: &Arc<Self>, coeffs: &[i64]) -> ExtElem {
        let pf = self.prime_field();
        let poly = UPoly::new(coeffs.iter().map(|&c| pf.elem(c)).collect(), pf.zero());
        self.from_poly(&poly)
    }

    /// Reduces an F_p-polynomial in `t` into the field.
    pub fn from_poly(self: &Arc<Self>, poly: &UPoly<FieldElem>) -> ExtElem {
        let raw: Vec<u32> = poly.coeffs().iter().map(|c| c.value() as u32).collect();
        ExtElem { field: self.clone(), c: self.reduce(raw) }
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> ExtElem {
        self.zero().random(rng)
    }

    /// Number of elements, if it fits in a `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.k)
    }

    fn reduce(&self, mut raw: Vec<u32>) -> Vec<u32> {
        let k = self.k as usize;
        let p = self.p as u64;
        while raw.len() > k {
            let top = raw.pop().unwrap() as u64;
            if top != 0 {
                let shift = raw.len() - k;
                for (i, &m) in self.modulus[..k].iter().enumerate() {
                    let sub = (top * m as u64) % p;
                    let cur = raw[shift + i] as u64;
                    raw[shift + i] = ((cur + p - sub) % p) as u32;
                }
            }
        }
        raw.resize(k, 0);
        raw
    }
}

/// An element of an [`ExtField`]: a polynomial in `t` of degree `< k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElem {
    field: Arc<ExtField>,
    c: Vec<u32>,
}

impl ExtElem {
    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    /// Coefficients in `t`, low degree first, always of length `k`.
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    pub fn as_poly(&self) -> UPoly<FieldElem> {
        let pf = self.field.prime_field();
        UPoly::new(self.c.iter().map(|&v| pf.elem(v as i64)).collect(), pf.zero())
    }

    /// The value as an F_p element when it lies in the prime field.
    pub fn to_base(&self) -> Option<FieldElem> {
        if self.c[1..].iter().all(|&v| v == 0) {
            Some(FieldElem::new(self.c[0] as i64, self.field.p as u64))
        } else {
            None
        }
    }

    /// Degree over F_p of the smallest subfield containing `self`.
    pub fn minimal_degree(&self) -> u32 {
        let k = self.field.k;
        let mut x = self.clone();
        for d in 1..=k {
            x = x.frobenius();
            if k.is_multiple_of(d) && x == *self {
                return d;
            }
        }
        k
    }

    fn same_field(&self, rhs: &Self) -> bool {
        Arc::ptr_eq(&self.field, &rhs.field) || self.field == rhs.field
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &v) in self.c.iter().enumerate().rev() {
            if v == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            parts.push(match (v, i) {
                (_, 0) => v.to_string(),
                (1, _) => mono,
                _ => format!("{v}*{mono}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl PartialOrd for ExtElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Low-degree-first lexicographic order on coefficient vectors.
impl Ord for ExtElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field.k.cmp(&other.field.k).then_with(|| self.c.cmp(&other.c))
    }
}

impl Ring for ExtElem {
    fn zero(&self) -> Self {
        self.field.zero()
    }
    fn one(&self) -> Self {
        self.field.one()
    }
    fn from_int(&self, n: i64) -> Self {
        self.field.from_base(n)
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }
    fn add(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_field(rhs));
        let p = self.field.p;
        let c = self
            .c
            .iter()
            .zip(&rhs.c)
            .map(|(&a, &b)| {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect();
        ExtElem { field: self.field.clone(), c }
    }
    fn sub(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_field(rhs));
        let p = self.field.p;
        let c = self
            .c
            .iter()
            .zip(&rhs.c)
            .map(|(&a, &b)| if a >= b { a - b } else { a + p - b })
            .collect();
        ExtElem { field: self.field.clone(), c }
    }
    fn mul(&self, rhs: &Self) -> Self {
        debug_assert!(self.same_field(rhs));
        let k = self.field.k as usize;
        if k == 1 {
            let v = (self.c[0] as u64 * rhs.c[0] as u64 % self.field.p as u64) as u32;
            return ExtElem { field: self.field.clone(), c: vec![v] };
        }
        let p = self.field.p as u64;
        let mut acc = vec![0u64; 2 * k - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
                // keep headroom for long accumulations
                if acc[i + j] >= 1 << 62 {
                    acc[i + j] %= p;
                }
            }
        }
        let raw = acc.into_iter().map(|v| (v % p) as u32).collect();
        ExtElem { field: self.field.clone(), c: self.field.reduce(raw) }
    }
    fn neg(&self) -> Self {
        let p = self.field.p;
        let c = self.c.iter().map(|&v| if v == 0 { 0 } else { p - v }).collect();
        ExtElem { field: self.field.clone(), c }
    }
    fn characteristic(&self) -> u64 {
        self.field.p as u64
    }
}

impl Field for ExtElem {
    fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        // a*s + m*t = 1 in F_p[t]
        let (g, s, _) = self.as_poly().ext_gcd(&self.field.modulus())?;
        debug_assert_eq!(g.degree(), Some(0));
        Ok(self.field.from_poly(&s))
    }

    fn degree(&self) -> u32 {
        self.field.k
    }

    fn frobenius(&self) -> Self {
        self.pow(self.field.p as u64)
    }

    fn random<G: Rng + ?Sized>(&self, rng: &mut G) -> Self {
        let c = (0..self.field.k).map(|_| rng.gen_range(0..self.field.p)).collect();
        ExtElem { field: self.field.clone(), c }
    }
}

/// Distinct-degree irreducibility test: `f` of degree k is irreducible iff
/// `gcd(t^{p^i} - t, f) = 1` for every `i <= k/2`.
pub fn is_irreducible(f: &UPoly<FieldElem>) -> bool {
    let Some(k) = f.degree() else { return false };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let p = f.lead().characteristic();
    let t = UPoly::monomial(f.lead().one(), 1);
    let mut h = t.clone();
    for _ in 1..=k / 2 {
        h = h.pow_mod(p, f).expect("nonzero modulus");
        let g = h.sub(&t).gcd(f);
        if g.degree() != Some(0) {
            return false;
        }
    }
    true
}

/// The lexicographically least monic irreducible polynomial of degree `k`
/// over F_p, comparing coefficient vectors low degree first.
pub fn find_irreducible(field: PrimeField, k: u32) -> UPoly<FieldElem> {
    assert!(k >= 1, "extension degree must be positive");
    let p = field.p as u64;
    let k = k as usize;
    // digits[0] is the most significant position (the constant term)
    let mut digits = vec![0u64; k];
    if k > 1 {
        // a zero constant term gives the root 0
        digits[0] = 1;
    }
    loop {
        let mut coeffs: Vec<FieldElem> = digits.iter().map(|&d| field.elem(d as i64)).collect();
        coeffs.push(field.one());
        let f = UPoly::new(coeffs, field.zero());
        if is_irreducible(&f) {
            return f;
        }
        // increment, least significant digit last
        let mut i = k - 1;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "irreducible polynomials exist in every degree");
            i -= 1;
        }
    }
}

/// Embeds `x` into `target`, whose degree must be a multiple of the degree of
/// `x`'s field. The image of the generator is the least root (in the field's
/// canonical order) of the source modulus, cached per pair of fields.
pub fn embed(x: &ExtElem, target: &Arc<ExtField>) -> Result<ExtElem> {
    let src = x.field();
    if Arc::ptr_eq(src, target) || **src == **target {
        return Ok(ExtElem { field: target.clone(), c: x.c.clone() });
    }
    if src.p != target.p || !target.k.is_multiple_of(src.k) {
        return Err(Error::Invalid(format!(
            "cannot embed F_{}^{} into F_{}^{}",
            src.p, src.k, target.p, target.k
        )));
    }
    if let Some(b) = x.to_base() {
        return Ok(target.from_base(b.value() as i64));
    }
    let img = generator_image(src, target)?;
    // Horner in the image of t
    let mut acc = target.zero();
    for &c in x.c.iter().rev() {
        acc = acc.mul(&img).add(&target.from_base(c as i64));
    }
    Ok(acc)
}

fn generator_image(src: &Arc<ExtField>, target: &Arc<ExtField>) -> Result<ExtElem> {
    type Key = (Vec<u32>, Vec<u32>, u32);
    static CACHE: OnceLock<Mutex<HashMap<Key, ExtElem>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (src.modulus.clone(), target.modulus.clone(), src.p);
    if let Some(e) = cache.lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let m = src.modulus().map(|c| target.from_base(c.value() as i64), target.zero());
    let mut roots = crate::poly::roots_in_field(&m)?;
    roots.sort();
    let img = roots
        .into_iter()
        .next()
        .ok_or_else(|| Error::Invalid("modulus has no root in the target field".into()))?;
    cache.lock().unwrap().insert(key, img.clone());
    Ok(img)
}

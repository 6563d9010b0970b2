//! The curve `y^2 = g(x)` with `g` a monic quintic, its affine coordinate
//! ring, and the derivation `θ = y d/dx`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::poly::{MPoly, UPoly, VarSet};
use crate::ring::{Field, Ring};

/// Variable names for symbolic work: curve coefficients, then connection
/// parameters.
pub const SYMBOLS: [&str; 8] = ["a1", "a2", "a3", "a4", "a5", "u0", "u1", "u2"];
pub const U0: usize = 5;
pub const U1: usize = 6;
pub const U2: usize = 7;

pub fn symbol_vars() -> VarSet {
    VarSet::new(&SYMBOLS).expect("distinct names")
}

/// Symbolic coefficient ring F_p[a1..a5, u0, u1, u2].
pub type Sym = MPoly<FieldElem>;

pub fn sym_zero(p: u64) -> Result<Sym> {
    let f = PrimeField::new(p)?;
    Ok(MPoly::zero(&symbol_vars(), &f.zero()))
}

pub fn sym_var(p: u64, name: &str) -> Result<Sym> {
    let f = PrimeField::new(p)?;
    Ok(MPoly::var(&symbol_vars(), name, &f.zero()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Smooth,
    /// `g` has repeated roots, all of multiplicity exactly two.
    Nodal,
}

#[derive(Clone, PartialEq)]
pub struct Curve<R> {
    g: Arc<UPoly<R>>,
    kind: CurveKind,
}

impl<R: Ring> Curve<R> {
    /// `g = x^5 + a1 x^4 + a2 x^3 + a3 x^2 + a4 x + a5`, without any
    /// smoothness check.
    pub fn from_coeffs(a: &[R; 5]) -> Self {
        let mut c: Vec<R> = a.iter().rev().cloned().collect();
        c.push(a[0].one());
        let zero = a[0].zero();
        Curve { g: Arc::new(UPoly::new(c, zero)), kind: CurveKind::Smooth }
    }

    pub fn g(&self) -> &UPoly<R> {
        &self.g
    }

    pub fn kind(&self) -> CurveKind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.g.lead().characteristic()
    }

    /// `a_i` for `i` in 1..=5.
    pub fn a(&self, i: usize) -> R {
        self.g.coeff(5 - i)
    }

    pub fn zero_fn(&self) -> CurveFn<R> {
        let z = UPoly::zero_like(self.g.base_zero());
        CurveFn { a: z.clone(), b: z, g: self.g.clone() }
    }

    /// The function `a(x) + b(x) y`.
    pub fn func(&self, a: UPoly<R>, b: UPoly<R>) -> CurveFn<R> {
        CurveFn { a, b, g: self.g.clone() }
    }

    pub fn from_x_poly(&self, a: UPoly<R>) -> CurveFn<R> {
        let b = UPoly::zero_like(self.g.base_zero());
        self.func(a, b)
    }

    pub fn constant(&self, c: R) -> CurveFn<R> {
        self.from_x_poly(UPoly::constant(c))
    }

    pub fn x(&self) -> CurveFn<R> {
        self.from_x_poly(UPoly::monomial(self.g.lead().one(), 1))
    }

    pub fn y(&self) -> CurveFn<R> {
        let one = UPoly::constant(self.g.lead().one());
        self.func(UPoly::zero_like(self.g.base_zero()), one)
    }

    /// `θ(a + b y) = (b' g + ½ b g') + a' y`.
    pub fn theta_apply(&self, f: &CurveFn<R>) -> CurveFn<R> {
        let half = self.g.lead().half();
        let dg = self.g.derivative();
        let a = f.b.derivative().mul(&self.g).add(&f.b.mul(&dg).scale(&half));
        CurveFn { a, b: f.a.derivative(), g: self.g.clone() }
    }

    /// `θ^n f`.
    pub fn theta_pow(&self, f: &CurveFn<R>, n: u64) -> CurveFn<R> {
        let mut h = f.clone();
        for _ in 0..n {
            h = self.theta_apply(&h);
        }
        h
    }

    /// `g_1 = x`, `g_k = g''_{k-2} g + ½ g'_{k-2} g'`; equals `θ^{k-1} x`.
    pub fn g_k(&self, k: u32) -> Result<UPoly<R>> {
        if k.is_multiple_of(2) {
            return Err(Error::EvenIndex(k));
        }
        let half = self.g.lead().half();
        let dg = self.g.derivative();
        let mut gk = UPoly::monomial(self.g.lead().one(), 1);
        for _ in 0..k / 2 {
            let d1 = gk.derivative();
            gk = d1.derivative().mul(&self.g).add(&d1.mul(&dg).scale(&half));
        }
        Ok(gk)
    }

    /// `f_{θ^p} = g_p'`, the function with `θ^p = f_{θ^p} θ`.
    pub fn f_theta_p(&self) -> UPoly<R> {
        self.g_k(self.p() as u32).expect("odd characteristic").derivative()
    }

    /// Checks `θ^p f = f_{θ^p} θ(f)` and `θ(f_{θ^p}) = 0`.
    pub fn theta_p_consistency(&self, f: &CurveFn<R>) -> bool {
        let ft = self.from_x_poly(self.f_theta_p());
        let lhs = self.theta_pow(f, self.p());
        let rhs = ft.mul(&self.theta_apply(f));
        lhs == rhs && self.theta_apply(&ft).is_zero()
    }
}

impl<F: Field> Curve<F> {
    /// A smooth curve: `g` must be squarefree.
    pub fn smooth(a: &[F; 5]) -> Result<Self> {
        let c = Self::from_coeffs(a);
        if c.g.gcd(&c.g.derivative()).degree() != Some(0) {
            return Err(Error::SingularCurve(format!("g = {} has a repeated root", c.g.fmt_var("x"))));
        }
        Ok(c)
    }

    /// A curve allowed to have nodes: every repeated root of `g` is a
    /// double root.
    pub fn nodal(a: &[F; 5]) -> Result<Self> {
        let mut c = Self::from_coeffs(a);
        let common = c.g.gcd(&c.g.derivative());
        if common.degree() == Some(0) {
            return Ok(c);
        }
        // a root of multiplicity m > 2 leaves at least (x - r)^2 in the gcd
        let sq = common.squarefree_part()?;
        if sq.degree() != common.degree() {
            return Err(Error::SingularCurve(format!("g = {} has a root of multiplicity > 2", c.g.fmt_var("x"))));
        }
        c.kind = CurveKind::Nodal;
        Ok(c)
    }
}

impl Curve<FieldElem> {
    /// Numeric curve from integer coefficients reduced mod p.
    pub fn from_ints(p: u64, a: &[i64; 5]) -> Result<Self> {
        let f = PrimeField::new(p)?;
        Self::smooth(&a.map(|v| f.elem(v)))
    }

    /// Rejection-samples a smooth curve with uniform coefficients.
    pub fn random_smooth<G: rand::Rng + ?Sized>(p: u64, rng: &mut G) -> Result<Self> {
        let f = PrimeField::new(p)?;
        loop {
            let a: [FieldElem; 5] = std::array::from_fn(|_| Field::random(&f.zero(), rng));
            if let Ok(c) = Self::smooth(&a) {
                return Ok(c);
            }
        }
    }

    pub fn coeff_values(&self) -> [u64; 5] {
        std::array::from_fn(|i| self.a(i + 1).value())
    }

    /// The same curve over the symbolic ring, with constant coefficients.
    pub fn to_symbolic(&self) -> Curve<Sym> {
        let vars = symbol_vars();
        let a: [Sym; 5] = std::array::from_fn(|i| MPoly::constant(&vars, self.a(i + 1)));
        Curve { g: Arc::new(Curve::from_coeffs(&a).g.as_ref().clone()), kind: self.kind }
    }
}

impl Curve<Sym> {
    /// The generic curve with `a1..a5` as indeterminates.
    pub fn symbolic(p: u64) -> Result<Self> {
        Self::symbolic_in(p, &symbol_vars())
    }

    /// The generic curve over a ring whose variables include `a1..a5`.
    pub fn symbolic_in(p: u64, vars: &VarSet) -> Result<Self> {
        let zero = PrimeField::new(p)?.zero();
        let mut a = Vec::with_capacity(5);
        for n in ["a1", "a2", "a3", "a4", "a5"] {
            if vars.index(n).is_none() {
                return Err(Error::Invalid(format!("ring lacks variable {n}")));
            }
            a.push(MPoly::var(vars, n, &zero));
        }
        Ok(Self::from_coeffs(&a.try_into().expect("five coefficients")))
    }
}

impl<R: Ring> fmt::Debug for Curve<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = {}", self.g.fmt_var("x"))
    }
}

/// `a(x) + b(x) y` in the coordinate ring of the curve, reduced by
/// `y^2 = g(x)`.
#[derive(Clone)]
pub struct CurveFn<R> {
    pub a: UPoly<R>,
    pub b: UPoly<R>,
    g: Arc<UPoly<R>>,
}

impl<R: Ring> PartialEq for CurveFn<R> {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl<R: Ring> CurveFn<R> {
    pub fn is_y_free(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_odd(&self) -> bool {
        self.a.is_zero()
    }

    pub fn scale(&self, s: &R) -> Self {
        CurveFn { a: self.a.scale(s), b: self.b.scale(s), g: self.g.clone() }
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S + Copy, zero: S) -> CurveFn<S> {
        let g = self.g.map(f, zero.clone());
        CurveFn { a: self.a.map(f, zero.clone()), b: self.b.map(f, zero), g: Arc::new(g) }
    }
}

impl<R: Ring> fmt::Display for CurveFn<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a.fmt_var("x")),
            (true, false) => write!(f, "({})*y", self.b.fmt_var("x")),
            _ => write!(f, "{} + ({})*y", self.a.fmt_var("x"), self.b.fmt_var("x")),
        }
    }
}

impl<R: Ring> fmt::Debug for CurveFn<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<R: Ring> Ring for CurveFn<R> {
    fn zero(&self) -> Self {
        let z = UPoly::zero_like(self.g.base_zero());
        CurveFn { a: z.clone(), b: z, g: self.g.clone() }
    }
    fn one(&self) -> Self {
        self.from_int(1)
    }
    fn from_int(&self, n: i64) -> Self {
        let z = UPoly::zero_like(self.g.base_zero());
        CurveFn { a: UPoly::constant(self.g.base_zero().from_int(n)), b: z, g: self.g.clone() }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, r: &Self) -> Self {
        CurveFn { a: self.a.add(&r.a), b: self.b.add(&r.b), g: self.g.clone() }
    }
    fn sub(&self, r: &Self) -> Self {
        CurveFn { a: self.a.sub(&r.a), b: self.b.sub(&r.b), g: self.g.clone() }
    }
    fn mul(&self, r: &Self) -> Self {
        let a = self.a.mul(&r.a).add(&self.b.mul(&r.b).mul(&self.g));
        let b = self.a.mul(&r.b).add(&self.b.mul(&r.a));
        CurveFn { a, b, g: self.g.clone() }
    }
    fn neg(&self) -> Self {
        CurveFn { a: self.a.neg(), b: self.b.neg(), g: self.g.clone() }
    }
    fn characteristic(&self) -> u64 {
        self.g.base_zero().characteristic()
    }
    fn scale_int(&self, n: i64) -> Self {
        let s = self.g.base_zero().from_int(n);
        self.scale(&s)
    }
}

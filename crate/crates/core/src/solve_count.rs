//! Counting connections with vanishing p-curvature: solutions of the
//! vanishing system in `(u0, u1, u2)` over the algebraic closure of F_p.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::connection::{vanishing_system, NormalizedConnection};
use crate::curve::{symbol_vars, Curve, Sym, SYMBOLS, U0, U1, U2};
use crate::error::{Error, Result};
use crate::field::{embed, ExtElem, ExtField, FieldElem, PrimeField};
use crate::poly::{parse, resultant, roots_in_ext, roots_over_ext, MPoly, UPoly};
use crate::ring::{Field, Ring};

/// A point of the solution set; `coords[i]` is the value of the `i`-th
/// unknown. All coordinates live in one field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Solution {
    pub coords: Vec<ExtElem>,
}

impl Solution {
    /// Degree over F_p of the field generated by the coordinates.
    pub fn degree(&self) -> u32 {
        self.coords.iter().map(|c| c.minimal_degree()).fold(1, lcm)
    }

    pub fn frobenius(&self) -> Solution {
        Solution { coords: self.coords.iter().map(|c| c.frobenius()).collect() }
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[derive(Clone, Debug)]
pub struct CountResult {
    pub p: u64,
    /// Indices (into [`SYMBOLS`]) of the unknowns, in coordinate order.
    pub unknowns: Vec<usize>,
    pub distinct: usize,
    /// Sum over solutions of the product of root multiplicities met along
    /// the triangular chain.
    pub with_multiplicity: usize,
    pub solutions: Vec<Solution>,
    /// The univariate polynomial whose roots give the first coordinate.
    pub eliminant: Option<UPoly<FieldElem>>,
}

impl CountResult {
    /// Solutions re-ordered to the given unknown order, sorted.
    pub fn points(&self, order: &[usize]) -> Vec<Vec<ExtElem>> {
        let pos: Vec<usize> = order
            .iter()
            .map(|v| self.unknowns.iter().position(|u| u == v).expect("unknown present"))
            .collect();
        let mut pts: Vec<Vec<ExtElem>> =
            self.solutions.iter().map(|s| pos.iter().map(|&i| s.coords[i].clone()).collect()).collect();
        pts.sort();
        pts
    }

    pub fn to_json(&self, with_solutions: bool) -> Value {
        let mut v = json!({
            "e_p": self.distinct,
            "with_multiplicity": self.with_multiplicity,
            "general_value": (self.p.pow(3) - self.p) / 24,
        });
        if let Some(e) = &self.eliminant {
            v["eliminant"] = Value::String(e.fmt_var(SYMBOLS[self.unknowns[0]]));
        }
        if with_solutions {
            let sols: Vec<Value> = self
                .solutions
                .iter()
                .map(|s| {
                    let mut o = serde_json::Map::new();
                    for (i, c) in s.coords.iter().enumerate() {
                        o.insert(SYMBOLS[self.unknowns[i]].to_string(), Value::String(c.to_string()));
                    }
                    o.insert("degree".into(), json!(s.degree()));
                    Value::Object(o)
                })
                .collect();
            v["field_degree"] = json!(self.solutions.first().map(|s| s.coords[0].field().degree()));
            v["solutions"] = Value::Array(sols);
        }
        v
    }
}

fn lift_poly(f: &MPoly<FieldElem>, k: &Arc<ExtField>) -> MPoly<ExtElem> {
    f.map_coeffs(|c| k.from_base(c.value() as i64), k.zero())
}

fn embed_poly(f: &MPoly<ExtElem>, k: &Arc<ExtField>) -> Result<MPoly<ExtElem>> {
    let terms = f.terms().iter().map(|(m, c)| Ok((*m, embed(c, k)?))).collect::<Result<Vec<_>>>()?;
    Ok(MPoly::from_terms(f.vars(), terms, k.zero()))
}

/// Eliminates `unknowns[1..]` (last first) by resultants against a pivot of
/// least degree, then takes the gcd of the univariate results. `None` means
/// the system is inconsistent; the zero polynomial means nothing constrains
/// the first unknown.
fn eliminant<K: Field>(polys: &[MPoly<K>], unknowns: &[usize]) -> Result<Option<UPoly<K>>> {
    let mut cur: Vec<MPoly<K>> = polys.iter().filter(|f| !f.is_zero()).cloned().collect();
    for &v in unknowns[1..].iter().rev() {
        let (with, without): (Vec<_>, Vec<_>) = cur.into_iter().partition(|f| f.uses_var(v));
        cur = without;
        let Some(pi) = (0..with.len()).min_by_key(|&i| (with[i].degree_in(v), with[i].len())) else {
            continue;
        };
        for (i, g) in with.iter().enumerate() {
            if i == pi {
                continue;
            }
            let r = resultant(&with[pi], g, v)?;
            if !r.is_zero() {
                cur.push(r);
            }
        }
    }
    let x = unknowns[0];
    let mut acc: Option<UPoly<K>> = None;
    for f in &cur {
        let u = f.to_upoly(x)?;
        if u.degree() == Some(0) {
            return Ok(None);
        }
        acc = Some(match acc {
            None => u.monic(),
            Some(a) => a.gcd(&u),
        });
    }
    match acc {
        Some(a) if a.degree() == Some(0) => Ok(None),
        Some(a) => Ok(Some(a)),
        None => {
            let zero = polys.first().map(|f| f.coeff_zero().clone());
            Ok(zero.map(|z| UPoly::zero_like(&z)))
        }
    }
}

struct Walker {
    out: Vec<(Solution, usize)>,
}

impl Walker {
    fn level(
        &mut self,
        polys: Vec<MPoly<ExtElem>>,
        unknowns: &[usize],
        coords: Vec<ExtElem>,
        mult: usize,
        field: Arc<ExtField>,
    ) -> Result<Option<UPoly<ExtElem>>> {
        let polys: Vec<MPoly<ExtElem>> = polys.into_iter().filter(|f| !f.is_zero()).collect();
        if polys.iter().any(|f| f.is_constant()) {
            return Ok(None);
        }
        if unknowns.is_empty() {
            self.out.push((Solution { coords }, mult));
            return Ok(None);
        }
        if polys.is_empty() {
            return Err(Error::PositiveDimensional);
        }
        let Some(e) = eliminant(&polys, unknowns)? else {
            return Ok(None);
        };
        if e.is_zero() {
            return Err(Error::PositiveDimensional);
        }
        for (r, m) in roots_over_ext(&e)? {
            let k = r.field().clone();
            let (ps, cs) = if Arc::ptr_eq(&k, &field) {
                (polys.clone(), coords.clone())
            } else {
                (
                    polys.iter().map(|f| embed_poly(f, &k)).collect::<Result<Vec<_>>>()?,
                    coords.iter().map(|c| embed(c, &k)).collect::<Result<Vec<_>>>()?,
                )
            };
            let ps = ps.iter().map(|f| f.substitute_value(unknowns[0], &r)).collect();
            let mut cs = cs;
            cs.push(r);
            self.level(ps, &unknowns[1..], cs, mult * m, k)?;
        }
        Ok(Some(e))
    }
}

/// Solves a zero-dimensional system over F_p by resultant elimination and
/// back-substitution through explicit extension fields. The eliminant
/// reported is in `unknowns[0]`.
pub fn triangular_count(system: &[MPoly<FieldElem>], unknowns: &[usize]) -> Result<CountResult> {
    let first = system.first().ok_or_else(|| Error::DegenerateInput("empty system".into()))?;
    let p = first.coeff_zero().field().p();
    for f in system {
        for v in 0..f.vars().len() {
            if f.uses_var(v) && !unknowns.contains(&v) {
                return Err(Error::Invalid(format!("system uses parameter {}", f.vars().names()[v])));
            }
        }
    }
    let base = ExtField::canonical(PrimeField::new(p)?, 1);
    let polys = system.iter().map(|f| lift_poly(f, &base)).collect();
    let mut w = Walker { out: Vec::new() };
    let e = w.level(polys, unknowns, Vec::new(), 1, base)?;
    let eliminant = e.map(|e| e.map(|c| c.to_base().expect("eliminant over the prime field"), FieldElem::new(0, p)));
    let with_multiplicity = w.out.iter().map(|(_, m)| m).sum();
    let solutions: Vec<Solution> = w.out.into_iter().map(|(s, _)| s).collect();
    Ok(CountResult {
        p,
        unknowns: unknowns.to_vec(),
        distinct: solutions.len(),
        with_multiplicity,
        solutions,
        eliminant,
    })
}

/// Evaluates each system polynomial at each solution.
pub fn verify_solutions(system: &[MPoly<FieldElem>], res: &CountResult) -> Result<bool> {
    for s in &res.solutions {
        let k = s.coords[0].field().clone();
        let nvars = system.first().map(|f| f.vars().len()).unwrap_or(0);
        let mut vals = vec![k.zero(); nvars];
        for (i, &u) in res.unknowns.iter().enumerate() {
            vals[u] = s.coords[i].clone();
        }
        for f in system {
            if !lift_poly(f, &k).eval(&vals).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when all solutions share one field and form a single orbit under
/// Frobenius.
pub fn is_single_frobenius_orbit(res: &CountResult) -> bool {
    let Some(first) = res.solutions.first() else {
        return false;
    };
    let k = first.coords[0].field();
    if res.solutions.iter().any(|s| s.coords.iter().any(|c| !Arc::ptr_eq(c.field(), k))) {
        return false;
    }
    let all: BTreeSet<&Solution> = res.solutions.iter().collect();
    let mut orbit = BTreeSet::new();
    let mut s = first.clone();
    for _ in 0..res.solutions.len() {
        orbit.insert(s.clone());
        s = s.frobenius();
    }
    s == *first && orbit.len() == all.len() && orbit.iter().all(|x| all.contains(x))
}

/// Compares two Frobenius-stable solution sets after embedding every
/// coordinate into one common field.
pub fn same_point_set(a: &CountResult, b: &CountResult, order: &[usize]) -> Result<bool> {
    let (pa, pb) = (a.points(order), b.points(order));
    if pa.len() != pb.len() {
        return Ok(false);
    }
    let Some(first) = pa.iter().chain(&pb).flatten().next() else {
        return Ok(true);
    };
    let deg = pa.iter().chain(&pb).flatten().map(|c| c.field().degree()).fold(1, lcm);
    let k = ExtField::canonical(first.field().prime_field(), deg);
    let lift = |pts: &[Vec<ExtElem>]| -> Result<BTreeSet<Vec<ExtElem>>> {
        pts.iter().map(|pt| pt.iter().map(|c| embed(c, &k)).collect()).collect()
    };
    Ok(lift(&pa)? == lift(&pb)?)
}

fn require_smooth(curve: &Curve<FieldElem>) -> Result<()> {
    let g = curve.g();
    if g.gcd(&g.derivative()).degree() != Some(0) {
        return Err(Error::SingularCurve(format!("g = {} has a repeated root", g.fmt_var("x"))));
    }
    Ok(())
}

fn require_p(curve: &Curve<FieldElem>, p: u64) -> Result<()> {
    if curve.p() != p {
        return Err(Error::UnsupportedP(curve.p()));
    }
    Ok(())
}

/// Vanishing system of a fixed numeric curve, with `u` symbolic.
pub fn numeric_system(curve: &Curve<FieldElem>) -> Result<Vec<Sym>> {
    vanishing_system(&NormalizedConnection::symbolic_u(curve)?)
}

pub fn count_p3(curve: &Curve<FieldElem>) -> Result<CountResult> {
    require_p(curve, 3)?;
    require_smooth(curve)?;
    triangular_count(&numeric_system(curve)?, &[U0, U1, U2])
}

/// `v` from `f = c v + r` with `c` a nonzero constant.
fn solve_linear(f: &Sym, v: usize) -> Result<Sym> {
    let c = f.coeff_of(v, 1);
    if f.degree_in(v) != Some(1) || !c.is_constant() || c.is_zero() {
        return Err(Error::Invalid(format!("not linear with unit coefficient in {}", SYMBOLS[v])));
    }
    let rest = f.coeff_of(v, 0);
    Ok(rest.neg().scale(&c.constant_term().inv()?))
}

/// Result of eliminating `u1` and `u0` from the p=5 system.
#[derive(Clone, Debug)]
pub struct P5Elimination {
    pub system: Vec<Sym>,
    /// `u1` as a polynomial in `u2`, from the x^4 coefficient.
    pub u1: Sym,
    /// `u0` as a polynomial in `u2`, from the x^3 coefficient.
    pub u0: Sym,
    /// The x^2 coefficient after substitution.
    pub x2: Sym,
    /// The x coefficient after substitution: a quintic in `u2`.
    pub quintic: Sym,
    /// The constant coefficient after substitution.
    pub x0: Sym,
}

impl P5Elimination {
    /// Checks that the x^2 coefficient vanishes and the constant
    /// coefficient is `(u2 + 3 a1)` times the quintic.
    pub fn relations_hold(&self) -> bool {
        let zero = *self.quintic.coeff_zero();
        let vars = self.quintic.vars().clone();
        let factor = MPoly::var_at(&vars, U2, &zero).add(&MPoly::var(&vars, "a1", &zero).scale_int(3));
        self.x2.is_zero() && self.x0 == factor.mul(&self.quintic)
    }
}

pub fn quintic_p5(conn: &NormalizedConnection<Sym>) -> Result<P5Elimination> {
    if conn.p() != 5 {
        return Err(Error::UnsupportedP(conn.p()));
    }
    let system = vanishing_system(conn)?;
    let u1 = solve_linear(&system[4], U1)?;
    let x3 = system[3].substitute(U1, &u1);
    let u0 = solve_linear(&x3, U0)?;
    let sub = |f: &Sym| f.substitute(U1, &u1).substitute(U0, &u0);
    Ok(P5Elimination {
        x2: sub(&system[2]),
        quintic: sub(&system[1]),
        x0: sub(&system[0]),
        u1,
        u0,
        system,
    })
}

fn eval_in(f: &Sym, vals: &[(usize, &ExtElem)], k: &Arc<ExtField>) -> ExtElem {
    let mut full = vec![k.zero(); f.vars().len()];
    for (i, v) in vals {
        full[*i] = (*v).clone();
    }
    lift_poly(f, k).eval(&full)
}

pub fn count_p5(curve: &Curve<FieldElem>) -> Result<CountResult> {
    require_p(curve, 5)?;
    require_smooth(curve)?;
    let el = quintic_p5(&NormalizedConnection::symbolic_u(curve)?)?;
    let q = el.quintic.to_upoly(U2)?;
    if q.is_zero() {
        return Err(Error::PositiveDimensional);
    }
    let mut solutions = Vec::new();
    let mut with_multiplicity = 0;
    for (r, m) in roots_in_ext(&q)? {
        let k = r.field().clone();
        let u1 = eval_in(&el.u1, &[(U2, &r)], &k);
        let u0 = eval_in(&el.u0, &[(U2, &r)], &k);
        solutions.push(Solution { coords: vec![r, u1, u0] });
        with_multiplicity += m;
    }
    Ok(CountResult {
        p: 5,
        unknowns: vec![U2, U1, U0],
        distinct: solutions.len(),
        with_multiplicity,
        solutions,
        eliminant: None,
    }
    .with_eliminant(q.monic()))
}

impl CountResult {
    fn with_eliminant(mut self, e: UPoly<FieldElem>) -> Self {
        self.eliminant = Some(e);
        self
    }
}

/// Multipliers `m` with `x^k coefficient = m · h_{7,1}` modulo the
/// remaining equations, for `k = 4, 3, 2, 1, 0`.
const P7_MULTIPLIERS: [&str; 5] = [
    "-u2",
    "-(u2^2 + a1*u2 + 3*a2 + u1)",
    "-(5*u2^3 + 5*a1*u2^2 + 2*u1*u2 + 5*a1*a2 + 4*a3 + 2*a1*u1)",
    "-(5*u1*u2^2 + 5*a1*u1*u2 + 6*a4 + 2*u1^2)",
    "-(6*u2^5 + 5*u1*u2^3 + 3*a1^2*u2^3 + 2*a1^3*u2^2 + 5*a1*a2*u2^2 + 2*a3*u2^2 + 6*a1*u1*u2^2 \
      + 5*a1^2*a2*u2 + 2*a1*a3*u2 + 2*a4*u2 + a1^2*u1*u2 + 2*a2*u1*u2 + 2*u1^2*u2 + 6*a1*a4 \
      + 4*a5 + 4*a1*a2*u1 + 3*a3*u1 + 3*a1*u1^2)",
];

/// The p=7 system after eliminating `u0`: four polynomials in `(u1, u2)`.
#[derive(Clone, Debug)]
pub struct P7System {
    pub system: Vec<Sym>,
    /// `u0` from the x^6 coefficient.
    pub u0: Sym,
    /// `h_{7,1}` (x^5 coefficient) and the reduced x^2, x, constant
    /// coefficients.
    pub h: [Sym; 4],
    /// x^4 and x^3 coefficients equal their multiples of `h_{7,1}`.
    pub multiples_hold: bool,
}

pub fn system_p7(conn: &NormalizedConnection<Sym>) -> Result<P7System> {
    if conn.p() != 7 {
        return Err(Error::UnsupportedP(conn.p()));
    }
    let system = vanishing_system(conn)?;
    let u0 = solve_linear(&system[6], U0)?;
    let x: Vec<Sym> = system.iter().map(|f| f.substitute(U0, &u0)).collect();
    let vars = symbol_vars();
    let zero = *x[0].coeff_zero();
    let mult = P7_MULTIPLIERS
        .iter()
        .map(|s| {
            let mut m = parse(s, &vars, &zero)?;
            for i in 1..=5 {
                m = m.substitute(i - 1, &conn.curve.a(i));
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let h1 = x[5].clone();
    let red = |k: usize, m: &Sym| x[k].sub(&m.mul(&h1));
    let multiples_hold = red(4, &mult[0]).is_zero() && red(3, &mult[1]).is_zero();
    let h = [h1.clone(), red(2, &mult[2]), red(1, &mult[3]), red(0, &mult[4])];
    Ok(P7System { system, u0, h, multiples_hold })
}

/// `f` reduced modulo `q`, which is quadratic in `v` with constant leading
/// coefficient.
pub(crate) fn reduce_quadratic(f: &Sym, q: &Sym, v: usize) -> Result<Sym> {
    let lc = q.coeff_of(v, 2);
    if q.degree_in(v) != Some(2) || !lc.is_constant() || lc.is_zero() {
        return Err(Error::Invalid("reduction needs a monic-up-to-unit quadratic".into()));
    }
    let inv = lc.constant_term().inv()?;
    let vars = f.vars().clone();
    let zero = *f.coeff_zero();
    let x = MPoly::var_at(&vars, v, &zero);
    let mut r = f.clone();
    while let Some(d) = r.degree_in(v).filter(|&d| d >= 2) {
        let c = r.coeff_of(v, d as u16).scale(&inv);
        r = r.sub(&c.mul(&x.pow(d as u64 - 2)).mul(q));
    }
    Ok(r)
}

/// `numer / denom` in one variable.
pub type Fraction = (UPoly<FieldElem>, UPoly<FieldElem>);

/// Outcome of the p=7 count by both routes.
#[derive(Clone, Debug)]
pub struct P7Count {
    /// Substitution route: `u1` as a rational function of `u2` from a
    /// reduced equation, then a univariate eliminant. `None` when its
    /// non-degeneracy conditions fail.
    pub substitution: Option<CountResult>,
    /// Resultant triangularization of the full vanishing system.
    pub generic: CountResult,
    pub degenerate: bool,
    /// `u1 = numer / denom`, when the substitution route applies.
    pub u1_fraction: Option<Fraction>,
}

impl P7Count {
    pub fn result(&self) -> &CountResult {
        self.substitution.as_ref().unwrap_or(&self.generic)
    }

    pub fn routes_agree(&self) -> bool {
        match &self.substitution {
            Some(s) => same_point_set(s, &self.generic, &[U0, U1, U2]).unwrap_or(false),
            None => true,
        }
    }
}

fn substitution_route(
    sys: &P7System,
) -> Result<Option<(CountResult, Fraction)>> {
    let h1 = &sys.h[0];
    let mut parts = Vec::new();
    for h in &sys.h[1..] {
        let r = reduce_quadratic(h, h1, U1)?;
        parts.push((r.coeff_of(U1, 0).to_upoly(U2)?, r.coeff_of(U1, 1).to_upoly(U2)?));
    }
    let Some(pick) = parts.iter().position(|(_, b)| !b.is_zero()) else {
        return Ok(None);
    };
    let (a, b) = &parts[pick];
    let g = a.gcd(b);
    if g.degree() != Some(0) {
        return Ok(None);
    }
    let (num, den) = (a.neg(), b.clone());
    let hq = h1.to_univariate(U1);
    let c = |i: usize| hq.coeff(i).to_upoly(U2);
    let e1 = c(2)?.mul(&num).mul(&num).add(&c(1)?.mul(&num).mul(&den)).add(&c(0)?.mul(&den).mul(&den));
    let mut e = e1;
    for (i, (a2, b2)) in parts.iter().enumerate() {
        if i != pick {
            e = e.gcd(&a2.mul(&den).add(&b2.mul(&num)));
        }
    }
    if e.is_zero() || e.gcd(&den).degree() != Some(0) {
        return Ok(None);
    }
    let e = e.monic();
    let mut solutions = Vec::new();
    let mut with_multiplicity = 0;
    for (r, m) in roots_in_ext(&e)? {
        let k = r.field().clone();
        let lift = |f: &UPoly<FieldElem>| f.map(|c| k.from_base(c.value() as i64), k.zero()).eval(&r);
        let u1 = lift(&num).div(&lift(&den))?;
        let u0 = eval_in(&sys.u0, &[(U1, &u1), (U2, &r)], &k);
        solutions.push(Solution { coords: vec![r, u1, u0] });
        with_multiplicity += m;
    }
    let res = CountResult {
        p: 7,
        unknowns: vec![U2, U1, U0],
        distinct: solutions.len(),
        with_multiplicity,
        solutions,
        eliminant: Some(e),
    };
    Ok(Some((res, (num, den))))
}

pub fn count_p7(curve: &Curve<FieldElem>) -> Result<P7Count> {
    require_p(curve, 7)?;
    require_smooth(curve)?;
    let conn = NormalizedConnection::symbolic_u(curve)?;
    let sys = system_p7(&conn)?;
    let generic = triangular_count(&sys.system, &[U2, U1, U0])?;
    let sub = substitution_route(&sys)?;
    let degenerate = sub.is_none();
    let (substitution, u1_fraction) = match sub {
        Some((r, f)) => (Some(r), Some(f)),
        None => (None, None),
    };
    Ok(P7Count { substitution, generic, degenerate, u1_fraction })
}

/// Distinct count for p in {3, 5, 7}.
pub fn count(curve: &Curve<FieldElem>) -> Result<CountResult> {
    match curve.p() {
        3 => count_p3(curve),
        5 => count_p5(curve),
        7 => Ok(count_p7(curve)?.result().clone()),
        p => Err(Error::UnsupportedP(p)),
    }
}

//! The normalized connection `T = [[0, f12], [1, 0]]` on the unstable rank-2
//! bundle and its p-curvature matrix.

use std::fmt;

use serde_json::{json, Value};

use crate::curve::{sym_var, Curve, CurveFn, Sym};
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::nc_expand::evaluate_linear_terms;
use crate::poly::UPoly;
use crate::ring::Ring;

#[derive(Clone)]
pub struct NormalizedConnection<R> {
    pub curve: Curve<R>,
    /// `(u0, u1, u2)`.
    pub u: [R; 3],
}

impl<R: Ring> NormalizedConnection<R> {
    pub fn new(curve: Curve<R>, u: [R; 3]) -> Self {
        NormalizedConnection { curve, u }
    }

    pub fn p(&self) -> u64 {
        self.curve.p()
    }

    /// `f12 = u0 + u1 x + u2 x^2 - ½ x^3`.
    pub fn f12(&self) -> UPoly<R> {
        let one = self.curve.g().lead().one();
        let c = vec![self.u[0].clone(), self.u[1].clone(), self.u[2].clone(), one.half().neg()];
        UPoly::new(c, one.zero())
    }

    pub fn f12_fn(&self) -> CurveFn<R> {
        self.curve.from_x_poly(self.f12())
    }

    pub fn t_bar(&self) -> Mat2<CurveFn<R>> {
        let c = &self.curve;
        Mat2::new(c.zero_fn(), self.f12_fn(), c.constant(c.g().lead().one()), c.zero_fn())
    }
}

impl<R: Ring> fmt::Debug for NormalizedConnection<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}, f12 = {}", self.curve, self.f12().fmt_var("x"))
    }
}

impl NormalizedConnection<Sym> {
    /// Generic curve and generic `u` over F_p[a1..a5, u0, u1, u2].
    pub fn symbolic(p: u64) -> Result<Self> {
        let curve = Curve::symbolic(p)?;
        let u = [sym_var(p, "u0")?, sym_var(p, "u1")?, sym_var(p, "u2")?];
        Ok(Self::new(curve, u))
    }

    /// A fixed curve with `u` left symbolic.
    pub fn symbolic_u(curve: &Curve<crate::field::FieldElem>) -> Result<Self> {
        let p = curve.p();
        let u = [sym_var(p, "u0")?, sym_var(p, "u1")?, sym_var(p, "u2")?];
        Ok(Self::new(curve.to_symbolic(), u))
    }
}

#[derive(Clone)]
pub struct PCMatrix<R> {
    pub h11: CurveFn<R>,
    pub h12: CurveFn<R>,
    pub h21: CurveFn<R>,
    pub h22: CurveFn<R>,
}

impl<R: Ring> PCMatrix<R> {
    fn from_mat(m: Mat2<CurveFn<R>>) -> Self {
        PCMatrix { h11: m.a, h12: m.b, h21: m.c, h22: m.d }
    }

    pub fn to_mat(&self) -> Mat2<CurveFn<R>> {
        Mat2::new(self.h11.clone(), self.h12.clone(), self.h21.clone(), self.h22.clone())
    }

    pub fn trace(&self) -> CurveFn<R> {
        self.h11.add(&self.h22)
    }

    pub fn det(&self) -> CurveFn<R> {
        self.h11.mul(&self.h22).sub(&self.h12.mul(&self.h21))
    }

    pub fn apply(&self, s: &(CurveFn<R>, CurveFn<R>)) -> (CurveFn<R>, CurveFn<R>) {
        self.to_mat().apply(s)
    }

    pub fn is_zero(&self) -> bool {
        self.to_mat().is_zero()
    }

    pub fn to_json(&self) -> Value {
        let e = |f: &CurveFn<R>| Value::String(f.to_string());
        json!({"h11": e(&self.h11), "h12": e(&self.h12), "h21": e(&self.h21), "h22": e(&self.h22)})
    }
}

impl<R: Ring> PartialEq for PCMatrix<R> {
    fn eq(&self, o: &Self) -> bool {
        self.h11 == o.h11 && self.h12 == o.h12 && self.h21 == o.h21 && self.h22 == o.h22
    }
}

impl<R: Ring> fmt::Debug for PCMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_mat())
    }
}

fn theta_mat<R: Ring>(curve: &Curve<R>, m: &Mat2<CurveFn<R>>) -> Mat2<CurveFn<R>> {
    m.map(|e| curve.theta_apply(e))
}

/// `Σ n_𝔦 T_𝔦 - f_{θ^p} T` with `T_𝔦` built from `θ^i T`.
pub fn pcurvature_matrix<R: Ring>(conn: &NormalizedConnection<R>) -> PCMatrix<R> {
    let one = conn.curve.g().lead().one();
    pcurvature_matrix_scaled(conn, &one)
}

/// The p-curvature for the derivation `λθ`: the connection matrix becomes
/// `λT` and `f_{(λθ)^p} = λ^{p-1} f_{θ^p}`.
pub fn pcurvature_matrix_scaled<R: Ring>(conn: &NormalizedConnection<R>, lambda: &R) -> PCMatrix<R> {
    let c = &conn.curve;
    let p = c.p();
    let t = conn.t_bar();
    let mut derivs = Vec::with_capacity(p as usize);
    let mut d = t.clone();
    let mut lam = lambda.clone();
    for _ in 0..p {
        derivs.push(d.map(|e| e.scale(&lam)));
        d = theta_mat(c, &d);
        lam = lam.mul(lambda);
    }
    let linear = evaluate_linear_terms(p as usize, &derivs);
    let ft = c.from_x_poly(c.f_theta_p()).scale(&lambda.pow(p));
    let corr = t.map(|e| e.mul(&ft));
    PCMatrix::from_mat(linear.sub(&corr))
}

/// `∇^p s - f_{θ^p} ∇ s` with `∇ s = T s + θ s`.
pub fn operator_oracle<R: Ring>(
    conn: &NormalizedConnection<R>,
    s: &(CurveFn<R>, CurveFn<R>),
) -> (CurveFn<R>, CurveFn<R>) {
    let c = &conn.curve;
    let t = conn.t_bar();
    let nabla = |v: &(CurveFn<R>, CurveFn<R>)| {
        let tv = t.apply(v);
        (tv.0.add(&c.theta_apply(&v.0)), tv.1.add(&c.theta_apply(&v.1)))
    };
    let mut v = s.clone();
    for _ in 0..c.p() {
        v = nabla(&v);
    }
    let ns = nabla(s);
    let ft = c.from_x_poly(c.f_theta_p());
    (v.0.sub(&ft.mul(&ns.0)), v.1.sub(&ft.mul(&ns.1)))
}

/// Checks the linear relations expressing `h11, h12, h22` through `h21`:
/// `h11 = k θ(h21)`, `h12 = f12 h21 + k θ^2(h21)`, `h22 = -h11`, with
/// `k = 1, 2, 3` for `p = 3, 5, 7`.
pub fn entry_relations<R: Ring>(conn: &NormalizedConnection<R>, m: &PCMatrix<R>) -> Result<bool> {
    let k: i64 = match conn.p() {
        3 => 1,
        5 => 2,
        7 => 3,
        p => return Err(Error::UnsupportedP(p)),
    };
    let c = &conn.curve;
    let d1 = c.theta_apply(&m.h21);
    let d2 = c.theta_apply(&d1);
    let h11 = d1.scale_int(k);
    let h12 = conn.f12_fn().mul(&m.h21).add(&d2.scale_int(k));
    Ok(m.h11 == h11 && m.h12 == h12 && m.h22 == h11.neg())
}

/// x-coefficients of `h21` (degrees `0..p`), whose common vanishing is
/// equivalent to vanishing p-curvature.
pub fn vanishing_system(conn: &NormalizedConnection<Sym>) -> Result<Vec<Sym>> {
    let p = conn.p();
    if !matches!(p, 3 | 5 | 7) {
        return Err(Error::UnsupportedP(p));
    }
    let m = pcurvature_matrix(conn);
    h21_coefficients(&m, p)
}

pub(crate) fn h21_coefficients<R: Ring>(m: &PCMatrix<R>, p: u64) -> Result<Vec<R>> {
    if !m.h21.is_y_free() {
        return Err(Error::Invalid("h21 has a y-component".into()));
    }
    if m.h21.a.degree().is_some_and(|d| d >= p as usize) {
        return Err(Error::Invalid(format!("h21 has x-degree ≥ {p}")));
    }
    Ok((0..p as usize).map(|i| m.h21.a.coeff(i)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::symbol_vars;
    use crate::field::{FieldElem, PrimeField};
    use crate::poly::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sym(p: u64, s: &str) -> Sym {
        parse(s, &symbol_vars(), &PrimeField::new(p).unwrap().zero()).unwrap()
    }

    fn random_numeric(p: u64, rng: &mut ChaCha8Rng) -> NormalizedConnection<FieldElem> {
        let f = PrimeField::new(p).unwrap();
        loop {
            let a: [FieldElem; 5] = std::array::from_fn(|_| f.random(rng));
            if let Ok(c) = Curve::smooth(&a) {
                let u = std::array::from_fn(|_| f.random(rng));
                return NormalizedConnection::new(c, u);
            }
        }
    }

    fn random_fn(c: &Curve<FieldElem>, rng: &mut ChaCha8Rng) -> CurveFn<FieldElem> {
        let f = PrimeField::new(c.p()).unwrap();
        let a = UPoly::new((0..4).map(|_| f.random(rng)).collect(), f.zero());
        let b = UPoly::new((0..3).map(|_| f.random(rng)).collect(), f.zero());
        c.func(a, b)
    }

    #[test]
    fn t_bar_squares_to_f12() {
        let conn = NormalizedConnection::symbolic(5).unwrap();
        let t = conn.t_bar();
        assert_eq!(t.mul(&t), Mat2::scalar(conn.f12_fn()));
        assert!(t.trace().is_zero());
    }

    #[test]
    fn three_matches_display() {
        let conn = NormalizedConnection::symbolic(3).unwrap();
        let c = &conn.curve;
        let m = pcurvature_matrix(&conn);
        let f = conn.f12_fn();
        let ft = c.from_x_poly(c.f_theta_p());
        assert_eq!(m.h21, f.sub(&ft));
        assert_eq!(m.h11, c.theta_apply(&f));
        assert_eq!(m.h22, c.theta_apply(&f).neg());
        assert_eq!(m.h12, f.mul(&f).add(&c.theta_pow(&f, 2)).sub(&ft.mul(&f)));
        assert!(entry_relations(&conn, &m).unwrap());
        let sys = vanishing_system(&conn).unwrap();
        assert_eq!(sys, vec![sym(3, "u0 - a3"), sym(3, "u1"), sym(3, "u2")]);
    }

    #[test]
    fn five_lower_left_entry() {
        let conn = NormalizedConnection::symbolic(5).unwrap();
        let c = &conn.curve;
        let m = pcurvature_matrix(&conn);
        let f = conn.f12_fn();
        let ft = c.from_x_poly(c.f_theta_p());
        let expect = f.mul(&f).add(&c.theta_pow(&f, 2).scale_int(3)).add(&ft.scale_int(4));
        assert_eq!(m.h21, expect);
        assert!(m.trace().is_zero());
        assert!(entry_relations(&conn, &m).unwrap());
        let sys = vanishing_system(&conn).unwrap();
        // the constant term of 3θ²(f12) contributes 3·½·a4·u1 = 4 a4 u1
        assert_eq!(sys[0], sym(5, "4*a3^2 + 3*a2*a4 + 3*a1*a5 + u0^2 + a5*u2 + 4*a4*u1"));
        assert_eq!(sys[1], sym(5, "a5 + 3*a3*u1 + 2*u0*u1 + 4*a4*u2"));
        assert_eq!(sys[2], sym(5, "2*a2*u1 + u1^2 + 2*a3*u2 + 2*u0*u2"));
        assert_eq!(sys[3], sym(5, "4*a3 + 4*u0 + a1*u1 + 2*u1*u2"));
        assert_eq!(sys[4], sym(5, "3*a2 + 4*u1 + 3*a1*u2 + u2^2"));
    }

    #[test]
    fn seven_matrix_entries() {
        let conn = NormalizedConnection::symbolic(7).unwrap();
        let c = &conn.curve;
        let m = pcurvature_matrix(&conn);
        let f = conn.f12_fn();
        let ft = c.from_x_poly(c.f_theta_p());
        let d = |n| c.theta_pow(&f, n);
        let h21 = ft
            .neg()
            .add(&f.pow(3))
            .add(&d(1).mul(&d(1)).scale_int(3))
            .sub(&f.mul(&d(2)))
            .sub(&d(4).scale_int(2));
        assert_eq!(m.h21, h21);
        let h11 = f.mul(&f).mul(&d(1)).scale_int(2).add(&d(1).mul(&d(2))).sub(&f.mul(&d(3)).scale_int(3)).add(&d(5));
        assert_eq!(m.h11, h11);
        assert!(m.trace().is_zero());
        assert!(entry_relations(&conn, &m).unwrap());
        let sys = vanishing_system(&conn).unwrap();
        // x^6 coefficient is linear in u0 and solves to the displayed value
        let u0 = sym(7, "5*a1*a2 + a3 + 4*a1*u1 + 4*a1^2*u2 + u1*u2 + 2*a1*u2^2 + 5*u2^3");
        assert_eq!(sys[6].degree_in(crate::curve::U0), Some(1));
        assert!(sys[6].substitute(crate::curve::U0, &u0).is_zero());
    }

    #[test]
    fn operator_oracle_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [3u64, 5, 7, 11] {
            for _ in 0..10 {
                let conn = random_numeric(p, &mut rng);
                let m = pcurvature_matrix(&conn);
                let c = &conn.curve;
                let s = (random_fn(c, &mut rng), random_fn(c, &mut rng));
                assert_eq!(operator_oracle(&conn, &s), m.apply(&s), "p={p}");
                assert!(m.trace().is_zero());
            }
        }
    }

    #[test]
    fn basis_vectors_give_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let conn = random_numeric(5, &mut rng);
        let c = &conn.curve;
        let m = pcurvature_matrix(&conn);
        let one = c.constant(c.g().lead().one());
        assert_eq!(operator_oracle(&conn, &(one.clone(), c.zero_fn())), (m.h11.clone(), m.h21.clone()));
        assert_eq!(operator_oracle(&conn, &(c.zero_fn(), one)), (m.h12, m.h22));
    }

    #[test]
    fn scaling_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for p in [3u64, 5] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..5 {
                let conn = random_numeric(p, &mut rng);
                let lam = loop {
                    let l = f.random(&mut rng);
                    if !l.is_zero() {
                        break l;
                    }
                };
                let base = pcurvature_matrix(&conn).to_mat();
                let scaled = pcurvature_matrix_scaled(&conn, &lam).to_mat();
                assert_eq!(scaled, base.map(|e| e.scale(&lam.pow(p))));
            }
        }
    }

    #[test]
    fn vanishing_system_rejects_other_p() {
        let conn = NormalizedConnection::symbolic(11).unwrap();
        assert_eq!(vanishing_system(&conn).unwrap_err(), Error::UnsupportedP(11));
    }
}

//! p-rank of the Jacobian of `y^2 = g(x)` from the coefficients of `g_p`,
//! with the Hasse–Witt matrix as an independent check.

use serde::Serialize;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::field::{FieldElem, PrimeField};
use crate::poly::{MPoly, VarSet};
use crate::ring::{Field, Ring};

/// Coefficients of `x^0, x^1, x^p, x^{p+1}` in `g_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct HVector<R> {
    pub h1: R,
    pub h2: R,
    pub h3: R,
    pub h4: R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PRank(pub u8);

pub fn h_vector<R: Ring>(curve: &Curve<R>) -> HVector<R> {
    let p = curve.p() as usize;
    let gp = curve.g_k(p as u32).expect("odd characteristic");
    HVector { h1: gp.coeff(0), h2: gp.coeff(1), h3: gp.coeff(p), h4: gp.coeff(p + 1) }
}

/// The three stratum polynomials: `h1 h4 - h2 h3`, `h3^p - h2 h4^{p-1}`,
/// `h1^p h4 - h2^{p+1}`.
pub fn stratum_polys<R: Ring>(h: &HVector<R>) -> [R; 3] {
    let p = h.h1.characteristic();
    [
        h.h1.mul(&h.h4).sub(&h.h2.mul(&h.h3)),
        h.h3.pow(p).sub(&h.h2.mul(&h.h4.pow(p - 1))),
        h.h1.pow(p).mul(&h.h4).sub(&h.h2.pow(p + 1)),
    ]
}

/// Rank 2 if the first stratum polynomial is nonzero, else 1 if either of
/// the other two is, else 0.
pub fn classify_prank<F: Field>(h: &HVector<F>) -> PRank {
    let [r2, r1a, r1b] = stratum_polys(h);
    if !r2.is_zero() {
        PRank(2)
    } else if !r1a.is_zero() || !r1b.is_zero() {
        PRank(1)
    } else {
        PRank(0)
    }
}

/// Hasse–Witt matrix `M[i][j] = c_{ip-j}` (i, j in {1, 2}) of
/// `g^{(p-1)/2} = Σ c_k x^k`.
pub fn hasse_witt_matrix(curve: &Curve<FieldElem>) -> [[FieldElem; 2]; 2] {
    let p = curve.p() as usize;
    let h = curve.g().clone();
    let mut pw = crate::poly::UPoly::constant(h.lead().one());
    for _ in 0..(p - 1) / 2 {
        pw = pw.mul(&h);
    }
    std::array::from_fn(|i| std::array::from_fn(|j| pw.coeff((i + 1) * p - (j + 1))))
}

fn rank2x2(m: &[[FieldElem; 2]; 2]) -> u8 {
    let det = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
    if !det.is_zero() {
        2
    } else if m.iter().flatten().any(|e| !e.is_zero()) {
        1
    } else {
        0
    }
}

/// p-rank as the rank of `M · M^{(p)}`; entries lie in F_p, so the
/// Frobenius twist is the identity.
pub fn hasse_witt_prank(curve: &Curve<FieldElem>) -> Result<PRank> {
    let g = curve.g();
    if g.gcd(&g.derivative()).degree() != Some(0) {
        return Err(Error::SingularCurve(format!("g = {} has a repeated root", g.fmt_var("x"))));
    }
    let m = hasse_witt_matrix(curve);
    let tw = m.map(|r| r.map(|e| e.frobenius()));
    let prod: [[FieldElem; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| m[i][0].mul(&tw[0][j]).add(&m[i][1].mul(&tw[1][j]))));
    Ok(PRank(rank2x2(&prod)))
}

/// Constant and `x^p` coefficients of the p-curvature of the rank-one
/// connection `T = c1 + c2 x`: `(c1^p + c2 h1 - c1 h2, c2^p + c2 h3 - c1 h4)`.
pub fn line_bundle_pcurvature<R: Ring>(curve: &Curve<R>, c1: &R, c2: &R) -> (R, R) {
    let h = h_vector(curve);
    let p = curve.p();
    (
        c1.pow(p).add(&c2.mul(&h.h1)).sub(&c1.mul(&h.h2)),
        c2.pow(p).add(&c2.mul(&h.h3)).sub(&c1.mul(&h.h4)),
    )
}

/// The rank-one formula `T^p + θ^{p-1} T - f_{θ^p} T` evaluated directly in
/// the coordinate ring, as an x-polynomial.
pub fn line_bundle_pcurvature_direct<R: Ring>(curve: &Curve<R>, c1: &R, c2: &R) -> crate::poly::UPoly<R> {
    let t = curve.constant(c1.clone()).add(&curve.x().scale(c2));
    let ft = curve.from_x_poly(curve.f_theta_p());
    let p = curve.p();
    let psi = t.pow(p).add(&curve.theta_pow(&t, p - 1)).sub(&ft.mul(&t));
    debug_assert!(psi.is_y_free());
    psi.a
}

/// Variables for the symbolic rank-one analysis.
pub fn prank_vars() -> VarSet {
    VarSet::new(&["a1", "a2", "a3", "a4", "a5", "c1", "c2"]).expect("distinct names")
}

/// Stratum conditions over F_p[a1..a5], scaled so that the graded-lex
/// leading coefficient is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Strata {
    pub p: u64,
    pub rank2: MPoly<FieldElem>,
    pub rank1: [MPoly<FieldElem>; 2],
}

pub fn strata(p: u64) -> Result<Strata> {
    PrimeField::new(p)?;
    let curve = Curve::symbolic_in(p, &prank_vars())?;
    let [a, b, c] = stratum_polys(&h_vector(&curve));
    Ok(Strata { p, rank2: a.monic(), rank1: [b.monic(), c.monic()] })
}

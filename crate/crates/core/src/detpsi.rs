//! The determinant of the p-curvature as a polynomial map `A^3 -> A^3`.

use serde_json::{json, Value};

use crate::connection::{pcurvature_matrix, NormalizedConnection};
use crate::curve::{Curve, Sym, U0, U1, U2};
use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::mat2::Mat2;
use crate::ring::Ring;
use crate::solve_count::{triangular_count, CountResult};

/// Coefficients of `1, x^p, x^{2p}` in `det ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetPsiMap {
    pub p: u64,
    pub f: [Sym; 3],
}

impl DetPsiMap {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "f1": self.f[0].to_string(),
            "f2": self.f[1].to_string(),
            "f3": self.f[2].to_string(),
        })
    }
}

pub fn det_psi(conn: &NormalizedConnection<Sym>) -> Result<DetPsiMap> {
    let p = conn.p();
    if !matches!(p, 3 | 5 | 7) {
        return Err(Error::UnsupportedP(p));
    }
    let det = pcurvature_matrix(conn).det();
    if !det.is_y_free() {
        return Err(Error::SupportViolation(usize::MAX));
    }
    let pu = p as usize;
    for (i, c) in det.a.coeffs().iter().enumerate() {
        if (i % pu != 0 || i > 2 * pu) && !c.is_zero() {
            return Err(Error::SupportViolation(i));
        }
    }
    Ok(DetPsiMap { p, f: [det.a.coeff(0), det.a.coeff(pu), det.a.coeff(2 * pu)] })
}

/// `deg_u(f_i + u_{i-1}^p) < p` for each `i`.
pub fn leading_term_certificate(map: &DetPsiMap) -> bool {
    let u = [U0, U1, U2];
    map.f.iter().zip(u).all(|(f, v)| {
        let x = crate::poly::MPoly::var_at(f.vars(), v, f.coeff_zero());
        let rest = f.add(&x.pow(map.p));
        rest.degree_in_vars(&u).is_none_or(|d| d < map.p as u32)
    })
}

/// Checks `T^p = [[0, f12^{(p+1)/2}], [f12^{(p-1)/2}, 0]]`.
pub fn t_bar_power_identity<R: Ring>(conn: &NormalizedConnection<R>) -> bool {
    let p = conn.p();
    let t = conn.t_bar();
    let f = conn.f12_fn();
    let z = conn.curve.zero_fn();
    t.pow(p) == Mat2::new(z.clone(), f.pow(p.div_ceil(2)), f.pow(p / 2), z)
}

/// Distinct `(u0, u1, u2)` with `det ψ = 0` coefficientwise, i.e. nilpotent
/// p-curvature, on a fixed curve in characteristic 3.
pub fn nilpotent_locus_count(curve: &Curve<FieldElem>) -> Result<CountResult> {
    if curve.p() != 3 {
        return Err(Error::UnsupportedP(curve.p()));
    }
    let map = det_psi(&NormalizedConnection::symbolic_u(curve)?)?;
    triangular_count(&map.f, &[U2, U1, U0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::operator_oracle;
    use crate::curve::sym_var;
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_support_and_leading_terms() {
        let map = det_psi(&NormalizedConnection::symbolic(3).unwrap()).unwrap();
        assert!(leading_term_certificate(&map));
        let u2 = sym_var(3, "u2").unwrap();
        let top: Sym = crate::poly::MPoly::from_terms(
            map.f[2].vars(),
            map.f[2]
                .terms()
                .iter()
                .filter(|(m, _)| m[U0] + m[U1] + m[U2] == 3)
                .cloned()
                .collect(),
            *map.f[2].coeff_zero(),
        );
        assert_eq!(top, u2.pow(3).neg());
    }

    #[test]
    fn five_leading_term() {
        let map = det_psi(&NormalizedConnection::symbolic(5).unwrap()).unwrap();
        assert!(leading_term_certificate(&map));
    }

    #[test]
    fn t_power_identity() {
        for p in [3, 5, 7] {
            assert!(t_bar_power_identity(&NormalizedConnection::symbolic(p).unwrap()));
        }
    }

    #[test]
    fn numeric_matches_oracle_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = PrimeField::new(5).unwrap();
        for _ in 0..5 {
            let a: [FieldElem; 5] = std::array::from_fn(|_| f.random(&mut rng));
            let Ok(c) = Curve::smooth(&a) else { continue };
            let u: [FieldElem; 3] = std::array::from_fn(|_| f.random(&mut rng));
            let conn = NormalizedConnection::new(c.clone(), u);
            let one = c.constant(f.one());
            let (h11, h21) = operator_oracle(&conn, &(one.clone(), c.zero_fn()));
            let (h12, h22) = operator_oracle(&conn, &(c.zero_fn(), one));
            let det = h11.mul(&h22).sub(&h12.mul(&h21));
            let map = det_psi(&NormalizedConnection::symbolic_u(&c).unwrap()).unwrap();
            let mut vals = vec![f.zero(); 8];
            vals[U0..=U2].clone_from_slice(&u);
            for (i, fi) in map.f.iter().enumerate() {
                assert_eq!(fi.eval(&vals), det.a.coeff(5 * i));
            }
        }
    }

    #[test]
    fn nilpotent_locus_at_three() {
        let c = Curve::from_ints(3, &[0, 0, 1, 0, 2]).unwrap();
        let res = nilpotent_locus_count(&c).unwrap();
        assert!(res.distinct >= 1 && res.distinct <= 27);
        let pts = res.points(&[U0, U1, U2]);
        let zero_curv: Vec<u64> = vec![1, 0, 0];
        assert!(pts.iter().any(|p| p.iter().map(|x| x.to_base().map(|b| b.value())).collect::<Vec<_>>()
            == zero_curv.iter().map(|&v| Some(v)).collect::<Vec<_>>()));
    }
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{embed, ExtElem, ExtField, FieldElem};
use crate::poly::UPoly;
use crate::ring::Field;

/// The distinct roots of `f` that lie in its own coefficient field F_q,
/// sorted in the field's canonical order.
pub fn roots_in_field<K: Field + Ord>(f: &UPoly<K>) -> Result<Vec<K>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f.monic();
    let k = f.base_zero().degree();
    let t = UPoly::monomial(f.base_zero().one(), 1);
    let split = if f.degree() == Some(0) {
        f.clone()
    } else {
        t.frobenius_mod(k, &f)?.sub(&t).gcd(&f)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    split_linear(&split, &mut rng, &mut out)?;
    out.sort();
    Ok(out)
}

/// Splits a squarefree product of distinct linear factors.
fn split_linear<K: Field>(g: &UPoly<K>, rng: &mut ChaCha8Rng, out: &mut Vec<K>) -> Result<()> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(g.coeff(0).neg().div(g.lead())?);
            return Ok(());
        }
        _ => {}
    }
    let zero = g.base_zero().clone();
    let p = zero.characteristic();
    let k = zero.degree();
    loop {
        let delta = zero.random(rng);
        let w = UPoly::new(vec![delta, zero.one()], zero.clone());
        // w^((q-1)/2) = (w * w^p * ... * w^(p^(k-1)))^((p-1)/2)
        let mut conj = w.rem(g)?;
        let mut norm = conj.clone();
        for _ in 1..k {
            conj = conj.pow_mod(p, g)?;
            norm = norm.mul(&conj).rem(g)?;
        }
        let h = norm.pow_mod((p - 1) / 2, g)?;
        let d = h.sub(&UPoly::constant(zero.one())).gcd(g);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            split_linear(&d, rng, out)?;
            split_linear(&g.div_exact(&d)?, rng, out)?;
            return Ok(());
        }
    }
}

/// Multiplicity of `r` as a root of `f`.
pub fn root_multiplicity<K: Field>(f: &UPoly<K>, r: &K) -> usize {
    let lin = UPoly::new(vec![r.neg(), r.one()], r.zero());
    let mut g = f.clone();
    let mut m = 0;
    while !g.is_zero() {
        let (q, rem) = g.divrem(&lin).expect("linear divisor");
        if !rem.is_zero() {
            break;
        }
        g = q;
        m += 1;
    }
    m
}

/// All roots of `f` in the algebraic closure with multiplicities. Roots of
/// an irreducible factor of degree d are returned as elements of the
/// canonical F_{p^d}. Sorted by (d, canonical order).
pub fn roots_in_ext(f: &UPoly<FieldElem>) -> Result<Vec<(ExtElem, usize)>> {
    let sq = f.squarefree_part()?;
    let field = f.lead().field();
    let mut out = Vec::new();
    for (d, part) in sq.ddf()? {
        let ext = ExtField::canonical(field, d as u32);
        let lift = |g: &UPoly<FieldElem>| g.map(|c| ext.from_base(c.value() as i64), ext.zero());
        let (fl, pl) = (lift(f), lift(&part));
        for r in roots_in_field(&pl)? {
            let m = root_multiplicity(&fl, &r);
            out.push((r, m));
        }
    }
    Ok(out)
}

/// Roots of `f` over `K = F_{p^D}` lying in `F_{p^{D e}}` for the
/// extension-degree classes found by distinct-degree factorization,
/// with multiplicities. The target fields are the canonical ones.
pub fn roots_over_ext(f: &UPoly<ExtElem>) -> Result<Vec<(ExtElem, usize)>> {
    let sq = f.squarefree_part()?;
    let base = f.base_zero().field().clone();
    let mut out = Vec::new();
    for (e, part) in sq.ddf()? {
        let ext = ExtField::canonical(base.prime_field(), base.degree() * e as u32);
        let lift = |g: &UPoly<ExtElem>| -> Result<UPoly<ExtElem>> {
            let c = g.coeffs().iter().map(|c| embed(c, &ext)).collect::<Result<Vec<_>>>()?;
            Ok(UPoly::new(c, ext.zero()))
        };
        let (fl, pl) = (lift(f)?, lift(&part)?);
        for r in roots_in_field(&pl)? {
            let m = root_multiplicity(&fl, &r);
            out.push((r, m));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::ring::Ring;
    use rand::Rng;

    fn poly(f: PrimeField, c: &[i64]) -> UPoly<FieldElem> {
        UPoly::new(c.iter().map(|&v| f.elem(v)).collect(), f.zero())
    }

    #[test]
    fn t_squared_plus_one_over_f7() {
        let f = PrimeField::new(7).unwrap();
        let roots = roots_in_ext(&poly(f, &[1, 0, 1])).unwrap();
        assert_eq!(roots.len(), 2);
        for (r, m) in &roots {
            assert_eq!(m, &1);
            assert_eq!(r.field().degree(), 2);
            assert!(r.mul(r).add(&r.one()).is_zero());
        }
    }

    #[test]
    fn cubic_splits_over_f3() {
        let f = PrimeField::new(3).unwrap();
        let roots = roots_in_ext(&poly(f, &[0, -1, 0, 1])).unwrap();
        let vals: Vec<_> = roots.iter().map(|(r, m)| (r.to_base().unwrap().value(), *m)).collect();
        assert_eq!(vals, vec![(0, 1), (1, 1), (2, 1)]);
    }

    #[test]
    fn multiplicities_sum_to_degree() {
        let f = PrimeField::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let deg = rng.gen_range(1..=10);
            let mut c: Vec<FieldElem> = (0..deg).map(|_| f.random(&mut rng)).collect();
            c.push(f.one());
            // force some repeated factors
            let base = UPoly::new(c, f.zero());
            let g = if rng.gen_bool(0.5) { base.mul(&poly(f, &[rng.gen_range(0..5), 1])) } else { base };
            let roots = roots_in_ext(&g).unwrap();
            let total: usize = roots.iter().map(|(_, m)| m).sum();
            assert_eq!(total, g.degree().unwrap());
            assert_eq!(roots.len(), g.count_distinct_roots().unwrap());
            for (r, _) in &roots {
                let lifted = g.map(|c| r.from_int(c.value() as i64), r.zero());
                assert!(lifted.eval(r).is_zero());
            }
        }
    }

    #[test]
    fn roots_over_an_extension_base() {
        let f = PrimeField::new(3).unwrap();
        let k = ExtField::canonical(f, 2);
        // (t - g)(t^2 - n) over F_9 with n = g + 1 primitive, hence a non-square
        let g = k.generator();
        let n = g.add(&k.one());
        let lin = UPoly::new(vec![g.neg(), k.one()], k.zero());
        let quad = UPoly::new(vec![n.neg(), k.zero(), k.one()], k.zero());
        let roots = roots_over_ext(&lin.mul(&quad)).unwrap();
        let degs: Vec<u32> = roots.iter().map(|(r, _)| r.field().degree()).collect();
        assert_eq!(degs, vec![2, 4, 4]);
    }
}

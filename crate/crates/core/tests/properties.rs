use proptest::prelude::*;

use pcurv_core::connection::{operator_oracle, pcurvature_matrix, NormalizedConnection};
use pcurv_core::curve::{Curve, U0, U1, U2};
use pcurv_core::field::is_prime;
use pcurv_core::hurwitz::{closed_form, level_count, maps_for_alpha, total_count, AlphaPair};
use pcurv_core::poly::{resultant, roots_in_ext};
use pcurv_core::prank::{classify_prank, h_vector, hasse_witt_prank};
use pcurv_core::solve_count::{count_p3, numeric_system, verify_solutions};
use pcurv_core::verify::line_bundle_count;
use pcurv_core::{ExtField, Field, FieldElem, MPoly, PrimeField, Ring, UPoly, VarSet};

fn curve(p: u64, a: [i64; 5]) -> Option<Curve<FieldElem>> {
    Curve::from_ints(p, &a).ok()
}

fn upoly(p: u64, c: &[i64]) -> UPoly<FieldElem> {
    let f = PrimeField::new(p).unwrap();
    UPoly::new(c.iter().map(|&v| f.elem(v)).collect(), f.zero())
}

fn coeffs() -> impl Strategy<Value = [i64; 5]> {
    prop::array::uniform5(0i64..1000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn extension_field_distributes(p in prop::sample::select(vec![3u64, 5, 7]), k in 1u32..6, seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = ExtField::canonical(PrimeField::new(p).unwrap(), k);
        let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.pow(p), a.frobenius());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn degree_is_additive(a in prop::collection::vec(0i64..7, 1..8), b in prop::collection::vec(0i64..7, 1..8)) {
        let (f, g) = (upoly(7, &a), upoly(7, &b));
        if let (Some(df), Some(dg)) = (f.degree(), g.degree()) {
            prop_assert_eq!(f.mul(&g).degree(), Some(df + dg));
        }
    }

    #[test]
    fn squarefree_part_keeps_distinct_roots(a in prop::collection::vec(0i64..5, 2..9)) {
        let f = upoly(5, &a);
        prop_assume!(f.degree().is_some_and(|d| d >= 1));
        let s = f.squarefree_part().unwrap();
        let d = s.derivative();
        if !d.is_zero() {
            prop_assert_eq!(s.gcd(&d).degree(), Some(0));
        }
        let mut rf: Vec<_> = roots_in_ext(&f).unwrap().into_iter().map(|(r, _)| r).collect();
        let mut rs: Vec<_> = roots_in_ext(&s).unwrap().into_iter().map(|(r, m)| { assert_eq!(m, 1); r }).collect();
        rf.sort();
        rs.sort();
        prop_assert_eq!(rf, rs);
    }

    #[test]
    fn resultant_drops_the_variable(a in prop::collection::vec(0i64..5, 6), b in prop::collection::vec(0i64..5, 6)) {
        let vars = VarSet::new(&["x", "y"]).unwrap();
        let z = PrimeField::new(5).unwrap().zero();
        let build = |c: &[i64]| {
            let x = MPoly::var(&vars, "x", &z);
            let y = MPoly::var(&vars, "y", &z);
            let mono = [x.pow(2), x.mul(&y), y.pow(2), x.clone(), y.clone(), MPoly::constant(&vars, z.one())];
            mono.iter().zip(c).fold(MPoly::zero(&vars, &z), |acc, (m, &k)| acc.add(&m.scale_int(k)))
        };
        let r = resultant(&build(&a), &build(&b), 0).unwrap();
        prop_assert!(!r.uses_var(0));
    }

    #[test]
    fn hasse_witt_agrees(p in prop::sample::select(vec![3u64, 5, 7, 11]), a in coeffs()) {
        if let Some(c) = curve(p, a) {
            prop_assert_eq!(classify_prank(&h_vector(&c)), hasse_witt_prank(&c).unwrap());
        }
    }

    #[test]
    fn operator_oracle_matches_matrix(p in prop::sample::select(vec![3u64, 5, 7]), a in coeffs(), u in prop::array::uniform3(0i64..100), s in prop::array::uniform4(0i64..100)) {
        if let Some(c) = curve(p, a) {
            let f = PrimeField::new(p).unwrap();
            let conn = NormalizedConnection::new(c.clone(), u.map(|v| f.elem(v)));
            let m = pcurvature_matrix(&conn);
            let v = (
                c.func(upoly(p, &[s[0], s[1]]), upoly(p, &[s[2]])),
                c.func(upoly(p, &[s[3]]), upoly(p, &[s[0], 0, s[2]])),
            );
            prop_assert_eq!(operator_oracle(&conn, &v), m.apply(&v));
            prop_assert!(m.trace().is_zero());
        }
    }

    #[test]
    fn theta_is_a_derivation(p in prop::sample::select(vec![3u64, 5, 7]), a in coeffs(), s in prop::array::uniform4(0i64..100)) {
        if let Some(c) = curve(p, a) {
            let f = c.func(upoly(p, &[s[0], s[1], 1]), upoly(p, &[s[2]]));
            let g = c.func(upoly(p, &[s[3], 0, s[1]]), upoly(p, &[1, s[0]]));
            let lhs = c.theta_apply(&f.mul(&g));
            let rhs = c.theta_apply(&f).mul(&g).add(&f.mul(&c.theta_apply(&g)));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hurwitz_min_is_symmetric(p in (3u64..200).prop_filter("odd prime", |&p| is_prime(p)), a1 in 1u64..100, a2 in 1u64..100) {
        let h = (p - 1) / 2;
        prop_assume!(a1 <= h && a2 <= h);
        let m = maps_for_alpha(p, AlphaPair { a1, a2 }).unwrap();
        prop_assert_eq!(m, maps_for_alpha(p, AlphaPair { a1: a2, a2: a1 }).unwrap());
        prop_assert!(m >= 1 && m <= p - 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn p3_count_is_one_at_a3(a in coeffs()) {
        if let Some(c) = curve(3, a) {
            let r = count_p3(&c).unwrap();
            prop_assert_eq!(r.distinct, 1);
            prop_assert!(verify_solutions(&numeric_system(&c).unwrap(), &r).unwrap());
            let pt = &r.points(&[U0, U1, U2])[0];
            prop_assert_eq!(pt[0].to_base(), Some(c.a(3)));
            prop_assert!(pt[1].is_zero() && pt[2].is_zero());
        }
    }

    #[test]
    fn rank_one_count_is_p_to_the_prank(p in prop::sample::select(vec![3u64, 5]), a in coeffs()) {
        if let Some(c) = curve(p, a) {
            let r = classify_prank(&h_vector(&c)).0 as u32;
            prop_assert_eq!(line_bundle_count(&c).unwrap(), (p as usize).pow(r));
        }
    }
}

#[test]
fn hurwitz_three_ways_below_one_hundred() {
    for p in (3..100).filter(|&p| is_prime(p)) {
        let sq: u64 = (1..=(p - 1) / 2).map(|j| j * j).sum();
        assert_eq!(total_count(p).unwrap(), sq);
        assert_eq!(level_count(p).unwrap(), sq);
        assert_eq!(closed_form(p), sq);
    }
}

#[test]
fn lower_left_entry_is_y_free_of_low_degree() {
    for p in [3u64, 5, 7] {
        let m = pcurvature_matrix(&NormalizedConnection::symbolic(p).unwrap());
        assert!(m.h21.b.is_zero());
        assert!(m.h21.a.degree().unwrap() < p as usize, "p={p}");
        assert!(m.trace().is_zero());
    }
}

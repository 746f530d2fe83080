use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use golden_orbit::gamma_rho::{cf_expand, convergent_list, ContinuedFraction, QuadraticScalar};
use golden_orbit::group::{generator, word_to_matrix, Mat2, Vec2, Word};
use golden_orbit::orbit::{enumerate, GPoint, GoldenInt};
use golden_orbit::ring::{phi_pow, GoldenScalar};
use golden_orbit::sector::{gcd_gamma_plus, gcd_gamma_plus_stepwise, is_in_s, DEFAULT_ITER_CAP};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn scalar() -> impl Strategy<Value = GoldenScalar> {
    (-50i64..50, 1i64..7, -50i64..50, 1i64..7).prop_map(|(a, da, b, db)| GoldenScalar::new(rat(a, da), rat(b, db)))
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..4, 0..max).prop_map(|l| Word::from_letters(&l))
}

fn quadratic(d: i64) -> impl Strategy<Value = QuadraticScalar> {
    (-30i64..30, -30i64..30, 1i64..9).prop_map(move |(p, q, r)| QuadraticScalar::new(p.into(), q.into(), d.into(), r.into()))
}

proptest! {
    #[test]
    fn golden_field_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x - &x, GoldenScalar::zero());
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        if !x.is_zero() {
            prop_assert!((&x * &x.recip()).is_one());
        }
    }

    #[test]
    fn golden_order_and_floor(x in scalar(), y in scalar()) {
        let f = GoldenScalar::from(x.floor());
        prop_assert!(f <= x && x < &f + &GoldenScalar::one());
        match x.floor_frac() {
            Ok((fl, frac)) => {
                prop_assert_eq!(GoldenScalar::from(fl), f);
                prop_assert!(!frac.is_negative() && frac < GoldenScalar::one());
            }
            Err(_) => prop_assert!(x.is_negative()),
        }
        let gap = x.to_f64() - y.to_f64();
        if gap.abs() > 1e-9 {
            prop_assert_eq!(x.cmp(&y), gap.partial_cmp(&0.0).unwrap());
        }
        prop_assert_eq!((&x - &y).sign(), x.cmp(&y));
    }

    #[test]
    fn phi_powers_multiply(i in -40i64..40, j in -40i64..40) {
        prop_assert_eq!(&phi_pow(i) * &phi_pow(j), phi_pow(i + j));
        prop_assert_eq!(phi_pow(i).norm().abs(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn words_are_unimodular(w in word(30), v in word(30)) {
        let m = word_to_matrix(&w);
        prop_assert!(m.det().is_one());
        let mut joined: Vec<u8> = w.letters().collect();
        joined.extend(v.letters());
        prop_assert_eq!(word_to_matrix(&Word::from_letters(&joined)), &m * &word_to_matrix(&v));
        let text = w.to_string();
        prop_assert_eq!(text.parse::<Word>().unwrap(), w);
    }

    #[test]
    fn generator_inverses(i in 0u8..4, t in 0u64..20) {
        let g = generator(i);
        prop_assert_eq!(&g * &g.inverse().unwrap(), Mat2::identity());
        prop_assert!(g.pow(t).det().is_one());
    }

    #[test]
    fn descent_reconstructs_orbit_points(w in word(25), j in -12i64..12) {
        let v = word_to_matrix(&w).act(&Vec2::e1()).scale(&phi_pow(j));
        let g = gcd_gamma_plus(&v).unwrap();
        prop_assert_eq!(g.reconstruct(), v.clone());
        prop_assert_eq!(&g.l_v, &phi_pow(j));
        prop_assert!(g.is_unit());
        let s = gcd_gamma_plus_stepwise(&v, DEFAULT_ITER_CAP).unwrap();
        prop_assert_eq!(&s.word, &g.word);
        prop_assert_eq!(&s.l_v, &g.l_v);
    }

    #[test]
    fn descent_reconstructs_any_vector(ax in -40i64..40, bx in -40i64..40, ay in -40i64..40, by in -40i64..40) {
        let v = Vec2::from_ints(ax, bx, ay, by);
        prop_assume!(!v.is_zero());
        let g = gcd_gamma_plus(&v).unwrap();
        prop_assert_eq!(g.reconstruct(), v.clone());
        prop_assert_eq!(is_in_s(&v).unwrap(), g.l_v.is_one());
    }

    #[test]
    fn quadratic_field_axioms(x in quadratic(2), y in quadratic(2), z in quadratic(2)) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.recip(), QuadraticScalar::one());
        }
        let f = QuadraticScalar::from_int(x.floor());
        prop_assert!(f <= x && x < &f + &QuadraticScalar::one());
        let gap = x.to_f64() - y.to_f64();
        if gap.abs() > 1e-9 {
            prop_assert_eq!(x.cmp(&y), gap.partial_cmp(&0.0).unwrap());
        }
    }

    #[test]
    fn periodic_cf_round_trip(a0 in 1i64..6, pre in prop::collection::vec(1i64..20, 0..3),
                              per in prop::collection::vec(1i64..20, 1..4)) {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let mut prefix = vec![BigInt::from(a0)];
        prefix.extend(big(&pre));
        let cf = ContinuedFraction::new(prefix, big(&per)).unwrap();
        let x = cf.value();
        prop_assert!(!x.is_rational());
        let back = cf_expand(&x, 40).unwrap();
        prop_assert_eq!(back.terms(40), cf.terms(40));
        let cs = convergent_list(&cf, 12).unwrap();
        for w in cs.windows(2) {
            let det = &w[1].p * &w[0].q - &w[0].p * &w[1].q;
            let sign = if w[1].n % 2 == 1 { 1 } else { -1 };
            prop_assert_eq!(det, BigInt::from(sign));
            prop_assert!(w[1].q > w[0].q || w[1].n == 1);
            // convergents alternate around the value
            let c = QuadraticScalar::from_rational(&BigRational::new(w[1].p.clone(), w[1].q.clone()));
            let side = if w[1].n % 2 == 0 { Ordering::Less } else { Ordering::Greater };
            prop_assert!(c.cmp(&x) == side || c == x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_ball_is_symmetric_and_complete(w in word(8)) {
        let set = enumerate(&BigRational::from_integer(30.into())).unwrap();
        let v = word_to_matrix(&w).act(&Vec2::e1());
        let p = GPoint::from_vec2(&v).unwrap();
        let inside = v.norm_sq() <= GoldenScalar::from(900);
        prop_assert_eq!(set.contains(&p), inside);
        for q in p.images() {
            prop_assert_eq!(set.contains(&q), inside);
        }
    }

    #[test]
    fn golden_int_order_matches_exact(a in -10_000i64..10_000, b in -10_000i64..10_000,
                                      c in -10_000i64..10_000, d in -10_000i64..10_000) {
        let (x, y) = (GoldenInt::new(a, b), GoldenInt::new(c, d));
        prop_assert_eq!(x.cmp_value(y), x.to_scalar().cmp(&y.to_scalar()));
        prop_assert_eq!((x - y).sign(), (x.to_scalar() - y.to_scalar()).sign());
    }
}

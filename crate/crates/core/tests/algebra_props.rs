use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sodkit::algebra::{Domain, TriPoly, UniPoly};

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=9).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn uni(max_deg: usize) -> impl Strategy<Value = UniPoly<BigRational>> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(|c| UniPoly::from_coeffs(Domain::Rational, &c))
}

fn tri(max_terms: usize, max_exp: u32) -> impl Strategy<Value = TriPoly<BigRational>> {
    prop::collection::vec(([0..=max_exp, 0..=max_exp, 0..=max_exp], rational()), 0..=max_terms)
        .prop_map(|t| TriPoly::from_terms(Domain::Rational, t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_divide_recovers_factor(p in tri(6, 4), q in tri(5, 3)) {
        prop_assume!(!q.is_zero());
        let prod = &p * &q;
        prop_assert_eq!(prod.exact_divide(&q).unwrap(), p);
    }

    #[test]
    fn univariate_divide_recovers_factor(p in uni(10), q in uni(10)) {
        prop_assume!(!q.is_zero());
        let (quot, rem) = (&p * &q).div_rem(&q).unwrap();
        prop_assert_eq!(quot, p);
        prop_assert!(rem.is_zero());
    }

    #[test]
    fn eval_is_a_ring_homomorphism(p in uni(10), q in uni(10), x in rational()) {
        prop_assert_eq!((&p + &q).eval(&x), p.eval(&x) + q.eval(&x));
        prop_assert_eq!((&p * &q).eval(&x), p.eval(&x) * q.eval(&x));
    }

    #[test]
    fn multivariate_eval_is_a_ring_homomorphism(p in tri(5, 3), q in tri(5, 3), a in rational(), b in rational(), c in rational()) {
        let pt = [a, b, c];
        prop_assert_eq!((&p + &q).eval(&pt), p.eval(&pt) + q.eval(&pt));
        prop_assert_eq!((&p * &q).eval(&pt), p.eval(&pt) * q.eval(&pt));
    }

    #[test]
    fn leibniz_rule(p in uni(8), q in uni(8)) {
        let lhs = (&p * &q).derivative(1);
        let rhs = &(&p.derivative(1) * &q) + &(&p * &q.derivative(1));
        prop_assert_eq!(lhs, rhs);
    }
}

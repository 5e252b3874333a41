use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sodkit::algebra::{Domain, UniPoly};
use sodkit::extension_padic::{
    diagonal_paired_floor, l4_moments_by_counting, moments_by_characters, PadicMomentInstance, DEFAULT_BUDGET,
};

fn poly(coeffs: &[i64]) -> UniPoly<BigRational> {
    let c: Vec<BigRational> = coeffs.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect();
    UniPoly::from_coeffs(Domain::Rational, &c)
}

/// Direct enumeration over all quadruples mod p^m.
fn brute(coeffs: &[i64], p: u64, i: u32, m: u32, support: Option<&[bool]>) -> (u64, u64) {
    let q = p.pow(m) as i64;
    let r = p.pow(i) as i64;
    let f = |n: i64| coeffs.iter().rev().fold(0i64, |acc, c| (acc * n + c).rem_euclid(q));
    let ok = |n: i64| support.map_or(true, |s| s[(n % r) as usize]);
    let (mut total, mut paired) = (0, 0);
    for a in (0..q).filter(|n| ok(*n)) {
        for b in (0..q).filter(|n| ok(*n)) {
            for c in (0..q).filter(|n| ok(*n)) {
                for d in (0..q).filter(|n| ok(*n)) {
                    if (a + b - c - d).rem_euclid(q) == 0 && (f(a) + f(b) - f(c) - f(d)).rem_euclid(q) == 0 {
                        total += 1;
                        if (a - c) % r == 0 && (b - d) % r == 0 {
                            paired += 1;
                        }
                    }
                }
            }
        }
    }
    (total, paired)
}

fn instance() -> impl Strategy<Value = (Vec<i64>, u64, u32, u32)> {
    (
        prop::sample::select(vec![(3u64, 1u32), (3, 2), (5, 1), (7, 1)]),
        prop::collection::vec(-6i64..=6, 2..=4),
        prop_oneof![Just(1i64), Just(2)],
    )
        .prop_flat_map(|((p, m), mut c, lead)| {
            c.push(lead);
            (Just(c), Just(p), 0..=m, Just(m))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn counting_matches_enumeration((coeffs, p, i, m) in instance()) {
        let inst = PadicMomentInstance::new(p, i, m, poly(&coeffs)).unwrap();
        let c = l4_moments_by_counting(&inst, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!((c.n_total, c.n_paired), brute(&coeffs, p, i, m, None));
        prop_assert!(c.n_paired <= c.n_total);
        let q = p.pow(m);
        prop_assert!(c.n_total >= 2 * q * q - q);
        prop_assert!(c.n_paired >= diagonal_paired_floor(p, i, m));
    }

    #[test]
    fn restricted_support_matches_enumeration(mut coeffs in prop::collection::vec(-4i64..=4, 2..=3), mask in prop::collection::vec(any::<bool>(), 3)) {
        coeffs.push(1);
        let inst = PadicMomentInstance::new(3, 1, 2, poly(&coeffs)).unwrap().with_support(mask.clone()).unwrap();
        let c = l4_moments_by_counting(&inst, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!((c.n_total, c.n_paired), brute(&coeffs, 3, 1, 2, Some(&mask)));
    }

    #[test]
    fn parseval_cross_check((coeffs, p, i, m) in instance()) {
        let inst = PadicMomentInstance::new(p, i, m, poly(&coeffs)).unwrap();
        let c = l4_moments_by_counting(&inst, DEFAULT_BUDGET).unwrap();
        let ch = moments_by_characters(&inst);
        let q2 = (p.pow(m) as f64).powi(2);
        prop_assert!((ch.extension_fourth - c.n_total as f64 / q2).abs() <= 1e-9 * ch.extension_fourth);
        prop_assert!((ch.square_fourth - c.n_paired as f64 / q2).abs() <= 1e-9 * ch.square_fourth);
    }
}

#[test]
fn paired_counts_decrease_with_cell_depth() {
    for coeffs in [vec![0i64, 0, 1], vec![0, 0, 0, 1], vec![1, -2, 0, 1, 2]] {
        let mut last = u64::MAX;
        for i in 0..=3 {
            let inst = PadicMomentInstance::new(3, i, 3, poly(&coeffs)).unwrap();
            let c = l4_moments_by_counting(&inst, DEFAULT_BUDGET).unwrap();
            assert!(c.n_paired <= last);
            last = c.n_paired;
        }
        assert_eq!(last, 27 * 27);
    }
}

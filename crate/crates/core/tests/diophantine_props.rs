use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sodkit::algebra::{Domain, UniPoly};
use sodkit::diophantine::{classify_solution, count_solutions, SolutionClass};

fn poly(coeffs: &[i64]) -> UniPoly<BigRational> {
    let c: Vec<BigRational> = coeffs.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect();
    UniPoly::from_coeffs(Domain::Rational, &c)
}

fn eval(coeffs: &[i64], x: i64) -> i128 {
    coeffs.iter().rev().fold(0i128, |acc, c| acc * x as i128 + *c as i128)
}

/// Direct enumeration of all ordered quadruples.
fn brute(coeffs: &[i64], set: &[i64], q: i64) -> (u64, u64, u64, u64) {
    let mut a = set.to_vec();
    a.sort();
    a.dedup();
    let (mut total, mut diag, mut anti, mut constrained) = (0, 0, 0, 0);
    for &m1 in &a {
        for &m2 in &a {
            for &n1 in &a {
                for &n2 in &a {
                    if m1 + m2 != n1 + n2 || eval(coeffs, m1) + eval(coeffs, m2) != eval(coeffs, n1) + eval(coeffs, n2) {
                        continue;
                    }
                    total += 1;
                    if (m1 == n1 && m2 == n2) || (m1 == n2 && m2 == n1) {
                        diag += 1;
                    } else if m1 + m2 == 0 && n1 + n2 == 0 {
                        anti += 1;
                    }
                    if (m1 - n1).rem_euclid(q) == 0 && (m2 - n2).rem_euclid(q) == 0 {
                        constrained += 1;
                    }
                }
            }
        }
    }
    (total, diag, anti, constrained)
}

fn curve() -> impl Strategy<Value = Vec<i64>> {
    (2usize..=5).prop_flat_map(|d| {
        (prop::collection::vec(-3i64..=3, d), prop_oneof![Just(1i64), Just(-2), Just(3)]).prop_map(|(mut c, lead)| {
            c.push(lead);
            c
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hash_join_matches_enumeration(coeffs in curve(), set in prop::collection::vec(-15i64..=15, 1..=12)) {
        let tally = count_solutions(&poly(&coeffs), &set, Some((5, 1))).unwrap();
        let (total, diag, anti, constrained) = brute(&coeffs, &set, 5);
        prop_assert_eq!(tally.total, total);
        prop_assert_eq!(tally.diagonal, diag);
        prop_assert_eq!(tally.antidiagonal, anti);
        prop_assert_eq!(tally.residue_constrained, Some(constrained));
        let n = tally.set_size;
        prop_assert!(tally.total >= 2 * n * n - n);
        prop_assert!(constrained >= n * n);
        prop_assert!(tally.total <= (coeffs.len() as u64 - 1) * n * n);
    }

    #[test]
    fn odd_curves_fold_antipodal_pairs(a in 1i64..50, b in 0i64..50, c3 in 1i64..4, c1 in -3i64..4) {
        let phi = poly(&[0, c1, 0, c3]);
        let class = classify_solution([a, -a, b, -b], &phi).unwrap();
        prop_assert!(class != SolutionClass::Other);
    }
}

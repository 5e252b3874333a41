use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use sodkit::algebra::{Domain, UniPoly};
use sodkit::padic::{hensel_lift, reduce_poly, roots_mod_p, simple_roots_mod_p, verify_prop_jb, PadicNumber};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn padic_pair() -> impl Strategy<Value = (PadicNumber, PadicNumber)> {
    (prop::sample::select(PRIMES.to_vec()), -100_000i64..100_000, -100_000i64..100_000).prop_filter_map(
        "nonzero operands",
        |(p, a, b)| {
            if a == 0 || b == 0 {
                return None;
            }
            Some((PadicNumber::from_integer(p, 6, a as i128).ok()?, PadicNumber::from_integer(p, 6, b as i128).ok()?))
        },
    )
}

fn int_poly(max_deg: usize) -> impl Strategy<Value = UniPoly<BigRational>> {
    prop::collection::vec(-30i64..=30, 2..=max_deg + 1).prop_map(|c| {
        let c: Vec<BigRational> = c.into_iter().map(|x| BigRational::from_integer(BigInt::from(x))).collect();
        UniPoly::from_coeffs(Domain::Rational, &c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ultrametric_inequality((a, b) in padic_pair()) {
        if let Ok(s) = a.add(&b) {
            let max = a.abs().max(b.abs());
            prop_assert!(s.abs() <= max * (1.0 + 1e-12));
            if a.valuation() != b.valuation() {
                prop_assert!((s.abs() - max).abs() <= max * 1e-12);
            }
        }
    }

    #[test]
    fn root_count_bounded_by_degree(f in int_poly(7), p in prop::sample::select(PRIMES.to_vec())) {
        let g = reduce_poly(&f, p, 1).unwrap();
        if let Ok(roots) = roots_mod_p(&g) {
            prop_assert!(roots.len() as u32 <= g.degree().unwrap_or(0));
        }
    }

    #[test]
    fn hensel_lifts_are_roots_and_stable(f in int_poly(6), p in prop::sample::select(PRIMES.to_vec())) {
        let n = 8;
        let Ok(g) = reduce_poly(&f, p, 1) else { return Ok(()); };
        let Ok((simple, _)) = simple_roots_mod_p(&g) else { return Ok(()); };
        let modulus = BigInt::from(p).pow(n);
        for r in simple {
            let x = hensel_lift(&f, r, p, n).unwrap();
            prop_assert_eq!(x.rep() % p, r);
            // Integer check of f(x̂) ≡ 0 mod p^N, independent of residue arithmetic.
            let xv = BigRational::from_integer(BigInt::from(x.rep()));
            let value = f.eval(&xv);
            prop_assert!((value.to_integer() % &modulus).is_zero());
            let again = hensel_lift(&f, x.rep() % p, p, n).unwrap();
            prop_assert_eq!(again, x);
        }
    }
}

#[test]
fn jb_lifted_roots_are_distinct_mod_p() {
    for (k, p) in [(4u32, 3u64), (4, 5), (4, 7), (6, 5), (8, 7)] {
        let report = verify_prop_jb(k, p, 8, 25).unwrap();
        for s in &report.samples {
            let mut residues: Vec<u64> = s.lifted.iter().map(|r| r % p).collect();
            residues.dedup();
            assert_eq!(residues.len(), (k - 2) as usize, "k={k} p={p} sample=({},{})", s.x, s.z);
        }
    }
}

use num_complex::Complex64;
use proptest::prelude::*;
use sodkit::algebra::parse_poly;
use sodkit::complexcurve::{sod_zero_census, voorhoeve_index, AnalyticHandle, ContourSpec};

/// Total variation of the argument from unwrapped increments on a fine polyline.
fn argument_variation(f: impl Fn(Complex64) -> Complex64, steps: usize) -> f64 {
    let corners = [
        Complex64::new(-0.5, -0.5),
        Complex64::new(0.5, -0.5),
        Complex64::new(0.5, 0.5),
        Complex64::new(-0.5, 0.5),
        Complex64::new(-0.5, -0.5),
    ];
    let mut total = 0.0;
    for w in corners.windows(2) {
        let mut prev = f(w[0]);
        for i in 1..=steps {
            let z = w[0] + (w[1] - w[0]) * (i as f64 / steps as f64);
            let cur = f(z);
            total += (cur / prev).arg().abs();
            prev = cur;
        }
    }
    total / (2.0 * std::f64::consts::PI)
}

fn poly_pair(coeffs: &[Complex64]) -> impl Fn(Complex64) -> (Complex64, Complex64) + '_ {
    move |z| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for a in coeffs.iter().rev() {
            dv = dv * z + v;
            v = v * z + a;
        }
        (v, dv)
    }
}

#[test]
fn perturbed_cubic_stays_below_the_bound() {
    let phi = AnalyticHandle::<f64>::from_poly(&parse_poly("z^3 + z^4/100").unwrap());
    let contour = ContourSpec::default();
    let bound = 2f64.sqrt() / std::f64::consts::PI;
    let mut worst: f64 = 0.0;
    let grid = [-0.5, -0.25, 0.0, 0.25, 0.5];
    for &a in &grid {
        for &b in &grid {
            for &c in &grid {
                for &d in &grid {
                    let (t1, t1p) = (Complex64::new(a, b), Complex64::new(c, d));
                    if t1 == t1p {
                        continue;
                    }
                    let census = sod_zero_census(&phi, t1, t1p, 3, &contour).unwrap();
                    worst = worst.max(census.voorhoeve.value);
                    assert!(census.below_one);
                    assert!(census.fiber_roots_in_square.unwrap() <= 1);
                }
            }
        }
    }
    assert!(worst <= bound + 1e-3, "{worst}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scale_invariance(re in -0.45f64..0.45, im in -0.45f64..0.45, cr in 0.1f64..10.0, ci in -10.0f64..10.0) {
        let coeffs = [Complex64::new(-re, -im) * Complex64::new(0.3, 0.1), Complex64::new(0.3, 0.1), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let scale = Complex64::new(cr, ci);
        let contour = ContourSpec::default();
        let base = voorhoeve_index(poly_pair(&coeffs), &contour);
        let f = poly_pair(&coeffs);
        let scaled = voorhoeve_index(|z| { let (v, dv) = f(z); (v * scale, dv * scale) }, &contour);
        if let (Ok(a), Ok(b)) = (base, scaled) {
            prop_assert!((a.value - b.value).abs() < 1e-9);
        }
    }

    #[test]
    fn quadrature_matches_argument_increments(
        r1 in -0.9f64..0.9, i1 in -0.9f64..0.9, r2 in -0.9f64..0.9, i2 in -0.9f64..0.9,
    ) {
        // (z - a)(z - b) with roots kept away from the contour.
        let near = |x: f64| (x.abs() - 0.5).abs() < 0.05;
        prop_assume!(!(near(r1) || near(i1) || near(r2) || near(i2)));
        let (a, b) = (Complex64::new(r1, i1), Complex64::new(r2, i2));
        let coeffs = [a * b, -(a + b), Complex64::new(1.0, 0.0)];
        let v = voorhoeve_index(poly_pair(&coeffs), &ContourSpec::default()).unwrap();
        let oracle = argument_variation(|z| (z - a) * (z - b), 20000);
        prop_assert!((v.value - oracle).abs() < 1e-5, "{} vs {}", v.value, oracle);
        let inside = [a, b].iter().filter(|r| r.re.abs() < 0.5 && r.im.abs() < 0.5).count() as f64;
        prop_assert!(v.value + 1e-6 >= inside);
    }

    #[test]
    fn refinement_is_stable(r in -0.4f64..0.4, i in -0.4f64..0.4) {
        let coeffs = [Complex64::new(-r, -i), Complex64::new(1.0, 0.0), Complex64::new(0.2, 0.0), Complex64::new(0.05, 0.0)];
        let v256 = voorhoeve_index(poly_pair(&coeffs), &ContourSpec::default()).unwrap();
        let v512 = voorhoeve_index(poly_pair(&coeffs), &ContourSpec { nodes_per_side: 512, ..Default::default() }).unwrap();
        prop_assert!((v256.value - v512.value).abs() < 1e-6);
        prop_assert!(v256.error_estimate < 1e-6);
    }
}

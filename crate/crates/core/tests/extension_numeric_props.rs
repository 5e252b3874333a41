use num_complex::{Complex32, Complex64};
use proptest::prelude::*;
use sodkit::algebra::parse_poly;
use sodkit::extension_numeric::*;

fn handle(phi: &str) -> CurveHandle<f64> {
    CurveHandle::from_poly(&parse_poly(phi).unwrap())
}

fn ones(r: usize) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0); r]
}

/// Adaptive Simpson on a complex integrand, independent of the Gauss rules.
fn simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    fn rec(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, fa: Complex64, fm: Complex64, fb: Complex64, whole: Complex64, tol: f64, depth: u32) -> Complex64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).norm() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

#[test]
fn trivial_extension_values() {
    let h = handle("x^2");
    let zero = vec![Complex64::new(0.0, 0.0); 4];
    assert_eq!(extension_eval(&h, &zero, Region::Whole, [3.0, 1.0], None).unwrap().value, Complex64::new(0.0, 0.0));
    let e = extension_eval(&h, &ones(4), Region::Whole, [0.0, 0.0], None).unwrap();
    assert!((e.value - Complex64::new(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn parabola_matches_reference_quadrature() {
    let h = handle("x^2");
    for a in [0.7, 3.3, 10.0, 41.5] {
        let reference = simpson(&|t: f64| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * a * t * t), -0.5, 0.5, 1e-12);
        let e = extension_eval(&h, &ones(1), Region::Whole, [0.0, a], None).unwrap();
        assert!((e.value - reference).norm() < 1e-8, "a = {a}: {} vs {reference}", e.value);
        assert!(e.error_estimate < 1e-8);
    }
}

#[test]
fn resolution_rule_is_enforced() {
    let h = handle("x^2");
    let err = extension_eval(&h, &ones(2), Region::Cell(0), [100.0, 100.0], Some(8)).unwrap_err();
    assert!(matches!(err, ExtensionError::ResolutionTooLow { .. }));
}

#[test]
fn square_function_examples() {
    let h = handle("x^2");
    let s = square_function_eval(&h, &ones(4), [0.0, 0.0], None).unwrap();
    assert!((s.value.re - 0.5).abs() < 1e-14);
    let x = [2.5, -1.25];
    let whole = extension_eval(&h, &ones(1), Region::Whole, x, None).unwrap().value.norm();
    assert!((square_function_eval(&h, &ones(1), x, None).unwrap().value.re - whole).abs() < 1e-14);
    let mut single = vec![Complex64::new(0.0, 0.0); 4];
    single[2] = Complex64::new(0.3, -0.4);
    let e = extension_eval(&h, &single, Region::Cell(2), x, None).unwrap().value.norm();
    assert!((square_function_eval(&h, &single, x, None).unwrap().value.re - e).abs() < 1e-15);
}

#[test]
fn l4_norm_examples() {
    let w = indicator_weight(6.0f64, [1.0, -2.0]);
    let h = handle("x^2");
    let grid = GridSpec::for_weight(&w, &h, 1.0);
    assert_eq!(l4_weighted_norm(&grid, &w, 0.0, |_| 0.0).norm, 0.0);
    let n = l4_weighted_norm(&grid, &w, 2.5, |_| 2.5);
    assert!((n.norm - 2.5 * 36f64.powf(0.25)).abs() < 1e-12, "{}", n.norm);
    assert_eq!(n.tail_bound, 0.0);
}

#[test]
fn lattice_kernel_matches_point_evaluation() {
    let h = handle("x^3 - x/2");
    let f = vec![Complex64::new(1.0, 0.5), Complex64::new(0.0, 0.0), Complex64::new(-2.0, 0.25)];
    let w = build_weight(3.0, [0.5, 0.0]);
    let mut grid = GridSpec::for_weight(&w, &h, 1.0);
    grid.half_counts = [70, 9];
    let field = sample_grid(&h, &f, grid, 1.0);
    assert_eq!(field.cells, vec![0, 2]);
    for idx in (0..field.values.len()).step_by(97) {
        let x = field.point(idx);
        for (slot, cell) in field.cells.iter().enumerate() {
            let direct = extension_eval(&h, &f, Region::Cell(*cell), x, Some(400)).unwrap().value;
            assert!((field.values[idx][slot] - direct).norm() < 1e-10, "{x:?}");
        }
    }
}

#[test]
fn single_cell_ratio_is_one() {
    let h = handle("x^2");
    let mut f = vec![Complex64::new(0.0, 0.0); 4];
    f[1] = Complex64::new(1.0, 0.0);
    let opts = RealTheoremOptions { refine: false, ..Default::default() };
    let rep = verify_real_theorem(&h, &f, 1.0 / 16.0, &opts).unwrap();
    assert_eq!(rep.ratio, 1.0);
    assert!(rep.pass);
}

#[test]
fn small_parabola_instance() {
    let h = handle("x^2");
    let rep = verify_real_theorem(&h, &ones(2), 1.0, &RealTheoremOptions::default()).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert!(rep.ratio >= 1.0 / 2f64.sqrt() && rep.ratio <= 5f64.sqrt() * 2f64.powf(0.25));
    let change = rep.quantities["refinement_relative_change"].as_f64().unwrap();
    assert!(change < rep.error_budget.max(1e-12) + 1e-9);
    let convex = verify_convex_theorem(&h, &ones(2), 1.0, &RealTheoremOptions::default()).unwrap();
    assert!((convex.ratio - rep.ratio).abs() < 1e-12);
}

#[test]
fn convexity_hypotheses() {
    let line = handle("t");
    let err = verify_convex_theorem(&line, &ones(2), 1.0, &RealTheoremOptions::default()).unwrap_err();
    assert!(matches!(err, ExtensionError::HypothesisFailed(_)));
    assert!(matches!(verify_real_theorem(&line, &ones(2), 1.0, &RealTheoremOptions::default()), Err(ExtensionError::HypothesisFailed(_))));
    let cosh = CurveHandle::<f64>::cosh_minus_one();
    let rep = verify_convex_theorem(&cosh, &ones(2), 1.0, &RealTheoremOptions::default()).unwrap();
    assert!(rep.pass && rep.ratio <= 5.0 * 2f64.powf(0.25));
    assert_eq!(finite_type_order(&handle("x^3"), None).unwrap(), 3);
    assert_eq!(finite_type_order(&handle("x^4 + x^2"), None).unwrap(), 2);
    assert!(finite_type_order(&handle("x^3"), Some(2)).is_err());
}

#[test]
fn single_precision_agrees() {
    let h32 = CurveHandle::<f32>::from_poly(&parse_poly("x^2").unwrap());
    let h64 = handle("x^2");
    let x = [1.5, 2.25];
    let a = extension_eval(&h32, &[Complex32::new(1.0, 0.0)], Region::Whole, [x[0] as f32, x[1] as f32], None).unwrap().value;
    let b = extension_eval(&h64, &ones(1), Region::Whole, x, None).unwrap().value;
    assert!(((a.re as f64 - b.re).powi(2) + (a.im as f64 - b.im).powi(2)).sqrt() < 1e-5);
}

#[test]
fn csv_dump_has_one_line_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let opts = RealTheoremOptions { refine: false, csv: Some(path.clone()), ..Default::default() };
    let rep = verify_real_theorem(&handle("x^2"), &ones(2), 0.25, &opts).unwrap();
    let text = std::fs::read_to_string(path).unwrap();
    let points = rep.quantities["grid_points"].as_u64().unwrap() as usize;
    assert_eq!(text.lines().count(), points + 1);
    assert!(text.starts_with("x1,x2,E4,S4"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_invariants(r in 1usize..5, re in prop::collection::vec(-2.0f64..2.0, 4), im in prop::collection::vec(-2.0f64..2.0, 4), d in 1.0f64..4.0) {
        let h = handle("x^3 + x^2");
        let f: Vec<Complex64> = (0..r).map(|j| Complex64::new(re[j], im[j])).collect();
        let w = build_weight(d, [0.0, 0.0]);
        let mut grid = GridSpec::for_weight(&w, &h, 1.0);
        grid.half_counts = [12, 5];
        let field = sample_grid(&h, &f, grid, 1.0);
        for i in 0..field.values.len() {
            let e = field.extension(i).norm();
            let s = field.square_function(i);
            prop_assert!(e <= (field.cells.len() as f64).sqrt() * s * (1.0 + 1e-12) + 1e-300);
            let parseval: f64 = field.values[i].iter().map(|v| v.norm_sqr()).sum();
            prop_assert!((parseval - s * s).abs() <= 1e-12 * parseval.max(1e-300));
        }
    }

    #[test]
    fn extension_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, x1 in -20.0f64..20.0, x2 in -20.0f64..20.0) {
        let h = handle("x^3");
        let f = vec![Complex64::new(a, 0.0), Complex64::new(0.0, b)];
        let g = vec![Complex64::new(1.0, 1.0), Complex64::new(-1.0, 0.5)];
        let sum: Vec<Complex64> = f.iter().zip(&g).map(|(u, v)| u + v).collect();
        let e = |f: &[Complex64]| extension_eval(&h, f, Region::Whole, [x1, x2], None).unwrap().value;
        prop_assert!((e(&sum) - e(&f) - e(&g)).norm() < 1e-12);
    }

    #[test]
    fn fejer_weight_is_admissible(u in -1.0f64..1.0) {
        prop_assert!(fejer_profile(u) >= 1.0 - 1e-12);
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sodkit::algebra::{parse_poly, rational_valuation};
use sodkit::partitions::{admissible, Cell, Enclosure, KdvContext, PartitionSpec};
use sodkit::sod::{CurveSpec, Field};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn context(phi: &str, field: Field, r: u64) -> (CurveSpec, KdvContext) {
    let curve = CurveSpec::new(parse_poly(phi).unwrap(), field).unwrap();
    let ctx = KdvContext::new(&curve, &PartitionSpec::new(field, r).unwrap()).unwrap();
    (curve, ctx)
}

const CURVES: [&str; 4] = ["x^2", "x^3", "x^4 + x^2", "2x^3 - x"];

/// A point of real cell `j` of `R`: `−1/2 + (j + u/64)/R`.
fn point_in(j: u64, u: i64, r: u64) -> BigRational {
    q(-1, 2) + BigRational::new(BigInt::from(j as i64 * 64 + u), BigInt::from(64 * r as i64))
}

proptest! {
    #[test]
    fn real_enclosure_is_sound(curve in 0usize..4, r in 2u64..10, js in prop::array::uniform4(0u64..10), us in prop::array::uniform4(0i64..=64)) {
        let (c, ctx) = context(CURVES[curve], Field::Real, r);
        let js = js.map(|j| j % r);
        let t: Vec<BigRational> = (0..4).map(|i| point_in(js[i], us[i], r)).collect();
        let cells = js.map(|j| Cell::Real { j });
        let Enclosure::Archimedean { coords } = ctx.gap_enclosure(&cells[0], &cells[1], &cells[2], &cells[3]) else { panic!() };
        let phi = |x: &BigRational| c.phi().eval(x);
        let x = &t[0] + &t[1] - &t[2] - &t[3];
        let y = phi(&t[0]) + phi(&t[1]) - phi(&t[2]) - phi(&t[3]);
        prop_assert!(coords[0].contains(&x));
        prop_assert!(coords[1].contains(&y));
    }

    #[test]
    fn padic_survival_is_sound(curve in 0usize..4, s in 1u32..3, ts in prop::array::uniform4(0i64..500)) {
        let p = 3u64;
        let r = p.pow(s);
        let (c, ctx) = context(CURVES[curve], Field::Padic { p }, r);
        let cells = ts.map(|t| Cell::Padic { r: t as u64 % r });
        prop_assume!(admissible(&cells[0], &cells[2], ctx.spec()));
        let t = ts.map(|x| q(x, 1));
        let x = &t[0] + &t[1] - &t[2] - &t[3];
        let y = c.phi().eval(&t[0]) + c.phi().eval(&t[1]) - c.phi().eval(&t[2]) - c.phi().eval(&t[3]);
        let v = [x, y].iter().filter_map(|z| rational_valuation(z, p)).min().unwrap_or(40);
        // The gap lies in the ball of radius C·R^{−k} exactly when C ≥ p^{sk − v}.
        let e = (s * c.degree()) as i64 - v;
        let cc = if e >= 0 { q(3i64.pow(e as u32), 1) } else { BigRational::new(1.into(), BigInt::from(3).pow((-e) as u32)) };
        prop_assert!(ctx.survives(&cells[0], &cells[2], &cells[1], &cells[3], &cc));
    }

    #[test]
    fn survival_is_monotone_in_c(curve in 0usize..4, field in 0usize..3, js in prop::array::uniform4(0u64..9), a in 1i64..8, b in 1i64..8) {
        let (field, r) = [(Field::Real, 8), (Field::Padic { p: 3 }, 9), (Field::Complex, 3)][field];
        let (_, ctx) = context(CURVES[curve], field, r);
        let cells = ctx.cells();
        let pick: Vec<Cell> = js.iter().map(|j| cells[*j as usize % cells.len()]).collect();
        let (small, large) = (q(a.min(b), 8), q(a.max(b), 8));
        if ctx.survives(&pick[0], &pick[1], &pick[2], &pick[3], &small) {
            prop_assert!(ctx.survives(&pick[0], &pick[1], &pick[2], &pick[3], &large));
        }
    }

    #[test]
    fn survival_is_symmetric(curve in 0usize..4, field in 0usize..3, js in prop::array::uniform4(0u64..9), a in 1i64..16) {
        let (field, r) = [(Field::Real, 8), (Field::Padic { p: 3 }, 9), (Field::Complex, 3)][field];
        let (_, ctx) = context(CURVES[curve], field, r);
        let cells = ctx.cells();
        let pick: Vec<Cell> = js.iter().map(|j| cells[*j as usize % cells.len()]).collect();
        let c = q(a, 4);
        prop_assert_eq!(
            ctx.survives(&pick[0], &pick[1], &pick[2], &pick[3], &c),
            ctx.survives(&pick[2], &pick[3], &pick[0], &pick[1], &c)
        );
    }
}

#[test]
fn complex_corner_has_three_neighbors() {
    let spec = PartitionSpec::new(Field::Complex, 2).unwrap();
    assert_eq!(sodkit::partitions::cell_neighbors(&Cell::Complex { j1: 0, j2: 0 }, &spec).len(), 3);
}

//! Voorhoeve index on the boundary of the square `|z|_ℂ ≤ 1/2` and the
//! hypotheses and zero census for analytic perturbations of polynomials.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{rational_to_float, Domain, TriPoly, UniPoly};
use crate::numerics::{durand_kerner, gauss_legendre, pairwise_sum};
use crate::sod::fiber_of;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexCurveError {
    #[error("function vanishes on the contour near {re} + {im}i")]
    ZeroOnContour { re: f64, im: f64 },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("derivative of order {needed} is not available (handle provides {available})")]
    MissingDerivative { needed: u32, available: u32 },
}

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("float constant")
}

fn f64_of<T: Float>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

type Evaluator<T> = Arc<dyn Fn(Complex<T>, u32) -> Complex<T> + Send + Sync>;

/// An analytic `φ` on `3𝒪` given by its derivatives up to `order`.
#[derive(Clone)]
pub struct AnalyticHandle<T> {
    name: String,
    order: u32,
    eval: Evaluator<T>,
    polynomial: Option<UniPoly<BigRational>>,
}

impl<T> fmt::Debug for AnalyticHandle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticHandle").field("name", &self.name).field("order", &self.order).finish()
    }
}

impl<T: Float + FloatConst + Send + Sync + 'static> AnalyticHandle<T> {
    pub fn from_fn(name: &str, order: u32, eval: impl Fn(Complex<T>, u32) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self { name: name.into(), order, eval: Arc::new(eval), polynomial: None }
    }

    pub fn from_poly(phi: &UniPoly<BigRational>) -> Self {
        let degree = phi.degree().unwrap_or(0);
        let derivs: Vec<Vec<Complex<T>>> = (0..=degree)
            .map(|j| phi.derivative(j).dense().iter().map(|a| Complex::new(rational_to_float(a), T::zero())).collect())
            .collect();
        let eval = move |z: Complex<T>, j: u32| match derivs.get(j as usize) {
            Some(coeffs) => coeffs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, a| acc * z + *a),
            None => Complex::new(T::zero(), T::zero()),
        };
        Self { name: phi.to_string(), order: u32::MAX, eval: Arc::new(eval), polynomial: Some(phi.clone()) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn polynomial(&self) -> Option<&UniPoly<BigRational>> {
        self.polynomial.as_ref()
    }

    pub fn derivative(&self, z: Complex<T>, j: u32) -> Result<Complex<T>, ComplexCurveError> {
        if j > self.order {
            return Err(ComplexCurveError::MissingDerivative { needed: j, available: self.order });
        }
        Ok((self.eval)(z, j))
    }
}

/// The boundary of the square of the given half-width, traversed
/// counterclockwise, with Gauss–Legendre nodes on each side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub half_width: f64,
    pub nodes_per_side: usize,
}

impl Default for ContourSpec {
    fn default() -> Self {
        Self { half_width: 0.5, nodes_per_side: 256 }
    }
}

impl ContourSpec {
    /// Start corner and direction of each side.
    fn sides<T: Float>(&self) -> [(Complex<T>, Complex<T>); 4] {
        let h: T = c(self.half_width);
        let len = h + h;
        [
            (Complex::new(-h, -h), Complex::new(len, T::zero())),
            (Complex::new(h, -h), Complex::new(T::zero(), len)),
            (Complex::new(h, h), Complex::new(-len, T::zero())),
            (Complex::new(-h, h), Complex::new(T::zero(), -len)),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VoorhoeveValue {
    pub value: f64,
    /// `|V_{2n} − V_n|`.
    pub error_estimate: f64,
    /// Smallest `|f|` met on the contour.
    pub min_modulus: f64,
    /// Pieces after splitting the sides at sign changes of the integrand.
    pub pieces: usize,
}

/// Relative size of `|f|` below which a contour point counts as a zero.
pub const ZERO_MARGIN: f64 = 1e-12;

/// `V(f) = (1/2π) ∮ |∂_t Arg f(γ(t))| dt = (1/2π) ∮ |Im(f'(γ) γ' / f(γ))| dt`.
///
/// `f` returns the pair `(f(z), f'(z))`.
pub fn voorhoeve_index<T, F>(f: F, contour: &ContourSpec) -> Result<VoorhoeveValue, ComplexCurveError>
where
    T: Float + FloatConst,
    F: Fn(Complex<T>) -> (Complex<T>, Complex<T>),
{
    let n = contour.nodes_per_side.max(2);
    let scan = 4 * n;
    let mut samples: Vec<Vec<(T, T)>> = Vec::new();
    let mut max_mod = T::zero();
    let mut min_mod = T::infinity();
    let mut min_at = Complex::new(T::zero(), T::zero());
    for (start, dir) in contour.sides::<T>() {
        let mut side = Vec::with_capacity(scan + 1);
        for i in 0..=scan {
            let s = c::<T>(i as f64 / scan as f64);
            let z = start + dir * s;
            let (v, dv) = f(z);
            let m = v.norm();
            if m < min_mod {
                min_mod = m;
                min_at = z;
            }
            max_mod = max_mod.max(m);
            side.push((s, (dv * dir / v).im));
        }
        samples.push(side);
    }
    if !(min_mod > max_mod * c(ZERO_MARGIN)) {
        return Err(ComplexCurveError::ZeroOnContour { re: f64_of(min_at.re), im: f64_of(min_at.im) });
    }
    let integrand = |start: Complex<T>, dir: Complex<T>, s: T| {
        let (v, dv) = f(start + dir * s);
        (dv * dir / v).im
    };
    let coarse = gauss_legendre::<T>(n);
    let fine = gauss_legendre::<T>(2 * n);
    let (mut v1, mut v2) = (Vec::new(), Vec::new());
    let mut pieces = 0;
    for ((start, dir), side) in contour.sides::<T>().into_iter().zip(&samples) {
        let g = |s: T| integrand(start, dir, s);
        // Breakpoints where the integrand changes sign, refined by bisection.
        let mut cuts = vec![T::zero()];
        for w in side.windows(2) {
            let ((a, ga), (b, gb)) = (w[0], w[1]);
            if ga == T::zero() || ga.signum() == gb.signum() || gb == T::zero() {
                continue;
            }
            let (mut lo, mut hi, mut glo) = (a, b, ga);
            for _ in 0..80 {
                let mid = (lo + hi) / c(2.0);
                let gm = g(mid);
                if gm.signum() == glo.signum() {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            cuts.push((lo + hi) / c(2.0));
        }
        cuts.push(T::one());
        for w in cuts.windows(2) {
            pieces += 1;
            v1.push(coarse.integrate(w[0], w[1], |s| g(s).abs()));
            v2.push(fine.integrate(w[0], w[1], |s| g(s).abs()));
        }
    }
    let scale = c::<T>(2.0 * contour.half_width) / (c::<T>(2.0) * T::PI());
    let a = pairwise_sum(&v1) * scale;
    let b = pairwise_sum(&v2) * scale;
    Ok(VoorhoeveValue { value: f64_of(b), error_estimate: f64_of((b - a).abs()), min_modulus: f64_of(min_mod), pieces })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexCurveHypotheses {
    pub k: u32,
    pub beta: f64,
    /// `|φ^{(k)}| ≥ β` on the sampled square.
    pub kth_lower_bound: bool,
    /// `sup_{3𝒪} |φ^{(k+1)}| < β/(2√2)`.
    pub next_upper_bound: bool,
    /// `φ^{(k−1)} ≠ 0` on the boundary.
    pub previous_nonvanishing: bool,
    pub min_kth: f64,
    pub sup_next: f64,
    pub min_previous_on_boundary: f64,
    /// Every condition holds after the Lipschitz slack; otherwise the checks
    /// hold only at the sampled points.
    pub certified: bool,
    pub grid: usize,
}

impl ComplexCurveHypotheses {
    pub fn hold(&self) -> bool {
        self.kth_lower_bound && self.next_upper_bound && self.previous_nonvanishing
    }
}

fn square_grid<T: Float>(half: f64, n: usize) -> impl Iterator<Item = Complex<T>> {
    (0..=n).flat_map(move |i| {
        (0..=n).map(move |j| {
            let x = -half + 2.0 * half * i as f64 / n as f64;
            let y = -half + 2.0 * half * j as f64 / n as f64;
            Complex::new(c(x), c(y))
        })
    })
}

fn max_modulus<T: Float + FloatConst + Send + Sync + 'static>(
    phi: &AnalyticHandle<T>,
    j: u32,
    half: f64,
    n: usize,
) -> Result<Option<f64>, ComplexCurveError> {
    if j > phi.order() {
        return Ok(None);
    }
    let mut m: f64 = 0.0;
    for z in square_grid::<T>(half, n) {
        m = m.max(f64_of(phi.derivative(z, j)?.norm()));
    }
    Ok(Some(m))
}

pub const CERTIFICATION_GRID: usize = 64;

pub fn check_complex_hypotheses<T: Float + FloatConst + Send + Sync + 'static>(
    phi: &AnalyticHandle<T>,
    k: u32,
    beta: f64,
) -> Result<ComplexCurveHypotheses, ComplexCurveError> {
    if k < 2 {
        return Err(ComplexCurveError::HypothesisFailed(format!("k = {k} is below 2")));
    }
    if !(beta > 0.0) {
        return Err(ComplexCurveError::HypothesisFailed("beta must be positive".into()));
    }
    if k + 1 > phi.order() {
        return Err(ComplexCurveError::MissingDerivative { needed: k + 1, available: phi.order() });
    }
    let n = CERTIFICATION_GRID;
    // Distance from any point of a square of half-width a to the grid is at most a√2/n.
    let mesh = |half: f64| half * 2f64.sqrt() / n as f64;

    let mut min_kth = f64::INFINITY;
    for z in square_grid::<T>(0.5, n) {
        min_kth = min_kth.min(f64_of(phi.derivative(z, k)?.norm()));
    }
    let sup_next_outer = max_modulus(phi, k + 1, 1.5, 3 * n)?.expect("order checked");
    let kth_slack = sup_next_outer * mesh(0.5);
    let kth_lower_bound = min_kth >= beta;

    let threshold = beta / (2.0 * 2f64.sqrt());
    let next_slack = max_modulus(phi, k + 2, 1.5, 3 * n)?.map(|m| m * mesh(1.5) / 3.0);
    let next_upper_bound = sup_next_outer < threshold;

    let mut min_prev = f64::INFINITY;
    let boundary = 4 * 256;
    let sides = ContourSpec::default().sides::<T>();
    for (start, dir) in sides {
        for i in 0..boundary / 4 {
            let z = start + dir * c::<T>(i as f64 / (boundary / 4) as f64);
            min_prev = min_prev.min(f64_of(phi.derivative(z, k - 1)?.norm()));
        }
    }
    let sup_kth_outer = max_modulus(phi, k, 1.5, 3 * n)?.expect("order checked");
    let prev_slack = sup_kth_outer * 0.5 / (boundary / 4) as f64;
    let previous_nonvanishing = min_prev > 0.0 && min_prev > 1e-12 * sup_kth_outer.max(1.0);

    let certified = min_kth - kth_slack >= beta
        && next_slack.is_some_and(|s| sup_next_outer + s < threshold)
        && min_prev - prev_slack > 0.0;
    let h = ComplexCurveHypotheses {
        k,
        beta,
        kth_lower_bound,
        next_upper_bound,
        previous_nonvanishing,
        min_kth,
        sup_next: sup_next_outer,
        min_previous_on_boundary: min_prev,
        certified,
        grid: n,
    };
    if !kth_lower_bound {
        return Err(ComplexCurveError::HypothesisFailed(format!(
            "|phi^({k})| >= {beta} fails on the square (sampled minimum {min_kth})"
        )));
    }
    if !next_upper_bound {
        return Err(ComplexCurveError::HypothesisFailed(format!(
            "sup |phi^({})| on the tripled square is {sup_next_outer}, not below beta/(2 sqrt 2) = {threshold}",
            k + 1
        )));
    }
    if !previous_nonvanishing {
        return Err(ComplexCurveError::HypothesisFailed(format!("phi^({}) vanishes on the boundary", k - 1)));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroCensus {
    pub t1: [f64; 2],
    pub t1p: [f64; 2],
    pub k: u32,
    pub voorhoeve: VoorhoeveValue,
    /// `V(f^{(k−1)}) + error < 1`.
    pub below_one: bool,
    /// Zeros of `f` implied by `V(f^{(k−1)}) < 1`.
    pub zero_bound_f: u32,
    /// Distinct zeros of the fiber of ψ implied by the same bound.
    pub zero_bound_psi: u32,
    /// Distinct roots of the fiber of ψ inside the square, for polynomial φ.
    pub fiber_roots_in_square: Option<usize>,
}

/// Distinct roots of the fiber `ψ(t₁, Y, t₁')` in the closed square, with
/// `Y = t₁'` excluded.
pub fn fiber_roots_in_square(
    psi: &TriPoly<BigRational>,
    t1: Complex<f64>,
    t1p: Complex<f64>,
) -> usize {
    let psi_c = psi.map_coeffs(Domain::ComplexFloat, |a| Complex::new(rational_to_float::<f64>(a), 0.0));
    let fiber = fiber_of(&psi_c, &t1, &t1p);
    let roots = durand_kerner(&fiber.dense());
    let inside: Vec<Complex<f64>> = roots
        .into_iter()
        .filter(|r| r.re.abs() <= 0.5 + 1e-9 && r.im.abs() <= 0.5 + 1e-9 && (r - t1p).norm() > 1e-9)
        .collect();
    let mut distinct: Vec<Complex<f64>> = Vec::new();
    for r in inside {
        if distinct.iter().all(|d| (d - r).norm() > 1e-5) {
            distinct.push(r);
        }
    }
    distinct.len()
}

/// `V(f^{(k−1)})` for `f(Y) = φ(t₁+Y−t₁') − φ(t₁) − φ(Y) + φ(t₁')`.
pub fn sod_zero_census<T: Float + FloatConst + Send + Sync + 'static>(
    phi: &AnalyticHandle<T>,
    t1: Complex<T>,
    t1p: Complex<T>,
    k: u32,
    contour: &ContourSpec,
) -> Result<ZeroCensus, ComplexCurveError> {
    if t1 == t1p {
        return Err(ComplexCurveError::HypothesisFailed("t1 and t1' coincide".into()));
    }
    let half = c::<T>(0.5);
    for t in [t1, t1p] {
        if t.re.abs() > half || t.im.abs() > half {
            return Err(ComplexCurveError::HypothesisFailed("t1 and t1' must lie in the square".into()));
        }
    }
    if k < 2 || k > phi.order() {
        return Err(ComplexCurveError::MissingDerivative { needed: k.max(2), available: phi.order() });
    }
    let shift = t1 - t1p;
    let v = voorhoeve_index(
        |y: Complex<T>| {
            let f = (phi.eval)(shift + y, k - 1) - (phi.eval)(y, k - 1);
            let df = (phi.eval)(shift + y, k) - (phi.eval)(y, k);
            (f, df)
        },
        contour,
    )?;
    let fiber_roots = phi.polynomial().map(|p| {
        let psi = crate::sod::second_order_difference(p).expect("degree checked by the caller");
        let z = |w: Complex<T>| Complex::new(f64_of(w.re), f64_of(w.im));
        fiber_roots_in_square(&psi, z(t1), z(t1p))
    });
    Ok(ZeroCensus {
        t1: [f64_of(t1.re), f64_of(t1.im)],
        t1p: [f64_of(t1p.re), f64_of(t1p.im)],
        k,
        below_one: v.value + v.error_estimate < 1.0,
        voorhoeve: v,
        zero_bound_f: k - 1,
        zero_bound_psi: k - 2,
        fiber_roots_in_square: fiber_roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use num_complex::Complex64;

    #[test]
    fn constant_has_index_zero() {
        let v = voorhoeve_index(|_z: Complex64| (Complex64::new(2.0, 1.0), Complex64::new(0.0, 0.0)), &ContourSpec::default()).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn identity_winds_once() {
        let v = voorhoeve_index(|z: Complex64| (z, Complex64::new(1.0, 0.0)), &ContourSpec::default()).unwrap();
        assert!((v.value - 1.0).abs() < 1e-6, "{v:?}");
        let v = voorhoeve_index(|z: Complex64| (z - 0.2, Complex64::new(1.0, 0.0)), &ContourSpec::default()).unwrap();
        assert!((v.value - 1.0).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn zero_on_contour_is_rejected() {
        let r = voorhoeve_index(|z: Complex64| (z - 0.5, Complex64::new(1.0, 0.0)), &ContourSpec::default());
        assert!(matches!(r, Err(ComplexCurveError::ZeroOnContour { .. })));
    }

    #[test]
    fn hypothesis_examples() {
        let cubic = AnalyticHandle::<f64>::from_poly(&parse_poly("z^3").unwrap());
        let h = check_complex_hypotheses(&cubic, 3, 6.0).unwrap();
        assert!(h.hold() && h.certified);
        let perturbed = AnalyticHandle::<f64>::from_poly(&parse_poly("z^3 + z^4/100").unwrap());
        let h = check_complex_hypotheses(&perturbed, 3, 5.0).unwrap();
        assert!(h.hold() && h.certified);
        assert!((h.sup_next - 0.24).abs() < 1e-12);
        let square = AnalyticHandle::<f64>::from_poly(&parse_poly("z^2").unwrap());
        assert!(matches!(check_complex_hypotheses(&square, 3, 1.0), Err(ComplexCurveError::HypothesisFailed(_))));
    }

    #[test]
    fn cubic_census_is_zero() {
        let cubic = AnalyticHandle::<f64>::from_poly(&parse_poly("z^3").unwrap());
        let z = ContourSpec::default();
        let census = sod_zero_census(&cubic, Complex64::new(0.3, -0.1), Complex64::new(-0.2, 0.4), 3, &z).unwrap();
        assert!(census.voorhoeve.value.abs() < 1e-12);
        assert!(census.below_one);
        assert!(census.fiber_roots_in_square.unwrap() <= 1);
        let same = sod_zero_census(&cubic, Complex64::new(0.1, 0.0), Complex64::new(0.1, 0.0), 3, &z);
        assert!(matches!(same, Err(ComplexCurveError::HypothesisFailed(_))));
    }
}

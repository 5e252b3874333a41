use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Float, FloatConst};

use crate::algebra::{rational_to_float, UniPoly};

type Evaluator<T> = Arc<dyn Fn(T, u32) -> T + Send + Sync>;

/// A curve `t ↦ (t, φ(t))` given by derivatives of `φ` up to `order`.
#[derive(Clone)]
pub struct CurveHandle<T> {
    name: String,
    order: u32,
    eval: Evaluator<T>,
    polynomial: Option<UniPoly<BigRational>>,
}

impl<T> fmt::Debug for CurveHandle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveHandle").field("name", &self.name).field("order", &self.order).finish()
    }
}

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("float constant")
}

impl<T: Float + FloatConst + Send + Sync + 'static> CurveHandle<T> {
    pub fn from_fn(name: &str, order: u32, eval: impl Fn(T, u32) -> T + Send + Sync + 'static) -> Self {
        Self { name: name.into(), order, eval: Arc::new(eval), polynomial: None }
    }

    /// Every derivative is available; those past the degree vanish.
    pub fn from_poly(phi: &UniPoly<BigRational>) -> Self {
        let degree = phi.degree().unwrap_or(0);
        let derivs: Vec<Vec<T>> = (0..=degree)
            .map(|j| phi.derivative(j).dense().iter().map(rational_to_float).collect())
            .collect();
        let eval = move |t: T, j: u32| match derivs.get(j as usize) {
            Some(coeffs) => coeffs.iter().rev().fold(T::zero(), |acc, a| acc * t + *a),
            None => T::zero(),
        };
        Self { name: phi.to_string(), order: u32::MAX, eval: Arc::new(eval), polynomial: Some(phi.clone()) }
    }

    /// `cosh(t) − 1`.
    pub fn cosh_minus_one() -> Self {
        Self::from_fn("cosh(t) - 1", u32::MAX, |t: T, j| match j {
            0 => t.cosh() - T::one(),
            j if j % 2 == 0 => t.cosh(),
            _ => t.sinh(),
        })
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

    pub fn value(&self, t: T) -> T {
        (self.eval)(t, 0)
    }

    /// `φ^{(j)}(t)`, or `None` past the available order.
    pub fn derivative(&self, t: T, j: u32) -> Option<T> {
        (j <= self.order).then(|| (self.eval)(t, j))
    }

    fn samples(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = T> {
        (0..=n).map(move |i| c(lo + (hi - lo) * i as f64 / n as f64))
    }

    /// Upper bound for `|γ'| = (1 + φ'²)^{1/2}` on `[−1/2, 1/2]`: a coefficient
    /// bound for polynomials, a padded sampled maximum otherwise.
    pub fn sup_speed(&self) -> T {
        let slope = match &self.polynomial {
            Some(phi) => phi
                .derivative(1)
                .terms()
                .map(|(e, a)| rational_to_float::<T>(a).abs() * c::<T>(0.5).powi(e as i32))
                .fold(T::zero(), |x, y| x + y),
            None => {
                let n = 4096;
                let max = Self::samples(-0.5, 0.5, n)
                    .map(|t| self.derivative(t, 1).expect("first derivative").abs())
                    .fold(T::zero(), T::max);
                // Slack for the spacing between samples.
                let second = Self::samples(-0.5, 0.5, 64)
                    .map(|t| self.derivative(t, 2).map(|v| v.abs()).unwrap_or(T::zero()))
                    .fold(T::zero(), T::max);
                max * c(1.001) + second / c(n as f64)
            }
        };
        (T::one() + slope * slope).sqrt()
    }

    /// Upper bound for `max φ − min φ` on `[−1/2, 1/2]`.
    pub fn range_on_unit(&self) -> T {
        let n = 4096;
        let (lo, hi) = Self::samples(-0.5, 0.5, n)
            .map(|t| self.value(t))
            .fold((T::infinity(), T::neg_infinity()), |(a, b), v| (a.min(v), b.max(v)));
        let slope = (self.sup_speed() * self.sup_speed() - T::one()).max(T::zero()).sqrt();
        hi - lo + slope / c(n as f64)
    }

    /// Whether `φ^{(k)}` has constant sign and stays away from zero on the
    /// sampled interval.
    pub fn derivative_nonvanishing(&self, k: u32, lo: f64, hi: f64, n: usize) -> bool {
        if k > self.order {
            return false;
        }
        let vals: Vec<T> = Self::samples(lo, hi, n).map(|t| (self.eval)(t, k)).collect();
        let scale = vals.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let floor = scale * c(1e-12);
        scale > T::zero() && (vals.iter().all(|v| *v > floor) || vals.iter().all(|v| *v < -floor))
    }

    /// Whether sampled `φ'` is strictly monotone on the interval.
    pub fn derivative_strictly_monotone(&self, lo: f64, hi: f64, n: usize) -> bool {
        let vals: Vec<T> = Self::samples(lo, hi, n).map(|t| self.derivative(t, 1).expect("first derivative")).collect();
        let up = vals.windows(2).all(|w| w[1] > w[0]);
        let down = vals.windows(2).all(|w| w[1] < w[0]);
        up || down
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn polynomial_handle() {
        let h = CurveHandle::<f64>::from_poly(&parse_poly("x^3 - 2x").unwrap());
        assert_eq!(h.value(2.0), 4.0);
        assert_eq!(h.derivative(2.0, 1), Some(10.0));
        assert_eq!(h.derivative(2.0, 3), Some(6.0));
        assert_eq!(h.derivative(2.0, 4), Some(0.0));
        assert!(h.derivative_nonvanishing(3, -1.5, 1.5, 2000));
        assert!(!h.derivative_nonvanishing(2, -1.5, 1.5, 2000));
        // |φ'| ≤ 3/4 + 2.
        assert!((h.sup_speed() - (1.0f64 + 2.75 * 2.75).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cosh_handle() {
        let h = CurveHandle::<f64>::cosh_minus_one();
        assert_eq!(h.value(0.0), 0.0);
        assert!(h.derivative_strictly_monotone(-1.5, 1.5, 1000));
        let exact = (1.0 + 0.5f64.sinh().powi(2)).sqrt();
        assert!(h.sup_speed() >= exact && h.sup_speed() < exact * 1.01);
        assert!(h.range_on_unit() >= 0.5f64.cosh() - 1.0);
        let line = CurveHandle::<f64>::from_poly(&parse_poly("t").unwrap());
        assert!(!line.derivative_strictly_monotone(-1.5, 1.5, 1000));
    }
}

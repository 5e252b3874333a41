use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    /// `w(u) = (g(u)/g(1))²` with `g` the inverse transform of the unit
    /// triangle on `[−1/2, 1/2]`; in closed form `(sin(πu/2)/u)⁴`.
    FejerSquare,
    /// Indicator of the square of side `diameter`.
    Indicator,
}

/// Product weight `W_B(x) = w((x₁−c₁)/R_B) w((x₂−c₂)/R_B)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightSpec<T> {
    pub kind: WeightKind,
    pub center: [T; 2],
    pub diameter: T,
    /// `g(1)²`, the factor dividing `g²`.
    pub normalization: T,
}

fn c<T: Float>(x: f64) -> T {
    T::from(x).expect("float constant")
}

/// Relative level below which the weight is truncated.
pub const TRUNCATION_LEVEL: f64 = 1e-6;

/// The one-dimensional profile `(sin(πu/2)/u)⁴`, with its limit `(π/2)⁴` at 0.
pub fn fejer_profile<T: Float + FloatConst>(u: T) -> T {
    let a = T::FRAC_PI_2() * u;
    let ratio = if a.abs() < c(1e-4) {
        // sin(a)/a = 1 − a²/6 + a⁴/120
        let a2 = a * a;
        T::FRAC_PI_2() * (T::one() - a2 / c(6.0) + a2 * a2 / c(120.0))
    } else {
        a.sin() / u
    };
    ratio.powi(4)
}

/// `∫_ℝ (sin(πu/2)/u)⁴ du = π⁴/12`.
pub fn fejer_mass<T: Float + FloatConst>() -> T {
    T::PI().powi(4) / c(12.0)
}

pub fn build_weight<T: Float + FloatConst>(diameter: T, center: [T; 2]) -> WeightSpec<T> {
    let g1 = c::<T>(2.0) / (T::PI() * T::PI());
    WeightSpec { kind: WeightKind::FejerSquare, center, diameter, normalization: g1 * g1 }
}

pub fn indicator_weight<T: Float>(diameter: T, center: [T; 2]) -> WeightSpec<T> {
    WeightSpec { kind: WeightKind::Indicator, center, diameter, normalization: T::one() }
}

impl<T: Float + FloatConst> WeightSpec<T> {
    /// Profile in the rescaled variable `u = (x − c)/R_B`.
    pub fn profile(&self, u: T) -> T {
        match self.kind {
            WeightKind::FejerSquare => fejer_profile(u),
            WeightKind::Indicator => {
                if u.abs() <= c(0.5) {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }

    pub fn eval(&self, x: [T; 2]) -> T {
        self.profile((x[0] - self.center[0]) / self.diameter) * self.profile((x[1] - self.center[1]) / self.diameter)
    }

    /// Half-width of the integration box in the rescaled variable: beyond it
    /// the profile stays below `TRUNCATION_LEVEL` times its central value.
    pub fn truncation_scaled(&self) -> T {
        match self.kind {
            // The profile is bounded by u⁻⁴.
            WeightKind::FejerSquare => (c::<T>(TRUNCATION_LEVEL) * fejer_profile(T::zero())).powf(c(-0.25)),
            WeightKind::Indicator => c(0.5),
        }
    }

    pub fn truncation_radius(&self) -> T {
        self.truncation_scaled() * self.diameter
    }

    /// Upper bound for `∫ W_B` outside the truncation box.
    pub fn tail_mass(&self) -> T {
        match self.kind {
            WeightKind::FejerSquare => {
                let u = self.truncation_scaled();
                let tail = c::<T>(2.0) / (c::<T>(3.0) * u.powi(3));
                let total = fejer_mass::<T>();
                self.diameter * self.diameter * (c::<T>(2.0) * total * tail)
            }
            WeightKind::Indicator => T::zero(),
        }
    }

    /// Smallest value of the profile on `[−1, 1]`, sampled at `n + 1` points.
    pub fn min_on_unit(&self, n: usize) -> T {
        (0..=n)
            .map(|i| self.profile(c::<T>(-1.0) + c::<T>(2.0 * i as f64 / n as f64)))
            .fold(T::infinity(), T::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fejer_values() {
        let w = build_weight(1.0f64, [0.0, 0.0]);
        assert!((w.profile(1.0) - 1.0).abs() < 1e-15);
        assert!((w.profile(-1.0) - 1.0).abs() < 1e-15);
        let centre = (std::f64::consts::PI.powi(2) / 4.0).powi(2);
        assert!((w.profile(0.0) - centre).abs() < 1e-12);
        // g(0)/g(1) with g(0) = 1/2 and g(1) = 2/π².
        let g_ratio: f64 = 0.5 / (2.0 / std::f64::consts::PI.powi(2));
        assert!((w.profile(0.0) - g_ratio.powi(2)).abs() < 1e-12);
        assert!(w.min_on_unit(10_000) >= 1.0 - 1e-9);
    }

    #[test]
    fn fejer_decay() {
        let w = build_weight(1.0f64, [0.0, 0.0]);
        for u in [10.0, 100.0, 1000.0f64] {
            assert!(w.profile(u) <= u.powi(-4) * (1.0 + 1e-12));
        }
        assert!((w.profile(3.0) - 3.0f64.powi(-4)).abs() < 1e-15);
        let u = w.truncation_scaled();
        assert!((u - 20.13).abs() < 0.01, "{u}");
    }

    #[test]
    fn fejer_mass_matches_quadrature() {
        // Trapezoid sum of a band-limited profile on a fine lattice plus the tail bound.
        let h = 0.05f64;
        let s: f64 = (-40_000..=40_000).map(|i| fejer_profile(i as f64 * h)).sum::<f64>() * h;
        assert!((s - fejer_mass::<f64>()).abs() < 2.0 / (3.0 * 2000.0f64.powi(3)) + 1e-9);
    }

    #[test]
    fn works_in_single_precision() {
        let w = build_weight(2.0f32, [0.0, 0.0]);
        assert!((w.eval([2.0, 2.0]) - 1.0).abs() < 1e-5);
    }
}

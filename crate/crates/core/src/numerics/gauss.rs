use num_traits::{Float, FloatConst};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Float> GaussRule<T> {
    /// Maps the rule to `[a, b]` and integrates `f`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) / (T::one() + T::one());
        let mid = (a + b) / (T::one() + T::one());
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + *w * f(mid + half * *x);
        }
        acc * half
    }
}

/// Newton iteration on the Legendre recurrence, seeded by the Chebyshev-like
/// asymptotic guess.
pub fn gauss_legendre<T: Float + FloatConst>(n: usize) -> GaussRule<T> {
    assert!(n >= 1, "need at least one node");
    let t = |x: f64| T::from(x).expect("float");
    let nf = t(n as f64);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let eps = T::epsilon() * t(4.0);
    for i in 0..(n + 1) / 2 {
        let mut x = (T::PI() * (t(i as f64) + t(0.75)) / (nf + t(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (mut p0, mut p1) = (T::one(), x);
            for k in 2..=n {
                let kf = t(k as f64);
                let p2 = ((t(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { T::one() } else { p0 };
            dp = nf * (x * pn - pm) / (x * x - T::one());
            let dx = pn / dp;
            x = x - dx;
            if dx.abs() <= eps {
                break;
            }
        }
        // Recompute the derivative at the converged node.
        let (mut p0, mut p1) = (T::one(), x);
        for k in 2..=n {
            let kf = t(k as f64);
            let p2 = ((t(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        if n > 1 {
            dp = nf * (x * p1 - p0) / (x * x - T::one());
        }
        let w = t(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    GaussRule { nodes, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_low_degree() {
        for n in [1usize, 2, 3, 8, 64, 256] {
            let g = gauss_legendre::<f64>(n);
            let total: f64 = g.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}");
            let deg = (2 * n - 1).min(30) as i32;
            let integral = g.integrate(0.0, 1.0, |x| x.powi(deg));
            assert!((integral - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn single_precision_rule() {
        let g = gauss_legendre::<f32>(16);
        let v = g.integrate(0.0f32, std::f32::consts::PI, |x| x.sin());
        assert!((v - 2.0).abs() < 1e-5);
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let g = gauss_legendre::<f64>(7);
        assert!(g.nodes.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.nodes[3], 0.0);
        assert!((g.nodes[0] + g.nodes[6]).abs() < 1e-15);
    }
}

use num_complex::Complex;
use num_traits::Float;

/// Horner evaluation of `Σ c_j z^j` (coefficients lowest degree first).
pub fn eval_complex_poly<T: Float>(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, c| acc * z + *c)
}

/// Multiplies a coefficient vector by `(z − root)`.
pub fn mul_linear<T: Float>(coeffs: &[Complex<T>], root: Complex<T>) -> Vec<Complex<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); coeffs.len() + 1];
    for (j, c) in coeffs.iter().enumerate() {
        out[j + 1] = out[j + 1] + *c;
        out[j] = out[j] - *c * root;
    }
    out
}

/// All complex roots of a polynomial with nonzero leading coefficient, by the
/// Durand–Kerner iteration followed by a few Newton polishing steps.
pub fn durand_kerner<T: Float>(coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut c: Vec<Complex<T>> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == T::zero()) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex<T>> = c.iter().map(|x| *x / lead).collect();
    // Cauchy bound for the initial circle.
    let radius = T::one() + monic[..n].iter().map(|x| x.norm()).fold(T::zero(), T::max);
    let seed = Complex::new(T::from(0.4).expect("float"), T::from(0.9).expect("float"));
    let mut z: Vec<Complex<T>> = (0..n).map(|i| seed.powi(i as i32) * radius).collect();
    let tol = T::epsilon() * T::from(16.0).expect("float");
    for _ in 0..2000 {
        let mut moved = T::zero();
        for i in 0..n {
            let num = eval_complex_poly(&monic, z[i]);
            let mut den = Complex::new(T::one(), T::zero());
            for j in 0..n {
                if i != j {
                    den = den * (z[i] - z[j]);
                }
            }
            if den.norm() == T::zero() {
                continue;
            }
            let step = num / den;
            z[i] = z[i] - step;
            moved = moved.max(step.norm() / (T::one() + z[i].norm()));
        }
        if moved <= tol {
            break;
        }
    }
    let deriv: Vec<Complex<T>> =
        monic.iter().enumerate().skip(1).map(|(j, x)| *x * T::from(j).expect("float")).collect();
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = eval_complex_poly(&deriv, *r);
            if d.norm() == T::zero() {
                break;
            }
            let step = eval_complex_poly(&monic, *r) / d;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r = *r - step;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn quadratic_and_cubic() {
        let mut r = durand_kerner(&[c(2.0), c(-3.0), c(1.0)]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(1.0)).norm() < 1e-12 && (r[1] - c(2.0)).norm() < 1e-12);
        let r = durand_kerner(&[c(1.0), c(0.0), c(1.0)]);
        assert!(r.iter().all(|z| (z.im.abs() - 1.0).abs() < 1e-12 && z.re.abs() < 1e-12));
        let r = durand_kerner(&[c(-6.0), c(11.0), c(-6.0), c(1.0)]);
        for root in [1.0, 2.0, 3.0] {
            assert!(r.iter().any(|z| (z - c(root)).norm() < 1e-10));
        }
    }

    #[test]
    fn product_expansion_round_trip() {
        let roots = [Complex::new(0.5, 1.0), Complex::new(-2.0, 0.0), Complex::new(0.1, -0.3)];
        let mut p = vec![c(3.0)];
        for r in roots {
            p = mul_linear(&p, r);
        }
        let found = durand_kerner(&p);
        for r in roots {
            assert!(found.iter().any(|z| (z - r).norm() < 1e-10));
        }
        assert!(durand_kerner(&[c(5.0)]).is_empty());
    }
}

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::roots::{hensel_lift_residue, is_dth_power_residue, reduce_poly, simple_roots_mod_p};
use super::PadicError;
use crate::algebra::{is_prime, Domain, PadicInt, Ring, TriPoly, UniPoly};
use crate::sod::{fiber_of, second_order_difference};

/// `φ(X) = 2X^k − kX²`.
pub fn jb_curve(k: u32) -> UniPoly<BigRational> {
    let q = |n: i64| BigRational::from_integer(n.into());
    UniPoly::from_terms(Domain::Rational, [(k, q(2)), (2, q(-(k as i64)))])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JbHypotheses {
    pub k_at_least_4: bool,
    pub p_odd_prime: bool,
    pub p_coprime_to_2k: bool,
    pub p_one_mod_k_minus_2: bool,
    pub k_equals_p_plus_1: bool,
    /// `None` when the test is undefined (p divides k − 1 or k − 2 does not divide p − 1).
    pub k_minus_1_not_a_power_residue: Option<bool>,
}

impl JbHypotheses {
    /// Name of the first violated hypothesis.
    pub fn first_failure(&self) -> Option<String> {
        if !self.k_at_least_4 {
            return Some("k >= 4".into());
        }
        if !self.p_odd_prime {
            return Some("p is an odd prime".into());
        }
        if !self.p_coprime_to_2k {
            return Some("p does not divide 2k".into());
        }
        if !self.p_one_mod_k_minus_2 {
            return Some("p = 1 mod (k-2)".into());
        }
        if !self.k_equals_p_plus_1 && self.k_minus_1_not_a_power_residue != Some(true) {
            return Some("k = p+1 or k-1 is not a (k-2)-th power residue mod p".into());
        }
        None
    }

    pub fn hold(&self) -> bool {
        self.first_failure().is_none()
    }
}

pub fn jb_hypotheses(k: u32, p: u64) -> JbHypotheses {
    let k64 = k as u64;
    let p_odd_prime = p > 2 && is_prime(p);
    let p_one = k >= 3 && p_odd_prime && (p - 1) % (k64 - 2) == 0;
    let residue = if p_one && (k64 - 1) % p != 0 {
        is_dth_power_residue(k as i64 - 1, k64 - 2, p).ok().map(|r| !r)
    } else {
        None
    };
    JbHypotheses {
        k_at_least_4: k >= 4,
        p_odd_prime,
        p_coprime_to_2k: p > 0 && (2 * k64) % p != 0,
        p_one_mod_k_minus_2: p_one,
        k_equals_p_plus_1: k64 == p + 1,
        k_minus_1_not_a_power_residue: residue,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRoots {
    pub x: i64,
    pub z: i64,
    pub roots_mod_p: Vec<u64>,
    pub multiple_roots_mod_p: Vec<u64>,
    /// Representatives mod p^N of the lifted roots, in the order of `roots_mod_p`.
    pub lifted: Vec<u64>,
    pub splits: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JbReport {
    pub k: u32,
    pub p: u64,
    pub precision: u32,
    pub hypotheses: JbHypotheses,
    /// Second derivative never vanishes mod p, checked over every residue.
    pub cond_a: bool,
    pub second_derivative_mod_p: Vec<u64>,
    /// Every sampled fiber has k − 2 simple roots mod p, all lifted.
    pub cond_b: bool,
    pub samples: Vec<SampleRoots>,
    pub lifted_roots: Vec<PadicInt>,
}

/// Grid offsets 0, 1, −1, 2, −2, …
fn grid_values(n: usize) -> Vec<i64> {
    (0..n as i64).map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) }).collect()
}

/// Sample points `(p·a, p·b)` for `a, b` on a small grid around 0, row-major.
pub fn sample_points(p: u64, samples: usize) -> Vec<(i64, i64)> {
    let side = (samples as f64).sqrt().ceil() as usize;
    let g = grid_values(side.max(1));
    let p = p as i64;
    g.iter().flat_map(|a| g.iter().map(move |b| (p * a, p * b))).take(samples).collect()
}

fn check_sample(psi: &TriPoly<PadicInt>, k: u32, x: i64, z: i64) -> Result<SampleRoots, PadicError> {
    let d = psi.domain();
    let fiber = fiber_of(psi, &PadicInt::from_i64_in(x, &d), &PadicInt::from_i64_in(z, &d));
    let (simple, multiple) = simple_roots_mod_p(&fiber)?;
    let splits = multiple.is_empty() && simple.len() == (k - 2) as usize;
    let lifted = if splits {
        simple.iter().map(|r| hensel_lift_residue(&fiber, *r).map(|x| x.rep())).collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    Ok(SampleRoots { x, z, roots_mod_p: simple, multiple_roots_mod_p: multiple, lifted, splits })
}

/// Checks both conditions for `φ = 2X^k − kX²` at the prime `p`.
pub fn verify_prop_jb(k: u32, p: u64, precision: u32, samples: usize) -> Result<JbReport, PadicError> {
    let hypotheses = jb_hypotheses(k, p);
    if let Some(name) = hypotheses.first_failure() {
        return Err(PadicError::HypothesisFailed(name));
    }
    let phi = jb_curve(k);

    let second = reduce_poly(&phi.derivative(2), p, 1)?;
    let dom1 = second.domain();
    let second_derivative_mod_p: Vec<u64> =
        (0..p).map(|x| second.eval(&PadicInt::from_i64_in(x as i64, &dom1)).rep()).collect();
    let cond_a = second_derivative_mod_p.iter().all(|v| *v != 0);

    let domain = Domain::ModPrimePower { p, n: precision };
    PadicInt::new(p, precision, 0)?;
    let psi = second_order_difference(&phi)?.try_map_coeffs(domain, |c| PadicInt::from_rational(p, precision, c))?;
    let points = sample_points(p, samples);
    let samples: Vec<SampleRoots> = points
        .par_iter()
        .map(|(x, z)| check_sample(&psi, k, *x, *z))
        .collect::<Result<_, _>>()?;
    let cond_b = !samples.is_empty() && samples.iter().all(|s| s.splits);
    let lifted_roots = samples
        .first()
        .map(|s| s.lifted.iter().map(|r| PadicInt::new(p, precision, *r as i128).expect("valid")).collect())
        .unwrap_or_default();
    Ok(JbReport {
        k,
        p,
        precision,
        hypotheses,
        cond_a,
        second_derivative_mod_p,
        cond_b,
        samples,
        lifted_roots,
    })
}

/// Primes `p ≤ bound` meeting the hypotheses for `2X^k − kX²`.
pub fn find_sod_split_primes(k: u32, bound: u64) -> Vec<u64> {
    (2..=bound).filter(|p| is_prime(*p) && jb_hypotheses(k, *p).hold()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_p5_lifts_plus_minus_one() {
        let r = verify_prop_jb(4, 5, 8, 25).unwrap();
        assert!(r.cond_a && r.cond_b);
        assert_eq!(r.samples.len(), 25);
        assert_eq!(r.samples[0].x, 0);
        assert_eq!(r.samples[0].z, 0);
        let m = 5u64.pow(8);
        assert_eq!(r.samples[0].lifted, vec![1, m - 1]);
    }

    #[test]
    fn k4_p3_via_k_equals_p_plus_1() {
        let r = verify_prop_jb(4, 3, 8, 25).unwrap();
        assert!(r.hypotheses.k_equals_p_plus_1);
        assert!(r.cond_a && r.cond_b);
    }

    #[test]
    fn k4_p13_fails_residue_hypothesis() {
        match verify_prop_jb(4, 13, 8, 25) {
            Err(PadicError::HypothesisFailed(name)) => assert!(name.contains("power residue")),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(verify_prop_jb(4, 2, 8, 25), Err(PadicError::HypothesisFailed(_))));
        assert!(matches!(verify_prop_jb(3, 5, 8, 25), Err(PadicError::HypothesisFailed(_))));
    }

    #[test]
    fn prime_search_k4() {
        assert_eq!(find_sod_split_primes(4, 50), vec![3, 5, 7, 17, 19, 29, 31, 41, 43]);
        assert_eq!(find_sod_split_primes(4, 4), vec![3]);
        for p in find_sod_split_primes(5, 300) {
            assert_eq!(p % 3, 1);
        }
    }

    #[test]
    fn sample_grid_layout() {
        let pts = sample_points(3, 25);
        assert_eq!(pts.len(), 25);
        assert_eq!(pts[0], (0, 0));
        assert_eq!(pts[1], (0, 3));
        assert_eq!(pts[2], (0, -3));
        assert!(pts.contains(&(6, -6)));
    }
}

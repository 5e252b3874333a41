//! Exact checks showing that Rolle-type arguments break down over Z_p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{is_prime, Domain, PadicInt, Ring, UniPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RolleError {
    #[error("interpolation nodes must be pairwise distinct")]
    DuplicateNodes,
    #[error("{nodes} nodes but {values} values")]
    LengthMismatch { nodes: usize, values: usize },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationProblem {
    pub nodes: Vec<BigRational>,
    pub values: Vec<BigRational>,
}

impl InterpolationProblem {
    pub fn new(nodes: Vec<BigRational>, values: Vec<BigRational>) -> Result<Self, RolleError> {
        if nodes.len() != values.len() {
            return Err(RolleError::LengthMismatch { nodes: nodes.len(), values: values.len() });
        }
        for (i, a) in nodes.iter().enumerate() {
            if nodes[..i].contains(a) {
                return Err(RolleError::DuplicateNodes);
            }
        }
        Ok(Self { nodes, values })
    }

    pub fn from_integers(nodes: &[i64], values: &[i64]) -> Result<Self, RolleError> {
        let q = |v: &[i64]| v.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect();
        Self::new(q(nodes), q(values))
    }
}

/// The interpolating polynomial of degree at most `k` through `k + 1` points,
/// as a sum of Lagrange basis polynomials.
pub fn lagrange_fit(problem: &InterpolationProblem) -> Result<UniPoly<BigRational>, RolleError> {
    let InterpolationProblem { nodes, values } = InterpolationProblem::new(problem.nodes.clone(), problem.values.clone())?;
    let d = Domain::Rational;
    let mut out = UniPoly::zero(d);
    for (m, (am, bm)) in nodes.iter().zip(&values).enumerate() {
        if bm.is_zero() {
            continue;
        }
        let mut basis = UniPoly::constant(bm.clone());
        for (i, ai) in nodes.iter().enumerate() {
            if i == m {
                continue;
            }
            let factor = UniPoly::from_coeffs(d, &[-ai.clone(), BigRational::one()]);
            basis = (&basis * &factor).scale(&(BigRational::one() / (am - ai)));
        }
        out = &out + &basis;
    }
    Ok(out)
}

/// Solves the Vandermonde system for the coefficients by exact Gaussian elimination.
pub fn vandermonde_fit(problem: &InterpolationProblem) -> Result<UniPoly<BigRational>, RolleError> {
    let InterpolationProblem { nodes, values } = InterpolationProblem::new(problem.nodes.clone(), problem.values.clone())?;
    let n = nodes.len();
    let mut rows: Vec<Vec<BigRational>> = nodes
        .iter()
        .zip(&values)
        .map(|(a, b)| {
            let mut row: Vec<BigRational> = (0..n as u32).map(|e| Ring::pow(a, e)).collect();
            row.push(b.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|r| !rows[*r][col].is_zero()).expect("distinct nodes give an invertible system");
        rows.swap(col, pivot);
        let inv = BigRational::one() / &rows[col][col];
        for v in rows[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=n {
                    let sub = &f * &rows[col][c];
                    rows[r][c] = &rows[r][c] - &sub;
                }
            }
        }
    }
    Ok(UniPoly::from_coeffs(Domain::Rational, &rows.iter().map(|r| r[n].clone()).collect::<Vec<_>>()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RolleFailureReport {
    pub p: u64,
    /// `g = X^p − X` vanishes at 0 and 1.
    pub vanishes_at_0_and_1: bool,
    /// `g'(x) mod p` for every residue.
    pub derivative_residues: Vec<u64>,
    pub derivative_is_minus_one: bool,
    pub pass: bool,
}

fn residues_mod_p(f: &UniPoly<BigRational>, p: u64) -> Vec<u64> {
    let d = Domain::ModPrimePower { p, n: 1 };
    let g = f.map_coeffs(d, |c| PadicInt::from_rational(p, 1, c).expect("integer coefficients"));
    (0..p).map(|x| g.eval(&PadicInt::from_i64_in(x as i64, &d)).rep()).collect()
}

fn rational_poly(terms: &[(u32, i64)]) -> UniPoly<BigRational> {
    UniPoly::from_terms(Domain::Rational, terms.iter().map(|(e, c)| (*e, BigRational::from_integer(BigInt::from(*c)))))
}

/// `X^p − X` has roots 0 and 1 while its derivative is ≡ −1 mod p everywhere.
pub fn check_rolle_failure(p: u64) -> Result<RolleFailureReport, RolleError> {
    if !is_prime(p) {
        return Err(RolleError::HypothesisFailed(format!("{p} is not prime")));
    }
    let g = rational_poly(&[(p as u32, 1), (1, -1)]);
    let vanishes = g.eval(&BigRational::from_integer(0.into())).is_zero() && g.eval(&BigRational::one()).is_zero();
    let derivative_residues = residues_mod_p(&g.derivative(1), p);
    let derivative_is_minus_one = derivative_residues.iter().all(|r| *r == p - 1);
    Ok(RolleFailureReport {
        p,
        vanishes_at_0_and_1: vanishes,
        derivative_residues,
        derivative_is_minus_one,
        pass: vanishes && derivative_is_minus_one,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterpolationFailureReport {
    pub p: u64,
    pub nodes: Vec<i64>,
    pub values: Vec<String>,
    /// Coefficients of the fitted quadratic, lowest degree first.
    pub fitted_coefficients: Vec<String>,
    pub fit_is_zero: bool,
    pub lagrange_agrees: bool,
    /// `f''(x) mod p` for every residue; the fit has `q'' = 0`.
    pub second_derivative_residues: Vec<u64>,
    pub second_derivative_nonvanishing: bool,
    pub pass: bool,
}

/// `f = X^{p+1} − X²` vanishes at 0, ±1 so its quadratic interpolant is 0, yet
/// `f''` never vanishes mod p, so no point has `f'' = q''`.
pub fn check_prop_rolle_fails(p: u64) -> Result<InterpolationFailureReport, RolleError> {
    if !is_prime(p) || p == 2 {
        return Err(RolleError::HypothesisFailed(format!("p = {p} must be an odd prime")));
    }
    let f = rational_poly(&[(p as u32 + 1, 1), (2, -1)]);
    let nodes = [0i64, 1, -1];
    let values: Vec<BigRational> = nodes.iter().map(|a| f.eval(&BigRational::from_integer((*a).into()))).collect();
    let problem =
        InterpolationProblem::new(nodes.iter().map(|a| BigRational::from_integer((*a).into())).collect(), values.clone())?;
    let fit = vandermonde_fit(&problem)?;
    let lagrange_agrees = lagrange_fit(&problem)? == fit;
    let second_derivative_residues = residues_mod_p(&f.derivative(2), p);
    let nonvanishing = second_derivative_residues.iter().all(|r| *r != 0);
    let fit_is_zero = fit.is_zero();
    Ok(InterpolationFailureReport {
        p,
        nodes: nodes.to_vec(),
        values: values.iter().map(|v| v.to_string()).collect(),
        fitted_coefficients: (0..3).map(|e| fit.coeff(e).to_string()).collect(),
        fit_is_zero,
        lagrange_agrees,
        second_derivative_residues,
        second_derivative_nonvanishing: nonvanishing,
        pass: fit_is_zero && lagrange_agrees && nonvanishing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn fit_examples() {
        let pr = InterpolationProblem::from_integers(&[0, 1], &[0, 1]).unwrap();
        assert_eq!(lagrange_fit(&pr).unwrap(), parse_poly("x").unwrap());
        let pr = InterpolationProblem::from_integers(&[0, 1, -1], &[0, 0, 0]).unwrap();
        assert!(lagrange_fit(&pr).unwrap().is_zero());
        let pr = InterpolationProblem::from_integers(&[0, 1, 2], &[0, 1, 4]).unwrap();
        assert_eq!(lagrange_fit(&pr).unwrap(), parse_poly("x^2").unwrap());
        assert_eq!(vandermonde_fit(&pr).unwrap(), parse_poly("x^2").unwrap());
        assert!(matches!(InterpolationProblem::from_integers(&[1, 1], &[0, 0]), Err(RolleError::DuplicateNodes)));
    }

    #[test]
    fn rolle_failure_residues() {
        let r = check_rolle_failure(3).unwrap();
        assert_eq!(r.derivative_residues, vec![2, 2, 2]);
        assert!(r.pass);
        assert!(check_rolle_failure(5).unwrap().pass);
        let r = check_rolle_failure(2).unwrap();
        assert_eq!(r.derivative_residues, vec![1, 1]);
        assert!(r.pass);
    }

    #[test]
    fn interpolation_failure() {
        let r = check_prop_rolle_fails(3).unwrap();
        assert!(r.fit_is_zero && r.pass);
        // f'' = 12x^2 - 2 is constant 1 mod 3.
        assert_eq!(r.second_derivative_residues, vec![1, 1, 1]);
        assert!(check_prop_rolle_fails(5).unwrap().pass);
        assert!(matches!(check_prop_rolle_fails(2), Err(RolleError::HypothesisFailed(_))));
    }
}

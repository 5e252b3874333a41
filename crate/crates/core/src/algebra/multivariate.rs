use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ring::{Domain, Ring};
use super::univariate::UniPoly;
use super::AlgebraError;

/// Sparse polynomial in `N` variables keyed by exponent vectors.
///
/// The map is ordered lexicographically with variable 0 most significant, so
/// the last entry is the lex-leading term.
#[derive(Clone, PartialEq)]
pub struct MultiPoly<R: Ring, const N: usize> {
    domain: Domain,
    terms: BTreeMap<[u32; N], R>,
}

pub type BiPoly<R> = MultiPoly<R, 2>;
pub type TriPoly<R> = MultiPoly<R, 3>;

impl<R: Ring, const N: usize> MultiPoly<R, N> {
    pub fn zero(domain: Domain) -> Self {
        Self { domain, terms: BTreeMap::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(c, [0; N])
    }

    pub fn monomial(c: R, exp: [u32; N]) -> Self {
        let mut p = Self::zero(c.domain());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The variable `x_i`.
    pub fn var(domain: Domain, i: usize) -> Self {
        let mut exp = [0; N];
        exp[i] = 1;
        Self::monomial(R::one_in(&domain), exp)
    }

    pub fn from_terms(domain: Domain, terms: impl IntoIterator<Item = ([u32; N], R)>) -> Self {
        let mut p = Self::zero(domain);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, exp: [u32; N], c: &R) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                let s = existing.plus(c);
                if s.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(exp, c.clone());
            }
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32; N]) -> R {
        self.terms.get(exp).cloned().unwrap_or_else(|| R::zero_in(&self.domain))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn leading_term(&self) -> Option<(&[u32; N], &R)> {
        self.terms.iter().next_back()
    }

    fn same_domain(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.domain == other.domain {
            Ok(())
        } else {
            Err(AlgebraError::DomainMismatch { left: self.domain, right: other.domain })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_domain(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg_poly())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_domain(other)?;
        let mut out = Self::zero(self.domain);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(add_exp(ea, eb), &ca.times(cb));
            }
        }
        Ok(out)
    }

    fn neg_poly(&self) -> Self {
        Self { domain: self.domain, terms: self.terms.iter().map(|(e, c)| (*e, c.negated())).collect() }
    }

    pub fn scale(&self, s: &R) -> Self {
        Self::from_terms(self.domain, self.terms.iter().map(|(e, c)| (*e, c.times(s))))
    }

    pub fn eval(&self, point: &[R; N]) -> R {
        let mut acc = R::zero_in(&self.domain);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(e.iter()) {
                if *k > 0 {
                    t = t.times(&x.pow(*k));
                }
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Univariate polynomial in variable `var` obtained by fixing every other
    /// variable to the matching entry of `values` (the entry at `var` is ignored).
    pub fn restrict(&self, var: usize, values: &[R; N]) -> UniPoly<R> {
        let mut out = UniPoly::zero(self.domain);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, (x, k)) in values.iter().zip(e.iter()).enumerate() {
                if i != var && *k > 0 {
                    t = t.times(&x.pow(*k));
                }
            }
            out = &out + &UniPoly::monomial(t, e[var]);
        }
        out
    }

    /// Substitutes `value` for variable `var`, keeping the variable slot.
    pub fn substitute(&self, var: usize, value: &R) -> Self {
        let mut out = Self::zero(self.domain);
        for (e, c) in &self.terms {
            let mut exp = *e;
            exp[var] = 0;
            out.add_term(exp, &c.times(&value.pow(e[var])));
        }
        out
    }

    /// Exchanges two variables.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        Self::from_terms(
            self.domain,
            self.terms.iter().map(|(e, c)| {
                let mut exp = *e;
                exp.swap(i, j);
                (exp, c.clone())
            }),
        )
    }

    /// Exact division in lexicographic order.
    ///
    /// When `divisor` divides `self`, the lex-leading term of every partial
    /// remainder is a multiple of the divisor's leading term, so the first
    /// leading term that is not divisible proves inexactness.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        self.same_domain(divisor)?;
        let (lm_d, lc_d) = match divisor.leading_term() {
            Some((e, c)) => (*e, c.clone()),
            None => return Err(AlgebraError::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.domain);
        while let Some((lm_r, lc_r)) = rem.leading_term() {
            let lm_r = *lm_r;
            let Some(shift) = sub_exp(&lm_r, &lm_d) else {
                return Err(AlgebraError::NotDivisible);
            };
            let c = lc_r.checked_div(&lc_d).ok_or(AlgebraError::NonInvertibleLeading)?;
            quot.add_term(shift, &c);
            let step = Self::monomial(c, shift).try_mul(divisor)?;
            rem = rem.try_sub(&step)?;
            rem.terms.remove(&lm_r);
        }
        Ok(quot)
    }

    /// Exact division by `x_a - x_b`, by synthetic division in `x_a` with the
    /// remaining variables as parameters.
    pub fn div_by_difference(&self, a: usize, b: usize) -> Result<Self, AlgebraError> {
        assert!(a != b && a < N && b < N, "need two distinct variables");
        // Group coefficients by the power of x_a.
        let mut slices: BTreeMap<u32, Self> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut exp = *e;
            exp[a] = 0;
            slices.entry(e[a]).or_insert_with(|| Self::zero(self.domain)).add_term(exp, c);
        }
        let Some(&top) = slices.keys().next_back() else {
            return Ok(Self::zero(self.domain));
        };
        let mut quot = Self::zero(self.domain);
        let mut carry = Self::zero(self.domain);
        for d in (0..=top).rev() {
            let slice = slices.remove(&d).unwrap_or_else(|| Self::zero(self.domain));
            let current = slice.try_add(&carry.shift_var(b))?;
            if d == 0 {
                if !current.is_zero() {
                    return Err(AlgebraError::NotDivisible);
                }
                break;
            }
            for (e, c) in &current.terms {
                let mut exp = *e;
                exp[a] = d - 1;
                quot.add_term(exp, c);
            }
            carry = current;
        }
        Ok(quot)
    }

    /// Multiplies by `x_var`.
    fn shift_var(&self, var: usize) -> Self {
        Self {
            domain: self.domain,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut exp = *e;
                    exp[var] += 1;
                    (exp, c.clone())
                })
                .collect(),
        }
    }

    pub fn map_coeffs<S: Ring>(&self, domain: Domain, f: impl Fn(&R) -> S) -> MultiPoly<S, N> {
        MultiPoly::from_terms(domain, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn try_map_coeffs<S: Ring, E>(
        &self,
        domain: Domain,
        f: impl Fn(&R) -> Result<S, E>,
    ) -> Result<MultiPoly<S, N>, E> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((*e, f(c)?));
        }
        Ok(MultiPoly::from_terms(domain, terms))
    }
}

fn add_exp<const N: usize>(a: &[u32; N], b: &[u32; N]) -> [u32; N] {
    let mut out = [0; N];
    for i in 0..N {
        out[i] = a[i] + b[i];
    }
    out
}

fn sub_exp<const N: usize>(a: &[u32; N], b: &[u32; N]) -> Option<[u32; N]> {
    let mut out = [0; N];
    for i in 0..N {
        out[i] = a[i].checked_sub(b[i])?;
    }
    Some(out)
}

impl<R: Ring, const N: usize> fmt::Debug for MultiPoly<R, N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().rev().map(|(e, c)| format!("({c:?})*{e:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<R: Ring, const N: usize> Add for &MultiPoly<R, N> {
    type Output = MultiPoly<R, N>;
    fn add(self, rhs: Self) -> MultiPoly<R, N> {
        self.try_add(rhs).expect("polynomial domain mismatch")
    }
}

impl<R: Ring, const N: usize> Sub for &MultiPoly<R, N> {
    type Output = MultiPoly<R, N>;
    fn sub(self, rhs: Self) -> MultiPoly<R, N> {
        self.try_sub(rhs).expect("polynomial domain mismatch")
    }
}

impl<R: Ring, const N: usize> Mul for &MultiPoly<R, N> {
    type Output = MultiPoly<R, N>;
    fn mul(self, rhs: Self) -> MultiPoly<R, N> {
        self.try_mul(rhs).expect("polynomial domain mismatch")
    }
}

impl<R: Ring, const N: usize> Neg for &MultiPoly<R, N> {
    type Output = MultiPoly<R, N>;
    fn neg(self) -> MultiPoly<R, N> {
        self.neg_poly()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type T3 = TriPoly<BigRational>;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn vars() -> (T3, T3, T3) {
        (T3::var(Domain::Rational, 0), T3::var(Domain::Rational, 1), T3::var(Domain::Rational, 2))
    }

    fn power(p: &T3, e: u32) -> T3 {
        let mut acc = T3::constant(q(1));
        for _ in 0..e {
            acc = &acc * p;
        }
        acc
    }

    fn numerator(k: u32) -> T3 {
        let (x, y, z) = vars();
        let s = &(&x + &y) - &z;
        &(&(&power(&s, k) - &power(&x, k)) - &power(&y, k)) + &power(&z, k)
    }

    fn divisor() -> T3 {
        let (x, y, z) = vars();
        &(&x - &z) * &(&y - &z)
    }

    #[test]
    fn cubic_numerator_expands_to_product() {
        let (x, y, _) = vars();
        let psi = (&x + &y).scale(&q(3));
        assert_eq!(&divisor() * &psi, numerator(3));
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(numerator(2).exact_divide(&divisor()).unwrap(), T3::constant(q(2)));
        let (x, y, _) = vars();
        assert_eq!(numerator(3).exact_divide(&divisor()).unwrap(), (&x + &y).scale(&q(3)));
        assert!(T3::zero(Domain::Rational).exact_divide(&divisor()).unwrap().is_zero());
        let (x, _, _) = vars();
        assert!(matches!(x.exact_divide(&divisor()), Err(AlgebraError::NotDivisible)));
        assert!(matches!(x.exact_divide(&T3::zero(Domain::Rational)), Err(AlgebraError::DivisionByZero)));
    }

    #[test]
    fn difference_division_matches_general_division() {
        let n = numerator(5);
        let a = n.div_by_difference(0, 2).unwrap().div_by_difference(1, 2).unwrap();
        let b = n.exact_divide(&divisor()).unwrap();
        assert_eq!(a, b);
        let (x, _, _) = vars();
        assert!(matches!(x.div_by_difference(0, 2), Err(AlgebraError::NotDivisible)));
    }

    #[test]
    fn restriction_and_substitution() {
        let (x, y, z) = vars();
        let p = &(&(&x * &y) + &z) + &T3::constant(q(1));
        let fiber = p.restrict(1, &[q(2), q(0), q(5)]);
        assert_eq!(fiber.dense(), vec![q(6), q(2)]);
        assert_eq!(p.substitute(2, &q(3)).eval(&[q(1), q(1), q(100)]), q(5));
        assert_eq!(p.swap_vars(0, 2).coeff(&[0, 1, 1]), q(1));
    }
}

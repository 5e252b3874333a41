use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::multivariate::MultiPoly;
use super::ring::{Domain, Ring};
use super::AlgebraError;

/// Sparse univariate polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct UniPoly<R: Ring> {
    domain: Domain,
    terms: BTreeMap<u32, R>,
}

impl<R: Ring> UniPoly<R> {
    pub fn zero(domain: Domain) -> Self {
        Self { domain, terms: BTreeMap::new() }
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: R, exp: u32) -> Self {
        let mut p = Self::zero(c.domain());
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// The polynomial `X`.
    pub fn x(domain: Domain) -> Self {
        Self::monomial(R::one_in(&domain), 1)
    }

    /// Dense coefficients, lowest degree first.
    pub fn from_coeffs(domain: Domain, coeffs: &[R]) -> Self {
        Self::from_terms(domain, coeffs.iter().cloned().enumerate().map(|(e, c)| (e as u32, c)))
    }

    pub fn from_terms(domain: Domain, terms: impl IntoIterator<Item = (u32, R)>) -> Self {
        let mut p = Self::zero(domain);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, exp: u32, c: &R) {
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

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&R> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, exp: u32) -> R {
        self.terms.get(&exp).cloned().unwrap_or_else(|| R::zero_in(&self.domain))
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &R)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Dense coefficient vector of length `degree + 1` (empty for zero).
    pub fn dense(&self) -> Vec<R> {
        match self.degree() {
            None => Vec::new(),
            Some(d) => (0..=d).map(|e| self.coeff(e)).collect(),
        }
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
                out.add_term(ea + eb, &ca.times(cb));
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

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> R {
        let Some(deg) = self.degree() else {
            return R::zero_in(&self.domain);
        };
        let mut acc = R::zero_in(&self.domain);
        for e in (0..=deg).rev() {
            acc = acc.times(x);
            if let Some(c) = self.terms.get(&e) {
                acc = acc.plus(c);
            }
        }
        acc
    }

    /// Formal derivative of the given order: the coefficient of `X^i` in
    /// `∂p` is `(i+1) a_{i+1}`.
    pub fn derivative(&self, order: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..order {
            out = Self::from_terms(
                out.domain,
                out.terms.iter().filter(|(e, _)| **e > 0).map(|(e, c)| (e - 1, c.times_int(*e as i64))),
            );
        }
        out
    }

    /// Substitutes the multivariate polynomial `inner` for `X`.
    pub fn compose_multi<const N: usize>(&self, inner: &MultiPoly<R, N>) -> Result<MultiPoly<R, N>, AlgebraError> {
        if inner.domain() != self.domain {
            return Err(AlgebraError::DomainMismatch { left: self.domain, right: inner.domain() });
        }
        let Some(deg) = self.degree() else {
            return Ok(MultiPoly::zero(self.domain));
        };
        let mut acc = MultiPoly::zero(self.domain);
        for e in (0..=deg).rev() {
            acc = acc.try_mul(inner)?;
            if let Some(c) = self.terms.get(&e) {
                acc = acc.try_add(&MultiPoly::constant(c.clone()))?;
            }
        }
        Ok(acc)
    }

    /// The polynomial `p(X_var)` viewed in `N` variables.
    pub fn lift_to<const N: usize>(&self, var: usize) -> MultiPoly<R, N> {
        MultiPoly::from_terms(
            self.domain,
            self.terms.iter().map(|(e, c)| {
                let mut exp = [0u32; N];
                exp[var] = *e;
                (exp, c.clone())
            }),
        )
    }

    /// Long division by a divisor with invertible leading coefficient.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), AlgebraError> {
        self.same_domain(divisor)?;
        let (dd, lc) = match (divisor.degree(), divisor.leading_coeff()) {
            (Some(d), Some(c)) => (d, c.clone()),
            _ => return Err(AlgebraError::DivisionByZero),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.domain);
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading_coeff().expect("nonzero").checked_div(&lc).ok_or(AlgebraError::NonInvertibleLeading)?;
            quot.add_term(rd - dd, &c);
            rem = rem.try_sub(&Self::monomial(c, rd - dd).try_mul(divisor)?)?;
            // Exact domains cancel the leading term; floats may leave rounding residue.
            rem.terms.remove(&rd);
        }
        Ok((quot, rem))
    }

    /// Converts coefficients into another ring.
    pub fn map_coeffs<S: Ring>(&self, domain: Domain, f: impl Fn(&R) -> S) -> UniPoly<S> {
        UniPoly::from_terms(domain, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn try_map_coeffs<S: Ring, E>(
        &self,
        domain: Domain,
        f: impl Fn(&R) -> Result<S, E>,
    ) -> Result<UniPoly<S>, E> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            terms.push((*e, f(c)?));
        }
        Ok(UniPoly::from_terms(domain, terms))
    }
}

impl<R: Ring> fmt::Debug for UniPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| match e {
                0 => format!("({c:?})"),
                1 => format!("({c:?})*X"),
                _ => format!("({c:?})*X^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Readable form such as `2x^3 - 1/2x + 1`.
impl fmt::Display for UniPoly<num_rational::BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::{One, Signed};
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = mag.is_one();
            if !unit || *e == 0 {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

// Operator sugar; these panic on domain mismatch, use the `try_*` forms when
// domains come from user input.
impl<R: Ring> Add for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn add(self, rhs: Self) -> UniPoly<R> {
        self.try_add(rhs).expect("polynomial domain mismatch")
    }
}

impl<R: Ring> Sub for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn sub(self, rhs: Self) -> UniPoly<R> {
        self.try_sub(rhs).expect("polynomial domain mismatch")
    }
}

impl<R: Ring> Mul for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn mul(self, rhs: Self) -> UniPoly<R> {
        self.try_mul(rhs).expect("polynomial domain mismatch")
    }
}

impl<R: Ring> Neg for &UniPoly<R> {
    type Output = UniPoly<R>;
    fn neg(self) -> UniPoly<R> {
        self.neg_poly()
    }
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::ring::{Domain, Ring};
use super::AlgebraError;

/// Largest modulus accepted for residue arithmetic; products fit in `u128`.
pub const MAX_MODULUS: u64 = 1 << 62;

/// An element of Z / p^N Z, read as a truncated element of Z_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    modulus: u64,
    rep: u64,
}

/// `p^n`, or `None` when it exceeds [`MAX_MODULUS`].
pub fn checked_prime_power(p: u64, n: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..n {
        acc = acc.checked_mul(p)?;
        if acc > MAX_MODULUS {
            return None;
        }
    }
    Some(acc)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(base: u64, mut e: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base as u128) % m;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

impl PadicInt {
    pub fn new(p: u64, precision: u32, value: i128) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        if precision == 0 {
            return Err(AlgebraError::BadPrecision(precision));
        }
        let modulus =
            checked_prime_power(p, precision).ok_or(AlgebraError::ModulusTooLarge { p, n: precision })?;
        Ok(Self { p, precision, modulus, rep: value.rem_euclid(modulus as i128) as u64 })
    }

    pub fn from_bigint(p: u64, precision: u32, value: &BigInt) -> Result<Self, AlgebraError> {
        let zero = Self::new(p, precision, 0)?;
        let r = value.mod_floor(&BigInt::from(zero.modulus));
        Ok(Self { rep: r.to_u64().expect("reduced residue fits u64"), ..zero })
    }

    /// Reduction of a p-integral rational; fails when p divides the denominator.
    pub fn from_rational(p: u64, precision: u32, q: &BigRational) -> Result<Self, AlgebraError> {
        let num = Self::from_bigint(p, precision, q.numer())?;
        let den = Self::from_bigint(p, precision, q.denom())?;
        num.checked_div(&den).ok_or(AlgebraError::NotPIntegral { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rep(&self) -> u64 {
        self.rep
    }

    /// Signed representative in (-p^N/2, p^N/2].
    pub fn centered(&self) -> i128 {
        let r = self.rep as i128;
        let m = self.modulus as i128;
        if 2 * r > m {
            r - m
        } else {
            r
        }
    }

    fn with_rep(&self, rep: u64) -> Self {
        Self { rep, ..*self }
    }

    /// p-adic valuation of the representative, capped at the precision.
    pub fn valuation(&self) -> u32 {
        if self.rep == 0 {
            return self.precision;
        }
        let mut v = 0;
        let mut r = self.rep;
        while r % self.p == 0 {
            r /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self) -> bool {
        self.rep % self.p != 0
    }

    pub fn inverse(&self) -> Option<Self> {
        mod_inverse(self.rep, self.modulus).map(|r| self.with_rep(r))
    }

    /// Reduction to a lower precision.
    pub fn truncate(&self, precision: u32) -> Self {
        let precision = precision.clamp(1, self.precision);
        let modulus = checked_prime_power(self.p, precision).expect("smaller than current modulus");
        Self { precision, modulus, rep: self.rep % modulus, ..*self }
    }

    /// Re-embedding at a higher precision, keeping the same representative.
    pub fn extend(&self, precision: u32) -> Result<Self, AlgebraError> {
        Self::new(self.p, precision.max(self.precision), self.rep as i128)
    }

    fn check(&self, rhs: &Self) {
        assert!(
            self.p == rhs.p && self.precision == rhs.precision,
            "residue domain mismatch: Z/{}^{} vs Z/{}^{}",
            self.p,
            self.precision,
            rhs.p,
            rhs.precision
        );
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.rep, self.p, self.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Ring for PadicInt {
    fn domain(&self) -> Domain {
        Domain::ModPrimePower { p: self.p, n: self.precision }
    }

    fn zero_in(domain: &Domain) -> Self {
        Self::from_i64_in(0, domain)
    }

    fn one_in(domain: &Domain) -> Self {
        Self::from_i64_in(1, domain)
    }

    fn from_i64_in(n: i64, domain: &Domain) -> Self {
        match domain {
            Domain::ModPrimePower { p, n: prec } => {
                Self::new(*p, *prec, n as i128).expect("domain tag holds a valid prime power")
            }
            other => panic!("PadicInt cannot live in domain {other}"),
        }
    }

    fn is_zero(&self) -> bool {
        self.rep == 0
    }

    fn plus(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let s = (self.rep as u128 + rhs.rep as u128) % self.modulus as u128;
        self.with_rep(s as u64)
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let s = (self.rep as u128 + self.modulus as u128 - rhs.rep as u128) % self.modulus as u128;
        self.with_rep(s as u64)
    }

    fn times(&self, rhs: &Self) -> Self {
        self.check(rhs);
        let s = (self.rep as u128 * rhs.rep as u128) % self.modulus as u128;
        self.with_rep(s as u64)
    }

    fn negated(&self) -> Self {
        self.with_rep((self.modulus - self.rep) % self.modulus)
    }

    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        self.check(rhs);
        rhs.inverse().map(|inv| self.times(&inv))
    }
}

/// Exact p-adic valuation of a nonzero integer.
pub fn valuation_of(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// Exact p-adic valuation of a nonzero rational (may be negative).
pub fn rational_valuation(q: &BigRational, p: u64) -> Option<i64> {
    let vn = valuation_of(q.numer(), p)? as i64;
    let vd = valuation_of(q.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_two_mod_125() {
        let two = PadicInt::new(5, 3, 2).unwrap();
        let inv = two.inverse().unwrap();
        assert_eq!(inv.rep(), 63);
        assert_eq!(two.times(&inv).rep(), 1);
    }

    #[test]
    fn valuation_caps_at_precision() {
        let x = PadicInt::new(3, 4, 81).unwrap();
        assert_eq!(x.rep(), 0);
        assert_eq!(x.valuation(), 4);
        assert_eq!(PadicInt::new(3, 4, 18).unwrap().valuation(), 2);
    }

    #[test]
    fn rejects_composite_and_oversized() {
        assert!(matches!(PadicInt::new(6, 2, 1), Err(AlgebraError::NotPrime(6))));
        assert!(matches!(PadicInt::new(101, 40, 1), Err(AlgebraError::ModulusTooLarge { .. })));
    }

    #[test]
    fn rational_reduction() {
        let half = BigRational::new(1.into(), 2.into());
        let x = PadicInt::from_rational(5, 3, &half).unwrap();
        assert_eq!(x.rep(), 63);
        let third = BigRational::new(1.into(), 3.into());
        assert!(PadicInt::from_rational(3, 2, &third).is_err());
    }

    #[test]
    fn rational_valuations() {
        let q = BigRational::new(18.into(), 5.into());
        assert_eq!(rational_valuation(&q, 3), Some(2));
        assert_eq!(rational_valuation(&q, 5), Some(-1));
        assert_eq!(rational_valuation(&BigRational::zero(), 5), None);
    }
}

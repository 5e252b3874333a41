use std::fmt;

use serde::{Deserialize, Serialize};

use super::PadicError;
use crate::algebra::{checked_prime_power, is_prime, mod_inverse, AlgebraError, PadicInt};

/// An element `p^v · u` of Q_p with `u` a unit known modulo `p^precision`
/// (relative precision), or an exact zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PadicNumber {
    p: u64,
    precision: u32,
    valuation: i64,
    unit: u64,
    zero: bool,
}

impl PadicNumber {
    pub fn zero(p: u64, precision: u32) -> Self {
        Self { p, precision, valuation: 0, unit: 0, zero: true }
    }

    /// `value` with `precision` digits of relative precision.
    pub fn from_integer(p: u64, precision: u32, value: i128) -> Result<Self, PadicError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p).into());
        }
        if precision == 0 {
            return Err(AlgebraError::BadPrecision(precision).into());
        }
        if value == 0 {
            return Ok(Self::zero(p, precision));
        }
        let mut v = 0;
        let mut u = value;
        while u % p as i128 == 0 {
            u /= p as i128;
            v += 1;
        }
        Self::from_unit(p, precision, v, u)
    }

    fn from_unit(p: u64, precision: u32, valuation: i64, unit: i128) -> Result<Self, PadicError> {
        let m = checked_prime_power(p, precision).ok_or(AlgebraError::ModulusTooLarge { p, n: precision })?;
        Ok(Self { p, precision, valuation, unit: unit.rem_euclid(m as i128) as u64, zero: false })
    }

    /// Interprets a residue mod `p^N` as a number with absolute precision `N`.
    pub fn from_padic_int(x: &PadicInt) -> Result<Self, PadicError> {
        if x.rep() == 0 {
            return Err(PadicError::PrecisionExhausted);
        }
        let v = x.valuation();
        let unit = x.rep() / checked_prime_power(x.prime(), v).expect("below modulus");
        Self::from_unit(x.prime(), x.precision() - v, v as i64, unit as i128)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.zero).then_some(self.valuation)
    }

    pub fn relative_precision(&self) -> u32 {
        self.precision
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    /// `|x|_p = p^{-v}`.
    pub fn abs(&self) -> f64 {
        if self.zero {
            0.0
        } else {
            (self.p as f64).powi(-(self.valuation as i32))
        }
    }

    fn modulus(&self) -> u64 {
        checked_prime_power(self.p, self.precision).expect("validated at construction")
    }

    fn same_prime(&self, other: &Self) -> Result<(), PadicError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(PadicError::PrimeMismatch(self.p, other.p))
        }
    }

    pub fn neg(&self) -> Self {
        if self.zero {
            return *self;
        }
        let m = self.modulus();
        Self { unit: (m - self.unit) % m, ..*self }
    }

    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        self.same_prime(other)?;
        if self.zero {
            return Ok(*other);
        }
        if other.zero {
            return Ok(*self);
        }
        let p = self.p;
        let v = self.valuation.min(other.valuation);
        // Both operands are known modulo p^{absolute precision}.
        let abs_a = self.valuation + self.precision as i64;
        let abs_b = other.valuation + other.precision as i64;
        let digits = (abs_a.min(abs_b) - v) as u32;
        let m = checked_prime_power(p, digits).ok_or(AlgebraError::ModulusTooLarge { p, n: digits })? as u128;
        let shift = |x: &Self| -> u128 {
            let s = checked_prime_power(p, (x.valuation - v) as u32).unwrap_or(0) as u128;
            (x.unit as u128 % m) * (s % m) % m
        };
        let s = (shift(self) + shift(other)) % m;
        if s == 0 {
            return Err(PadicError::PrecisionExhausted);
        }
        let mut w = 0u32;
        let mut u = s;
        while u % p as u128 == 0 {
            u /= p as u128;
            w += 1;
        }
        Self::from_unit(p, digits - w, v + w as i64, u as i128)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.same_prime(other)?;
        let precision = self.precision.min(other.precision);
        if self.zero || other.zero {
            return Ok(Self::zero(self.p, precision));
        }
        let m = checked_prime_power(self.p, precision).expect("validated") as u128;
        let u = (self.unit as u128 % m) * (other.unit as u128 % m) % m;
        Self::from_unit(self.p, precision, self.valuation + other.valuation, u as i128)
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.zero {
            return Err(PadicError::DivisionByZero);
        }
        let u = mod_inverse(self.unit, self.modulus()).expect("unit part is invertible");
        Self::from_unit(self.p, self.precision, -self.valuation, u as i128)
    }

    pub fn div(&self, other: &Self) -> Result<Self, PadicError> {
        self.mul(&other.inv()?)
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            write!(f, "0 (Q_{})", self.p)
        } else {
            write!(f, "{}^{} * ({} mod {}^{})", self.p, self.valuation, self.unit, self.p, self.precision)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_plus_two_in_q3() {
        let a = PadicNumber::from_padic_int(&PadicInt::new(3, 4, 1).unwrap()).unwrap();
        let b = PadicNumber::from_padic_int(&PadicInt::new(3, 4, 2).unwrap()).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.valuation(), Some(1));
        assert_eq!(s.unit(), 1);
        assert_eq!(s.relative_precision(), 3);
    }

    #[test]
    fn inverse_of_two_mod_125() {
        let two = PadicNumber::from_integer(5, 3, 2).unwrap();
        let inv = two.inv().unwrap();
        assert_eq!(inv.unit(), 63);
        assert_eq!(inv.valuation(), Some(0));
        assert!(matches!(PadicNumber::zero(5, 3).inv(), Err(PadicError::DivisionByZero)));
    }

    #[test]
    fn valuations() {
        let x = PadicNumber::from_integer(7, 4, 7 * 3).unwrap();
        assert_eq!(x.valuation(), Some(1));
        assert_eq!(x.inv().unwrap().valuation(), Some(-1));
        assert!((x.abs() - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn cancellation_is_reported() {
        let a = PadicNumber::from_integer(3, 2, 1).unwrap();
        let b = PadicNumber::from_integer(3, 2, 8).unwrap();
        assert!(matches!(a.add(&b), Err(PadicError::PrecisionExhausted)));
        let c = PadicNumber::from_integer(3, 2, 2).unwrap();
        let d = a.sub(&c).unwrap();
        assert_eq!(d.valuation(), Some(0));
        assert_eq!(d.unit(), 8);
    }
}

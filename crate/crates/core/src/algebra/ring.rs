use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficient domain tag carried by every polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Rational,
    /// The residue ring Z / p^n Z.
    ModPrimePower { p: u64, n: u32 },
    ComplexFloat,
}

impl Domain {
    pub fn characteristic(&self) -> u64 {
        match self {
            Domain::ModPrimePower { p, .. } => *p,
            _ => 0,
        }
    }

    /// Whether arithmetic in this domain is exact.
    pub fn is_exact(&self) -> bool {
        !matches!(self, Domain::ComplexFloat)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Rational => write!(f, "Q"),
            Domain::ModPrimePower { p, n } => write!(f, "Z/{p}^{n}"),
            Domain::ComplexFloat => write!(f, "C(f64)"),
        }
    }
}

/// A commutative ring with identity whose elements know their own domain.
///
/// Method names avoid clashing with `std::ops` so that `BigRational` and
/// `Complex` values can use both without ambiguity.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn domain(&self) -> Domain;
    fn zero_in(domain: &Domain) -> Self;
    fn one_in(domain: &Domain) -> Self;
    fn from_i64_in(n: i64, domain: &Domain) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Division when `rhs` is invertible, `None` otherwise.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;

    fn times_int(&self, n: i64) -> Self {
        self.times(&Self::from_i64_in(n, &self.domain()))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_in(&self.domain());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl Ring for BigRational {
    fn domain(&self) -> Domain {
        Domain::Rational
    }
    fn zero_in(_: &Domain) -> Self {
        BigRational::zero()
    }
    fn one_in(_: &Domain) -> Self {
        BigRational::one()
    }
    fn from_i64_in(n: i64, _: &Domain) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl<T> Ring for Complex<T>
where
    T: Float + fmt::Debug + Send + Sync + 'static,
{
    fn domain(&self) -> Domain {
        Domain::ComplexFloat
    }
    fn zero_in(_: &Domain) -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn one_in(_: &Domain) -> Self {
        Complex::new(T::one(), T::zero())
    }
    fn from_i64_in(n: i64, _: &Domain) -> Self {
        Complex::new(T::from(n).expect("integer fits the float type"), T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        *self - *rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn negated(&self) -> Self {
        -*self
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if Ring::is_zero(rhs) {
            None
        } else {
            Some(*self / *rhs)
        }
    }
}

/// Conversion of an exact rational into a floating scalar.
pub fn rational_to_float<T: Float>(q: &BigRational) -> T {
    // Scale down huge numerators/denominators together so the division stays finite.
    let num = q.numer();
    let den = q.denom();
    match (num.to_f64(), den.to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => {
            T::from(n / d).unwrap_or_else(T::nan)
        }
        _ => {
            let shift = num.bits().max(den.bits()).saturating_sub(900);
            let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
            T::from(n / d).unwrap_or_else(T::nan)
        }
    }
}

/// Exact rational from a finite float.
pub fn float_to_rational<T: Float>(x: T) -> Option<BigRational> {
    BigRational::from_float(x.to_f64()?)
}

/// True when `q` is an integer.
pub fn is_integral(q: &BigRational) -> bool {
    q.denom().is_one()
}

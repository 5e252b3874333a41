use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Self { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&BigRational::zero())
    }

    /// Whether the interval meets `[-r, r]`.
    pub fn meets_radius(&self, r: &BigRational) -> bool {
        self.lo <= *r && self.hi >= -r.clone()
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    /// Exact range of `x^e` over the interval.
    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::point(BigRational::one());
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 {
            return Self::new(a, b);
        }
        if self.lo.is_negative() && self.hi.is_positive() {
            Self::new(BigRational::zero(), a.max(b))
        } else if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn abs_max(&self) -> BigRational {
        self.lo.abs().max(self.hi.abs())
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: Self) -> Interval {
        Interval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: Self) -> Interval {
        Interval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: Self) -> Interval {
        let c = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = c.iter().min().expect("nonempty").clone();
        let hi = c.iter().max().expect("nonempty").clone();
        Interval::new(lo, hi)
    }
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn real(x: BigRational) -> Self {
        Self { re: Interval::point(x), im: Interval::zero() }
    }
}

impl Add for &ComplexInterval {
    type Output = ComplexInterval;
    fn add(self, rhs: Self) -> ComplexInterval {
        ComplexInterval { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &ComplexInterval {
    type Output = ComplexInterval;
    fn sub(self, rhs: Self) -> ComplexInterval {
        ComplexInterval { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &ComplexInterval {
    type Output = ComplexInterval;
    fn mul(self, rhs: Self) -> ComplexInterval {
        ComplexInterval {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

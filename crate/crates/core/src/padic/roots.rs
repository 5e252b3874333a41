use num_rational::BigRational;

use super::PadicError;
use crate::algebra::{is_prime, mod_pow, AlgebraError, Domain, PadicInt, Ring, UniPoly};

/// Coefficient-wise reduction of a p-integral rational polynomial into Z/p^N.
pub fn reduce_poly(f: &UniPoly<BigRational>, p: u64, precision: u32) -> Result<UniPoly<PadicInt>, PadicError> {
    // Validates p and N even for the zero polynomial.
    PadicInt::new(p, precision, 0)?;
    let domain = Domain::ModPrimePower { p, n: precision };
    Ok(f.try_map_coeffs(domain, |c| PadicInt::from_rational(p, precision, c))?)
}

fn prime_of(f: &UniPoly<PadicInt>) -> Result<u64, PadicError> {
    match f.domain() {
        Domain::ModPrimePower { p, .. } => Ok(p),
        other => Err(AlgebraError::DomainMismatch { left: other, right: Domain::ModPrimePower { p: 0, n: 0 } }.into()),
    }
}

fn mod_p(f: &UniPoly<PadicInt>) -> Result<UniPoly<PadicInt>, PadicError> {
    let p = prime_of(f)?;
    let g = f.map_coeffs(Domain::ModPrimePower { p, n: 1 }, |c| c.truncate(1));
    if g.is_zero() {
        Err(PadicError::ZeroPolynomial)
    } else {
        Ok(g)
    }
}

/// Every residue `r` in `[0, p)` with `f(r) ≡ 0 mod p`, ascending.
pub fn roots_mod_p(f: &UniPoly<PadicInt>) -> Result<Vec<u64>, PadicError> {
    let g = mod_p(f)?;
    let p = prime_of(f)?;
    let d = g.domain();
    Ok((0..p).filter(|r| g.eval(&PadicInt::from_i64_in(*r as i64, &d)).is_zero()).collect())
}

/// Roots mod p split into simple and multiple ones.
pub fn simple_roots_mod_p(f: &UniPoly<PadicInt>) -> Result<(Vec<u64>, Vec<u64>), PadicError> {
    let g = mod_p(f)?;
    let dg = g.derivative(1);
    let d = g.domain();
    Ok(roots_mod_p(f)?.into_iter().partition(|r| !dg.eval(&PadicInt::from_i64_in(*r as i64, &d)).is_zero()))
}

/// Newton lifting of a simple root `r` of `f` mod p to a root mod p^N, where
/// N is the precision of `f`'s coefficient ring.
pub fn hensel_lift_residue(f: &UniPoly<PadicInt>, r: u64) -> Result<PadicInt, PadicError> {
    let p = prime_of(f)?;
    let domain = f.domain();
    let Domain::ModPrimePower { n: precision, .. } = domain else { unreachable!() };
    let r = r % p;
    let mut x = PadicInt::from_i64_in(r as i64, &domain);
    if f.eval(&x).rep() % p != 0 {
        return Err(PadicError::NotARoot { r, p });
    }
    let df = f.derivative(1);
    if df.eval(&x).rep() % p == 0 {
        return Err(PadicError::NotSimpleRoot { r, p });
    }
    // Correct digits double each step; the extra iterations only guard rounding of the bound.
    for _ in 0..=precision.next_power_of_two().trailing_zeros() + 1 {
        let fx = f.eval(&x);
        if fx.is_zero() {
            break;
        }
        let step = fx.checked_div(&df.eval(&x)).expect("derivative stays a unit along the lift");
        x = x.minus(&step);
    }
    debug_assert!(f.eval(&x).is_zero());
    Ok(x)
}

/// Lifts a simple root mod p of a p-integral rational polynomial to Z/p^N.
pub fn hensel_lift(f: &UniPoly<BigRational>, r: u64, p: u64, precision: u32) -> Result<PadicInt, PadicError> {
    hensel_lift_residue(&reduce_poly(f, p, precision)?, r)
}

/// Whether `a` is a d-th power mod p, by Euler's criterion `a^{(p-1)/d} ≡ 1`.
pub fn is_dth_power_residue(a: i64, d: u64, p: u64) -> Result<bool, PadicError> {
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p).into());
    }
    if d == 0 || (p - 1) % d != 0 {
        return Err(PadicError::BadModulus { d, p });
    }
    let a_mod = a.rem_euclid(p as i64) as u64;
    if a_mod == 0 {
        return Err(PadicError::NotAUnit { a, p });
    }
    Ok(mod_pow(a_mod, (p - 1) / d, p) == 1)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest generator of (Z/pZ)^×.
pub fn primitive_root(p: u64) -> Result<u64, PadicError> {
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p).into());
    }
    if p == 2 {
        return Ok(1);
    }
    let factors = prime_factors(p - 1);
    Ok((2..p).find(|g| factors.iter().all(|q| mod_pow(*g, (p - 1) / q, p) != 1)).expect("cyclic group has a generator"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn red(s: &str, p: u64, n: u32) -> UniPoly<PadicInt> {
        reduce_poly(&parse_poly(s).unwrap(), p, n).unwrap()
    }

    #[test]
    fn roots_examples() {
        assert_eq!(roots_mod_p(&red("y^2 - 1", 5, 1)).unwrap(), vec![1, 4]);
        assert!(roots_mod_p(&red("y^2 - 2", 5, 1)).unwrap().is_empty());
        assert_eq!(roots_mod_p(&red("y - 3", 7, 1)).unwrap(), vec![3]);
        assert!(matches!(roots_mod_p(&red("5y^2 + 10", 5, 3)), Err(PadicError::ZeroPolynomial)));
        let (simple, multiple) = simple_roots_mod_p(&red("y^2 (y - 1)", 3, 2)).unwrap();
        assert_eq!((simple, multiple), (vec![1], vec![0]));
    }

    #[test]
    fn hensel_examples() {
        let f = parse_poly("y^2 - 1").unwrap();
        assert_eq!(hensel_lift(&f, 4, 5, 3).unwrap().rep(), 124);
        let f = parse_poly("y^2 - 2").unwrap();
        let x = hensel_lift(&f, 3, 7, 3).unwrap();
        assert_eq!(x.rep(), 108);
        assert_eq!((108u64 * 108) % 343, 2);
        let f = parse_poly("y^2").unwrap();
        assert!(matches!(hensel_lift(&f, 0, 5, 3), Err(PadicError::NotSimpleRoot { r: 0, p: 5 })));
        let f = parse_poly("y^2 - 2").unwrap();
        assert!(matches!(hensel_lift(&f, 1, 7, 3), Err(PadicError::NotARoot { .. })));
        let f = parse_poly("y/3 - 1").unwrap();
        assert!(matches!(hensel_lift(&f, 0, 3, 2), Err(PadicError::Algebra(AlgebraError::NotPIntegral { p: 3 }))));
    }

    #[test]
    fn residue_examples() {
        assert!(!is_dth_power_residue(3, 2, 5).unwrap());
        assert!(is_dth_power_residue(3, 2, 13).unwrap());
        assert!(is_dth_power_residue(1, 3, 7).unwrap());
        assert!(matches!(is_dth_power_residue(2, 3, 5), Err(PadicError::BadModulus { d: 3, p: 5 })));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(41).unwrap(), 6);
    }
}

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cells::PartitionSpec;
use super::PartitionError;
use crate::algebra::{float_to_rational, rational_to_float, rational_valuation, valuation_of, UniPoly};
use crate::numerics::{durand_kerner, eval_complex_poly};
use crate::sod::{fiber_of, CurveSpec, Field};

/// Output of [`estimate_c_phi`]: `c = min_fiber / m_phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct CEstimate {
    pub c: BigRational,
    /// Smallest sampled value of the rootless factor.
    pub min_fiber: BigRational,
    /// Coefficient bound used as the normalizing constant.
    pub m_phi: BigRational,
    /// Set when the sampled minimum is not backed by a Lipschitz certificate.
    pub heuristic: bool,
    pub samples: usize,
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn grid(density: usize) -> Vec<BigRational> {
    let n = density.max(2);
    (0..n).map(|i| q(-1, 2) + q(i as i64, (n - 1) as i64)).collect()
}

/// `1 + Σ j |a_j| (3/2)^{j−1}`.
fn archimedean_m_phi(curve: &CurveSpec) -> BigRational {
    let mut m = BigRational::one();
    for (e, c) in curve.phi().terms() {
        if e > 0 {
            m += c.abs() * BigRational::from_integer(e.into()) * num_traits::pow(q(3, 2), e as usize - 1);
        }
    }
    m
}

/// Smallest value of `|P|` on the grid together with a certified lower bound
/// over the whole segment, where `P` keeps the non-real roots of the fiber.
fn real_fiber_minimum(fiber: &UniPoly<BigRational>, t2: &[f64], h: f64) -> (f64, f64, bool) {
    let coeffs: Vec<Complex64> = fiber.dense().iter().map(|c| Complex64::new(rational_to_float(c), 0.0)).collect();
    let lc = *coeffs.last().expect("nonzero fiber");
    let roots = durand_kerner(&coeffs);
    let mut clustered = false;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            if (a - b).norm() < 1e-6 {
                clustered = true;
            }
        }
    }
    let mut p = vec![lc];
    for r in roots.iter().filter(|r| r.im.abs() > 1e-8 * (1.0 + r.norm())) {
        p = crate::numerics::mul_linear(&p, *r);
    }
    let sampled = t2.iter().map(|t| eval_complex_poly(&p, Complex64::new(*t, 0.0)).norm()).fold(f64::INFINITY, f64::min);
    let lipschitz: f64 = p.iter().enumerate().skip(1).map(|(j, c)| j as f64 * c.norm() * 0.5f64.powi(j as i32 - 1)).sum();
    (sampled, sampled - 0.5 * h * lipschitz, clustered)
}

/// Integer polynomial scaled from `f`, with the valuation of the scaling factor.
fn integral_scaled(f: &UniPoly<BigRational>, p: u64) -> (Vec<BigInt>, i64) {
    let dense = f.dense();
    let den = dense.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = dense.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    (ints, valuation_of(&den, p).map_or(0, i64::from))
}

fn content_valuation(h: &[BigInt], p: u64) -> Option<u32> {
    h.iter().filter_map(|c| valuation_of(c, p)).min()
}

/// `h(r + pZ)` by Horner with the linear polynomial `r + pZ`.
fn shift(h: &[BigInt], r: u64, p: u64) -> Vec<BigInt> {
    let (r, p) = (BigInt::from(r), BigInt::from(p));
    let mut acc: Vec<BigInt> = Vec::new();
    for c in h.iter().rev() {
        let mut next = vec![BigInt::zero(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i] += a * &r;
            next[i + 1] += a * &p;
        }
        next[0] += c;
        acc = next;
    }
    acc
}

/// Multiplicity of `r` as a root of `h` mod p.
fn multiplicity_mod_p(h: &[BigInt], r: u64, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut g: Vec<BigInt> = h.iter().map(|c| c.mod_floor(&pb)).collect();
    let mut mult = 0;
    loop {
        while g.last().is_some_and(|c| c.is_zero()) {
            g.pop();
        }
        if g.len() <= 1 {
            return mult;
        }
        let value = g.iter().rev().fold(BigInt::zero(), |acc, c| (acc * r + c).mod_floor(&pb));
        if !value.is_zero() {
            return mult;
        }
        // Synthetic division by (Z − r).
        let mut q = vec![BigInt::zero(); g.len() - 1];
        let mut carry = BigInt::zero();
        for i in (1..g.len()).rev() {
            carry = (&carry * r + &g[i]).mod_floor(&pb);
            q[i - 1] = carry.clone();
        }
        g = q;
        mult += 1;
    }
}

struct Ball {
    center: BigInt,
    level: u32,
    /// `v(f)` on the ball, minus the contribution of a root inside it.
    value: i64,
    root_multiplicity: usize,
}

const TREE_DEPTH: u32 = 24;

/// Splits Z_p into balls on which the valuation of the fiber is explained by
/// its Z_p-roots; returns the leaves and whether the depth cap was reached.
fn residue_tree(h: Vec<BigInt>, p: u64, center: BigInt, level: u32, offset: i64, out: &mut Vec<Ball>) -> bool {
    let c = content_valuation(&h, p).expect("nonzero polynomial") as i64;
    let pb = BigInt::from(p);
    let unit: Vec<BigInt> = h.iter().map(|x| x / pb.pow(c as u32)).collect();
    let mut capped = false;
    let step = pb.pow(level);
    for r in 0..p {
        let child = &center + &step * r;
        match multiplicity_mod_p(&unit, r, p) {
            0 => out.push(Ball { center: child, level: level + 1, value: offset + c, root_multiplicity: 0 }),
            1 => out.push(Ball { center: child, level: level + 1, value: offset + c - level as i64, root_multiplicity: 1 }),
            mu if level + 1 >= TREE_DEPTH => {
                capped = true;
                out.push(Ball { center: child, level: level + 1, value: offset + c - (mu as i64) * level as i64, root_multiplicity: mu });
            }
            _ => capped |= residue_tree(shift(&unit, r, p), p, child, level + 1, offset + c, out),
        }
    }
    capped
}

/// `min |P|_p` over Z_p where `P` is the fiber with its Z_p-roots divided out.
fn padic_fiber_minimum(fiber: &UniPoly<BigRational>, p: u64) -> Result<(BigRational, bool), PartitionError> {
    if fiber.is_zero() {
        return Err(PartitionError::DegenerateFiber);
    }
    let (ints, shift_val) = integral_scaled(fiber, p);
    let mut balls = Vec::new();
    let capped = residue_tree(ints, p, BigInt::zero(), 0, -shift_val, &mut balls);
    let roots: Vec<&Ball> = balls.iter().filter(|b| b.root_multiplicity > 0).collect();
    let worst = balls
        .iter()
        .map(|b| {
            let others: i64 = roots
                .iter()
                .filter(|r| !std::ptr::eq(**r, b))
                .map(|r| {
                    let v = valuation_of(&(&b.center - &r.center), p).unwrap_or(b.level.min(r.level));
                    r.root_multiplicity as i64 * i64::from(v.min(b.level.min(r.level)))
                })
                .sum();
            b.value - others
        })
        .max()
        .expect("p ≥ 2 leaves");
    let pr = BigRational::from_integer(BigInt::from(p));
    let m = if worst >= 0 { BigRational::one() / num_traits::pow(pr, worst as usize) } else { num_traits::pow(pr, (-worst) as usize) };
    Ok((m, capped))
}

/// Grid estimate of the constant in the gap estimate: the infimum of the
/// rootless factor of the fiber of ψ, divided by a bound on φ's coefficients.
pub fn estimate_c_phi(curve: &CurveSpec, spec: &PartitionSpec, density: usize) -> Result<CEstimate, PartitionError> {
    if curve.field() != spec.field {
        return Err(PartitionError::FieldMismatch { curve: curve.field().to_string(), partition: spec.field.to_string() });
    }
    let psi = curve.psi();
    match spec.field {
        Field::Real => {
            let pts = grid(density);
            let t2: Vec<f64> = pts.iter().map(rational_to_float).collect();
            let h = 1.0 / (pts.len() - 1) as f64;
            let mut sampled = f64::INFINITY;
            let mut certified = f64::INFINITY;
            let mut heuristic = false;
            for t1 in &pts {
                for t1p in &pts {
                    let fiber = fiber_of(psi, t1, t1p);
                    if fiber.is_zero() {
                        return Err(PartitionError::DegenerateFiber);
                    }
                    let (s, c, clustered) = real_fiber_minimum(&fiber, &t2, h);
                    sampled = sampled.min(s);
                    certified = certified.min(c);
                    heuristic |= clustered;
                }
            }
            heuristic |= certified <= 0.0;
            let min_fiber = float_to_rational(sampled).filter(|m| m.is_positive()).ok_or(PartitionError::DegenerateFiber)?;
            let m_phi = archimedean_m_phi(curve);
            Ok(CEstimate { c: &min_fiber / &m_phi, min_fiber, m_phi, heuristic, samples: pts.len().pow(2) })
        }
        Field::Complex => {
            // Over ℂ every root is a field root, so the rootless factor is the
            // leading coefficient k·a_k of the fiber.
            let k = curve.degree();
            let lc = curve.phi().coeff(k) * BigRational::from_integer(k.into());
            let min_fiber = lc.abs();
            let m_phi = archimedean_m_phi(curve);
            Ok(CEstimate { c: &min_fiber / &m_phi, min_fiber, m_phi, heuristic: false, samples: 1 })
        }
        Field::Padic { p } => {
            let n = (density.max(1) as u64).min(p * p);
            let mut min_fiber: Option<BigRational> = None;
            let mut heuristic = false;
            for a in 0..n {
                for b in 0..n {
                    let (t1, t1p) = (q(a as i64, 1), q(b as i64, 1));
                    let fiber = fiber_of(psi, &t1, &t1p);
                    if fiber.is_zero() {
                        return Err(PartitionError::DegenerateFiber);
                    }
                    let (m, h) = padic_fiber_minimum(&fiber, p)?;
                    heuristic |= h;
                    min_fiber = Some(match min_fiber {
                        Some(x) if x <= m => x,
                        _ => m,
                    });
                }
            }
            let min_fiber = min_fiber.expect("at least one sample");
            let mut m_phi = BigRational::one();
            for (_, c) in curve.phi().terms() {
                let v = rational_valuation(c, p).expect("stored coefficients are nonzero");
                if v < 0 {
                    let abs = num_traits::pow(BigRational::from_integer(BigInt::from(p)), (-v) as usize);
                    if abs > m_phi {
                        m_phi = abs;
                    }
                }
            }
            Ok(CEstimate { c: &min_fiber / &m_phi, min_fiber, m_phi, heuristic, samples: (n * n) as usize })
        }
    }
}

impl CEstimate {
    pub fn as_f64(&self) -> f64 {
        self.c.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn est(phi: &str, field: Field, r: u64) -> CEstimate {
        let curve = CurveSpec::new(parse_poly(phi).unwrap(), field).unwrap();
        estimate_c_phi(&curve, &PartitionSpec::new(field, r).unwrap(), 9).unwrap()
    }

    #[test]
    fn parabola_fiber_is_two() {
        let e = est("x^2", Field::Real, 8);
        assert_eq!(e.min_fiber, q(2, 1));
        assert_eq!(e.m_phi, q(4, 1));
        assert_eq!(e.c, q(1, 2));
        assert!(!e.heuristic);
    }

    #[test]
    fn cubic_fiber_is_three() {
        let e = est("x^3", Field::Real, 8);
        assert_eq!(e.min_fiber, q(3, 1));
        assert_eq!(e.m_phi, q(31, 4));
        assert!(!e.heuristic);
        let e = est("x^3", Field::Padic { p: 3 }, 9);
        assert_eq!(e.min_fiber, q(1, 3));
        assert_eq!(e.c, q(1, 3));
        assert!(!e.heuristic);
        assert_eq!(est("x^3", Field::Complex, 4).min_fiber, q(3, 1));
    }

    #[test]
    fn quartic_plus_square_is_positive() {
        let e = est("x^4 + x^2", Field::Real, 8);
        assert!(e.c > q(0, 1));
    }

    /// Brute force `min |f(t)| / Π|t − ρ|^μ` over residues mod p^4 avoiding the roots.
    fn brute(f: &UniPoly<BigRational>, roots: &[(i64, usize)], p: u64) -> BigRational {
        let mut worst = i64::MIN;
        for t in 0..p.pow(4) as i64 {
            if roots.iter().any(|(r, _)| (t - r) % p.pow(4) as i64 == 0) {
                continue;
            }
            let mut v = rational_valuation(&f.eval(&q(t, 1)), p).unwrap();
            for (r, mu) in roots {
                v -= *mu as i64 * rational_valuation(&q(t - r, 1), p).unwrap();
            }
            worst = worst.max(v);
        }
        let pr = q(p as i64, 1);
        if worst >= 0 { q(1, 1) / num_traits::pow(pr, worst as usize) } else { num_traits::pow(pr, (-worst) as usize) }
    }

    #[test]
    fn residue_tree_matches_brute_force() {
        let cases: [(&str, Vec<(i64, usize)>); 4] = [
            ("(x - 1)(x - 6)(x^2 + x + 1)", vec![(1, 1), (6, 1)]),
            ("5(x - 1)(x^2 - 5)", vec![(1, 1)]),
            ("(x - 2)^2 (x^2 - 10)/25", vec![(2, 2)]),
            ("x^3 - 125", vec![(5, 1)]),
        ];
        for (f, roots) in cases {
            let f = parse_poly(f).unwrap();
            let (m, _) = padic_fiber_minimum(&f, 5).unwrap();
            assert_eq!(m, brute(&f, &roots, 5), "{f:?}");
        }
    }
}

//! Fourth moments of extension operators over Q_p. On a ball of radius
//! `p^m` every moment is a finite congruence count; character sums give an
//! independent floating-point route to the same numbers.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::algebra::{checked_prime_power, is_prime, rational_valuation, AlgebraError, PadicInt, Ring, UniPoly};
use crate::numerics::pairwise_sum;
use crate::report::VerificationReport;

/// Largest number of counting cells (`p^{2m} · p^{2i}`) accepted by default.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PadicExtensionError {
    #[error("denominator of {0} is not a power of p")]
    BadDenominator(String),
    #[error("scale mismatch: {0}")]
    ScaleMismatch(String),
    #[error("instance needs {needed} counting cells, budget is {budget}")]
    TooLarge { needed: u64, budget: u64 },
    #[error("counting and character sums disagree: {0}")]
    CrossCheckFailed(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `e(x) = exp(−2πi {x})` for `x` with p-power denominator.
pub fn character_eval<T: Float + FloatConst>(x: &BigRational, p: u64) -> Result<Complex<T>, PadicExtensionError> {
    let den = x.denom();
    let v = rational_valuation(&BigRational::from_integer(den.clone()), p).unwrap_or(0);
    let pv = BigInt::from(p).pow(v as u32);
    if &pv != den {
        return Err(PadicExtensionError::BadDenominator(x.to_string()));
    }
    let t = x.numer().mod_floor(den);
    let frac = T::from(t.to_f64().expect("bounded") / den.to_f64().expect("bounded")).expect("float");
    Ok(Complex::from_polar(T::one(), -T::TAU() * frac))
}

#[derive(Clone, Debug, PartialEq)]
pub struct PadicMomentInstance {
    pub p: u64,
    /// Cells have radius `p^{-i}`.
    pub i: u32,
    /// The ball has radius `p^m`.
    pub m: u32,
    pub phi: UniPoly<BigRational>,
    /// Cells (residues mod `p^i`) where `f = 1`; `None` means `f ≡ 1`.
    pub support: Option<Vec<bool>>,
}

impl PadicMomentInstance {
    pub fn new(p: u64, i: u32, m: u32, phi: UniPoly<BigRational>) -> Result<Self, PadicExtensionError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p).into());
        }
        if m == 0 {
            return Err(PadicExtensionError::ScaleMismatch("m must be at least 1".into()));
        }
        if m < i {
            return Err(PadicExtensionError::ScaleMismatch(format!("m = {m} is below i = {i}")));
        }
        checked_prime_power(p, m).ok_or(AlgebraError::ModulusTooLarge { p, n: m })?;
        if phi.degree().unwrap_or(0) < 2 {
            return Err(PadicExtensionError::HypothesisFailed("deg phi must be at least 2".into()));
        }
        // p-integrality of every coefficient.
        for (_, c) in phi.terms() {
            PadicInt::from_rational(p, m, c)?;
        }
        Ok(Self { p, i, m, phi, support: None })
    }

    pub fn with_support(mut self, support: Vec<bool>) -> Result<Self, PadicExtensionError> {
        let cells = self.cells();
        if support.len() as u64 != cells {
            return Err(PadicExtensionError::ScaleMismatch(format!(
                "support lists {} cells, expected {cells}",
                support.len()
            )));
        }
        self.support = Some(support);
        Ok(self)
    }

    pub fn modulus(&self) -> u64 {
        checked_prime_power(self.p, self.m).expect("checked")
    }

    pub fn cells(&self) -> u64 {
        checked_prime_power(self.p, self.i).expect("i <= m")
    }

    fn in_support(&self, n: u64) -> bool {
        match &self.support {
            None => true,
            Some(s) => s[(n % self.cells()) as usize],
        }
    }

    /// `φ(n) mod p^m` for every `n mod p^m`.
    fn phi_table(&self) -> Vec<u64> {
        let q = self.modulus();
        let d = crate::algebra::Domain::ModPrimePower { p: self.p, n: self.m };
        let f = self.phi.map_coeffs(d, |c| PadicInt::from_rational(self.p, self.m, c).expect("p-integral"));
        (0..q).map(|n| f.eval(&PadicInt::from_i64_in(n as i64, &d)).rep()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentCounts {
    /// Quadruples mod `p^m` with `n1+n2 ≡ n1'+n2'` and `φ(n1)+φ(n2) ≡ φ(n1')+φ(n2')`.
    pub n_total: u64,
    /// The subset with `n1 ≡ n1'` and `n2 ≡ n2'` mod `p^i`.
    pub n_paired: u64,
}

/// Exact counts by hashing pairs on `(n1+n2, φ(n1)+φ(n2))` mod `p^m`.
pub fn l4_moments_by_counting(inst: &PadicMomentInstance, budget: u64) -> Result<MomentCounts, PadicExtensionError> {
    let q = inst.modulus();
    let r = inst.cells();
    let needed = q.saturating_mul(q).saturating_mul(r).saturating_mul(r);
    if needed > budget {
        return Err(PadicExtensionError::TooLarge { needed, budget });
    }
    let phi = inst.phi_table();
    let (qs, rs) = (q as usize, r as usize);
    let mut by_key = vec![0u64; qs * qs];
    let mut by_cell_key = vec![0u64; qs * qs * rs * rs];
    for n1 in 0..q {
        if !inst.in_support(n1) {
            continue;
        }
        for n2 in 0..q {
            if !inst.in_support(n2) {
                continue;
            }
            let s = ((n1 + n2) % q) as usize;
            let t = ((phi[n1 as usize] as u128 + phi[n2 as usize] as u128) % q as u128) as usize;
            let key = s * qs + t;
            by_key[key] += 1;
            by_cell_key[(key * rs + (n1 % r) as usize) * rs + (n2 % r) as usize] += 1;
        }
    }
    let sq = |v: &[u64]| v.iter().map(|c| c * c).sum();
    Ok(MomentCounts { n_total: sq(&by_key), n_paired: sq(&by_cell_key) })
}

/// `exp(−2πi t / q)` for `t = 0..q`.
fn unit_roots<T: Float + FloatConst>(q: u64) -> Vec<Complex<T>> {
    let qf = T::from(q).expect("float");
    (0..q).map(|t| Complex::from_polar(T::one(), -T::TAU() * T::from(t).expect("float") / qf)).collect()
}

/// `p^{-m} Σ_{n ≡ ξ mod p^i} f(n) e((n a1 + φ(n) a2) / p^m)`, the extension
/// operator of the cell `ξ + p^i Z_p` at `x = (a1, a2)/p^m`.
pub fn extension_sum<T: Float + FloatConst>(
    inst: &PadicMomentInstance,
    xi: u64,
    a1: u64,
    a2: u64,
) -> Complex<T> {
    let q = inst.modulus();
    let roots = unit_roots::<T>(q);
    extension_sum_with(inst, &inst.phi_table(), &roots, xi, a1, a2)
}

fn extension_sum_with<T: Float>(
    inst: &PadicMomentInstance,
    phi: &[u64],
    roots: &[Complex<T>],
    xi: u64,
    a1: u64,
    a2: u64,
) -> Complex<T> {
    let q = inst.modulus();
    let r = inst.cells();
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut n = xi % r;
    while n < q {
        if inst.in_support(n) {
            let t = ((n as u128 * a1 as u128 + phi[n as usize] as u128 * a2 as u128) % q as u128) as usize;
            acc = acc + roots[t];
        }
        n += r;
    }
    acc / T::from(q).expect("float")
}

/// Fourth moments of `E` and of the square function, summed over the `p^{2m}`
/// cosets of the ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterMoments {
    pub extension_fourth: f64,
    pub square_fourth: f64,
}

pub fn moments_by_characters(inst: &PadicMomentInstance) -> CharacterMoments {
    let q = inst.modulus();
    let r = inst.cells();
    let phi = inst.phi_table();
    let roots = unit_roots::<f64>(q);
    let mut ext = Vec::with_capacity((q * q) as usize);
    let mut sq = Vec::with_capacity((q * q) as usize);
    for a1 in 0..q {
        for a2 in 0..q {
            let cells: Vec<Complex<f64>> = (0..r).map(|xi| extension_sum_with(inst, &phi, &roots, xi, a1, a2)).collect();
            let total: Complex<f64> = cells.iter().sum();
            ext.push(total.norm_sqr().powi(2));
            let s2: f64 = cells.iter().map(|c| c.norm_sqr()).sum();
            sq.push(s2 * s2);
        }
    }
    CharacterMoments { extension_fourth: pairwise_sum(&ext), square_fourth: pairwise_sum(&sq) }
}

/// How the scale offset was chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleChoice {
    pub c: u32,
    pub supplied: bool,
    pub leading_coefficient_unit: bool,
    pub p_exceeds_degree: bool,
}

/// Checks `‖E‖ ≤ (deg φ)^{1/4} ‖S‖` on the ball exactly, with the
/// character-sum route as a cross-check.
pub fn verify_padic_theorem(
    inst: &PadicMomentInstance,
    c: Option<u32>,
    budget: u64,
) -> Result<(MomentCounts, VerificationReport), PadicExtensionError> {
    let k = inst.phi.degree().expect("checked") as u32;
    let lead = inst.phi.leading_coeff().expect("nonzero");
    let unit = rational_valuation(lead, inst.p) == Some(0);
    let scale = match c {
        Some(c) => ScaleChoice { c, supplied: true, leading_coefficient_unit: unit, p_exceeds_degree: inst.p > k as u64 },
        None if unit => ScaleChoice { c: 0, supplied: false, leading_coefficient_unit: true, p_exceeds_degree: inst.p > k as u64 },
        None => {
            return Err(PadicExtensionError::HypothesisFailed(
                "leading coefficient is not a p-adic unit; supply the scale offset c".into(),
            ))
        }
    };
    if inst.m < k * inst.i + scale.c {
        return Err(PadicExtensionError::ScaleMismatch(format!(
            "need m >= deg*i + c = {}, got m = {}",
            k * inst.i + scale.c,
            inst.m
        )));
    }
    let counts = l4_moments_by_counting(inst, budget)?;
    let q2 = (inst.modulus() as f64).powi(2);
    let e4 = counts.n_total as f64 / q2;
    let s4 = counts.n_paired as f64 / q2;
    let chars = moments_by_characters(inst);
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
    let (de, ds) = (rel(e4, chars.extension_fourth), rel(s4, chars.square_fourth));
    if de > 1e-6 || ds > 1e-6 {
        return Err(PadicExtensionError::CrossCheckFailed(format!(
            "extension {e4} vs {}, square function {s4} vs {}",
            chars.extension_fourth, chars.square_fourth
        )));
    }
    let ratio = if counts.n_paired == 0 { f64::NAN } else { (counts.n_total as f64 / counts.n_paired as f64).powf(0.25) };
    let bound = (k as f64).powf(0.25);
    let report = VerificationReport::new(
        "padic-extension",
        "L4 square function estimate over Q_p, non-Archimedean constant 1",
        json!({ "p": inst.p, "i": inst.i, "m": inst.m, "phi": format!("{:?}", inst.phi), "support": inst.support }),
    )
    .quantity("counts", &counts)
    .quantity("extension_l4_fourth", e4)
    .quantity("square_l4_fourth", s4)
    .quantity("character_sums", chars)
    .quantity("cross_check_relative_error", de.max(ds))
    .quantity("scale", &scale)
    .conclude(ratio, bound, "deg(phi)^(1/4)", 1e-12);
    Ok((counts, report))
}

/// Quadruples with `{n1, n2} = {n1', n2'}` that also pair cellwise.
pub fn diagonal_paired_floor(p: u64, i: u32, m: u32) -> u64 {
    let q = checked_prime_power(p, m).expect("small");
    let cell = checked_prime_power(p, m - i).expect("small");
    q * q + q * (cell - 1)
}

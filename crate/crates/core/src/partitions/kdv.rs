use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cells::{admissible, partition_cells, Cell, PartitionSpec};
use super::interval::{ComplexInterval, Interval};
use super::PartitionError;
use crate::algebra::{checked_prime_power, Domain, PadicInt, Ring, TriPoly};
use crate::sod::{CurveSpec, Field};

/// Sound outer bound for `γ(t1) + γ(t2) − γ(t1') − γ(t2')` over four cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enclosure {
    /// One interval per real coordinate: `(x, y)` over ℝ, `(Re x, Im x, Re y, Im y)` over ℂ.
    Archimedean { coords: Vec<Interval> },
    /// Over Q_p the first coordinate is the exact coset `first_residue + p^s Z_p`;
    /// `factor_valuation_max` bounds the valuation of
    /// `(t1 − t1')(t2 − t1')ψ(t1, t2, t1')` from above (`None` = unbounded).
    Padic { modulus: u64, first_residue: u64, factor_valuation_max: Option<u32> },
}

/// Precomputed target ball for a given `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Radius(BigRational),
    /// The ball is `p^m Z_p × p^m Z_p`.
    PadicExponent(i64),
}

enum Tables {
    Real { t: Vec<Interval>, phi: Vec<Interval> },
    Complex { t: Vec<ComplexInterval>, phi: Vec<ComplexInterval> },
    Padic { p: u64, s: u32, modulus: u64, psi: TriPoly<PadicInt> },
}

/// Per-cell data precomputed once for a curve and a partition.
pub struct KdvContext {
    spec: PartitionSpec,
    degree: u32,
    cells: Vec<Cell>,
    tables: Tables,
}

fn real_phi(curve: &CurveSpec, t: &Interval) -> Interval {
    let mut acc = Interval::zero();
    for (e, c) in curve.phi().terms() {
        acc = &acc + &t.pow(e).scale(c);
    }
    acc
}

fn complex_phi(curve: &CurveSpec, t: &ComplexInterval) -> ComplexInterval {
    let mut acc = ComplexInterval::real(BigRational::zero());
    let mut power = ComplexInterval::real(BigRational::one());
    let deg = curve.degree();
    for e in 0..=deg {
        let c = curve.phi().coeff(e);
        if !Ring::is_zero(&c) {
            let term = ComplexInterval { re: power.re.scale(&c), im: power.im.scale(&c) };
            acc = &acc + &term;
        }
        if e < deg {
            power = &power * t;
        }
    }
    acc
}

fn valuation_mod(x: u64, p: u64, modulus: u64) -> Option<u32> {
    let mut x = x % modulus;
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

impl KdvContext {
    pub fn new(curve: &CurveSpec, spec: &PartitionSpec) -> Result<Self, PartitionError> {
        if curve.field() != spec.field {
            return Err(PartitionError::FieldMismatch {
                curve: curve.field().to_string(),
                partition: spec.field.to_string(),
            });
        }
        let cells = partition_cells(spec);
        let tables = match spec.field {
            Field::Real => {
                let t: Vec<Interval> = (0..spec.r)
                    .map(|j| {
                        let (lo, hi) = Cell::bounds(j, spec.r);
                        Interval::new(lo, hi)
                    })
                    .collect();
                let phi = t.iter().map(|i| real_phi(curve, i)).collect();
                Tables::Real { t, phi }
            }
            Field::Complex => {
                let t: Vec<ComplexInterval> = cells
                    .iter()
                    .map(|c| {
                        let Cell::Complex { j1, j2 } = c else { unreachable!() };
                        let (a, b) = Cell::bounds(*j1, spec.r);
                        let (c2, d) = Cell::bounds(*j2, spec.r);
                        ComplexInterval { re: Interval::new(a, b), im: Interval::new(c2, d) }
                    })
                    .collect();
                let phi = t.iter().map(|i| complex_phi(curve, i)).collect();
                Tables::Complex { t, phi }
            }
            Field::Padic { p } => {
                let s = spec.padic_exponent().expect("padic spec");
                let modulus = spec.r;
                let domain = Domain::ModPrimePower { p, n: s.max(1) };
                let psi = curve.psi().try_map_coeffs(domain, |c| PadicInt::from_rational(p, s.max(1), c))?;
                Tables::Padic { p, s, modulus, psi }
            }
        };
        Ok(Self { spec: *spec, degree: curve.degree(), cells, tables })
    }

    pub fn spec(&self) -> &PartitionSpec {
        &self.spec
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    fn index(&self, c: &Cell) -> usize {
        match *c {
            Cell::Real { j } => j as usize,
            Cell::Complex { j1, j2 } => (j1 * self.spec.r + j2) as usize,
            Cell::Padic { r } => r as usize,
        }
    }

    /// Enclosure of `γ(t1) + γ(t2) − γ(t1') − γ(t2')` for `t1 ∈ i1`, `t2 ∈ i2`,
    /// `t1' ∈ i1p`, `t2' ∈ i2p`.
    pub fn gap_enclosure(&self, i1: &Cell, i2: &Cell, i1p: &Cell, i2p: &Cell) -> Enclosure {
        let [a, b, c, d] = [i1, i2, i1p, i2p].map(|x| self.index(x));
        match &self.tables {
            Tables::Real { t, phi } => {
                let x = &(&(&t[a] + &t[b]) - &t[c]) - &t[d];
                let y = &(&(&phi[a] + &phi[b]) - &phi[c]) - &phi[d];
                Enclosure::Archimedean { coords: vec![x, y] }
            }
            Tables::Complex { t, phi } => {
                let x = &(&(&t[a] + &t[b]) - &t[c]) - &t[d];
                let y = &(&(&phi[a] + &phi[b]) - &phi[c]) - &phi[d];
                Enclosure::Archimedean { coords: vec![x.re, x.im, y.re, y.im] }
            }
            Tables::Padic { p, modulus, psi, .. } => {
                let (p, q) = (*p, *modulus);
                let (r1, r2, r1p, r2p) = (a as u64, b as u64, c as u64, d as u64);
                let first_residue = (r1 + r2 + 2 * q - r1p - r2p) % q;
                let dom = psi.domain();
                let pt = [r1, r2, r1p].map(|x| PadicInt::from_i64_in(x as i64, &dom));
                let psi_val = psi.eval(&pt).rep();
                let parts = [
                    valuation_mod(r1 + q - r1p, p, q),
                    valuation_mod(r2 + q - r1p, p, q),
                    valuation_mod(psi_val, p, q),
                ];
                let factor_valuation_max =
                    parts.iter().try_fold(0u32, |acc, v| v.map(|v| acc + v));
                Enclosure::Padic { modulus: q, first_residue, factor_valuation_max }
            }
        }
    }

    /// Smallest `m` with `p^{sk − m} ≤ C`: the ball of radius `C R^{−k}` is `p^m Z_p²`.
    fn padic_ball_exponent(&self, c: &BigRational) -> i64 {
        let Tables::Padic { p, s, .. } = &self.tables else { unreachable!() };
        let pr = BigRational::from_integer(BigInt::from(*p));
        let mut m = (*s * self.degree) as i64;
        let radius = |m: i64| {
            let e = (*s * self.degree) as i64 - m;
            if e >= 0 {
                num_traits::pow(pr.clone(), e as usize)
            } else {
                BigRational::one() / num_traits::pow(pr.clone(), (-e) as usize)
            }
        };
        if radius(m) <= *c {
            while radius(m - 1) <= *c {
                m -= 1;
            }
        } else {
            while radius(m) > *c {
                m += 1;
            }
        }
        m
    }

    /// The target ball of radius `C R^{−k}` about the origin.
    pub fn target(&self, c: &BigRational) -> Target {
        match &self.tables {
            Tables::Padic { .. } => Target::PadicExponent(self.padic_ball_exponent(c)),
            _ => Target::Radius(c / num_traits::pow(self.spec.r_rational(), self.degree as usize)),
        }
    }

    fn meets_target(&self, enc: &Enclosure, target: &Target) -> bool {
        match (enc, target) {
            (Enclosure::Archimedean { coords }, Target::Radius(radius)) => coords.iter().all(|i| i.meets_radius(radius)),
            (Enclosure::Padic { first_residue, factor_valuation_max, .. }, Target::PadicExponent(m)) => {
                let Tables::Padic { p, s, .. } = &self.tables else { unreachable!() };
                if *m <= 0 {
                    return true;
                }
                let needed = (*m as u32).min(*s);
                let first_ok = *first_residue % checked_prime_power(*p, needed).expect("small") == 0;
                first_ok && factor_valuation_max.map_or(true, |v| v as i64 >= *m)
            }
            _ => unreachable!("target built by this context"),
        }
    }

    /// Whether the target pair `(i2, i2p)` cannot be excluded for the base `(i1, i1p)`.
    pub fn survives(&self, i1: &Cell, i1p: &Cell, i2: &Cell, i2p: &Cell, c: &BigRational) -> bool {
        self.survives_target(i1, i1p, i2, i2p, &self.target(c))
    }

    pub fn survives_target(&self, i1: &Cell, i1p: &Cell, i2: &Cell, i2p: &Cell, target: &Target) -> bool {
        if !self.meets_target(&self.gap_enclosure(i1, i2, i1p, i2p), target) {
            return false;
        }
        // The exact relation is symmetric in the two pairs; over Q_p the
        // factorization is not, so both orientations must survive.
        match self.tables {
            Tables::Padic { .. } => self.meets_target(&self.gap_enclosure(i2, i1, i2p, i1p), target),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCount {
    pub base: (Cell, Cell),
    pub count: u64,
    pub pairs: Vec<(Cell, Cell)>,
}

/// Ordered pairs `(I2, I2')` that survive for the base `(I1, I1')`.
pub fn kdv_pair_count(ctx: &KdvContext, i1: &Cell, i1p: &Cell, c: &BigRational) -> Result<PairCount, PartitionError> {
    if !c.is_positive() {
        return Err(PartitionError::NonPositiveC);
    }
    if !admissible(i1, i1p, &ctx.spec) {
        return Err(PartitionError::HypothesisFailed(format!(
            "base cells {i1:?} and {i1p:?} are closer than 1/R"
        )));
    }
    let cells = ctx.cells();
    let target = ctx.target(c);
    let target = &target;
    let pairs: Vec<(Cell, Cell)> = cells
        .par_iter()
        .flat_map_iter(|i2| {
            cells.iter().filter(move |i2p| ctx.survives_target(i1, i1p, i2, i2p, target)).map(move |i2p| (*i2, *i2p))
        })
        .collect();
    Ok(PairCount { base: (*i1, *i1p), count: pairs.len() as u64, pairs })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCount {
    pub base: (Cell, Cell),
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KdvSummary {
    pub field: Field,
    pub r: u64,
    pub degree: u32,
    pub c: String,
    pub bases: Vec<BaseCount>,
    pub max_count: u64,
    pub bound: u64,
    pub pass: bool,
}

/// Counts for every admissible ordered base pair.
pub fn kdv_all_bases(ctx: &KdvContext, c: &BigRational) -> Result<KdvSummary, PartitionError> {
    if !c.is_positive() {
        return Err(PartitionError::NonPositiveC);
    }
    let cells = ctx.cells();
    let target = ctx.target(c);
    let bases: Vec<(Cell, Cell)> = cells
        .iter()
        .flat_map(|a| cells.iter().filter(move |b| admissible(a, b, &ctx.spec)).map(move |b| (*a, *b)))
        .collect();
    let counts: Vec<BaseCount> = bases
        .par_iter()
        .map(|(a, b)| {
            let count = cells
                .iter()
                .map(|i2| cells.iter().filter(|i2p| ctx.survives_target(a, b, i2, i2p, &target)).count() as u64)
                .sum();
            BaseCount { base: (*a, *b), count }
        })
        .collect();
    let max_count = counts.iter().map(|b| b.count).max().unwrap_or(0);
    let bound = 625 * (ctx.degree as u64 - 1);
    Ok(KdvSummary {
        field: ctx.spec.field,
        r: ctx.spec.r,
        degree: ctx.degree,
        c: c.to_string(),
        bases: counts,
        max_count,
        bound,
        pass: max_count <= bound,
    })
}

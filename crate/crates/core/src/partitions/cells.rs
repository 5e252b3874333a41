use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::PartitionError;
use crate::algebra::{checked_prime_power, is_prime};
use crate::sod::Field;

/// Partition of the unit ball into cells of size `1/R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub field: Field,
    /// Number of cells per real dimension; `p^s` for Q_p.
    pub r: u64,
}

impl PartitionSpec {
    pub fn new(field: Field, r: u64) -> Result<Self, PartitionError> {
        if r == 0 {
            return Err(PartitionError::BadScale("R must be at least 1".into()));
        }
        if let Field::Padic { p } = field {
            if !is_prime(p) {
                return Err(PartitionError::BadScale(format!("{p} is not prime")));
            }
            let mut x = r;
            while x % p == 0 {
                x /= p;
            }
            if x != 1 {
                return Err(PartitionError::BadScale(format!("R = {r} is not a power of {p}")));
            }
        }
        Ok(Self { field, r })
    }

    /// Exponent `s` with `R = p^s` (Q_p only).
    pub fn padic_exponent(&self) -> Option<u32> {
        match self.field {
            Field::Padic { p } => {
                let mut s = 0;
                while checked_prime_power(p, s).expect("bounded by r") < self.r {
                    s += 1;
                }
                Some(s)
            }
            _ => None,
        }
    }

    pub fn r_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Cell {
    /// `[−1/2 + j/R, −1/2 + (j+1)/R)`.
    Real { j: u64 },
    /// Product of two real cells, real part index first.
    Complex { j1: u64, j2: u64 },
    /// The residue class `r + p^s Z_p`.
    Padic { r: u64 },
}

impl Cell {
    /// Closed real bounds of a real index.
    pub fn bounds(j: u64, r: u64) -> (BigRational, BigRational) {
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        let rr = BigInt::from(r);
        (&half + BigRational::new(BigInt::from(j), rr.clone()), &half + BigRational::new(BigInt::from(j + 1), rr))
    }
}

pub fn partition_cells(spec: &PartitionSpec) -> Vec<Cell> {
    match spec.field {
        Field::Real => (0..spec.r).map(|j| Cell::Real { j }).collect(),
        Field::Complex => (0..spec.r).flat_map(|j1| (0..spec.r).map(move |j2| Cell::Complex { j1, j2 })).collect(),
        Field::Padic { .. } => (0..spec.r).map(|r| Cell::Padic { r }).collect(),
    }
}

/// Cells whose closures touch `cell` (none over Q_p).
pub fn cell_neighbors(cell: &Cell, spec: &PartitionSpec) -> Vec<Cell> {
    let near = |j: u64| -> Vec<i64> {
        [j as i64 - 1, j as i64, j as i64 + 1].into_iter().filter(|x| *x >= 0 && (*x as u64) < spec.r).collect()
    };
    match *cell {
        Cell::Real { j } => near(j).into_iter().filter(|x| *x as u64 != j).map(|x| Cell::Real { j: x as u64 }).collect(),
        Cell::Complex { j1, j2 } => near(j1)
            .into_iter()
            .flat_map(|a| near(j2).into_iter().map(move |b| (a as u64, b as u64)))
            .filter(|(a, b)| (*a, *b) != (j1, j2))
            .map(|(a, b)| Cell::Complex { j1: a, j2: b })
            .collect(),
        Cell::Padic { .. } => Vec::new(),
    }
}

/// Distance between closures, in units of `1/R` for the Archimedean fields
/// (max norm over ℂ), and `|r − r'|_p` over Q_p.
pub fn cell_distance(a: &Cell, b: &Cell, spec: &PartitionSpec) -> f64 {
    let gap = |x: u64, y: u64| x.abs_diff(y).saturating_sub(1) as f64 / spec.r as f64;
    match (a, b, spec.field) {
        (Cell::Real { j }, Cell::Real { j: k }, _) => gap(*j, *k),
        (Cell::Complex { j1, j2 }, Cell::Complex { j1: k1, j2: k2 }, _) => gap(*j1, *k1).max(gap(*j2, *k2)),
        (Cell::Padic { r }, Cell::Padic { r: t }, Field::Padic { p }) => {
            if r == t {
                return 0.0;
            }
            let mut d = r.abs_diff(*t);
            let mut v = 0;
            while d % p == 0 {
                d /= p;
                v += 1;
            }
            (p as f64).powi(-v)
        }
        _ => f64::NAN,
    }
}

/// Whether two cells are at distance at least `1/R`.
pub fn admissible(a: &Cell, b: &Cell, spec: &PartitionSpec) -> bool {
    match (a, b) {
        (Cell::Real { j }, Cell::Real { j: k }) => j.abs_diff(*k) >= 2,
        (Cell::Complex { j1, j2 }, Cell::Complex { j1: k1, j2: k2 }) => j1.abs_diff(*k1).max(j2.abs_diff(*k2)) >= 2,
        (Cell::Padic { r }, Cell::Padic { r: t }) => r != t && matches!(spec.field, Field::Padic { .. }),
        _ => false,
    }
}

//! First- and second-order differencing polynomials of a curve `T ↦ (T, φ(T))`.

use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, BiPoly, Domain, Ring, TriPoly, UniPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SodError {
    #[error("deg phi = {} is too low; need at least {needed}", degree_text(.degree))]
    DegreeTooLow { degree: Option<u32>, needed: u32 },
    #[error("fiber requested at equal slice points")]
    EqualSlice,
    #[error("differencing needs characteristic 0 coefficients, got domain {0}")]
    FiniteCharacteristic(Domain),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn degree_text(d: &Option<u32>) -> String {
    d.map_or("-inf".into(), |d| d.to_string())
}

/// The field a curve lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "snake_case")]
pub enum Field {
    Real,
    Complex,
    Padic { p: u64 },
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => write!(f, "R"),
            Field::Complex => write!(f, "C"),
            Field::Padic { p } => write!(f, "Q_{p}"),
        }
    }
}

/// A polynomial curve `γ(T) = (T, φ(T))` over a chosen field, with its
/// differencing polynomials computed on first use.
#[derive(Debug)]
pub struct CurveSpec {
    phi: UniPoly<BigRational>,
    degree: u32,
    field: Field,
    chi: OnceLock<BiPoly<BigRational>>,
    psi: OnceLock<TriPoly<BigRational>>,
}

impl Clone for CurveSpec {
    fn clone(&self) -> Self {
        Self {
            phi: self.phi.clone(),
            degree: self.degree,
            field: self.field,
            chi: self.chi.clone(),
            psi: self.psi.clone(),
        }
    }
}

impl CurveSpec {
    pub fn new(phi: UniPoly<BigRational>, field: Field) -> Result<Self, SodError> {
        let degree = match phi.degree() {
            Some(d) if d >= 2 => d,
            degree => return Err(SodError::DegreeTooLow { degree, needed: 2 }),
        };
        Ok(Self { phi, degree, field, chi: OnceLock::new(), psi: OnceLock::new() })
    }

    pub fn phi(&self) -> &UniPoly<BigRational> {
        &self.phi
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn chi(&self) -> &BiPoly<BigRational> {
        self.chi.get_or_init(|| first_order_difference(&self.phi).expect("degree checked at construction"))
    }

    pub fn psi(&self) -> &TriPoly<BigRational> {
        self.psi.get_or_init(|| second_order_difference(&self.phi).expect("degree checked at construction"))
    }
}

fn require_char_zero<R: Ring>(phi: &UniPoly<R>) -> Result<(), SodError> {
    match phi.domain() {
        Domain::ModPrimePower { .. } => Err(SodError::FiniteCharacteristic(phi.domain())),
        _ => Ok(()),
    }
}

/// `χ(X,Y)` with `φ(X) − φ(Y) = (X − Y)·χ(X,Y)`.
pub fn first_order_difference<R: Ring>(phi: &UniPoly<R>) -> Result<BiPoly<R>, SodError> {
    require_char_zero(phi)?;
    match phi.degree() {
        Some(d) if d >= 1 => {}
        degree => return Err(SodError::DegreeTooLow { degree, needed: 1 }),
    }
    let diff = phi.lift_to::<2>(0).try_sub(&phi.lift_to::<2>(1))?;
    Ok(diff.div_by_difference(0, 1)?)
}

/// `φ(X+Y−Z) − φ(X) − φ(Y) + φ(Z)` as a polynomial in `(X, Y, Z)`.
pub fn sod_numerator<R: Ring>(phi: &UniPoly<R>) -> Result<TriPoly<R>, SodError> {
    let d = phi.domain();
    let shifted = TriPoly::var(d, 0).try_add(&TriPoly::var(d, 1))?.try_sub(&TriPoly::var(d, 2))?;
    let mut num = phi.compose_multi(&shifted)?;
    num = num.try_sub(&phi.lift_to(0))?;
    num = num.try_sub(&phi.lift_to(1))?;
    Ok(num.try_add(&phi.lift_to(2))?)
}

/// `ψ(X,Y,Z)` with `(X−Z)(Y−Z)·ψ = φ(X+Y−Z) − φ(X) − φ(Y) + φ(Z)`, by long
/// division first by `X − Z` and then by `Y − Z`.
pub fn second_order_difference<R: Ring>(phi: &UniPoly<R>) -> Result<TriPoly<R>, SodError> {
    require_char_zero(phi)?;
    match phi.degree() {
        Some(d) if d >= 2 => {}
        degree => return Err(SodError::DegreeTooLow { degree, needed: 2 }),
    }
    let num = sod_numerator(phi)?;
    Ok(num.div_by_difference(0, 2)?.div_by_difference(1, 2)?)
}

/// `ψ(0,Y,0) = Σ_j (j+2) a_{j+2} Y^j`, read off the coefficients directly.
pub fn sod_axis_restriction<R: Ring>(phi: &UniPoly<R>) -> Result<UniPoly<R>, SodError> {
    require_char_zero(phi)?;
    match phi.degree() {
        Some(d) if d >= 2 => {}
        degree => return Err(SodError::DegreeTooLow { degree, needed: 2 }),
    }
    Ok(UniPoly::from_terms(
        phi.domain(),
        phi.terms().filter(|(e, _)| *e >= 2).map(|(e, c)| (e - 2, c.times_int(e as i64))),
    ))
}

/// The fiber `Y ↦ ψ(t1, Y, t1')`.
pub fn fiber_of<R: Ring>(psi: &TriPoly<R>, t1: &R, t1p: &R) -> UniPoly<R> {
    let zero = R::zero_in(&psi.domain());
    psi.restrict(1, &[t1.clone(), zero, t1p.clone()])
}

/// `Y ↦ ψ(t1, Y, t1')` for the differencing polynomial of `phi`. Equal slice
/// points are allowed here; see [`sod_fiber_distinct`].
pub fn sod_fiber<R: Ring>(phi: &UniPoly<R>, t1: &R, t1p: &R) -> Result<UniPoly<R>, SodError> {
    Ok(fiber_of(&second_order_difference(phi)?, t1, t1p))
}

pub fn sod_fiber_distinct<R: Ring>(phi: &UniPoly<R>, t1: &R, t1p: &R) -> Result<UniPoly<R>, SodError> {
    if t1 == t1p {
        return Err(SodError::EqualSlice);
    }
    sod_fiber(phi, t1, t1p)
}

//! Truncated p-adic arithmetic, roots mod p, Hensel lifting and the checks
//! built on them.

mod jb;
mod number;
mod roots;

pub use jb::{find_sod_split_primes, jb_curve, jb_hypotheses, verify_prop_jb, JbHypotheses, JbReport, SampleRoots};
pub use number::PadicNumber;
pub use roots::{
    hensel_lift, hensel_lift_residue, is_dth_power_residue, primitive_root, reduce_poly, roots_mod_p,
    simple_roots_mod_p,
};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::sod::SodError;

pub const DEFAULT_PRECISION: u32 = 8;
pub const DEFAULT_SAMPLES: usize = 25;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("result cancels to zero at the available precision")]
    PrecisionExhausted,
    #[error("operands have different primes ({0} vs {1})")]
    PrimeMismatch(u64, u64),
    #[error("polynomial vanishes identically mod p")]
    ZeroPolynomial,
    #[error("{r} is not a root mod {p}")]
    NotARoot { r: u64, p: u64 },
    #[error("{r} is a multiple root mod {p}")]
    NotSimpleRoot { r: u64, p: u64 },
    #[error("{d} does not divide {p} - 1")]
    BadModulus { d: u64, p: u64 },
    #[error("{a} is divisible by {p}")]
    NotAUnit { a: i64, p: u64 },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sod(#[from] SodError),
}

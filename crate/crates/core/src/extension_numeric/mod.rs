//! Floating-point extension operators, square functions and weighted L⁴
//! norms over ℝ.

mod curve;
mod kernel;
mod verify;
mod weight;

pub use curve::CurveHandle;
pub use kernel::{
    extension_eval, l4_weighted_norm, required_nodes, sample_grid, square_function_eval, ExtensionValue, FourthPowers,
    GridField, GridSpec, L4Norm, Region,
};
pub use verify::{finite_type_order, verify_convex_theorem, verify_real_theorem, RealTheoremOptions, HYPOTHESIS_SAMPLES};
pub use weight::{build_weight, fejer_mass, fejer_profile, indicator_weight, WeightKind, WeightSpec, TRUNCATION_LEVEL};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("{nodes} quadrature nodes per cell, the phase rule needs {required}")]
    ResolutionTooLow { nodes: usize, required: usize },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("i/o: {0}")]
    Io(String),
}

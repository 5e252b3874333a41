//! Floating-point building blocks shared by the numerical checkers. Everything
//! is generic over `T: Float`; the `f64` instantiation is the one used by the
//! reports.

mod gauss;
mod roots;
mod sum;

pub use gauss::{gauss_legendre, GaussRule};
pub use roots::{durand_kerner, eval_complex_poly, mul_linear};
pub use sum::pairwise_sum;

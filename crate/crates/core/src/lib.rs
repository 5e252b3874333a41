pub mod algebra;
pub mod cli;
pub mod complexcurve;
pub mod diophantine;
pub mod extension_numeric;
pub mod extension_padic;
pub mod numerics;
pub mod padic;
pub mod partitions;
pub mod report;
pub mod rolle;
pub mod sod;

use num_complex::Complex64;
use num_rational::BigRational;

pub use algebra::{Domain, PadicInt, Ring};

pub type QPoly = algebra::UniPoly<BigRational>;
pub type QBiPoly = algebra::BiPoly<BigRational>;
pub type QTriPoly = algebra::TriPoly<BigRational>;
pub type ZpPoly = algebra::UniPoly<PadicInt>;
pub type ZpTriPoly = algebra::TriPoly<PadicInt>;
pub type CPoly = algebra::UniPoly<Complex64>;

//! Partitions of the unit ball into `1/R` cells, gap enclosures for
//! quadruples of cells, and the resulting pair counts.

mod cells;
mod cphi;
mod interval;
mod kdv;

pub use cells::{admissible, cell_distance, cell_neighbors, partition_cells, Cell, PartitionSpec};
pub use cphi::{estimate_c_phi, CEstimate};
pub use interval::{ComplexInterval, Interval};
pub use kdv::{kdv_all_bases, kdv_pair_count, BaseCount, Enclosure, KdvContext, KdvSummary, PairCount, Target};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::sod::SodError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("bad scale: {0}")]
    BadScale(String),
    #[error("field of the curve ({curve}) differs from the partition ({partition})")]
    FieldMismatch { curve: String, partition: String },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("fiber vanishes identically at a sample point")]
    DegenerateFiber,
    #[error("C must be positive")]
    NonPositiveC,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Sod(#[from] SodError),
}

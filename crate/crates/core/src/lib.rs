//! Diagonal point configurations with low dispersion in the unit cube.
//!
//! The construction places points on the main diagonal at the values of the
//! recurrence `x_k = r / (1 - x_{k-1})` started at the volume parameter `r`,
//! stopping once a value reaches `1 - r`. Every axis-parallel box of volume
//! greater than `r` then meets the configuration, which is what the exact
//! empty-box [`oracle`](crate::oracle) verifies at desk scale. The crate
//! also evaluates the closed-form point-count bounds, detects the periodic
//! orbits that pin down the step-function breakpoints, and ships the
//! verification suites in [`checks`](crate::checks).

pub mod bounds;
pub mod boxes;
pub mod checks;
pub mod config;
pub mod error;
pub mod oracle;
pub mod scalar;
pub mod sequence;

pub use crate::bounds::{
    bound_inverse, bound_sqrt, cardinality_closed_form, verify_cross, verify_single_point_floor,
    verify_uniqueness, BoundsReport, ClosedFormRounding, CrossReport, SinglePointReport,
    UniquenessReport,
};
pub use crate::boxes::{classify, classify_empty_box, AxisBox, BoxKind, GapInterval};
pub use crate::config::{
    in_extended_diagonal, symmetry_defect, CellPartition, CrossConfig, DiagonalConfig,
};
pub use crate::error::{Error, Result};
pub use crate::oracle::{
    diagonal_dispersion, dispersion, dispersion_with_budget, enumeration_estimate,
    maximal_empty_boxes, min_diagonal_dispersion, DispersionResult, PointSet,
    DEFAULT_ORACLE_BUDGET,
};
pub use crate::scalar::{Scalar, DEFAULT_TOLERANCE};
pub use crate::sequence::{
    breakpoint_bisection, breakpoint_closed_form, cardinality_iterative, chain_value,
    cycle_length, reduced_step, rotation_angle, BreakpointEntry, BreakpointSource,
    BreakpointTable, CardinalityResult, ReducedState,
};

//! Finite metric spaces, Katětov functions and extensions, saturation
//! witnesses and isometry search.

mod isometry;
mod katetov;
mod saturation;
mod space;

pub use isometry::{brute_force_isometry, IsometryWitness, ISOMETRY_GUARD};
pub use katetov::{
    convex_combine_katetov, is_katetov, katetov_extend, r1_family, KatetovFunction, PointFunction, R1Options,
};
pub use saturation::{saturation_witnesses, witness_matrix, SaturationWitness};
pub use space::{normalize_diameter, validate_metric, FiniteMetricSpace, MetricViolation};

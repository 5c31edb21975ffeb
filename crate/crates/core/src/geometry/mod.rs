//! Exact-rational points, polytopes, affine maps and hull predicates under the
//! truncated Hilbert-cube metric.

mod affine;
mod point;
mod polytope;

pub use affine::{apply_affine, AffineMap};
pub use point::{hilbert_distance, HilbertMetric, RationalPoint};
pub use polytope::{
    convex_weights, directed_hausdorff, distance_to_hull, extreme_indices, extreme_points, hausdorff_distance,
    in_convex_hull, is_face, VPolytope,
};

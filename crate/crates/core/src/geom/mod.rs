//! Vectors, half-spaces, polytopes, support functions, widths and Minkowski sums.
//!
//! Everything here is an immutable value with pure operations.

mod hull;
mod paired;
mod planar;
mod polytope;
mod vector;

pub use hull::{check_convex_weights, origin_in_hull, reconstruction_residual, HullMembership, RECONSTRUCTION_TOL};
pub use paired::{hat, PairedVector};
pub use planar::{convex_hull_2d, min_width_of_points, minkowski_sum_vertices, MinkowskiSum};
pub use polytope::{regular_simplex_vertices, HalfSpace, Polytope};
pub use vector::Vector;
pub(crate) use vector::check_dims;

/// Default absolute tolerance for geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

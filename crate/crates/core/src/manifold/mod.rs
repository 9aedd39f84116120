//! Fisher–Rao geometry of the beta family.
//!
//! The parameter space {(x, y) : x, y > 0} carries the Fisher metric
//! `g = −Hess φ` with `φ(x, y) = ln Γ(x+y) − ln Γ(x) − ln Γ(y)`. It is a
//! Hadamard manifold with strictly negative curvature, so the logarithm map
//! and the Fréchet mean are unique.

mod ball;
mod geodesic;
mod grid;
mod metric;
mod point;
mod shooting;

pub use ball::{geodesic_ball, orthonormal_frame, write_ball_csv, BallPoint};
pub use geodesic::{exp_map, exp_map_with_steps, geodesic_ivp, GeodesicPath, BOUNDARY_GUARD, DEFAULT_STEPS};
pub use grid::{curvature_grid, log_space, write_curvature_csv, CurvatureSample};
pub use metric::{
    christoffel_coefficients, inner, log_partition, metric_matrix, ratio_subadditivity_gap, sectional_curvature,
    ChristoffelCoefficients, MetricMatrix,
};
pub use point::{BetaPoint, TangentVector};
pub use shooting::{
    distance, distance_with, geodesic_between, log_map, log_map_with, solve_log, solve_log_from, ShootingConfig,
    ShootingSolution,
};

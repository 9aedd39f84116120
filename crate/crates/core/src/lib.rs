//! Information geometry of beta distributions and histogram classification.
//!
//! * [`specfun`]: log-gamma and polygamma functions.
//! * [`manifold`]: Fisher metric, geodesics, exponential/logarithm maps,
//!   distance and sectional curvature.
//! * [`stats`]: Fréchet mean (Karcher flow) and variance.
//! * [`fit`]: area-strain features, clamp normalization, ML beta fits.
//! * [`learn`]: KNN, nearest-centroid and Lloyd K-means under either the
//!   Fisher or the Euclidean geometry, with stratified cross-validation.
//! * [`io`]: subject and cohort file formats.

// NaN must fail validity checks, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fit;
pub mod io;
pub mod learn;
pub mod manifold;
pub mod specfun;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use manifold::{BetaPoint, TangentVector};

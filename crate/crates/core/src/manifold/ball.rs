use std::f64::consts::PI;
use std::io::Write;

use crate::error::{Error, Result};

use super::geodesic::shoot;
use super::{metric_matrix, BetaPoint, TangentVector};

/// A Fisher-orthonormal basis of the tangent plane at `p`.
///
/// The first vector points along (1, 1); the second is the Gram–Schmidt
/// completion of (1, −1). Both are mapped to (±)themselves by the reflection
/// (x, y) ↦ (y, x) when p lies on the diagonal, which keeps balls centered
/// there mirror-symmetric.
pub fn orthonormal_frame(p: &BetaPoint) -> (TangentVector, TangentVector) {
    let g = metric_matrix(p);
    let n1 = g.quadratic_form(1.0, 1.0).sqrt();
    let e1 = (1.0 / n1, 1.0 / n1);
    let proj = g.bilinear((1.0, -1.0), e1);
    let raw = (1.0 - proj * e1.0, -1.0 - proj * e1.1);
    let n2 = g.quadratic_form(raw.0, raw.1).sqrt();
    (
        TangentVector::new(*p, e1.0, e1.1),
        TangentVector::new(*p, raw.0 / n2, raw.1 / n2),
    )
}

/// One direction of a geodesic ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallPoint {
    /// Metric angle of the direction, measured from the (1, 1) axis.
    pub theta: f64,
    pub point: BetaPoint,
    /// The geodesic left the domain before reaching the radius; `point` is
    /// the last state inside it.
    pub truncated: bool,
}

/// Endpoints of `exp(center, r·w)` for `directions` unit vectors w equally
/// spaced in metric angle.
pub fn geodesic_ball(center: &BetaPoint, radius: f64, directions: usize, steps: usize) -> Result<Vec<BallPoint>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("ball radius must be positive, got {radius}")));
    }
    if directions == 0 || steps == 0 {
        return Err(Error::invalid("a ball needs at least one direction and one step"));
    }
    let (e1, e2) = orthonormal_frame(center);
    (0..directions)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / directions as f64;
            let (c, s) = (theta.cos(), theta.sin());
            let u = radius * (c * e1.u + s * e2.u);
            let v = radius * (c * e1.v + s * e2.v);
            match shoot(center, u, v, steps) {
                Ok(point) => Ok(BallPoint {
                    theta,
                    point,
                    truncated: false,
                }),
                Err(Error::BoundaryEscape { last, .. }) => Ok(BallPoint {
                    theta,
                    point: last,
                    truncated: true,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Writes `theta,x,y,truncated` rows with a header line.
pub fn write_ball_csv<W: Write>(ball: &[BallPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "theta,x,y,truncated")?;
    for b in ball {
        writeln!(out, "{},{},{},{}", b.theta, b.point.x(), b.point.y(), b.truncated)?;
    }
    Ok(())
}

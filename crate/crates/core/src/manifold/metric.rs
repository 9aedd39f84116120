use crate::error::{Error, Result};
use crate::specfun::{ln_gamma_unchecked, trigamma_tetragamma_unchecked};

use super::{BetaPoint, TangentVector};

/// ψ′ and ψ″ evaluated at x, y and x + y.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Polygammas {
    pub tri_x: f64,
    pub tri_y: f64,
    pub tri_sum: f64,
    pub tetra_x: f64,
    pub tetra_y: f64,
    pub tetra_sum: f64,
}

impl Polygammas {
    #[inline]
    pub fn at(x: f64, y: f64) -> Self {
        let (tri_x, tetra_x) = trigamma_tetragamma_unchecked(x);
        let (tri_y, tetra_y) = trigamma_tetragamma_unchecked(y);
        let (tri_sum, tetra_sum) = trigamma_tetragamma_unchecked(x + y);
        Polygammas {
            tri_x,
            tri_y,
            tri_sum,
            tetra_x,
            tetra_y,
            tetra_sum,
        }
    }

    /// ψ′(x)ψ′(y) − ψ′(x+y)(ψ′(x) + ψ′(y)), the metric determinant.
    #[inline]
    pub fn determinant(&self) -> f64 {
        self.tri_x * self.tri_y - self.tri_sum * (self.tri_x + self.tri_y)
    }
}

/// φ(x, y) = ln Γ(x + y) − ln Γ(x) − ln Γ(y).
pub fn log_partition(p: &BetaPoint) -> f64 {
    let (x, y) = (p.x(), p.y());
    ln_gamma_unchecked(x + y) - ln_gamma_unchecked(x) - ln_gamma_unchecked(y)
}

/// The Fisher information matrix at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricMatrix {
    pub gxx: f64,
    pub gxy: f64,
    pub gyy: f64,
    pub det: f64,
}

impl MetricMatrix {
    pub fn quadratic_form(&self, u: f64, v: f64) -> f64 {
        self.bilinear((u, v), (u, v))
    }

    pub fn bilinear(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        self.gxx * a.0 * b.0 + self.gxy * (a.0 * b.1 + a.1 * b.0) + self.gyy * a.1 * b.1
    }

    /// Entries (g^xx, g^xy, g^yy) of the inverse matrix.
    pub fn inverse(&self) -> (f64, f64, f64) {
        (self.gyy / self.det, -self.gxy / self.det, self.gxx / self.det)
    }

    /// Solves G·z = rhs.
    pub fn solve(&self, rhs: (f64, f64)) -> (f64, f64) {
        let (ixx, ixy, iyy) = self.inverse();
        (ixx * rhs.0 + ixy * rhs.1, ixy * rhs.0 + iyy * rhs.1)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.gxx > 0.0 && self.gyy > 0.0 && self.det > 0.0
    }
}

pub fn metric_matrix(p: &BetaPoint) -> MetricMatrix {
    let (tri_x, _) = trigamma_tetragamma_unchecked(p.x());
    let (tri_y, _) = trigamma_tetragamma_unchecked(p.y());
    let (tri_sum, _) = trigamma_tetragamma_unchecked(p.x() + p.y());
    MetricMatrix {
        gxx: tri_x - tri_sum,
        gxy: -tri_sum,
        gyy: tri_y - tri_sum,
        det: tri_x * tri_y - tri_sum * (tri_x + tri_y),
    }
}

/// Fisher inner product of two vectors at the same point.
pub fn inner(a: &TangentVector, b: &TangentVector) -> Result<f64> {
    if a.base() != b.base() {
        return Err(Error::BaseMismatch);
    }
    Ok(metric_matrix(&a.base()).bilinear(a.components(), b.components()))
}

/// Coefficients of the geodesic equations
///
/// ```text
/// ẍ + a(x,y) ẋ² + b(x,y) ẋẏ + c(x,y) ẏ² = 0
/// ÿ + a(y,x) ẏ² + b(y,x) ẋẏ + c(y,x) ẋ² = 0
/// ```
///
/// `x_equation` holds (a(x,y), b(x,y), c(x,y)) and `y_equation` holds
/// (a(y,x), b(y,x), c(y,x)). In Christoffel terms a = Γˣₓₓ, b = 2Γˣₓᵧ,
/// c = Γˣᵧᵧ and symmetrically for the y equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChristoffelCoefficients {
    pub x_equation: [f64; 3],
    pub y_equation: [f64; 3],
}

/// (a, b, c) for the equation of the first coordinate; only the determinant
/// involves ψ′ of that coordinate.
#[inline]
fn coefficient_triple(tetra_x: f64, tri_y: f64, tetra_y: f64, tri_s: f64, tetra_s: f64, det: f64) -> [f64; 3] {
    let a = (tetra_x * tri_y - tetra_x * tri_s - tri_y * tetra_s) / (2.0 * det);
    let b = -(tetra_s * tri_y) / det;
    let c = (tetra_y * tri_s - tri_y * tetra_s) / (2.0 * det);
    [a, b, c]
}

impl ChristoffelCoefficients {
    #[inline]
    pub(crate) fn from_polygammas(pg: &Polygammas) -> Option<Self> {
        let det = pg.determinant();
        if !(det > 0.0) {
            return None;
        }
        let x_equation = coefficient_triple(pg.tetra_x, pg.tri_y, pg.tetra_y, pg.tri_sum, pg.tetra_sum, det);
        let y_equation = coefficient_triple(pg.tetra_y, pg.tri_x, pg.tetra_x, pg.tri_sum, pg.tetra_sum, det);
        Some(ChristoffelCoefficients { x_equation, y_equation })
    }

    /// (ẍ, ÿ) for velocity (u, v).
    #[inline]
    pub fn acceleration(&self, u: f64, v: f64) -> (f64, f64) {
        let [a, b, c] = self.x_equation;
        let [a2, b2, c2] = self.y_equation;
        let uv = u * v;
        (-(a * u * u + b * uv + c * v * v), -(a2 * v * v + b2 * uv + c2 * u * u))
    }
}

pub fn christoffel_coefficients(p: &BetaPoint) -> Result<ChristoffelCoefficients> {
    ChristoffelCoefficients::from_polygammas(&Polygammas::at(p.x(), p.y()))
        .ok_or(Error::DegenerateMetric { x: p.x(), y: p.y() })
}

/// Sectional curvature of the Fisher metric, in the factorized form
/// `ψ″(x)ψ″(y)ψ″(x+y) (F(x) + F(y) − F(x+y)) / (4 det²)` with `F = ψ′/ψ″`.
pub fn sectional_curvature(p: &BetaPoint) -> f64 {
    let pg = Polygammas::at(p.x(), p.y());
    let det = pg.determinant();
    let f = |tri: f64, tetra: f64| tri / tetra;
    let excess = f(pg.tri_x, pg.tetra_x) + f(pg.tri_y, pg.tetra_y) - f(pg.tri_sum, pg.tetra_sum);
    pg.tetra_x * pg.tetra_y * pg.tetra_sum * excess / (4.0 * det * det)
}

/// F(x) + F(y) − F(x + y) for F = ψ′/ψ″; non-negative by sub-additivity of F.
pub fn ratio_subadditivity_gap(x: f64, y: f64) -> f64 {
    let pg = Polygammas::at(x, y);
    pg.tri_x / pg.tetra_x + pg.tri_y / pg.tetra_y - pg.tri_sum / pg.tetra_sum
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A beta distribution B(x, y), identified with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct BetaPoint {
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for BetaPoint {
    type Error = Error;

    fn try_from(raw: RawPoint) -> Result<Self> {
        BetaPoint::new(raw.x, raw.y)
    }
}

impl BetaPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() {
            Ok(BetaPoint { x, y })
        } else {
            Err(Error::InvalidPoint { x, y })
        }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// The same distribution with its shape parameters exchanged, i.e. the
    /// image under t ↦ 1 − t. This is an isometry of the Fisher metric.
    pub fn swapped(&self) -> BetaPoint {
        BetaPoint { x: self.y, y: self.x }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.x, self.y]
    }

    /// Euclidean distance in parameter space.
    pub fn parameter_distance(&self, other: &BetaPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub(crate) fn from_raw(x: f64, y: f64) -> BetaPoint {
        debug_assert!(x > 0.0 && y > 0.0);
        BetaPoint { x, y }
    }
}

/// A tangent vector (u, v) at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentVector {
    base: BetaPoint,
    pub u: f64,
    pub v: f64,
}

impl TangentVector {
    pub fn new(base: BetaPoint, u: f64, v: f64) -> Self {
        TangentVector { base, u, v }
    }

    pub fn zero(base: BetaPoint) -> Self {
        TangentVector::new(base, 0.0, 0.0)
    }

    pub fn base(&self) -> BetaPoint {
        self.base
    }

    pub fn components(&self) -> (f64, f64) {
        (self.u, self.v)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TangentVector::new(self.base, factor * self.u, factor * self.v)
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0.0 && self.v == 0.0
    }

    /// Sum of two vectors attached to the same point.
    pub fn add(&self, other: &TangentVector) -> Result<Self> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        Ok(TangentVector::new(self.base, self.u + other.u, self.v + other.v))
    }

    /// Length under the Fisher metric at the base point.
    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    pub fn squared_norm(&self) -> f64 {
        super::metric_matrix(&self.base).quadratic_form(self.u, self.v)
    }

    /// Euclidean length of the components.
    pub fn parameter_norm(&self) -> f64 {
        self.u.hypot(self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rejects_non_positive_parameters() {
        assert!(BetaPoint::new(1.0, 2.0).is_ok());
        for (x, y) in [
            (0.0, 1.0),
            (1.0, 0.0),
            (-1.0, 2.0),
            (f64::NAN, 1.0),
            (1.0, f64::INFINITY),
        ] {
            assert!(matches!(BetaPoint::new(x, y), Err(Error::InvalidPoint { .. })));
        }
    }

    #[test]
    fn deserialization_validates() {
        let ok: BetaPoint = serde_json::from_str(r#"{"x": 2.0, "y": 5.0}"#).unwrap();
        assert_eq!(ok, BetaPoint::new(2.0, 5.0).unwrap());
        assert!(serde_json::from_str::<BetaPoint>(r#"{"x": -2.0, "y": 5.0}"#).is_err());
    }

    #[test]
    fn add_requires_common_base() {
        let p = BetaPoint::new(1.0, 1.0).unwrap();
        let q = BetaPoint::new(2.0, 1.0).unwrap();
        let a = TangentVector::new(p, 1.0, 0.0);
        assert!(matches!(a.add(&TangentVector::zero(q)), Err(Error::BaseMismatch)));
        assert_eq!(a.add(&a).unwrap().components(), (2.0, 0.0));
    }
}

use std::io::Write;

use crate::error::{Error, Result};

use super::metric::{ChristoffelCoefficients, Polygammas};
use super::{metric_matrix, BetaPoint, TangentVector};

/// Integration stops once either coordinate falls to this value.
pub const BOUNDARY_GUARD: f64 = 1e-8;

/// Default number of RK4 steps over the unit time interval.
pub const DEFAULT_STEPS: usize = 100;

/// Phase-space state (x, y, ẋ, ẏ).
pub(crate) type State = [f64; 4];

/// The geodesic equations are integrated in logarithmic coordinates
/// (ln x, ln y, ẋ/x, ẏ/y). The chart flattens the scale of the parameter
/// space: paths that wander to large parameters or toward the axes keep a
/// uniform relative accuracy with a fixed step, and positivity is automatic.
fn to_log(s: &State) -> State {
    [s[0].ln(), s[1].ln(), s[2] / s[0], s[3] / s[1]]
}

fn from_log(l: &State) -> State {
    let (x, y) = (l[0].exp(), l[1].exp());
    [x, y, l[2] * x, l[3] * y]
}

/// With x = eˢ: ẍ = x(s̈ + ṡ²), so s̈ = ẍ/x − ṡ².
#[inline]
fn derivative(l: &State) -> Option<State> {
    let (x, y) = (l[0].exp(), l[1].exp());
    if !(x > BOUNDARY_GUARD && y > BOUNDARY_GUARD) || !l.iter().all(|c| c.is_finite()) || !(x + y).is_finite() {
        return None;
    }
    let coefficients = ChristoffelCoefficients::from_polygammas(&Polygammas::at(x, y))?;
    let (ax, ay) = coefficients.acceleration(l[2] * x, l[3] * y);
    Some([l[2], l[3], ax / x - l[2] * l[2], ay / y - l[3] * l[3]])
}

#[inline]
fn offset(s: &State, k: &State, h: f64) -> State {
    [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2], s[3] + h * k[3]]
}

#[inline]
fn rk4_step(s: &State, h: f64) -> Option<State> {
    let k1 = derivative(s)?;
    let k2 = derivative(&offset(s, &k1, 0.5 * h))?;
    let k3 = derivative(&offset(s, &k2, 0.5 * h))?;
    let k4 = derivative(&offset(s, &k3, h))?;
    let next = [
        s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        s[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        s[3] + h / 6.0 * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3]),
    ];
    derivative(&next).map(|_| next)
}

/// Fixed-step RK4 over t ∈ [0, 1]; `visit` sees every state including the
/// first, in (x, y, ẋ, ẏ) form. A zero velocity yields the exact start.
pub(crate) fn integrate(start: State, steps: usize, mut visit: impl FnMut(usize, &State)) -> Result<State> {
    debug_assert!(steps > 0);
    visit(0, &start);
    if start[2] == 0.0 && start[3] == 0.0 {
        (1..=steps).for_each(|i| visit(i, &start));
        return Ok(start);
    }
    let h = 1.0 / steps as f64;
    let mut state = to_log(&start);
    let mut current = start;
    for i in 0..steps {
        state = match rk4_step(&state, h) {
            Some(next) => next,
            None => {
                return Err(Error::BoundaryEscape {
                    t: i as f64 * h,
                    last: BetaPoint::from_raw(current[0], current[1]),
                    velocity: (current[2], current[3]),
                })
            }
        };
        current = from_log(&state);
        visit(i + 1, &current);
    }
    Ok(current)
}

/// A discretized geodesic on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub times: Vec<f64>,
    pub points: Vec<BetaPoint>,
    pub velocities: Vec<(f64, f64)>,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start(&self) -> BetaPoint {
        self.points[0]
    }

    pub fn end(&self) -> BetaPoint {
        *self.points.last().expect("path has at least one point")
    }

    /// Velocity at t = 1, attached to the endpoint.
    pub fn final_velocity(&self) -> TangentVector {
        let (u, v) = *self.velocities.last().expect("path has at least one point");
        TangentVector::new(self.end(), u, v)
    }

    /// g(γ̇, γ̇) at every node.
    pub fn squared_speeds(&self) -> Vec<f64> {
        self.points
            .iter()
            .zip(&self.velocities)
            .map(|(p, &(u, v))| metric_matrix(p).quadratic_form(u, v))
            .collect()
    }

    /// max |g(γ̇,γ̇) − g₀| / g₀ over the path, or 0 for a constant path.
    pub fn speed_drift(&self) -> f64 {
        let speeds = self.squared_speeds();
        let first = speeds[0];
        if first == 0.0 {
            return speeds.iter().fold(0.0, |m, s| m.max(s.abs()));
        }
        speeds.iter().fold(0.0, |m, s| m.max((s - first).abs() / first))
    }

    /// Writes `t,x,y,u,v` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,x,y,u,v")?;
        for ((t, p), (u, v)) in self.times.iter().zip(&self.points).zip(&self.velocities) {
            writeln!(out, "{},{},{},{},{}", t, p.x(), p.y(), u, v)?;
        }
        Ok(())
    }
}

fn check_base(start: &BetaPoint, velocity: &TangentVector) -> Result<()> {
    if velocity.base() != *start {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// Solves the geodesic initial value problem from `start` with initial
/// velocity `velocity`, recording `steps + 1` equally spaced nodes.
pub fn geodesic_ivp(start: &BetaPoint, velocity: &TangentVector, steps: usize) -> Result<GeodesicPath> {
    check_base(start, velocity)?;
    if steps == 0 {
        return Err(Error::invalid("geodesic integration needs at least one step"));
    }
    let mut path = GeodesicPath {
        times: Vec::with_capacity(steps + 1),
        points: Vec::with_capacity(steps + 1),
        velocities: Vec::with_capacity(steps + 1),
    };
    let h = 1.0 / steps as f64;
    integrate([start.x(), start.y(), velocity.u, velocity.v], steps, |i, s| {
        path.times.push(if i == steps { 1.0 } else { i as f64 * h });
        path.points.push(BetaPoint::from_raw(s[0], s[1]));
        path.velocities.push((s[2], s[3]));
    })?;
    Ok(path)
}

/// Endpoint of the geodesic with the given initial data, without storing the path.
pub(crate) fn shoot(start: &BetaPoint, u: f64, v: f64, steps: usize) -> Result<BetaPoint> {
    let end = integrate([start.x(), start.y(), u, v], steps, |_, _| {})?;
    Ok(BetaPoint::from_raw(end[0], end[1]))
}

/// Riemannian exponential map, integrated with [`DEFAULT_STEPS`] RK4 steps.
pub fn exp_map(start: &BetaPoint, velocity: &TangentVector) -> Result<BetaPoint> {
    exp_map_with_steps(start, velocity, DEFAULT_STEPS)
}

pub fn exp_map_with_steps(start: &BetaPoint, velocity: &TangentVector, steps: usize) -> Result<BetaPoint> {
    check_base(start, velocity)?;
    if steps == 0 {
        return Err(Error::invalid("geodesic integration needs at least one step"));
    }
    if velocity.is_zero() {
        return Ok(*start);
    }
    shoot(start, velocity.u, velocity.v, steps)
}

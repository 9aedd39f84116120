//! Logarithm map and geodesic distance by single shooting.
//!
//! Newton's method runs on the initial velocity w, driving the residual
//! `exp(p, w) − q` (measured in parameter space) to zero. The Jacobian of
//! the endpoint map comes from forward differences. When a full Newton step
//! does not reduce the residual the step is halved.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::geodesic::{geodesic_ivp, shoot, DEFAULT_STEPS};
use super::{metric_matrix, BetaPoint, GeodesicPath, TangentVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// RK4 steps per trial integration.
    pub steps: usize,
    pub max_iterations: usize,
    /// Euclidean endpoint residual at which the solution is accepted.
    pub tolerance: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            steps: DEFAULT_STEPS,
            max_iterations: 50,
            tolerance: 1e-6,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 || self.max_iterations == 0 {
            return Err(Error::invalid("shooting needs at least one step and one iteration"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("shooting tolerance must be positive"));
        }
        Ok(())
    }
}

/// Result of a converged shooting solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingSolution {
    pub velocity: TangentVector,
    pub residual: f64,
    pub iterations: usize,
}

const MAX_HALVINGS: usize = 40;

/// Initial velocity: the parameter difference q − p, rescaled so that its
/// Fisher length at p equals its Fisher length measured at the midpoint.
fn initial_guess(p: &BetaPoint, q: &BetaPoint) -> (f64, f64) {
    let (dx, dy) = (q.x() - p.x(), q.y() - p.y());
    let mid = BetaPoint::from_raw(0.5 * (p.x() + q.x()), 0.5 * (p.y() + q.y()));
    let at_mid = metric_matrix(&mid).quadratic_form(dx, dy);
    let at_start = metric_matrix(p).quadratic_form(dx, dy);
    let scale = if at_start > 0.0 {
        (at_mid / at_start).sqrt()
    } else {
        1.0
    };
    (scale * dx, scale * dy)
}

fn residual(end: &BetaPoint, target: &BetaPoint) -> (f64, f64) {
    (end.x() - target.x(), end.y() - target.y())
}

fn norm((a, b): (f64, f64)) -> f64 {
    a.hypot(b)
}

/// Solves the boundary value problem γ(0) = start, γ(1) = end.
pub fn solve_log(start: &BetaPoint, end: &BetaPoint, cfg: &ShootingConfig) -> Result<ShootingSolution> {
    solve_log_from(start, end, initial_guess(start, end), cfg)
}

/// Like [`solve_log`] but starting Newton from a caller-supplied velocity.
pub fn solve_log_from(
    start: &BetaPoint,
    end: &BetaPoint,
    guess: (f64, f64),
    cfg: &ShootingConfig,
) -> Result<ShootingSolution> {
    cfg.validate()?;
    let solution = |w: (f64, f64), residual: f64, iterations: usize| ShootingSolution {
        velocity: TangentVector::new(*start, w.0, w.1),
        residual,
        iterations,
    };
    if start == end {
        return Ok(solution((0.0, 0.0), 0.0, 0));
    }

    // Shrink the guess until the trial geodesic stays inside the domain.
    let mut w = guess;
    let mut r = None;
    for _ in 0..MAX_HALVINGS {
        match shoot(start, w.0, w.1, cfg.steps) {
            Ok(e) => {
                r = Some(residual(&e, end));
                break;
            }
            Err(Error::BoundaryEscape { .. }) => w = (0.5 * w.0, 0.5 * w.1),
            Err(e) => return Err(e),
        }
    }
    let mut r = r.ok_or(Error::NoConvergence {
        iterations: 0,
        residual: f64::INFINITY,
    })?;
    let mut r_norm = norm(r);

    for iteration in 0..cfg.max_iterations {
        if r_norm <= cfg.tolerance {
            // One more full Newton step is nearly free accuracy: downstream
            // averages of many logs would otherwise inherit the tolerance as noise.
            if let Some((pw, pr)) = newton_step(start, w, r, end, cfg.steps)
                .and_then(|step| {
                    shoot(start, w.0 + step.0, w.1 + step.1, cfg.steps)
                        .ok()
                        .map(|e| ((w.0 + step.0, w.1 + step.1), norm(residual(&e, end))))
                })
                .filter(|&(_, pr)| pr < r_norm)
            {
                return Ok(solution(pw, pr, iteration + 1));
            }
            return Ok(solution(w, r_norm, iteration));
        }
        let Some(step) = newton_step(start, w, r, end, cfg.steps) else {
            return Err(Error::NoConvergence {
                iterations: iteration,
                residual: r_norm,
            });
        };

        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let trial = (w.0 + lambda * step.0, w.1 + lambda * step.1);
            if let Ok(e) = shoot(start, trial.0, trial.1, cfg.steps) {
                let tr = residual(&e, end);
                let tn = norm(tr);
                if tn < r_norm {
                    w = trial;
                    r = tr;
                    r_norm = tn;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence {
                iterations: iteration + 1,
                residual: r_norm,
            });
        }
    }
    if r_norm <= cfg.tolerance {
        return Ok(solution(w, r_norm, cfg.max_iterations));
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iterations,
        residual: r_norm,
    })
}

/// Full Newton correction to `w`, or None when the Jacobian is singular or cannot be probed.
fn newton_step(
    start: &BetaPoint,
    w: (f64, f64),
    r: (f64, f64),
    target: &BetaPoint,
    steps: usize,
) -> Option<(f64, f64)> {
    let jac = jacobian(start, w, r, target, steps).ok()?;
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if !(det.abs() > 0.0) || !det.is_finite() {
        return None;
    }
    Some((
        -(jac[1][1] * r.0 - jac[0][1] * r.1) / det,
        -(-jac[1][0] * r.0 + jac[0][0] * r.1) / det,
    ))
}

/// Forward-difference Jacobian of the endpoint with respect to the initial velocity.
fn jacobian(
    start: &BetaPoint,
    w: (f64, f64),
    r: (f64, f64),
    target: &BetaPoint,
    steps: usize,
) -> Result<[[f64; 2]; 2]> {
    let scale = w.0.abs().max(w.1.abs()).max(1.0);
    let mut columns = [[0.0; 2]; 2];
    for (j, column) in columns.iter_mut().enumerate() {
        // Probe away from the boundary direction first, then the other way.
        let mut h = 1.5e-8 * scale;
        let mut probe = None;
        for _ in 0..2 {
            let trial = if j == 0 { (w.0 + h, w.1) } else { (w.0, w.1 + h) };
            match shoot(start, trial.0, trial.1, steps) {
                Ok(e) => {
                    probe = Some(residual(&e, target));
                    break;
                }
                Err(Error::BoundaryEscape { .. }) => h = -h,
                Err(e) => return Err(e),
            }
        }
        let pr = probe.ok_or(Error::NoConvergence {
            iterations: 0,
            residual: norm(r),
        })?;
        *column = [(pr.0 - r.0) / h, (pr.1 - r.1) / h];
    }
    // columns[j] = ∂r/∂w_j; return row-major J[i][j] = ∂r_i/∂w_j.
    Ok([[columns[0][0], columns[1][0]], [columns[0][1], columns[1][1]]])
}

/// Riemannian logarithm map with the default shooting configuration.
pub fn log_map(start: &BetaPoint, end: &BetaPoint) -> Result<TangentVector> {
    log_map_with(start, end, &ShootingConfig::default())
}

pub fn log_map_with(start: &BetaPoint, end: &BetaPoint, cfg: &ShootingConfig) -> Result<TangentVector> {
    Ok(solve_log(start, end, cfg)?.velocity)
}

/// Fisher–Rao distance: the Fisher length of the logarithm.
pub fn distance(p: &BetaPoint, q: &BetaPoint) -> Result<f64> {
    distance_with(p, q, &ShootingConfig::default())
}

pub fn distance_with(p: &BetaPoint, q: &BetaPoint, cfg: &ShootingConfig) -> Result<f64> {
    Ok(log_map_with(p, q, cfg)?.norm())
}

/// The geodesic joining two points, sampled at `steps + 1` nodes; a single
/// node when the points coincide.
pub fn geodesic_between(p: &BetaPoint, q: &BetaPoint, cfg: &ShootingConfig) -> Result<GeodesicPath> {
    cfg.validate()?;
    if p == q {
        return Ok(GeodesicPath {
            times: vec![0.0],
            points: vec![*p],
            velocities: vec![(0.0, 0.0)],
        });
    }
    let w = log_map_with(p, q, cfg)?;
    geodesic_ivp(p, &w, cfg.steps)
}

//! Fréchet mean and variance on the beta manifold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{exp_map_with_steps, log_map_with, BetaPoint, ShootingConfig, TangentVector};

/// Floor applied to the Euclidean initialization.
const INIT_FLOOR: f64 = 1e-6;
const MAX_STEP_HALVINGS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KarcherConfig {
    /// τ in `B ← exp_B((τ/n) Σ log_B(Bᵢ))`.
    pub step_size: f64,
    pub max_iterations: usize,
    /// Stop once the Fisher norm of `(1/n) Σ log_B(Bᵢ)` drops to this value.
    pub gradient_tolerance: f64,
    pub shooting: ShootingConfig,
}

impl Default for KarcherConfig {
    fn default() -> Self {
        KarcherConfig {
            step_size: 1.0,
            max_iterations: 100,
            gradient_tolerance: 1e-6,
            shooting: ShootingConfig::default(),
        }
    }
}

impl KarcherConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0 && self.step_size <= 1.0) {
            return Err(Error::invalid(format!(
                "Karcher step size must lie in (0, 1], got {}",
                self.step_size
            )));
        }
        if !(self.gradient_tolerance > 0.0) {
            return Err(Error::invalid("Karcher gradient tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("Karcher flow needs at least one iteration"));
        }
        self.shooting.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanResult {
    pub mean: BetaPoint,
    pub iterations_used: usize,
    pub final_gradient_norm: f64,
    pub converged: bool,
    /// Σ d²(B̂, Bᵢ) at every accepted iterate, starting with the initial one.
    pub objective_trace: Vec<f64>,
}

/// Arithmetic mean of the parameters, floored componentwise at 1e-6.
pub fn parameter_average(points: &[BetaPoint]) -> Result<BetaPoint> {
    if points.is_empty() {
        return Err(Error::invalid("cannot average an empty set of points"));
    }
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.x(), b + p.y()));
    BetaPoint::new((sx / n).max(INIT_FLOOR), (sy / n).max(INIT_FLOOR))
}

/// Logarithms of every point at `base`. Each one is a pure function of
/// (base, point), so objective values computed here agree exactly with
/// distances computed elsewhere through [`log_map_with`].
fn logs_at(base: &BetaPoint, points: &[BetaPoint], cfg: &ShootingConfig) -> Result<Vec<TangentVector>> {
    points.iter().map(|p| log_map_with(base, p, cfg)).collect()
}

fn objective(logs: &[TangentVector]) -> f64 {
    logs.iter().map(TangentVector::squared_norm).sum()
}

fn mean_log(base: &BetaPoint, logs: &[TangentVector]) -> TangentVector {
    let n = logs.len() as f64;
    let (su, sv) = logs.iter().fold((0.0, 0.0), |(a, b), w| (a + w.u, b + w.v));
    TangentVector::new(*base, su / n, sv / n)
}

/// Sorted copy, so that the result does not depend on input order.
fn canonical(points: &[BetaPoint]) -> Vec<BetaPoint> {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.x().total_cmp(&b.x()).then(a.y().total_cmp(&b.y())));
    sorted
}

/// Fréchet mean by Karcher flow, initialized at the parameter average.
pub fn frechet_mean(points: &[BetaPoint], cfg: &KarcherConfig) -> Result<MeanResult> {
    let sorted = canonical(points);
    let init = parameter_average(&sorted)?;
    karcher_flow(&sorted, init, cfg)
}

/// Fréchet mean by Karcher flow from a given starting point.
pub fn frechet_mean_from(points: &[BetaPoint], initial: BetaPoint, cfg: &KarcherConfig) -> Result<MeanResult> {
    if points.is_empty() {
        return Err(Error::invalid("cannot average an empty set of points"));
    }
    karcher_flow(&canonical(points), initial, cfg)
}

fn karcher_flow(points: &[BetaPoint], initial: BetaPoint, cfg: &KarcherConfig) -> Result<MeanResult> {
    cfg.validate()?;
    let mut current = initial;
    let mut logs = logs_at(&current, points, &cfg.shooting)?;
    let mut value = objective(&logs);
    let mut trace = vec![value];
    let mut gradient = mean_log(&current, &logs);
    let mut gradient_norm = gradient.norm();

    let mut iterations = 0;
    while iterations < cfg.max_iterations && gradient_norm > cfg.gradient_tolerance {
        iterations += 1;
        let mut tau = cfg.step_size;
        let mut accepted = None;
        for _ in 0..MAX_STEP_HALVINGS {
            if let Ok(candidate) = exp_map_with_steps(&current, &gradient.scaled(tau), cfg.shooting.steps) {
                let candidate_logs = logs_at(&candidate, points, &cfg.shooting)?;
                let candidate_value = objective(&candidate_logs);
                if candidate_value <= value {
                    accepted = Some((candidate, candidate_logs, candidate_value));
                    break;
                }
            }
            tau *= 0.5;
        }
        let Some((candidate, candidate_logs, candidate_value)) = accepted else {
            break;
        };
        current = candidate;
        logs = candidate_logs;
        value = candidate_value;
        trace.push(value);
        gradient = mean_log(&current, &logs);
        gradient_norm = gradient.norm();
    }

    Ok(MeanResult {
        mean: current,
        iterations_used: iterations,
        final_gradient_norm: gradient_norm,
        converged: gradient_norm <= cfg.gradient_tolerance,
        objective_trace: trace,
    })
}

/// (1/n) Σ d²(mean, Bᵢ).
pub fn frechet_variance(points: &[BetaPoint], mean: &BetaPoint) -> Result<f64> {
    frechet_variance_with(points, mean, &ShootingConfig::default())
}

pub fn frechet_variance_with(points: &[BetaPoint], mean: &BetaPoint, cfg: &ShootingConfig) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::invalid("variance of an empty set is undefined"));
    }
    let logs = logs_at(mean, points, cfg)?;
    Ok(objective(&logs) / points.len() as f64)
}

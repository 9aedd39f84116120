//! From raw per-subject measurements to points on the beta manifold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{log_partition, metric_matrix, BetaPoint};
use crate::specfun::digamma_unchecked;

const MAX_NEWTON_ITERATIONS: usize = 50;
/// Newton stops here; fits with a gradient above [`STATIONARITY_BOUND`] fall back to moments.
const NEWTON_TOLERANCE: f64 = 1e-11;
pub const STATIONARITY_BOUND: f64 = 1e-8;

/// One subject's raw measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubjectRecord {
    pub id: String,
    pub label: String,
    pub samples: Vec<f64>,
}

impl SubjectRecord {
    pub fn new(id: impl Into<String>, label: impl Into<String>, samples: Vec<f64>) -> Result<Self> {
        let record = SubjectRecord {
            id: id.into(),
            label: label.into(),
            samples,
        };
        record.validate()?;
        Ok(record)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::invalid(format!("subject {}: no samples", self.id)));
        }
        if let Some(bad) = self.samples.iter().find(|s| !s.is_finite()) {
            return Err(Error::invalid(format!("subject {}: non-finite sample {bad}", self.id)));
        }
        Ok(())
    }

    /// Expands a binned histogram into samples at the bin centers.
    pub fn from_histogram(
        id: impl Into<String>,
        label: impl Into<String>,
        centers: &[f64],
        counts: &[u64],
    ) -> Result<Self> {
        if centers.len() != counts.len() {
            return Err(Error::invalid(format!(
                "histogram has {} centers but {} counts",
                centers.len(),
                counts.len()
            )));
        }
        let samples = centers
            .iter()
            .zip(counts)
            .flat_map(|(&c, &k)| std::iter::repeat_n(c, k as usize))
            .collect();
        SubjectRecord::new(id, label, samples)
    }

    /// Area-strain samples from per-cell areas at the two time points.
    pub fn from_areas(
        id: impl Into<String>,
        label: impl Into<String>,
        areas_t0: &[f64],
        areas_t1: &[f64],
    ) -> Result<Self> {
        SubjectRecord::new(id, label, area_strain(areas_t0, areas_t1)?)
    }
}

/// Relative area change `(a₁ − a₀) / a₀` of every cell.
pub fn area_strain(areas_t0: &[f64], areas_t1: &[f64]) -> Result<Vec<f64>> {
    if areas_t0.len() != areas_t1.len() {
        return Err(Error::invalid(format!(
            "area lists differ in length ({} vs {})",
            areas_t0.len(),
            areas_t1.len()
        )));
    }
    areas_t0
        .iter()
        .zip(areas_t1)
        .enumerate()
        .map(|(k, (&a0, &a1))| {
            if a0 > 0.0 && a1 > 0.0 && a0.is_finite() && a1.is_finite() {
                Ok((a1 - a0) / a0)
            } else {
                Err(Error::invalid(format!(
                    "cell {k}: areas must be positive, got {a0} and {a1}"
                )))
            }
        })
        .collect()
}

/// Clamp bounds `lower < upper` for the map `t ↦ (min(max(t, lower), upper) − lower) / (upper − lower)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConfig {
    pub lower: f64,
    pub upper: f64,
}

impl NormalizationConfig {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_finite() && upper.is_finite() && lower < upper {
            Ok(NormalizationConfig { lower, upper })
        } else {
            Err(Error::invalid(format!(
                "normalization bounds need lower < upper, got {lower} and {upper}"
            )))
        }
    }

    /// Bounds [0, max] with max taken over every sample of the cohort.
    ///
    /// This makes each subject's representation depend on the whole cohort,
    /// test subjects included.
    pub fn from_cohort_max(records: &[SubjectRecord]) -> Result<Self> {
        let max = records
            .iter()
            .flat_map(|r| r.samples.iter().copied())
            .fold(f64::NEG_INFINITY, f64::max);
        NormalizationConfig::new(0.0, max)
    }
}

pub fn normalize(samples: &[f64], cfg: &NormalizationConfig) -> Vec<f64> {
    let width = cfg.upper - cfg.lower;
    samples
        .iter()
        .map(|&s| (s.max(cfg.lower).min(cfg.upper) - cfg.lower) / width)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitMethod {
    Newton,
    MomentsFallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub point: BetaPoint,
    /// Total log-likelihood of the (boundary-shrunk) samples.
    pub log_likelihood: f64,
    pub method: FitMethod,
    pub iterations: usize,
}

/// Sufficient statistics of a sample on (0, 1).
#[derive(Debug, Clone, Copy)]
struct BetaStatistics {
    n: f64,
    mean_ln: f64,
    mean_ln_complement: f64,
    mean: f64,
    variance: f64,
}

impl BetaStatistics {
    fn log_likelihood(&self, x: f64, y: f64) -> f64 {
        let p = BetaPoint::from_raw(x, y);
        self.n * (log_partition(&p) + (x - 1.0) * self.mean_ln + (y - 1.0) * self.mean_ln_complement)
    }

    /// Per-sample score (∂/∂x, ∂/∂y) of the average log-likelihood.
    fn score(&self, x: f64, y: f64) -> (f64, f64) {
        let total = digamma_unchecked(x + y);
        (
            total - digamma_unchecked(x) + self.mean_ln,
            total - digamma_unchecked(y) + self.mean_ln_complement,
        )
    }

    fn moments(&self) -> (f64, f64) {
        let m = self.mean;
        let common = m * (1.0 - m) / self.variance - 1.0;
        (m * common, (1.0 - m) * common)
    }
}

/// Sorts, shrinks boundary values into [ε, 1 − ε] with ε = 1/(2n), and
/// reduces the sample to its sufficient statistics.
fn prepare(samples: &[f64]) -> Result<BetaStatistics> {
    if samples.len() < 2 {
        return Err(Error::DegenerateSample(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    if let Some(bad) = samples.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(Error::invalid(format!("sample {bad} lies outside [0, 1]")));
    }
    if samples.iter().all(|&s| s == 0.0 || s == 1.0) {
        return Err(Error::DegenerateSample(
            "every sample sits on the boundary {0, 1}".into(),
        ));
    }
    let n = samples.len() as f64;
    let eps = 0.5 / n;
    let mut shrunk: Vec<f64> = samples.iter().map(|&s| s.clamp(eps, 1.0 - eps)).collect();
    shrunk.sort_by(f64::total_cmp);
    if shrunk.first() == shrunk.last() {
        return Err(Error::DegenerateSample("fewer than 2 distinct values".into()));
    }

    let mean = shrunk.iter().sum::<f64>() / n;
    let variance = shrunk.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    let mean_ln = shrunk.iter().map(|s| s.ln()).sum::<f64>() / n;
    let mean_ln_complement = shrunk.iter().map(|s| (-s).ln_1p()).sum::<f64>() / n;
    if !(variance > 0.0) {
        return Err(Error::DegenerateSample("zero sample variance".into()));
    }
    Ok(BetaStatistics {
        n,
        mean_ln,
        mean_ln_complement,
        mean,
        variance,
    })
}

/// Newton iteration on the likelihood equations
/// `ψ(x) − ψ(x+y) = mean ln t`, `ψ(y) − ψ(x+y) = mean ln(1 − t)`.
///
/// The Hessian of the average log-likelihood is minus the Fisher metric, so
/// each step solves `G δ = score`.
fn newton(stats: &BetaStatistics, start: (f64, f64)) -> Option<(f64, f64, usize)> {
    let (mut x, mut y) = start;
    let mut value = stats.log_likelihood(x, y);
    let mut iterations = 0;
    for iteration in 0..MAX_NEWTON_ITERATIONS {
        let score = stats.score(x, y);
        if score.0.hypot(score.1) <= NEWTON_TOLERANCE {
            return Some((x, y, iteration));
        }
        let step = metric_matrix(&BetaPoint::from_raw(x, y)).solve(score);
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..60 {
            let (nx, ny) = (x + lambda * step.0, y + lambda * step.1);
            if nx > 0.0 && ny > 0.0 && nx.is_finite() && ny.is_finite() {
                let nv = stats.log_likelihood(nx, ny);
                if nv >= value - 1e-12 * value.abs() {
                    x = nx;
                    y = ny;
                    value = nv;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        iterations = iteration + 1;
        if !moved {
            break;
        }
    }
    let score = stats.score(x, y);
    (score.0.hypot(score.1) <= STATIONARITY_BOUND).then_some((x, y, iterations))
}

/// Maximum-likelihood beta fit of samples in [0, 1].
pub fn fit_beta_mle(samples: &[f64]) -> Result<FitResult> {
    let stats = prepare(samples)?;
    let (mx, my) = stats.moments();
    if !(mx > 0.0 && my > 0.0 && mx.is_finite() && my.is_finite()) {
        return Err(Error::DegenerateSample(format!(
            "moment estimates ({mx}, {my}) are not positive"
        )));
    }
    let (x, y, iterations, method) = match newton(&stats, (mx, my)) {
        Some((x, y, it)) => (x, y, it, FitMethod::Newton),
        None => (mx, my, MAX_NEWTON_ITERATIONS, FitMethod::MomentsFallback),
    };
    Ok(FitResult {
        point: BetaPoint::new(x, y)?,
        log_likelihood: stats.log_likelihood(x, y),
        method,
        iterations,
    })
}

/// Gradient of the average log-likelihood of `samples` at `point`, after the
/// same boundary shrink used by [`fit_beta_mle`].
pub fn likelihood_score(samples: &[f64], point: &BetaPoint) -> Result<(f64, f64)> {
    Ok(prepare(samples)?.score(point.x(), point.y()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedSubject {
    pub id: String,
    pub label: String,
    pub point: BetaPoint,
}

/// Subjects represented as beta distributions, in input order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FittedCohort {
    pub subjects: Vec<FittedSubject>,
}

impl FittedCohort {
    pub fn new(subjects: Vec<FittedSubject>) -> Self {
        FittedCohort { subjects }
    }

    pub fn len(&self) -> usize {
        self.subjects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subjects.is_empty()
    }

    pub fn points(&self) -> Vec<BetaPoint> {
        self.subjects.iter().map(|s| s.point).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.subjects.iter().map(|s| s.label.clone()).collect()
    }

    /// Cohort restricted to the given indices, in that order.
    pub fn select(&self, indices: &[usize]) -> FittedCohort {
        FittedCohort::new(indices.iter().map(|&i| self.subjects[i].clone()).collect())
    }
}

/// A subject left out of the cohort, with the reason.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exclusion {
    pub id: String,
    pub label: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CohortFit {
    pub cohort: FittedCohort,
    pub fits: Vec<FitResult>,
    pub excluded: Vec<Exclusion>,
}

/// Normalizes (when bounds are given) and fits every record. Failures are
/// collected as exclusions; the remaining subjects keep their input order.
pub fn fit_cohort(records: &[SubjectRecord], cfg: Option<&NormalizationConfig>) -> CohortFit {
    let mut out = CohortFit::default();
    for record in records {
        let fitted = record.validate().and_then(|_| match cfg {
            Some(c) => fit_beta_mle(&normalize(&record.samples, c)),
            None => fit_beta_mle(&record.samples),
        });
        match fitted {
            Ok(fit) => {
                out.cohort.subjects.push(FittedSubject {
                    id: record.id.clone(),
                    label: record.label.clone(),
                    point: fit.point,
                });
                out.fits.push(fit);
            }
            Err(e) => out.excluded.push(Exclusion {
                id: record.id.clone(),
                label: record.label.clone(),
                reason: e.to_string(),
            }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_strain_examples() {
        assert_eq!(
            area_strain(&[2.0, 1.0, 1.0], &[1.0, 1.0, 3.0]).unwrap(),
            vec![-0.5, 0.0, 2.0]
        );
        assert!(area_strain(&[1.0], &[1.0, 2.0]).is_err());
        assert!(area_strain(&[0.0], &[1.0]).is_err());
        assert!(area_strain(&[1.0], &[-1.0]).is_err());
    }

    #[test]
    fn normalization_clamps_and_rescales() {
        let cfg = NormalizationConfig::new(-0.6, 0.2).unwrap();
        let out = normalize(&[-0.6, 0.2, -0.2, -0.9, 0.5], &cfg);
        assert_eq!(out[0], 0.0);
        assert_eq!(out[1], 1.0);
        assert!((out[2] - 0.5).abs() < 1e-15);
        assert_eq!(out[3], 0.0);
        assert_eq!(out[4], 1.0);
        assert!(NormalizationConfig::new(1.0, 1.0).is_err());
        assert!(NormalizationConfig::new(2.0, 1.0).is_err());
    }

    #[test]
    fn cohort_max_bounds() {
        let records = vec![
            SubjectRecord::new("a", "c", vec![1.0, 2.5]).unwrap(),
            SubjectRecord::new("b", "c", vec![4.0, 0.5]).unwrap(),
        ];
        let cfg = NormalizationConfig::from_cohort_max(&records).unwrap();
        assert_eq!((cfg.lower, cfg.upper), (0.0, 4.0));
    }

    #[test]
    fn symmetric_sample_gives_equal_parameters() {
        let fit = fit_beta_mle(&[0.2, 0.8, 0.35, 0.65]).unwrap();
        assert_eq!(fit.method, FitMethod::Newton);
        assert!((fit.point.x() - fit.point.y()).abs() < 1e-6);
    }

    #[test]
    fn reflected_sample_swaps_parameters() {
        let s = [0.12, 0.4, 0.33, 0.05, 0.61, 0.27, 0.19];
        let reflected: Vec<f64> = s.iter().map(|t| 1.0 - t).collect();
        let a = fit_beta_mle(&s).unwrap().point;
        let b = fit_beta_mle(&reflected).unwrap().point;
        assert!((a.x() - b.y()).abs() < 1e-8 && (a.y() - b.x()).abs() < 1e-8);
    }

    #[test]
    fn sample_order_is_irrelevant() {
        let s = [0.12, 0.4, 0.33, 0.05, 0.61, 0.27, 0.19];
        let mut r = s;
        r.reverse();
        assert_eq!(fit_beta_mle(&s).unwrap(), fit_beta_mle(&r).unwrap());
    }

    #[test]
    fn degenerate_samples_are_rejected() {
        for bad in [&[0.3][..], &[0.4, 0.4, 0.4], &[0.0, 1.0, 1.0], &[1e-9, 2e-9]] {
            assert!(matches!(fit_beta_mle(bad), Err(Error::DegenerateSample(_))), "{bad:?}");
        }
        assert!(matches!(fit_beta_mle(&[0.2, 1.3]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn boundary_atoms_are_shrunk_not_fatal() {
        let fit = fit_beta_mle(&[0.0, 0.1, 0.3, 0.5, 1.0, 0.7]).unwrap();
        assert!(fit.log_likelihood.is_finite());
        assert_eq!(fit.method, FitMethod::Newton);
    }

    #[test]
    fn histogram_expansion() {
        let r = SubjectRecord::from_histogram("s", "l", &[0.25, 0.75], &[2, 1]).unwrap();
        assert_eq!(r.samples, vec![0.25, 0.25, 0.75]);
        assert!(SubjectRecord::from_histogram("s", "l", &[0.25], &[2, 1]).is_err());
    }

    #[test]
    fn cohort_conservation_and_exclusions() {
        let records = vec![
            SubjectRecord::new("a", "x", vec![0.1, 0.2, 0.4, 0.3]).unwrap(),
            SubjectRecord::new("b", "y", vec![0.5, 0.5, 0.5]).unwrap(),
            SubjectRecord::new("c", "x", vec![0.6, 0.9, 0.75, 0.8]).unwrap(),
        ];
        let out = fit_cohort(&records, None);
        assert_eq!(out.cohort.len() + out.excluded.len(), records.len());
        assert_eq!(out.excluded.len(), 1);
        assert_eq!(out.excluded[0].id, "b");
        let ids: Vec<_> = out.cohort.subjects.iter().map(|s| s.id.as_str()).collect();
        assert_eq!(ids, ["a", "c"]);
    }
}

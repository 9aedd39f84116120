//! Classification and clustering of fitted cohorts.
//!
//! Every method runs under a [`GeometryChoice`]: either the Fisher–Rao
//! distance with Fréchet means, or the Euclidean distance with arithmetic
//! means on the raw (x, y) parameters.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::FittedCohort;
use crate::manifold::{log_map_with, BetaPoint};
use crate::stats::{frechet_mean, frechet_mean_from, KarcherConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeometryChoice {
    Riemannian { karcher: KarcherConfig },
    Euclidean,
}

impl GeometryChoice {
    pub fn riemannian() -> Self {
        GeometryChoice::Riemannian {
            karcher: KarcherConfig::default(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeometryChoice::Riemannian { .. } => "riemannian",
            GeometryChoice::Euclidean => "euclidean",
        }
    }

    /// Squared distance from `point` to `anchor`. Under the Fisher metric this
    /// is the squared length of the logarithm taken at `anchor`, the same
    /// quantity the Karcher flow sums when `anchor` is a centroid. All
    /// comparisons in this module use squared distances.
    pub fn squared_distance(&self, point: &BetaPoint, anchor: &BetaPoint) -> Result<f64> {
        match self {
            GeometryChoice::Riemannian { karcher } => {
                Ok(log_map_with(anchor, point, &karcher.shooting)?.squared_norm())
            }
            GeometryChoice::Euclidean => {
                let (dx, dy) = (point.x() - anchor.x(), point.y() - anchor.y());
                Ok(dx * dx + dy * dy)
            }
        }
    }

    pub fn distance(&self, point: &BetaPoint, anchor: &BetaPoint) -> Result<f64> {
        Ok(self.squared_distance(point, anchor)?.sqrt())
    }

    /// Fréchet or arithmetic mean. `warm_start` only affects the Fisher case.
    pub fn mean(&self, points: &[BetaPoint], warm_start: Option<BetaPoint>) -> Result<BetaPoint> {
        if points.is_empty() {
            return Err(Error::invalid("cannot average an empty set of points"));
        }
        match self {
            GeometryChoice::Riemannian { karcher } => {
                let result = match warm_start {
                    Some(start) => frechet_mean_from(points, start, karcher)?,
                    None => frechet_mean(points, karcher)?,
                };
                Ok(result.mean)
            }
            GeometryChoice::Euclidean => {
                let n = points.len() as f64;
                let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p.x(), b + p.y()));
                BetaPoint::new(sx / n, sy / n)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub k: usize,
    pub geometry: GeometryChoice,
}

impl KnnConfig {
    pub fn new(k: usize, geometry: GeometryChoice) -> Result<Self> {
        if k == 0 || k.is_multiple_of(2) {
            return Err(Error::invalid(format!("k must be a positive odd integer, got {k}")));
        }
        Ok(KnnConfig { k, geometry })
    }
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig {
            k: 7,
            geometry: GeometryChoice::riemannian(),
        }
    }
}

/// Majority label among the k nearest training subjects.
///
/// Neighbors are ordered by distance, ties going to the smaller training
/// index. A tied vote goes to the tied label whose nearest member ranks first.
pub fn knn_classify(train: &FittedCohort, test_points: &[BetaPoint], cfg: &KnnConfig) -> Result<Vec<String>> {
    if cfg.k == 0 || cfg.k.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "k must be a positive odd integer, got {}",
            cfg.k
        )));
    }
    if cfg.k > train.len() {
        return Err(Error::invalid(format!(
            "k = {} exceeds the number of training subjects ({})",
            cfg.k,
            train.len()
        )));
    }
    test_points
        .iter()
        .map(|q| {
            let mut ranked = train
                .subjects
                .iter()
                .enumerate()
                .map(|(i, s)| Ok((cfg.geometry.squared_distance(q, &s.point)?, i)))
                .collect::<Result<Vec<_>>>()?;
            ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            // label -> (votes, rank of first occurrence)
            let mut votes: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
            for (rank, &(_, i)) in ranked.iter().take(cfg.k).enumerate() {
                let entry = votes.entry(train.subjects[i].label.as_str()).or_insert((0, rank));
                entry.0 += 1;
            }
            let (label, _) = votes
                .into_iter()
                .max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.1 .1.cmp(&a.1 .1)))
                .expect("k >= 1");
            Ok(label.to_string())
        })
        .collect()
}

/// One centroid per class label, labels in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassCentroids {
    pub labels: Vec<String>,
    pub centroids: Vec<BetaPoint>,
}

pub fn class_centroids(train: &FittedCohort, geometry: &GeometryChoice) -> Result<ClassCentroids> {
    if train.is_empty() {
        return Err(Error::invalid("nearest-centroid training needs at least one subject"));
    }
    let mut classes: BTreeMap<&str, Vec<BetaPoint>> = BTreeMap::new();
    for s in &train.subjects {
        classes.entry(s.label.as_str()).or_default().push(s.point);
    }
    let mut out = ClassCentroids {
        labels: Vec::new(),
        centroids: Vec::new(),
    };
    for (label, members) in classes {
        if members.is_empty() {
            return Err(Error::invalid(format!("class {label} has no training members")));
        }
        out.labels.push(label.to_string());
        out.centroids.push(geometry.mean(&members, None)?);
    }
    Ok(out)
}

/// Index of the closest anchor, ties going to the smaller index, with its squared distance.
fn nearest(point: &BetaPoint, anchors: &[BetaPoint], geometry: &GeometryChoice) -> Result<(usize, f64)> {
    let mut best = (0, f64::INFINITY);
    for (j, a) in anchors.iter().enumerate() {
        let d = geometry.squared_distance(point, a)?;
        if d < best.1 {
            best = (j, d);
        }
    }
    Ok(best)
}

/// Supervised K-means: label each test point by its nearest class centroid.
pub fn supervised_kmeans(
    train: &FittedCohort,
    test_points: &[BetaPoint],
    geometry: &GeometryChoice,
) -> Result<Vec<String>> {
    let model = class_centroids(train, geometry)?;
    test_points
        .iter()
        .map(|q| Ok(model.labels[nearest(q, &model.centroids, geometry)?.0].clone()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig {
    pub n_clusters: usize,
    pub geometry: GeometryChoice,
    pub max_iterations: usize,
    pub seed: u64,
    pub n_init: usize,
}

impl KMeansConfig {
    pub fn new(n_clusters: usize, geometry: GeometryChoice, seed: u64) -> Self {
        KMeansConfig {
            n_clusters,
            geometry,
            max_iterations: 100,
            seed,
            n_init: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KMeansResult {
    pub assignments: Vec<usize>,
    pub centroids: Vec<BetaPoint>,
    /// Σ d²(point, its centroid).
    pub inertia: f64,
    /// Inertia after every assignment step.
    pub inertia_trace: Vec<f64>,
    pub iterations: usize,
    /// Which restart produced this result.
    pub restart: usize,
}

/// The random stream used by restart `restart`: stream `restart` of a
/// ChaCha8 generator seeded with `seed`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// k-means++ seeding under `geometry`; returns the indices of the seeds.
///
/// The first seed is `rng.gen_range(0..n)`. Each further seed draws
/// `r = rng.gen::<f64>() * Σ D²` and takes the first index whose cumulative
/// D² exceeds `r`, where D is the distance to the closest seed so far.
pub fn kmeans_plus_plus<R: Rng>(
    points: &[BetaPoint],
    n_clusters: usize,
    geometry: &GeometryChoice,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if n_clusters == 0 || n_clusters > points.len() {
        return Err(Error::invalid(format!(
            "cannot form {n_clusters} clusters from {} points",
            points.len()
        )));
    }
    let n = points.len();
    let first = rng.gen_range(0..n);
    let mut seeds = vec![first];
    let mut closest: Vec<f64> = points
        .iter()
        .map(|p| geometry.squared_distance(p, &points[first]))
        .collect::<Result<_>>()?;
    while seeds.len() < n_clusters {
        let total: f64 = closest.iter().sum();
        let next = if total > 0.0 {
            let r = rng.gen::<f64>() * total;
            let mut cumulative = 0.0;
            let mut pick = None;
            for (i, &d2) in closest.iter().enumerate() {
                cumulative += d2;
                if d2 > 0.0 && cumulative > r {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave r at the very top of the range.
            pick.unwrap_or_else(|| closest.iter().rposition(|&d2| d2 > 0.0).expect("total > 0"))
        } else {
            // Fewer distinct locations than clusters.
            (0..n).find(|i| !seeds.contains(i)).expect("n_clusters <= n")
        };
        seeds.push(next);
        for (i, p) in points.iter().enumerate() {
            closest[i] = closest[i].min(geometry.squared_distance(p, &points[next])?);
        }
    }
    Ok(seeds)
}

/// Lloyd iterations from the given centroids.
///
/// Stops when an assignment step changes nothing or after `max_iterations`
/// assignment steps. An empty cluster takes over the point farthest from its
/// own centroid (smallest index among ties) that is not alone in its cluster.
/// Fréchet centroids are warm-started from the previous centroid.
pub fn lloyd(
    points: &[BetaPoint],
    initial: Vec<BetaPoint>,
    geometry: &GeometryChoice,
    max_iterations: usize,
) -> Result<KMeansResult> {
    let k = initial.len();
    if k == 0 || k > points.len() {
        return Err(Error::invalid(format!(
            "cannot form {k} clusters from {} points",
            points.len()
        )));
    }
    if max_iterations == 0 {
        return Err(Error::invalid("K-means needs at least one iteration"));
    }
    let mut centroids = initial;
    let mut assignments: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut iterations = 0;

    while iterations < max_iterations {
        iterations += 1;
        let mut next = Vec::with_capacity(points.len());
        let mut dist = Vec::with_capacity(points.len());
        for p in points {
            let (j, d) = nearest(p, &centroids, geometry)?;
            next.push(j);
            dist.push(d);
        }

        let mut sizes = vec![0usize; k];
        for &j in &next {
            sizes[j] += 1;
        }
        for c in 0..k {
            if sizes[c] > 0 {
                continue;
            }
            let donor = (0..points.len())
                .filter(|&i| sizes[next[i]] > 1)
                .fold(None, |best: Option<usize>, i| match best {
                    Some(b) if dist[b] >= dist[i] => Some(b),
                    _ => Some(i),
                })
                .expect("k <= n leaves a cluster with at least two points");
            sizes[next[donor]] -= 1;
            sizes[c] = 1;
            next[donor] = c;
            dist[donor] = 0.0;
            centroids[c] = points[donor];
        }

        trace.push(dist.iter().sum());
        if next == assignments {
            break;
        }
        assignments = next;

        for (c, centroid) in centroids.iter_mut().enumerate() {
            let members: Vec<BetaPoint> = points
                .iter()
                .zip(&assignments)
                .filter(|(_, &a)| a == c)
                .map(|(p, _)| *p)
                .collect();
            *centroid = geometry.mean(&members, Some(*centroid))?;
        }
    }

    Ok(KMeansResult {
        assignments,
        centroids,
        inertia: *trace.last().expect("at least one iteration"),
        inertia_trace: trace,
        iterations,
        restart: 0,
    })
}

/// Unsupervised K-means: the best of `n_init` k-means++ restarts by inertia
/// (earliest restart among ties).
pub fn unsupervised_kmeans(points: &[BetaPoint], cfg: &KMeansConfig) -> Result<KMeansResult> {
    if cfg.n_clusters == 0 || cfg.n_clusters > points.len() {
        return Err(Error::invalid(format!(
            "cannot form {} clusters from {} points",
            cfg.n_clusters,
            points.len()
        )));
    }
    if cfg.n_init == 0 {
        return Err(Error::invalid("K-means needs at least one restart"));
    }
    let mut best: Option<KMeansResult> = None;
    for restart in 0..cfg.n_init {
        let mut rng = restart_rng(cfg.seed, restart);
        let seeds = kmeans_plus_plus(points, cfg.n_clusters, &cfg.geometry, &mut rng)?;
        let initial = seeds.iter().map(|&i| points[i]).collect();
        let mut result = lloyd(points, initial, &cfg.geometry, cfg.max_iterations)?;
        result.restart = restart;
        if best.as_ref().is_none_or(|b| result.inertia < b.inertia) {
            best = Some(result);
        }
    }
    Ok(best.expect("n_init >= 1"))
}

/// Fraction of points whose cluster maps to their label under the best
/// one-to-one matching of cluster indices to labels.
pub fn clustering_accuracy<L: Ord>(assignments: &[usize], labels: &[L]) -> Result<f64> {
    if assignments.len() != labels.len() {
        return Err(Error::invalid(format!(
            "{} assignments but {} labels",
            assignments.len(),
            labels.len()
        )));
    }
    if assignments.is_empty() {
        return Err(Error::invalid("cannot score an empty clustering"));
    }
    let clusters: Vec<usize> = assignments
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let classes: Vec<&L> = labels.iter().collect::<BTreeSet<_>>().into_iter().collect();
    // Match the smaller side into the larger one.
    let mut table = vec![vec![0usize; classes.len()]; clusters.len()];
    for (a, l) in assignments.iter().zip(labels) {
        let r = clusters.binary_search(a).expect("present");
        let c = classes.binary_search(&l).expect("present");
        table[r][c] += 1;
    }
    if clusters.len() > classes.len() {
        table = (0..classes.len())
            .map(|c| (0..clusters.len()).map(|r| table[r][c]).collect())
            .collect();
    }
    let wide = table[0].len();
    if wide > 20 {
        return Err(Error::invalid("matching is limited to 20 clusters or labels"));
    }
    // best[mask] = largest agreement using the columns in `mask` for the first rows.
    let mut best = vec![None::<usize>; 1 << wide];
    best[0] = Some(0);
    for row in &table {
        let mut next = vec![None::<usize>; 1 << wide];
        for (mask, value) in best.iter().enumerate() {
            let Some(value) = value else { continue };
            for (col, &count) in row.iter().enumerate() {
                if mask & (1 << col) == 0 {
                    let m = mask | (1 << col);
                    let v = value + count;
                    if next[m].is_none_or(|old| v > old) {
                        next[m] = Some(v);
                    }
                }
            }
        }
        best = next;
    }
    let agreed = best.into_iter().flatten().max().unwrap_or(0);
    Ok(agreed as f64 / assignments.len() as f64)
}

/// Classifier evaluated by cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Classifier {
    Knn(KnnConfig),
    Skm { geometry: GeometryChoice },
}

impl Classifier {
    pub fn predict(&self, train: &FittedCohort, test_points: &[BetaPoint]) -> Result<Vec<String>> {
        match self {
            Classifier::Knn(cfg) => knn_classify(train, test_points, cfg),
            Classifier::Skm { geometry } => supervised_kmeans(train, test_points, geometry),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub per_fold_accuracy: Vec<f64>,
    pub mean_accuracy: f64,
    /// Population standard deviation of the per-fold accuracies.
    pub std_accuracy: f64,
    pub fold_assignments: BTreeMap<String, usize>,
}

/// Stratified fold index for every subject.
///
/// Labels are visited in sorted order; each class is shuffled and dealt to
/// folds round-robin, continuing from where the previous class stopped, so
/// class counts per fold and overall fold sizes each differ by at most one.
pub fn stratified_folds(labels: &[String], folds: usize, seed: u64) -> Result<Vec<usize>> {
    if folds < 2 {
        return Err(Error::invalid(format!(
            "cross-validation needs at least 2 folds, got {folds}"
        )));
    }
    let mut classes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        classes.entry(l.as_str()).or_default().push(i);
    }
    if let Some((label, members)) = classes.iter().find(|(_, m)| m.len() < folds) {
        return Err(Error::invalid(format!(
            "class {label} has {} subjects, fewer than the {folds} folds",
            members.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; labels.len()];
    let mut cursor = 0;
    for members in classes.values_mut() {
        members.shuffle(&mut rng);
        for &i in members.iter() {
            assignment[i] = cursor % folds;
            cursor += 1;
        }
    }
    Ok(assignment)
}

/// Stratified k-fold cross-validation of a classifier.
pub fn cross_validate(cohort: &FittedCohort, model: &Classifier, folds: usize, seed: u64) -> Result<CvReport> {
    let mut ids = BTreeSet::new();
    if let Some(dup) = cohort.subjects.iter().find(|s| !ids.insert(s.id.as_str())) {
        return Err(Error::invalid(format!("duplicate subject id {}", dup.id)));
    }
    let assignment = stratified_folds(&cohort.labels(), folds, seed)?;
    let fold_members: Vec<Vec<usize>> = (0..folds)
        .map(|f| (0..cohort.len()).filter(|&i| assignment[i] == f).collect())
        .collect();
    if let Classifier::Knn(cfg) = model {
        let smallest = fold_members.iter().map(|m| cohort.len() - m.len()).min().unwrap_or(0);
        if cfg.k > smallest {
            return Err(Error::invalid(format!(
                "k = {} exceeds the smallest training fold ({smallest} subjects)",
                cfg.k
            )));
        }
    }

    let mut per_fold = Vec::with_capacity(folds);
    for test in &fold_members {
        let train: Vec<usize> = (0..cohort.len()).filter(|i| !test.contains(i)).collect();
        let train = cohort.select(&train);
        let test = cohort.select(test);
        let predicted = model.predict(&train, &test.points())?;
        let correct = predicted
            .iter()
            .zip(&test.subjects)
            .filter(|(p, s)| **p == s.label)
            .count();
        per_fold.push(correct as f64 / test.len() as f64);
    }
    let n = per_fold.len() as f64;
    let mean = per_fold.iter().sum::<f64>() / n;
    let std = (per_fold.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n).sqrt();
    Ok(CvReport {
        per_fold_accuracy: per_fold,
        mean_accuracy: mean,
        std_accuracy: std,
        fold_assignments: cohort
            .subjects
            .iter()
            .zip(&assignment)
            .map(|(s, &f)| (s.id.clone(), f))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::FittedSubject;

    fn pt(x: f64, y: f64) -> BetaPoint {
        BetaPoint::new(x, y).unwrap()
    }

    fn cohort(items: &[(&str, &str, f64, f64)]) -> FittedCohort {
        FittedCohort::new(
            items
                .iter()
                .map(|&(id, label, x, y)| FittedSubject {
                    id: id.into(),
                    label: label.into(),
                    point: pt(x, y),
                })
                .collect(),
        )
    }

    fn small() -> FittedCohort {
        cohort(&[
            ("a", "lo", 2.0, 8.0),
            ("b", "lo", 2.2, 7.5),
            ("c", "lo", 1.8, 8.4),
            ("d", "hi", 8.0, 2.0),
            ("e", "hi", 7.6, 2.1),
            ("f", "hi", 8.3, 1.9),
        ])
    }

    #[test]
    fn one_nearest_neighbor_recovers_training_labels() {
        let train = small();
        for geometry in [GeometryChoice::riemannian(), GeometryChoice::Euclidean] {
            let cfg = KnnConfig::new(1, geometry).unwrap();
            assert_eq!(knn_classify(&train, &train.points(), &cfg).unwrap(), train.labels());
        }
    }

    #[test]
    fn knn_rejects_bad_k() {
        assert!(KnnConfig::new(2, GeometryChoice::Euclidean).is_err());
        assert!(KnnConfig::new(0, GeometryChoice::Euclidean).is_err());
        let cfg = KnnConfig::new(7, GeometryChoice::Euclidean).unwrap();
        assert!(knn_classify(&small(), &[pt(1.0, 1.0)], &cfg).is_err());
    }

    #[test]
    fn multiclass_vote_tie_goes_to_nearest() {
        let train = cohort(&[("a", "x", 1.0, 1.0), ("b", "y", 1.1, 1.0), ("c", "z", 1.2, 1.0)]);
        let cfg = KnnConfig::new(3, GeometryChoice::Euclidean).unwrap();
        assert_eq!(knn_classify(&train, &[pt(1.19, 1.0)], &cfg).unwrap(), ["z"]);
    }

    #[test]
    fn nearest_centroid_with_singleton_classes() {
        let train = cohort(&[("a", "x", 1.0, 3.0), ("b", "y", 3.0, 1.0)]);
        for geometry in [GeometryChoice::riemannian(), GeometryChoice::Euclidean] {
            let model = class_centroids(&train, &geometry).unwrap();
            assert_eq!(model.centroids, vec![pt(1.0, 3.0), pt(3.0, 1.0)]);
            let got = supervised_kmeans(&train, &[pt(1.0, 3.0), pt(3.0, 1.0)], &geometry).unwrap();
            assert_eq!(got, ["x", "y"]);
        }
    }

    #[test]
    fn accuracy_is_permutation_invariant() {
        let labels = ["a", "a", "b", "b", "c"];
        assert_eq!(clustering_accuracy(&[0, 0, 1, 1, 2], &labels).unwrap(), 1.0);
        assert_eq!(clustering_accuracy(&[2, 2, 0, 0, 1], &labels).unwrap(), 1.0);
        assert_eq!(clustering_accuracy(&[0, 0, 0, 0, 0], &labels).unwrap(), 0.4);
        assert!(
            (clustering_accuracy(&[0, 1, 0, 1, 2, 3], &["a", "a", "b", "b", "c", "c"]).unwrap() - 0.5).abs() < 1e-15
        );
        assert!(clustering_accuracy(&[0, 1], &["a"]).is_err());
    }

    #[test]
    fn identical_copies_are_recovered_exactly() {
        let mut points = Vec::new();
        for _ in 0..4 {
            points.extend([pt(1.0, 5.0), pt(5.0, 1.0), pt(3.0, 3.0)]);
        }
        for geometry in [GeometryChoice::riemannian(), GeometryChoice::Euclidean] {
            let r = unsupervised_kmeans(&points, &KMeansConfig::new(3, geometry, 11)).unwrap();
            assert_eq!(r.inertia, 0.0);
            for (i, a) in r.assignments.iter().enumerate() {
                assert_eq!(*a, r.assignments[i % 3]);
            }
        }
    }

    #[test]
    fn too_many_clusters_is_an_error() {
        let cfg = KMeansConfig::new(3, GeometryChoice::Euclidean, 0);
        assert!(unsupervised_kmeans(&[pt(1.0, 1.0), pt(2.0, 2.0)], &cfg).is_err());
    }

    #[test]
    fn folds_partition_and_stratify() {
        let labels: Vec<String> = (0..23)
            .map(|i| if i % 3 == 0 { "a" } else { "b" }.to_string())
            .collect();
        let folds = stratified_folds(&labels, 5, 3).unwrap();
        let mut sizes = [0usize; 5];
        for &f in &folds {
            sizes[f] += 1;
        }
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for class in ["a", "b"] {
            let mut per = [0usize; 5];
            for (l, &f) in labels.iter().zip(&folds) {
                if l == class {
                    per[f] += 1;
                }
            }
            assert!(per.iter().max().unwrap() - per.iter().min().unwrap() <= 1);
        }
        assert_eq!(folds, stratified_folds(&labels, 5, 3).unwrap());
        assert!(stratified_folds(&labels, 1, 3).is_err());
        assert!(stratified_folds(&labels[..6], 5, 3).is_err());
    }
}

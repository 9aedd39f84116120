//! `betageo` command-line tool.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage or parse error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use betageo::fit::{fit_cohort, NormalizationConfig};
use betageo::io;
use betageo::learn::{
    clustering_accuracy, cross_validate, unsupervised_kmeans, Classifier, GeometryChoice, KMeansConfig, KnnConfig,
};
use betageo::manifold::{
    curvature_grid, distance_with, geodesic_ball, geodesic_between, write_ball_csv, write_curvature_csv,
    ShootingConfig, DEFAULT_STEPS,
};
use betageo::stats::KarcherConfig;
use betageo::synth::{synthetic_cohort, SyntheticClass, SyntheticCohortConfig};
use betageo::BetaPoint;

#[derive(Parser)]
#[command(
    name = "betageo",
    version,
    about = "Fisher–Rao geometry of beta distributions and histogram classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a beta distribution to every subject of a cohort.
    Fit(FitArgs),
    /// Geodesic between two beta distributions; prints their distance.
    Geodesic(GeodesicArgs),
    /// Geodesic ball around a point.
    Ball(BallArgs),
    /// Sectional curvature on a log-spaced grid.
    CurvatureGrid(GridArgs),
    /// Cross-validated classification of a fitted cohort.
    Classify(ClassifyArgs),
    /// Unsupervised K-means on a fitted cohort.
    Cluster(ClusterArgs),
    /// Generate a seeded synthetic cohort of two well-separated classes.
    Synth(SynthArgs),
}

#[derive(Args, Serialize)]
struct ShootingArgs {
    /// RK4 steps per geodesic integration.
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Newton iterations of the logarithm solver.
    #[arg(long, default_value_t = 50)]
    shooting_iterations: usize,
    /// Endpoint residual accepted by the logarithm solver.
    #[arg(long, default_value_t = 1e-6)]
    shooting_tolerance: f64,
}

impl ShootingArgs {
    fn config(&self) -> ShootingConfig {
        ShootingConfig {
            steps: self.steps,
            max_iterations: self.shooting_iterations,
            tolerance: self.shooting_tolerance,
        }
    }
}

#[derive(Args, Serialize)]
struct KarcherArgs {
    #[command(flatten)]
    shooting: ShootingArgs,
    /// Karcher flow step size τ in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    karcher_step: f64,
    #[arg(long, default_value_t = 100)]
    karcher_iterations: usize,
    /// Gradient norm at which the Karcher flow stops.
    #[arg(long, default_value_t = 1e-6)]
    karcher_tolerance: f64,
}

impl KarcherArgs {
    fn config(&self) -> KarcherConfig {
        KarcherConfig {
            step_size: self.karcher_step,
            max_iterations: self.karcher_iterations,
            gradient_tolerance: self.karcher_tolerance,
            shooting: self.shooting.config(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Geometry {
    Riemannian,
    Euclidean,
}

impl Geometry {
    fn choice(self, karcher: &KarcherArgs) -> GeometryChoice {
        match self {
            Geometry::Riemannian => GeometryChoice::Riemannian {
                karcher: karcher.config(),
            },
            Geometry::Euclidean => GeometryChoice::Euclidean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Model {
    /// K nearest neighbors.
    Knn,
    /// Nearest class centroid (supervised K-means).
    Skm,
}

#[derive(Args, Serialize)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "areas"])))]
struct FitArgs {
    /// JSON-lines subjects.
    #[arg(long)]
    input: Option<PathBuf>,
    /// CSV manifest `id,label,path` of per-subject `cell_id,area_t0,area_t1` files.
    #[arg(long)]
    areas: Option<PathBuf>,
    /// Lower clamp bound p.
    #[arg(long, requires = "upper", allow_hyphen_values = true)]
    lower: Option<f64>,
    /// Upper clamp bound q.
    #[arg(long, requires = "lower", allow_hyphen_values = true)]
    upper: Option<f64>,
    /// Normalize by the largest sample in the cohort (bounds [0, max]).
    #[arg(long, conflicts_with_all = ["lower", "upper"])]
    cohort_max: bool,
    /// Output CSV `id,label,x,y`; exclusions go to `<stem>.exclusions.csv`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct GeodesicArgs {
    #[arg(allow_hyphen_values = true)]
    x0: f64,
    #[arg(allow_hyphen_values = true)]
    y0: f64,
    #[arg(allow_hyphen_values = true)]
    x1: f64,
    #[arg(allow_hyphen_values = true)]
    y1: f64,
    #[command(flatten)]
    shooting: ShootingArgs,
    /// Output CSV `t,x,y,u,v`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct BallArgs {
    #[arg(allow_hyphen_values = true)]
    center_x: f64,
    #[arg(allow_hyphen_values = true)]
    center_y: f64,
    #[arg(long, allow_hyphen_values = true)]
    radius: f64,
    #[arg(long, default_value_t = 64)]
    directions: usize,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Output CSV `theta,x,y,truncated`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    xmin: f64,
    #[arg(long, allow_hyphen_values = true)]
    xmax: f64,
    #[arg(long, allow_hyphen_values = true)]
    ymin: f64,
    #[arg(long, allow_hyphen_values = true)]
    ymax: f64,
    /// Nodes per axis.
    #[arg(long)]
    n: usize,
    /// Output CSV `x,y,K`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct ClassifyArgs {
    /// Fitted cohort CSV `id,label,x,y`.
    #[arg(long)]
    cohort: PathBuf,
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long, value_enum, default_value = "riemannian")]
    geometry: Geometry,
    /// Neighbors for KNN (odd).
    #[arg(long, default_value_t = 7)]
    k: usize,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    karcher: KarcherArgs,
    /// Output JSON report.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct ClusterArgs {
    #[arg(long)]
    cohort: PathBuf,
    #[arg(long, value_enum, default_value = "riemannian")]
    geometry: Geometry,
    #[arg(long)]
    clusters: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    n_init: usize,
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
    #[command(flatten)]
    karcher: KarcherArgs,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Serialize)]
struct SynthArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    per_class: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Relative parameter jitter per subject.
    #[arg(long, default_value_t = 0.1)]
    jitter: f64,
    /// Output JSON-lines subjects.
    #[arg(long)]
    output: PathBuf,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<betageo::Error> for Failure {
    fn from(e: betageo::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    config: Value,
    seed: Option<u64>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    version: &'static str,
    duration_seconds: f64,
}

struct Run {
    command: &'static str,
    started: Instant,
}

impl Run {
    fn finish(&self, config: &impl Serialize, seed: Option<u64>, inputs: &[&Path], outputs: &[&Path]) -> Outcome {
        let primary = outputs[0];
        let manifest = RunManifest {
            command: self.command,
            config: serde_json::to_value(config).expect("configuration serializes"),
            seed,
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
            version: env!("CARGO_PKG_VERSION"),
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let mut text = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
        text.push(b'\n');
        io::write_atomic(&sibling(primary, "manifest.json"), &text)?;
        Ok(())
    }
}

/// `dir/stem.<suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    path.with_extension(suffix)
}

fn point(x: f64, y: f64) -> Result<BetaPoint, Failure> {
    BetaPoint::new(x, y).map_err(|e| Failure::Usage(e.to_string()))
}

fn buffer(write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn json_bytes(value: &impl Serialize) -> Vec<u8> {
    let mut text = serde_json::to_vec_pretty(value).expect("report serializes");
    text.push(b'\n');
    text
}

fn cmd_fit(args: &FitArgs, run: &Run) -> Outcome {
    let (records, input) = match (&args.input, &args.areas) {
        (Some(p), _) => (io::read_subjects(p)?, p),
        (None, Some(p)) => (io::read_area_manifest(p)?, p),
        (None, None) => unreachable!("clap requires a source"),
    };
    let normalization = match (args.lower, args.upper, args.cohort_max) {
        (Some(p), Some(q), _) => Some(NormalizationConfig::new(p, q)?),
        (_, _, true) => Some(NormalizationConfig::from_cohort_max(&records)?),
        _ => None,
    };
    let result = fit_cohort(&records, normalization.as_ref());
    let mut cohort = Vec::new();
    io::write_cohort(&mut cohort, &result.cohort)?;
    let mut exclusions = Vec::new();
    io::write_exclusions(&mut exclusions, &result.excluded)?;
    let excluded_path = sibling(&args.output, "exclusions.csv");
    io::write_atomic(&args.output, &cohort)?;
    io::write_atomic(&excluded_path, &exclusions)?;
    println!(
        "fitted {} of {} subjects ({} excluded)",
        result.cohort.len(),
        records.len(),
        result.excluded.len()
    );
    let config = json!({ "args": args, "normalization": normalization });
    run.finish(&config, None, &[input], &[&args.output, &excluded_path])
}

fn cmd_geodesic(args: &GeodesicArgs, run: &Run) -> Outcome {
    let (p, q) = (point(args.x0, args.y0)?, point(args.x1, args.y1)?);
    let cfg = args.shooting.config();
    let path = geodesic_between(&p, &q, &cfg)?;
    let d = if p == q { 0.0 } else { distance_with(&p, &q, &cfg)? };
    io::write_atomic(&args.output, &buffer(|b| path.write_csv(b))?)?;
    println!("distance {d}");
    run.finish(args, None, &[], &[&args.output])
}

fn cmd_ball(args: &BallArgs, run: &Run) -> Outcome {
    let center = point(args.center_x, args.center_y)?;
    let ball = geodesic_ball(&center, args.radius, args.directions, args.steps)?;
    io::write_atomic(&args.output, &buffer(|b| write_ball_csv(&ball, b))?)?;
    let truncated = ball.iter().filter(|b| b.truncated).count();
    if truncated > 0 {
        eprintln!(
            "{truncated} of {} directions left the domain and were truncated",
            ball.len()
        );
    }
    run.finish(args, None, &[], &[&args.output])
}

fn cmd_grid(args: &GridArgs, run: &Run) -> Outcome {
    let grid = curvature_grid((args.xmin, args.xmax), (args.ymin, args.ymax), args.n)?;
    io::write_atomic(&args.output, &buffer(|b| write_curvature_csv(&grid, b))?)?;
    run.finish(args, None, &[], &[&args.output])
}

fn cmd_classify(args: &ClassifyArgs, run: &Run) -> Outcome {
    let cohort = io::read_cohort(&args.cohort)?;
    let geometry = args.geometry.choice(&args.karcher);
    let model = match args.model {
        Model::Knn => Classifier::Knn(KnnConfig::new(args.k, geometry)?),
        Model::Skm => Classifier::Skm { geometry },
    };
    let report = cross_validate(&cohort, &model, args.folds, args.seed)?;
    io::write_atomic(&args.output, &json_bytes(&report))?;
    println!("accuracy {:.4} ± {:.4}", report.mean_accuracy, report.std_accuracy);
    let config = json!({ "args": args, "model": model });
    run.finish(&config, Some(args.seed), &[&args.cohort], &[&args.output])
}

#[derive(Serialize)]
struct ClusterReport {
    assignments: Vec<usize>,
    centroids: Vec<[f64; 2]>,
    inertia: f64,
    accuracy: f64,
    iterations: usize,
    restart: usize,
}

fn cmd_cluster(args: &ClusterArgs, run: &Run) -> Outcome {
    let cohort = io::read_cohort(&args.cohort)?;
    let cfg = KMeansConfig {
        n_clusters: args.clusters,
        geometry: args.geometry.choice(&args.karcher),
        max_iterations: args.max_iterations,
        seed: args.seed,
        n_init: args.n_init,
    };
    let result = unsupervised_kmeans(&cohort.points(), &cfg)?;
    let report = ClusterReport {
        accuracy: clustering_accuracy(&result.assignments, &cohort.labels())?,
        centroids: result.centroids.iter().map(BetaPoint::as_array).collect(),
        assignments: result.assignments,
        inertia: result.inertia,
        iterations: result.iterations,
        restart: result.restart,
    };
    io::write_atomic(&args.output, &json_bytes(&report))?;
    println!("accuracy {:.4}, inertia {}", report.accuracy, report.inertia);
    let config = json!({ "args": args, "kmeans": cfg });
    run.finish(&config, Some(args.seed), &[&args.cohort], &[&args.output])
}

fn cmd_synth(args: &SynthArgs, run: &Run) -> Outcome {
    let mut cfg = SyntheticCohortConfig::separated(args.seed);
    cfg.samples_per_subject = args.samples;
    cfg.jitter = args.jitter;
    cfg.classes
        .iter_mut()
        .for_each(|c: &mut SyntheticClass| c.subjects = args.per_class);
    let records = synthetic_cohort(&cfg)?;
    let mut buf = Vec::new();
    io::write_subjects(&mut buf, &records)?;
    io::write_atomic(&args.output, &buf)?;
    run.finish(&cfg, Some(args.seed), &[], &[&args.output])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = match &cli.command {
        Command::Fit(_) => "fit",
        Command::Geodesic(_) => "geodesic",
        Command::Ball(_) => "ball",
        Command::CurvatureGrid(_) => "curvature-grid",
        Command::Classify(_) => "classify",
        Command::Cluster(_) => "cluster",
        Command::Synth(_) => "synth",
    };
    let run = Run {
        command: name,
        started: Instant::now(),
    };
    let outcome = match &cli.command {
        Command::Fit(a) => cmd_fit(a, &run),
        Command::Geodesic(a) => cmd_geodesic(a, &run),
        Command::Ball(a) => cmd_ball(a, &run),
        Command::CurvatureGrid(a) => cmd_grid(a, &run),
        Command::Classify(a) => cmd_classify(a, &run),
        Command::Cluster(a) => cmd_cluster(a, &run),
        Command::Synth(a) => cmd_synth(a, &run),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numerical(msg)) => {
            eprintln!("betageo {name}: numerical failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("betageo {name}: {msg}");
            ExitCode::from(2)
        }
    }
}

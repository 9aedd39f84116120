mod common;

use betageo::manifold::distance;
use betageo::stats::{frechet_mean, frechet_mean_from, frechet_variance, parameter_average, KarcherConfig};
use betageo::BetaPoint;
use common::*;
use proptest::prelude::*;

fn cloud() -> impl Strategy<Value = Vec<BetaPoint>> {
    prop::collection::vec((0.3f64..20.0, 0.3f64..20.0), 2..8)
        .prop_map(|v| v.into_iter().map(|(x, y)| pt(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn karcher_flow_descends(points in cloud()) {
        let r = frechet_mean(&points, &KarcherConfig::default()).unwrap();
        prop_assert!(r.converged);
        for w in r.objective_trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{:?}", r.objective_trace);
        }
    }

    #[test]
    fn mean_does_not_depend_on_the_start(points in cloud()) {
        let cfg = KarcherConfig::default();
        let a = frechet_mean_from(&points, points[0], &cfg).unwrap().mean;
        let b = frechet_mean_from(&points, parameter_average(&points).unwrap(), &cfg).unwrap().mean;
        prop_assert!(a.parameter_distance(&b) <= 1e-4 * a.x().hypot(a.y()), "{a:?} {b:?}");
    }

    #[test]
    fn mean_ignores_input_order(points in cloud()) {
        let cfg = KarcherConfig::default();
        let a = frechet_mean(&points, &cfg).unwrap().mean;
        let mut reversed = points.clone();
        reversed.reverse();
        let b = frechet_mean(&reversed, &cfg).unwrap().mean;
        prop_assert!(a.parameter_distance(&b) < 1e-9 * a.x().hypot(a.y()).max(1.0), "{a:?} {b:?}");
    }

    #[test]
    fn mean_minimizes_variance_among_inputs(points in cloud()) {
        let mean = frechet_mean(&points, &KarcherConfig::default()).unwrap().mean;
        let at_mean = frechet_variance(&points, &mean).unwrap();
        for p in &points {
            prop_assert!(at_mean <= frechet_variance(&points, p).unwrap() + 1e-9);
        }
    }
}

#[test]
fn two_point_variance_is_quarter_squared_distance() {
    let (p, q) = (pt(0.7, 4.0), pt(6.0, 1.5));
    let mean = frechet_mean(&[p, q], &KarcherConfig::default()).unwrap().mean;
    let d = distance(&p, &q).unwrap();
    let var = frechet_variance(&[p, q], &mean).unwrap();
    // Variance is the mean of the squared distances.
    assert!((var - (d / 2.0).powi(2)).abs() < 1e-4, "{var} vs {}", (d / 2.0).powi(2));
    assert!((distance(&p, &mean).unwrap() - distance(&q, &mean).unwrap()).abs() < 1e-5);
}

#[test]
fn identical_points_have_zero_variance() {
    let p = pt(2.5, 0.9);
    let points = vec![p; 5];
    let mean = frechet_mean(&points, &KarcherConfig::default()).unwrap().mean;
    assert!(mean.parameter_distance(&p) < 1e-12);
    assert_eq!(frechet_variance(&points, &p).unwrap(), 0.0);
}

#[test]
fn empty_input_is_rejected() {
    assert!(frechet_mean(&[], &KarcherConfig::default()).is_err());
    assert!(frechet_variance(&[], &pt(1.0, 1.0)).is_err());
}

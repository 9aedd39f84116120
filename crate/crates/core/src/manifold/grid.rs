use std::io::Write;

use crate::error::{Error, Result};

use super::{sectional_curvature, BetaPoint};

/// `n` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::invalid(format!(
            "range must satisfy 0 < lo < hi, got [{lo}, {hi}]"
        )));
    }
    if n < 2 {
        return Err(Error::invalid("a grid needs at least 2 nodes per axis"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => (a + step * i as f64).exp(),
        })
        .collect())
}

/// One (x, y, K) sample of the sectional curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureSample {
    pub x: f64,
    pub y: f64,
    pub curvature: f64,
}

/// Curvature on an n×n log-spaced grid; rows vary y fastest.
pub fn curvature_grid(x_range: (f64, f64), y_range: (f64, f64), n: usize) -> Result<Vec<CurvatureSample>> {
    let xs = log_space(x_range.0, x_range.1, n)?;
    let ys = log_space(y_range.0, y_range.1, n)?;
    let mut samples = Vec::with_capacity(n * n);
    for &x in &xs {
        for &y in &ys {
            let p = BetaPoint::new(x, y)?;
            samples.push(CurvatureSample {
                x,
                y,
                curvature: sectional_curvature(&p),
            });
        }
    }
    Ok(samples)
}

/// Writes `x,y,K` rows with a header line.
pub fn write_curvature_csv<W: Write>(samples: &[CurvatureSample], mut out: W) -> std::io::Result<()> {
    writeln!(out, "x,y,K")?;
    for s in samples {
        writeln!(out, "{},{},{}", s.x, s.y, s.curvature)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_space_endpoints_and_ratio() {
        let v = log_space(0.1, 10.0, 3).unwrap();
        assert_eq!(v[0], 0.1);
        assert_eq!(v[2], 10.0);
        assert!((v[1] - 1.0).abs() < 1e-14);
        assert!(log_space(0.0, 1.0, 3).is_err());
        assert!(log_space(2.0, 1.0, 3).is_err());
        assert!(log_space(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn two_by_two_grid() {
        let g = curvature_grid((0.5, 5.0), (0.5, 5.0), 2).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|s| s.curvature < 0.0));
        let mut buf = Vec::new();
        write_curvature_csv(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 5);
    }
}

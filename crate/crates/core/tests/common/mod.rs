//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use betageo::manifold::log_partition;
use betageo::BetaPoint;
use rand::Rng;

pub fn pt(x: f64, y: f64) -> BetaPoint {
    BetaPoint::new(x, y).unwrap()
}

/// Log-uniform point in [lo, hi]².
pub fn random_point<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> BetaPoint {
    let (a, b) = (lo.ln(), hi.ln());
    pt(rng.gen_range(a..b).exp(), rng.gen_range(a..b).exp())
}

// ---------------------------------------------------------------------------
// Double-double arithmetic and a polygamma oracle built on it.

#[derive(Clone, Copy, Debug)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        quick_two_sum(s.hi, s.lo + self.lo + o.lo)
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::new(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::new(q2)));
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2).add(Dd::new(q3))
    }

    pub fn recip(self) -> Dd {
        Dd::new(1.0).div(self)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// B₂ₖ for k = 1..=12 as exact fractions.
const BERNOULLI: [(f64, f64); 12] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
];

/// Shift used before the asymptotic expansion; far larger than the library's.
const ORACLE_SHIFT: usize = 60;

/// (ψ, ψ′, ψ″) at x in double-double precision: recurrence up to x + 60,
/// then the Bernoulli expansion with twelve terms.
pub fn polygamma_oracle(x: f64) -> (f64, f64, f64) {
    let mut s0 = Dd::new(0.0);
    let mut s1 = Dd::new(0.0);
    let mut s2 = Dd::new(0.0);
    for n in 0..ORACLE_SHIFT {
        let t = Dd::new(x).add(Dd::new(n as f64));
        let r = t.recip();
        let r2 = r.mul(r);
        s0 = s0.add(r);
        s1 = s1.add(r2);
        s2 = s2.add(r2.mul(r));
    }
    let z = Dd::new(x).add(Dd::new(ORACLE_SHIFT as f64));
    let r = z.recip();
    let r2 = r.mul(r);
    let ln_z = Dd::new(z.hi.ln()).add(Dd::new(z.lo / z.hi));
    // ψ(z) = ln z − 1/(2z) − Σ B₂ₖ / (2k z²ᵏ)
    let mut d0 = ln_z.sub(r.mul(Dd::new(0.5)));
    // ψ′(z) = 1/z + 1/(2z²) + Σ B₂ₖ / z²ᵏ⁺¹
    let mut d1 = r.add(r2.mul(Dd::new(0.5)));
    // ψ″(z) = −1/z² − 1/z³ − Σ (2k+1) B₂ₖ / z²ᵏ⁺²
    let mut d2 = r2.add(r2.mul(r)).neg();
    let mut rpow = r2; // z^(−2k)
    for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
        let k = (k + 1) as f64;
        let b = Dd::new(num).div(Dd::new(den));
        let term = b.mul(rpow);
        d0 = d0.sub(term.div(Dd::new(2.0 * k)));
        d1 = d1.add(term.mul(r));
        d2 = d2.sub(term.mul(r2).mul(Dd::new(2.0 * k + 1.0)));
        rpow = rpow.mul(r2);
    }
    (
        d0.sub(s0).to_f64(),
        d1.add(s1).to_f64(),
        d2.sub(s2.mul(Dd::new(2.0))).to_f64(),
    )
}

// ---------------------------------------------------------------------------
// Finite-difference derivatives of the log-partition function.

pub fn phi(x: f64, y: f64) -> f64 {
    log_partition(&BetaPoint::new(x, y).unwrap())
}

/// Central second-order Hessian [φxx, φxy, φyy] with step h.
pub fn fd_hessian(x: f64, y: f64, h: f64) -> [f64; 3] {
    let f = phi;
    let fxx = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
    let fyy = (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
    let fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
    [fxx, fxy, fyy]
}

const D1: [(f64, f64); 4] = [
    (-2.0, 1.0 / 12.0),
    (-1.0, -8.0 / 12.0),
    (1.0, 8.0 / 12.0),
    (2.0, -1.0 / 12.0),
];
const D2: [(f64, f64); 5] = [
    (-2.0, -1.0 / 12.0),
    (-1.0, 16.0 / 12.0),
    (0.0, -30.0 / 12.0),
    (1.0, 16.0 / 12.0),
    (2.0, -1.0 / 12.0),
];
const D3: [(f64, f64); 6] = [
    (-3.0, 1.0 / 8.0),
    (-2.0, -1.0),
    (-1.0, 13.0 / 8.0),
    (1.0, -13.0 / 8.0),
    (2.0, 1.0),
    (3.0, -1.0 / 8.0),
];

fn apply(stencil_x: &[(f64, f64)], stencil_y: &[(f64, f64)], x: f64, y: f64, hx: f64, hy: f64) -> f64 {
    let mut sum = 0.0;
    for &(i, wx) in stencil_x {
        for &(j, wy) in stencil_y {
            sum += wx * wy * phi(x + i * hx, y + j * hy);
        }
    }
    sum
}

/// Step sizes proportional to each coordinate.
fn steps(x: f64, y: f64) -> (f64, f64) {
    (0.01 * x, 0.01 * y)
}

/// Fourth-order accurate third derivatives [φxxx, φxxy, φxyy, φyyy].
pub fn fd_third(x: f64, y: f64) -> [f64; 4] {
    let (hx, hy) = steps(x, y);
    let id = [(0.0, 1.0)];
    [
        apply(&D3, &id, x, y, hx, hy) / hx.powi(3),
        apply(&D2, &D1, x, y, hx, hy) / (hx * hx * hy),
        apply(&D1, &D2, x, y, hx, hy) / (hx * hy * hy),
        apply(&id, &D3, x, y, hx, hy) / hy.powi(3),
    ]
}

/// Fourth-order accurate Hessian [φxx, φxy, φyy].
pub fn fd_hessian4(x: f64, y: f64) -> [f64; 3] {
    let (hx, hy) = steps(x, y);
    let id = [(0.0, 1.0)];
    [
        apply(&D2, &id, x, y, hx, hy) / (hx * hx),
        apply(&D1, &D1, x, y, hx, hy) / (hx * hy),
        apply(&id, &D2, x, y, hx, hy) / (hy * hy),
    ]
}

/// Geodesic-equation coefficients from finite differences: with A = −φ the
/// metric is Hess A and the Christoffel symbols of the first kind are
/// Γᵢⱼₖ = ½ Aᵢⱼₖ = −½ φᵢⱼₖ. Returns (a, b, c) of the x equation and of
/// the y equation in the library's layout.
pub fn fd_christoffel(x: f64, y: f64) -> ([f64; 3], [f64; 3]) {
    let [pxx, pxy, pyy] = fd_hessian4(x, y);
    let (gxx, gxy, gyy) = (-pxx, -pxy, -pyy);
    let det = gxx * gyy - gxy * gxy;
    let (ixx, ixy, iyy) = (gyy / det, -gxy / det, gxx / det);
    let [fxxx, fxxy, fxyy, fyyy] = fd_third(x, y);
    // first kind, fully symmetric: Γ(i,j,k) = −½ φ_ijk
    let g = |n_x: usize| match n_x {
        3 => -0.5 * fxxx,
        2 => -0.5 * fxxy,
        1 => -0.5 * fxyy,
        _ => -0.5 * fyyy,
    };
    // Γ^x_ij = g^xx Γ_ij,x + g^xy Γ_ij,y, indexing by the count of x's.
    let up_x = |nx: usize| ixx * g(nx + 1) + ixy * g(nx);
    let up_y = |nx: usize| ixy * g(nx + 1) + iyy * g(nx);
    let x_eq = [up_x(2), 2.0 * up_x(1), up_x(0)];
    let y_eq = [up_y(0), 2.0 * up_y(1), up_y(2)];
    (x_eq, y_eq)
}

/// Curvature from finite-difference derivatives of A = −φ, through
/// R_xyxy of a Hessian metric:
/// 4 det² K = −A_yy(A_xxx A_xyy − A_xxy²) + A_xy(A_xxx A_yyy − A_xxy A_xyy) − A_xx(A_xxy A_yyy − A_xyy²).
pub fn fd_curvature(x: f64, y: f64) -> f64 {
    let [pxx, pxy, pyy] = fd_hessian4(x, y);
    let (axx, axy, ayy) = (-pxx, -pxy, -pyy);
    let [p3, p2, p1, p0] = fd_third(x, y);
    let (axxx, axxy, axyy, ayyy) = (-p3, -p2, -p1, -p0);
    let det = axx * ayy - axy * axy;
    let r = -ayy * (axxx * axyy - axxy * axxy) + axy * (axxx * ayyy - axxy * axyy) - axx * (axxy * ayyy - axyy * axyy);
    r / (4.0 * det * det)
}

// ---------------------------------------------------------------------------
// Textbook Euclidean KNN and Lloyd K-means on plain (x, y) pairs.

fn sq(a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    dx * dx + dy * dy
}

/// Majority vote of the k nearest (stable by index); tied votes go to the
/// label seen first in distance order.
pub fn textbook_knn(train: &[[f64; 2]], labels: &[String], query: [f64; 2], k: usize) -> String {
    let mut order: Vec<usize> = (0..train.len()).collect();
    order.sort_by(|&a, &b| sq(train[a], query).total_cmp(&sq(train[b], query)).then(a.cmp(&b)));
    let mut counts: Vec<(String, usize)> = Vec::new();
    for &i in &order[..k] {
        match counts.iter_mut().find(|(l, _)| *l == labels[i]) {
            Some(c) => c.1 += 1,
            None => counts.push((labels[i].clone(), 1)),
        }
    }
    let best = counts.iter().map(|c| c.1).max().unwrap();
    counts.into_iter().find(|c| c.1 == best).unwrap().0
}

pub fn textbook_mean(points: &[[f64; 2]]) -> [f64; 2] {
    let n = points.len() as f64;
    let mut s = [0.0, 0.0];
    for p in points {
        s[0] += p[0];
        s[1] += p[1];
    }
    [s[0] / n, s[1] / n]
}

pub fn textbook_nearest(p: [f64; 2], centers: &[[f64; 2]]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (j, c) in centers.iter().enumerate() {
        let d = sq(p, *c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// k-means++: first seed uniform, then D²-weighted by inverse CDF.
pub fn textbook_kmeans_pp<R: Rng>(points: &[[f64; 2]], k: usize, rng: &mut R) -> Vec<usize> {
    let mut seeds = vec![rng.gen_range(0..points.len())];
    while seeds.len() < k {
        let d2: Vec<f64> = points
            .iter()
            .map(|p| seeds.iter().map(|&s| sq(*p, points[s])).fold(f64::INFINITY, f64::min))
            .collect();
        let total: f64 = d2.iter().sum();
        let r = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = d2.iter().rposition(|&d| d > 0.0).unwrap();
        for (i, &d) in d2.iter().enumerate() {
            acc += d;
            if d > 0.0 && acc > r {
                pick = i;
                break;
            }
        }
        seeds.push(pick);
    }
    seeds
}

/// Lloyd's algorithm; returns (assignments, centers, inertia).
pub fn textbook_lloyd(
    points: &[[f64; 2]],
    mut centers: Vec<[f64; 2]>,
    max_iter: usize,
) -> (Vec<usize>, Vec<[f64; 2]>, f64) {
    let mut assign: Vec<usize> = Vec::new();
    let mut inertia = f64::INFINITY;
    for _ in 0..max_iter {
        let pairs: Vec<(usize, f64)> = points.iter().map(|p| textbook_nearest(*p, &centers)).collect();
        let next: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        inertia = pairs.iter().map(|p| p.1).sum();
        if next == assign {
            break;
        }
        assign = next;
        for (c, center) in centers.iter_mut().enumerate() {
            let members: Vec<[f64; 2]> = points
                .iter()
                .zip(&assign)
                .filter(|(_, &a)| a == c)
                .map(|(p, _)| *p)
                .collect();
            assert!(!members.is_empty(), "textbook Lloyd has no empty-cluster repair");
            *center = textbook_mean(&members);
        }
    }
    (assign, centers, inertia)
}

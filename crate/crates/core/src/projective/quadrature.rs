//! Fubini–Study quadrature on parametrized rational curves.
//!
//! A curve `t -> f(t) = sum_m C[:, m] t^m` is covered by the disc `|t| <= 1`
//! and the disc `|s| <= 1` of the inverted chart `s = 1/t`, where the curve
//! reads `s^d f(1/s)` (columns reversed). Each disc is integrated in polar
//! coordinates: composite Gauss–Legendre in the radius, trapezoid in the
//! angle. The pulled-back form, normalized so that a line has volume one, is
//!
//! ```text
//! (|f|^2 |f'|^2 - |<f, f'>|^2) / (pi |f|^4) dx dy.
//! ```

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    fn compute(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                deriv = dp;
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            if dp.is_finite() {
                deriv = dp;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * deriv * deriv);
        }
        Self { nodes, weights }
    }

    /// Integral of `f` over `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=n {
        let j = j as f64;
        let p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

static RULES: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();

/// Cached Gauss–Legendre rule with `n` points. Safe for concurrent use.
pub fn gauss_legendre(n: usize) -> Arc<GaussLegendre> {
    let cache = RULES.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = cache.read().expect("rule cache poisoned").get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(GaussLegendre::compute(n));
    cache
        .write()
        .expect("rule cache poisoned")
        .entry(n)
        .or_insert(rule)
        .clone()
}

/// Points per radial panel.
const RADIAL_ORDER: usize = 20;
/// Refinement levels tried before giving up.
const MAX_LEVEL: u32 = 8;
/// Columns of the node matrix accumulated per Gram product.
const BATCH: usize = 2048;

/// Integrals of a curve component over its Fubini–Study measure.
#[derive(Debug, Clone)]
pub struct CurveMoments {
    pub volume: f64,
    /// `int f f* / |f|^2`, indexed by the full ambient coordinates.
    pub moment: DMatrix<Complex64>,
    /// Difference between the last two refinement levels.
    pub error: f64,
}

/// Integrates volume and second moment of the curve with coefficient matrix
/// `coeffs` (rows: ambient coordinates, columns: powers of `t`), refining
/// until successive estimates differ by less than `tol / 2`.
pub fn integrate_curve(coeffs: &DMatrix<Complex64>, tol: f64) -> Result<CurveMoments> {
    let ambient = coeffs.nrows();
    let active: Vec<usize> = (0..ambient)
        .filter(|&r| coeffs.row(r).iter().any(|z| *z != Complex64::new(0.0, 0.0)))
        .collect();
    let compressed = DMatrix::from_fn(active.len(), coeffs.ncols(), |i, j| coeffs[(active[i], j)]);
    let reversed = DMatrix::from_fn(compressed.nrows(), compressed.ncols(), |i, j| {
        compressed[(i, compressed.ncols() - 1 - j)]
    });
    let degree = coeffs.ncols() - 1;
    let base_angular = (4 * (degree + 2)).next_power_of_two().max(32);

    let estimate = |level: u32| {
        let panels = 1usize << level;
        let angular = base_angular << level;
        let (v1, m1) = integrate_disc(&compressed, panels, angular);
        let (v2, m2) = integrate_disc(&reversed, panels, angular);
        (v1 + v2, m1 + m2)
    };

    let (mut volume, mut moment) = estimate(0);
    let mut error = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        let (v, m) = estimate(level);
        error = (&m - &moment)
            .iter()
            .map(|z| z.norm())
            .fold((v - volume).abs(), f64::max);
        volume = v;
        moment = m;
        if error < 0.5 * tol {
            break;
        }
    }
    if !(error < 0.5 * tol) {
        return Err(Error::Accuracy {
            achieved: error,
            requested: tol,
        });
    }

    let mut full = DMatrix::zeros(ambient, ambient);
    for (i, &ri) in active.iter().enumerate() {
        for (j, &rj) in active.iter().enumerate() {
            full[(ri, rj)] = moment[(i, j)];
        }
    }
    Ok(CurveMoments {
        volume,
        moment: full,
        error,
    })
}

/// Volume and second moment over the disc `|t| <= 1`.
fn integrate_disc(
    coeffs: &DMatrix<Complex64>,
    panels: usize,
    angular: usize,
) -> (f64, DMatrix<Complex64>) {
    let rows = coeffs.nrows();
    let rule = gauss_legendre(RADIAL_ORDER);
    let dtheta = 2.0 * PI / angular as f64;
    let angles: Vec<Complex64> = (0..angular)
        .map(|j| Complex64::from_polar(1.0, j as f64 * dtheta))
        .collect();

    let mut volume = 0.0;
    let mut moment = DMatrix::<Complex64>::zeros(rows, rows);
    let mut batch = DMatrix::<Complex64>::zeros(rows, BATCH);
    let mut filled = 0;
    let mut f = vec![Complex64::new(0.0, 0.0); rows];
    let mut df = vec![Complex64::new(0.0, 0.0); rows];

    let flush = |batch: &DMatrix<Complex64>, filled: usize, moment: &mut DMatrix<Complex64>| {
        if filled > 0 {
            let cols = batch.columns(0, filled);
            moment.gemm(Complex64::new(1.0, 0.0), &cols, &cols.adjoint(), Complex64::new(1.0, 0.0));
        }
    };

    for p in 0..panels {
        let (a, b) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, wx) in rule.nodes.iter().zip(&rule.weights) {
            let r = mid + half * x;
            let radial_weight = wx * half * r * dtheta;
            for e in &angles {
                let t = e * r;
                evaluate(coeffs, t, &mut f, &mut df);
                let norm2: f64 = f.iter().map(|z| z.norm_sqr()).sum();
                let inner: Complex64 = f.iter().zip(&df).map(|(a, b)| a.conj() * b).sum();
                // |f'|^2 - |<f, f'>|^2 / |f|^2 as the norm of the component of
                // f' orthogonal to f, which avoids cancellation.
                let along = inner / norm2;
                let perp2: f64 = f.iter().zip(&df).map(|(a, b)| (b - a * along).norm_sqr()).sum();
                let density = perp2 / (PI * norm2);
                let w = radial_weight * density;
                volume += w;
                let scale = (w / norm2).sqrt();
                for (i, z) in f.iter().enumerate() {
                    batch[(i, filled)] = z * scale;
                }
                filled += 1;
                if filled == BATCH {
                    flush(&batch, filled, &mut moment);
                    filled = 0;
                }
            }
        }
    }
    flush(&batch, filled, &mut moment);
    (volume, moment)
}

/// `f(t)` and `f'(t)` by Horner's rule over the columns.
fn evaluate(coeffs: &DMatrix<Complex64>, t: Complex64, f: &mut [Complex64], df: &mut [Complex64]) {
    let d = coeffs.ncols() - 1;
    for (i, (fi, dfi)) in f.iter_mut().zip(df.iter_mut()).enumerate() {
        let mut val = coeffs[(i, d)];
        let mut der = Complex64::new(0.0, 0.0);
        for m in (0..d).rev() {
            der = der * t + val;
            val = val * t + coeffs[(i, m)];
        }
        *fi = val;
        *dfi = der;
    }
}

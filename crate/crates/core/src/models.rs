//! Concrete torus-fixed cycles: rational normal curves, chains of lines and
//! the approximately balanced degeneration of `CP^1` with two marked points.
//!
//! Every component here is a *monomial curve* `t -> sum_i sqrt(C(d,i)) t^i
//! e_{c_i}` on distinct coordinates, or a coordinate point. Such cycles are
//! fixed by the diagonal torus, so their centers of mass are diagonal and
//! can be assembled exactly: a monomial curve of degree `d` contributes
//! `d C(d,i) B(i, d-i) = d/(d+1)` to each of its coordinates.

use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exact::{beta_integral, binomial, int, rat, to_f64, Rational};
use crate::projective::{
    check_lambda, pair_integrals, Complex, CycleDocument, HermitianForm, ProjectiveCycle,
    ProjectivePoint, RationalCurveChart,
};

/// Monomial curve on the listed coordinates; its degree is `coords.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialCurve {
    coords: Vec<usize>,
    mult: u32,
}

impl MonomialCurve {
    pub fn degree(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn mult(&self) -> u32 {
        self.mult
    }
}

/// Cycle built from monomial curves and coordinate points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusCycle {
    ambient_dim: usize,
    curves: Vec<MonomialCurve>,
    points: Vec<(usize, u32)>,
}

impl TorusCycle {
    pub fn new(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            curves: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn curves(&self) -> &[MonomialCurve] {
        &self.curves
    }

    pub fn points(&self) -> &[(usize, u32)] {
        &self.points
    }

    pub fn add_curve(&mut self, coords: Vec<usize>, mult: u32) -> Result<()> {
        if coords.len() < 2 {
            return invalid("a monomial curve needs at least two coordinates");
        }
        if mult == 0 {
            return invalid("multiplicity must be positive");
        }
        if let Some(&bad) = coords.iter().find(|&&c| c > self.ambient_dim) {
            return invalid(format!(
                "coordinate {bad} outside CP^{}",
                self.ambient_dim
            ));
        }
        let mut sorted = coords.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != coords.len() {
            return invalid("monomial curve coordinates must be distinct");
        }
        self.curves.push(MonomialCurve { coords, mult });
        Ok(())
    }

    pub fn add_point(&mut self, index: usize, mult: u32) -> Result<()> {
        if index > self.ambient_dim {
            return invalid(format!("coordinate {index} outside CP^{}", self.ambient_dim));
        }
        if mult == 0 {
            return invalid("multiplicity must be positive");
        }
        self.points.push((index, mult));
        Ok(())
    }

    pub fn volume(&self) -> Rational {
        let curves: u64 = self
            .curves
            .iter()
            .map(|c| c.degree() as u64 * u64::from(c.mult))
            .sum();
        let points: u64 = self.points.iter().map(|&(_, m)| u64::from(m)).sum();
        int((curves + points) as i64)
    }

    /// Exact diagonal of `int z z* / |z|^2`; the off-diagonal part vanishes.
    pub fn moment_diagonal(&self) -> Result<Vec<Rational>> {
        let mut diag = vec![Rational::zero(); self.ambient_dim + 1];
        for c in &self.curves {
            let d = c.degree() as i64;
            for (i, &idx) in c.coords.iter().enumerate() {
                let i = i as i64;
                let share = int(d) * binomial(d, i)? * beta_integral(i, d - i)?;
                diag[idx] += share * int(i64::from(c.mult));
            }
        }
        for &(idx, m) in &self.points {
            diag[idx] += int(i64::from(m));
        }
        Ok(diag)
    }

    /// Exact diagonal of the center of mass in the standard frame.
    pub fn center_of_mass_diagonal(&self) -> Result<Vec<Rational>> {
        let shift = self.volume() / int(self.ambient_dim as i64 + 1);
        Ok(self
            .moment_diagonal()?
            .into_iter()
            .map(|m| m - &shift)
            .collect())
    }

    /// Realization as a general cycle with `sqrt(C(d,i))` coefficients.
    pub fn to_cycle(&self) -> Result<ProjectiveCycle> {
        let dim = self.ambient_dim + 1;
        let mut cycle = ProjectiveCycle::empty(self.ambient_dim);
        for c in &self.curves {
            let d = c.degree();
            let mut coeffs = DMatrix::zeros(dim, d + 1);
            for (i, &idx) in c.coords.iter().enumerate() {
                let b = to_f64(&binomial(d as i64, i as i64)?);
                coeffs[(idx, i)] = Complex::new(b.sqrt(), 0.0);
            }
            cycle.add_curve(RationalCurveChart::new(coeffs)?, c.mult)?;
        }
        for &(idx, m) in &self.points {
            cycle.add_point(ProjectivePoint::coordinate(self.ambient_dim, idx)?, m)?;
        }
        Ok(cycle)
    }
}

/// Exact diagonal of `mu(V, W, lambda)` for torus-fixed cycles.
pub fn pair_center_of_mass_exact(
    v: &TorusCycle,
    w: &TorusCycle,
    lambda: &Rational,
) -> Result<Vec<Rational>> {
    check_lambda(lambda)?;
    if v.ambient_dim != w.ambient_dim {
        return invalid("pair components live in different projective spaces");
    }
    let rest = int(1) - lambda;
    let mv = v.center_of_mass_diagonal()?;
    let mw = w.center_of_mass_diagonal()?;
    Ok(mv
        .into_iter()
        .zip(mw)
        .map(|(a, b)| lambda * a + &rest * b)
        .collect())
}

/// Frobenius norm of an exact diagonal, rounded once at the end.
pub fn diagonal_norm(diag: &[Rational]) -> f64 {
    let sq: Rational = diag.iter().map(|x| x * x).sum();
    sq.to_f64().unwrap_or(f64::NAN).sqrt()
}

/// The pair `(V, W)` as two cycle documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDocument {
    pub v: CycleDocument,
    pub w: CycleDocument,
}

impl PairDocument {
    pub fn new(v: &ProjectiveCycle, w: &ProjectiveCycle) -> Self {
        Self {
            v: v.to_document(),
            w: w.to_document(),
        }
    }
}

fn check_k(k: usize, min: usize) -> Result<()> {
    if k < min {
        return invalid(format!("k must be >= {min}, got {k}"));
    }
    Ok(())
}

/// Monomial form of the degree `k` rational normal curve in `CP^k`.
pub fn rational_normal_curve_torus(k: usize) -> Result<TorusCycle> {
    check_k(k, 1)?;
    let mut t = TorusCycle::new(k);
    t.add_curve((0..=k).collect(), 1)?;
    Ok(t)
}

/// Rational normal curve in the orthonormal monomial frame; balanced.
pub fn rational_normal_curve(k: usize) -> Result<ProjectiveCycle> {
    rational_normal_curve_torus(k)?.to_cycle()
}

/// Lines `L_i` through `p_i, p_{i+1}`, `0 <= i < k`, in `CP^k`.
#[derive(Debug, Clone)]
pub struct ChainOfLines {
    pub k: usize,
    pub torus: TorusCycle,
    pub cycle: ProjectiveCycle,
}

pub fn chain_of_lines(k: usize) -> Result<ChainOfLines> {
    check_k(k, 1)?;
    let mut torus = TorusCycle::new(k);
    for i in 0..k {
        torus.add_curve(vec![i, i + 1], 1)?;
    }
    let cycle = torus.to_cycle()?;
    Ok(ChainOfLines { k, torus, cycle })
}

/// Closed form `diag(1/2, 1, ..., 1, 1/2) - k/(k+1) Id`.
pub fn chain_center_of_mass_closed_form(k: usize) -> Result<Vec<Rational>> {
    check_k(k, 1)?;
    let k = k as i64;
    let shift = rat(k, k + 1);
    Ok((0..=k)
        .map(|i| {
            let m = if i == 0 || i == k { rat(1, 2) } else { int(1) };
            m - &shift
        })
        .collect())
}

/// The chain together with its two endpoints `p_0, p_k`.
pub fn chain_pair(k: usize) -> Result<(ChainOfLines, TorusCycle)> {
    let chain = chain_of_lines(k)?;
    let mut ends = TorusCycle::new(k);
    ends.add_point(0, 1)?;
    ends.add_point(k, 1)?;
    Ok((chain, ends))
}

/// The line through coordinate points `idx0` and `idx1` of `CP^N`.
pub fn two_block_line(ambient_dim: usize, idx0: usize, idx1: usize) -> Result<ProjectiveCycle> {
    if idx0 == idx1 {
        return invalid(format!("line endpoints coincide (index {idx0})"));
    }
    let mut t = TorusCycle::new(ambient_dim);
    t.add_curve(vec![idx0, idx1], 1)?;
    t.to_cycle()
}

/// Degeneration of `CP^1` (embedded by `O(2)`) with `D = {0, inf}` into a
/// conic in the first block followed by two chains of lines through the
/// images of `D` in blocks `2..=k`.
///
/// Coordinates: block 1 is `0, 1, 2`; block `j >= 2` is `2j - 1` (image of
/// `0`) and `2j` (image of `inf`). `D_k` is the two points of block `k`.
#[derive(Debug, Clone)]
pub struct XkModelN1 {
    pub k: usize,
    pub s: usize,
    pub x: TorusCycle,
    pub d: TorusCycle,
}

impl XkModelN1 {
    pub fn ambient_dim(&self) -> usize {
        2 * self.k
    }

    /// Block `j` containing coordinate `idx`.
    pub fn block_of(&self, idx: usize) -> usize {
        if idx < 3 {
            1
        } else {
            idx.div_ceil(2)
        }
    }

    /// Coordinates of block `j`.
    pub fn block(&self, j: usize) -> Vec<usize> {
        if j == 1 {
            vec![0, 1, 2]
        } else {
            vec![2 * j - 1, 2 * j]
        }
    }

    pub fn cycles(&self) -> Result<(ProjectiveCycle, ProjectiveCycle)> {
        Ok((self.x.to_cycle()?, self.d.to_cycle()?))
    }
}

pub fn xk_model_n1(k: usize) -> Result<XkModelN1> {
    check_k(k, 3)?;
    let mut x = TorusCycle::new(2 * k);
    x.add_curve(vec![0, 1, 2], 1)?;
    // (image of 0, image of inf) in each block
    let ends = |j: usize| if j == 1 { (0, 2) } else { (2 * j - 1, 2 * j) };
    for j in 2..=k {
        let (lo0, lo1) = ends(j - 1);
        let (hi0, hi1) = ends(j);
        x.add_curve(vec![lo0, hi0], 1)?;
        x.add_curve(vec![lo1, hi1], 1)?;
    }
    let mut d = TorusCycle::new(2 * k);
    let (p0, p1) = ends(k);
    d.add_point(p0, 1)?;
    d.add_point(p1, 1)?;
    Ok(XkModelN1 { k, s: 2, x, d })
}

/// Exact diagonal of `mu(X_k, D_k, 2/3)`.
pub fn xk_pair_center_of_mass(k: usize) -> Result<Vec<Rational>> {
    let m = xk_model_n1(k)?;
    pair_center_of_mass_exact(&m.x, &m.d, &rat(2, 3))
}

/// `|mu(X_k, D_k, 2/3)|_2` from the exact per-component closed forms.
pub fn xk_pair_deviation(k: usize) -> Result<f64> {
    Ok(diagonal_norm(&xk_pair_center_of_mass(k)?))
}

/// Same norm with the first block (the conic's coordinates) left out; this
/// is the part covered by the block-by-block estimate for `j >= s`.
pub fn xk_pair_deviation_upper_blocks(k: usize) -> Result<f64> {
    Ok(diagonal_norm(&xk_pair_center_of_mass(k)?[3..]))
}

/// `|mu(X_k, D_k, 2/3)|_2` by quadrature of the full (non-diagonal) matrix.
pub fn xk_pair_deviation_quadrature(k: usize, tol: f64) -> Result<f64> {
    let m = xk_model_n1(k)?;
    let (x, d) = m.cycles()?;
    let g = HermitianForm::identity(2 * k + 1);
    Ok(pair_integrals(&x, &d, &rat(2, 3), &g, tol)?
        .center_of_mass()
        .norm())
}

/// Deviations for several `k` in parallel, in input order.
pub fn xk_pair_deviations(ks: &[usize]) -> Result<Vec<f64>> {
    ks.par_iter().map(|&k| xk_pair_deviation(k)).collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return invalid("slope fit needs at least two paired samples");
    }
    if xs.iter().chain(ys).any(|v| !(*v > 0.0)) {
        return invalid("slope fit needs positive samples");
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return invalid("slope fit needs distinct abscissae");
    }
    Ok(sxy / sxx)
}

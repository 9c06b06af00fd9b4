//! Cycles in complex projective space and their moment-map data.
//!
//! With `|z|^2` measured in a chosen Hermitian metric, the center of mass of
//! a cycle `V` in `CP^N` is
//!
//! ```text
//! mu(V) = int_V z z* / |z|^2 dmu_FS - Vol(V) / (N+1) Id
//! ```
//!
//! and the Chow weight against a Hermitian generator `A` is
//! `CH(V, A) = -Tr(mu(V) A)`. Pair versions mix `V` and `W` with weights
//! `lambda` and `1 - lambda`.
//!
//! All results are expressed in a frame that is orthonormal for the chosen
//! metric `G = L L*`: coordinates `z` are replaced by `L* z` before any
//! Fubini–Study formula is applied.

mod json;
mod lemmas;
pub mod quadrature;

pub use json::{CycleDocument, MatrixDocument};
pub use lemmas::{
    lemma31_coefficients, lemma32_coefficients, quadrature_check_lemma32, LemmaReport,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::exact::{format_rational, to_f64, Rational};

pub type Complex = Complex64;

/// Default quadrature tolerance per curve component.
pub const DEFAULT_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-12;
const MIN_EIGENVALUE: f64 = 1e-10;

/// A point of `CP^N`, stored as a unit-norm representative.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    coords: DVector<Complex>,
}

impl ProjectivePoint {
    pub fn new(coords: DVector<Complex>) -> Result<Self> {
        if coords.is_empty() {
            return invalid("projective point needs at least one coordinate");
        }
        if coords.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("projective point has non-finite coordinates");
        }
        // Rescale by the largest entry first so tiny representatives survive.
        let scale = coords.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return invalid("projective point cannot be the zero vector");
        }
        let scaled = coords.map(|z| z / scale);
        let norm = scaled.norm();
        Ok(Self {
            coords: scaled / Complex::new(norm, 0.0),
        })
    }

    /// The `index`-th coordinate point of `CP^N`.
    pub fn coordinate(ambient_dim: usize, index: usize) -> Result<Self> {
        if index > ambient_dim {
            return invalid(format!("coordinate {index} outside CP^{ambient_dim}"));
        }
        let mut v = DVector::zeros(ambient_dim + 1);
        v[index] = Complex::one();
        Self::new(v)
    }

    pub fn coords(&self) -> &DVector<Complex> {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }
}

/// Polynomial map `t -> C (1, t, ..., t^d)` from `CP^1` to `CP^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalCurveChart {
    coeffs: DMatrix<Complex>,
}

impl RationalCurveChart {
    /// `coeffs` is `(N+1) x (d+1)`; column `m` multiplies `t^m`.
    pub fn new(coeffs: DMatrix<Complex>) -> Result<Self> {
        if coeffs.ncols() < 2 {
            return invalid("curve chart needs degree >= 1");
        }
        if coeffs.nrows() < 2 {
            return invalid("curve chart needs an ambient space of dimension >= 1");
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return invalid("curve chart has non-finite coefficients");
        }
        let scale = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let column_norm = |j: usize| coeffs.column(j).norm();
        if column_norm(0) <= 1e-14 * scale {
            return invalid("curve vanishes at t = 0");
        }
        if column_norm(coeffs.ncols() - 1) <= 1e-14 * scale {
            return invalid("leading column vanishes: degree is lower than the chart size");
        }
        let chart = Self { coeffs };
        chart.check_nonvanishing(scale)?;
        Ok(chart)
    }

    /// Samples both unit discs for near-zeros of the map.
    fn check_nonvanishing(&self, scale: f64) -> Result<()> {
        let d = self.degree();
        let reversed = self.reversed();
        for (chart, label) in [(&self.coeffs, "t"), (&reversed, "1/t")] {
            for ri in 0..=8 {
                let r = ri as f64 / 8.0;
                for ai in 0..32 {
                    let t = Complex::from_polar(r, ai as f64 * std::f64::consts::PI / 16.0);
                    let mut pow = Complex::one();
                    let mut value = DVector::<Complex>::zeros(chart.nrows());
                    for m in 0..=d {
                        value += chart.column(m) * pow;
                        pow *= t;
                    }
                    if value.norm() <= 1e-12 * scale {
                        return invalid(format!("curve vanishes near {label} = {t}"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.ncols() - 1
    }

    pub fn ambient_dim(&self) -> usize {
        self.coeffs.nrows() - 1
    }

    pub fn coeffs(&self) -> &DMatrix<Complex> {
        &self.coeffs
    }

    /// The same curve in the inverted chart `s = 1/t`.
    pub fn reversed(&self) -> DMatrix<Complex> {
        let d = self.degree();
        DMatrix::from_fn(self.coeffs.nrows(), d + 1, |i, j| self.coeffs[(i, d - j)])
    }
}

/// Formal sum of multiplicity-weighted rational curves and points in a
/// common `CP^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveCycle {
    ambient_dim: usize,
    curves: Vec<(RationalCurveChart, u32)>,
    points: Vec<(ProjectivePoint, u32)>,
}

impl ProjectiveCycle {
    pub fn empty(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            curves: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn new(
        ambient_dim: usize,
        curves: Vec<(RationalCurveChart, u32)>,
        points: Vec<(ProjectivePoint, u32)>,
    ) -> Result<Self> {
        let mut cycle = Self::empty(ambient_dim);
        for (c, m) in curves {
            cycle.add_curve(c, m)?;
        }
        for (p, m) in points {
            cycle.add_point(p, m)?;
        }
        Ok(cycle)
    }

    pub fn add_curve(&mut self, curve: RationalCurveChart, mult: u32) -> Result<()> {
        if curve.ambient_dim() != self.ambient_dim {
            return invalid(format!(
                "curve lives in CP^{}, cycle in CP^{}",
                curve.ambient_dim(),
                self.ambient_dim
            ));
        }
        if mult == 0 {
            return invalid("multiplicities must be positive");
        }
        self.curves.push((curve, mult));
        Ok(())
    }

    pub fn add_point(&mut self, point: ProjectivePoint, mult: u32) -> Result<()> {
        if point.ambient_dim() != self.ambient_dim {
            return invalid(format!(
                "point lives in CP^{}, cycle in CP^{}",
                point.ambient_dim(),
                self.ambient_dim
            ));
        }
        if mult == 0 {
            return invalid("multiplicities must be positive");
        }
        self.points.push((point, mult));
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn curves(&self) -> &[(RationalCurveChart, u32)] {
        &self.curves
    }

    pub fn points(&self) -> &[(ProjectivePoint, u32)] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty() && self.points.is_empty()
    }

    /// Degree-weighted volume expected by cohomology: `sum mult * degree`
    /// over curves plus `sum mult` over points.
    pub fn nominal_volume(&self) -> f64 {
        let curves: u64 = self
            .curves
            .iter()
            .map(|(c, m)| c.degree() as u64 * u64::from(*m))
            .sum();
        let points: u64 = self.points.iter().map(|(_, m)| u64::from(*m)).sum();
        (curves + points) as f64
    }

    /// Image of the cycle under the linear map `g` of `C^(N+1)`.
    pub fn transformed(&self, g: &DMatrix<Complex>) -> Result<Self> {
        let n = self.ambient_dim + 1;
        if g.nrows() != n || g.ncols() != n {
            return invalid("transformation has the wrong size");
        }
        let curves = self
            .curves
            .iter()
            .map(|(c, m)| Ok((RationalCurveChart::new(g * c.coeffs())?, *m)))
            .collect::<Result<Vec<_>>>()?;
        let points = self
            .points
            .iter()
            .map(|(p, m)| Ok((ProjectivePoint::new(g * p.coords())?, *m)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ambient_dim: self.ambient_dim,
            curves,
            points,
        })
    }
}

/// Complex matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    entries: DMatrix<Complex>,
}

impl HermitianMatrix {
    pub fn new(entries: DMatrix<Complex>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return invalid("Hermitian matrix must be square");
        }
        let scale = entries.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..entries.nrows() {
            for j in 0..=i {
                if (entries[(i, j)] - entries[(j, i)].conj()).norm() > HERMITIAN_TOL * scale {
                    return invalid(format!("matrix is not Hermitian at ({i}, {j})"));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Symmetrizes `(M + M*) / 2` without validation; for internally produced
    /// matrices that are Hermitian up to rounding.
    pub(crate) fn symmetrized(m: DMatrix<Complex>) -> Self {
        let adj = m.adjoint();
        Self {
            entries: (m + adj) * Complex::new(0.5, 0.0),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            entries: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex::new(diag[i], 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex> {
        self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// Frobenius norm `|M|_2`.
    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `M + s Id`.
    pub fn shifted(&self, s: f64) -> Self {
        let n = self.dim();
        Self {
            entries: &self.entries + DMatrix::<Complex>::identity(n, n) * Complex::new(s, 0.0),
        }
    }

    /// `M - Tr(M)/(N+1) Id`.
    pub fn traceless_part(&self) -> Self {
        self.shifted(-self.trace() / self.dim() as f64)
    }

    /// `Re Tr(self * other)`.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.transpose().iter())
            .map(|(a, b)| (a * b).re)
            .sum()
    }

    /// `exp(t M)` through the eigendecomposition.
    pub fn exp_scaled(&self, t: f64) -> DMatrix<Complex> {
        let eig = self.entries.clone().symmetric_eigen();
        let d = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                Complex::new((t * eig.eigenvalues[i]).exp(), 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        &eig.eigenvectors * d * eig.eigenvectors.adjoint()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Positive definite Hermitian form on `C^(N+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianForm {
    gram: HermitianMatrix,
    /// `L*` for the Cholesky factor `G = L L*`; maps coordinates to a
    /// `G`-orthonormal frame.
    frame: DMatrix<Complex>,
}

impl HermitianForm {
    pub fn new(gram: HermitianMatrix) -> Result<Self> {
        let min = gram.eigenvalues().first().copied().unwrap_or(0.0);
        if !(min > MIN_EIGENVALUE) {
            return Err(Error::Degeneracy(format!(
                "metric is not positive definite (smallest eigenvalue {min:.3e})"
            )));
        }
        let chol = gram
            .entries
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Degeneracy("Cholesky factorization failed".into()))?;
        let frame = chol.l().adjoint();
        Ok(Self { gram, frame })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            gram: HermitianMatrix::identity(dim),
            frame: DMatrix::identity(dim, dim),
        }
    }

    pub fn gram(&self) -> &HermitianMatrix {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    /// Matrix taking coordinates to a frame orthonormal for this form.
    pub fn frame(&self) -> &DMatrix<Complex> {
        &self.frame
    }

    /// Ratio of largest to smallest eigenvalue.
    pub fn condition_number(&self) -> f64 {
        let ev = self.gram.eigenvalues();
        ev[ev.len() - 1] / ev[0]
    }
}

/// `z* A z / |z|^2`.
pub fn hamiltonian(a: &HermitianMatrix, z: &ProjectivePoint) -> Result<f64> {
    if a.dim() != z.coords().len() {
        return invalid("Hamiltonian: dimensions disagree");
    }
    let v = z.coords();
    let value = (v.adjoint() * a.entries() * v)[(0, 0)] / v.norm_squared();
    debug_assert!(value.im.abs() < 1e-12 * a.max_abs().max(1.0));
    Ok(value.re)
}

/// Volume and `int z z* / |z|^2` of a cycle, in the frame of `G`.
#[derive(Debug, Clone)]
pub struct CycleIntegrals {
    pub volume: f64,
    pub moment: HermitianMatrix,
    /// Sum of the per-component quadrature error estimates.
    pub error: f64,
}

impl CycleIntegrals {
    /// `moment - volume/(N+1) Id`.
    pub fn center_of_mass(&self) -> HermitianMatrix {
        self.moment.shifted(-self.volume / self.moment.dim() as f64)
    }
}

pub fn integrate_cycle(
    cycle: &ProjectiveCycle,
    g: &HermitianForm,
    tol: f64,
) -> Result<CycleIntegrals> {
    let dim = cycle.ambient_dim + 1;
    if g.dim() != dim {
        return invalid(format!(
            "metric has dimension {}, cycle lives in C^{dim}",
            g.dim()
        ));
    }
    if !(tol > 0.0) {
        return invalid("quadrature tolerance must be positive");
    }
    let frame = g.frame();
    let per_curve: Vec<Result<quadrature::CurveMoments>> = cycle
        .curves
        .par_iter()
        .map(|(c, _)| quadrature::integrate_curve(&(frame * c.coeffs()), tol))
        .collect();

    let mut volume = 0.0;
    let mut error = 0.0;
    let mut moment = DMatrix::<Complex>::zeros(dim, dim);
    for (res, (_, mult)) in per_curve.into_iter().zip(&cycle.curves) {
        let m = res?;
        let mult = f64::from(*mult);
        volume += mult * m.volume;
        error += mult * m.error;
        moment += m.moment * Complex::new(mult, 0.0);
    }
    for (p, mult) in &cycle.points {
        let w = frame * p.coords();
        let mult = f64::from(*mult);
        moment += (&w * w.adjoint()) * Complex::new(mult / w.norm_squared(), 0.0);
        volume += mult;
    }
    Ok(CycleIntegrals {
        volume,
        moment: HermitianMatrix::symmetrized(moment),
        error,
    })
}

/// Fubini–Study volume, normalized so a line has volume one.
pub fn fs_volume(cycle: &ProjectiveCycle, g: &HermitianForm) -> Result<f64> {
    Ok(integrate_cycle(cycle, g, DEFAULT_TOL)?.volume)
}

pub fn center_of_mass(cycle: &ProjectiveCycle, g: &HermitianForm) -> Result<HermitianMatrix> {
    Ok(integrate_cycle(cycle, g, DEFAULT_TOL)?.center_of_mass())
}

pub(crate) fn check_lambda(lambda: &Rational) -> Result<f64> {
    if lambda.is_negative() || *lambda > Rational::one() {
        return invalid(format!(
            "lambda must lie in [0, 1], got {}",
            format_rational(lambda)
        ));
    }
    Ok(to_f64(lambda))
}

/// `lambda I(V) + (1 - lambda) I(W)`, the mixed volume and moment.
pub fn pair_integrals(
    v: &ProjectiveCycle,
    w: &ProjectiveCycle,
    lambda: &Rational,
    g: &HermitianForm,
    tol: f64,
) -> Result<CycleIntegrals> {
    let l = check_lambda(lambda)?;
    if v.ambient_dim != w.ambient_dim {
        return invalid("pair components live in different projective spaces");
    }
    let iv = integrate_cycle(v, g, tol)?;
    let iw = integrate_cycle(w, g, tol)?;
    let moment =
        iv.moment.entries() * Complex::new(l, 0.0) + iw.moment.entries() * Complex::new(1.0 - l, 0.0);
    Ok(CycleIntegrals {
        volume: l * iv.volume + (1.0 - l) * iw.volume,
        moment: HermitianMatrix::symmetrized(moment),
        error: l * iv.error + (1.0 - l) * iw.error,
    })
}

/// `mu(V, W, lambda)`.
pub fn pair_center_of_mass(
    v: &ProjectiveCycle,
    w: &ProjectiveCycle,
    lambda: &Rational,
    g: &HermitianForm,
) -> Result<HermitianMatrix> {
    Ok(pair_integrals(v, w, lambda, g, DEFAULT_TOL)?.center_of_mass())
}

/// `CH(V, A) = -Tr(mu(V) A)`.
pub fn chow_weight(v: &ProjectiveCycle, a: &HermitianMatrix, g: &HermitianForm) -> Result<f64> {
    if a.dim() != v.ambient_dim + 1 {
        return invalid("generator and cycle dimensions disagree");
    }
    Ok(-center_of_mass(v, g)?.trace_product(a))
}

/// `CH(V, W, A, lambda) = -Tr(mu(V, W, lambda) A)`.
pub fn pair_chow_weight(
    v: &ProjectiveCycle,
    w: &ProjectiveCycle,
    a: &HermitianMatrix,
    lambda: &Rational,
    g: &HermitianForm,
) -> Result<f64> {
    if a.dim() != v.ambient_dim + 1 {
        return invalid("generator and cycle dimensions disagree");
    }
    Ok(-pair_center_of_mass(v, w, lambda, g)?.trace_product(a))
}

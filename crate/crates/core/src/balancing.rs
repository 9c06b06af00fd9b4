//! Fixed-point iteration toward balanced metrics for pairs of cycles, and a
//! numerical check that the Chow weight decreases along `e^{tA}`.

use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::Rational;
use crate::projective::{
    chow_weight, pair_integrals, Complex, HermitianForm, HermitianMatrix, ProjectiveCycle,
    DEFAULT_TOL,
};

/// Allowed increase between consecutive Chow weights in a monotonicity scan.
pub const MONOTONICITY_SLACK: f64 = 1e-8;

/// One row of an iteration trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub mu_norm: f64,
    pub condition_number: f64,
}

#[derive(Debug, Clone)]
pub struct BalanceState {
    pub g: HermitianForm,
    pub mu_norm: f64,
    pub iteration: usize,
    pub converged: bool,
    /// One row per metric visited, starting with `G0`.
    pub history: Vec<TraceRow>,
}

/// `|mu(V, W, lambda)|_2` at `G` together with `T(G)`.
fn step(
    v: &ProjectiveCycle,
    w: &ProjectiveCycle,
    lambda: &Rational,
    g: &HermitianForm,
) -> Result<(f64, HermitianForm)> {
    let ints = pair_integrals(v, w, lambda, g, DEFAULT_TOL)?;
    let mu_norm = ints.center_of_mass().norm();
    let dim = g.dim() as f64;

    let moment = ints.moment.entries();
    let scale = ints.volume.max(1.0);
    let min = ints.moment.eigenvalues().first().copied().unwrap_or(0.0);
    if !(min > 1e-10 * scale) {
        return Err(Error::Degeneracy(format!(
            "cycle support spans a proper subspace (smallest moment eigenvalue {min:.3e})"
        )));
    }
    let inv = moment
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Degeneracy("moment matrix is singular".into()))?;
    // Moment in the G-frame is F M_z F* with F = L*; inverting
    // ((N+1)/Vol) F^{-*} M F^{-1} gives (Vol/(N+1)) F* M^{-1} F.
    let f = g.frame();
    let t = f.adjoint() * inv * f * Complex::new(ints.volume / dim, 0.0);
    let next = HermitianForm::new(HermitianMatrix::symmetrized(t))?;
    Ok((mu_norm, next))
}

/// Balancing map `T(G) = [((N+1)/Vol) int z z* / |z|_G^2]^{-1}` with the
/// integral mixed over `V` and `W` by `lambda`. Its fixed points are exactly
/// the metrics in which the pair is `lambda`-balanced.
pub fn t_operator(
    v: &ProjectiveCycle,
    w: &ProjectiveCycle,
    lambda: &Rational,
    g: &HermitianForm,
) -> Result<HermitianForm> {
    Ok(step(v, w, lambda, g)?.1)
}

fn normalized(g: HermitianMatrix) -> Result<HermitianForm> {
    let scale = g.dim() as f64 / g.trace();
    HermitianForm::new(HermitianMatrix::symmetrized(
        g.into_entries() * Complex::new(scale, 0.0),
    ))
}

/// Iterates [`t_operator`] from `g0` until `|mu|_2 < tol` or `max_iter`
/// applications. Once `|mu|_2` has increased twice the update switches to
/// `(G + T(G)) / 2`. Metrics are rescaled to trace `N+1`, which leaves the
/// center of mass unchanged.
pub fn balance(
    v: &ProjectiveCycle,
    w: &ProjectiveCycle,
    lambda: &Rational,
    g0: &HermitianForm,
    tol: f64,
    max_iter: usize,
) -> Result<BalanceState> {
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    if max_iter == 0 {
        return invalid("max_iter must be at least 1");
    }
    let mut g = g0.clone();
    let mut history = Vec::new();
    let mut increases = 0;
    let mut previous = f64::INFINITY;
    for iteration in 0..=max_iter {
        let (mu_norm, next) = step(v, w, lambda, &g)?;
        history.push(TraceRow {
            iteration,
            mu_norm,
            condition_number: g.condition_number(),
        });
        if mu_norm < tol || iteration == max_iter {
            return Ok(BalanceState {
                g,
                mu_norm,
                iteration,
                converged: mu_norm < tol,
                history,
            });
        }
        if mu_norm > previous {
            increases += 1;
        }
        previous = mu_norm;
        let update = if increases >= 2 {
            (g.gram().entries() + next.gram().entries()) * Complex::new(0.5, 0.0)
        } else {
            next.gram().entries().clone()
        };
        g = normalized(HermitianMatrix::symmetrized(update))?;
    }
    unreachable!("loop returns on its last iteration")
}

/// Writes `iteration,mu_norm,condition_number` rows with a header.
pub fn write_trace_csv<W: Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidArgument(format!("trace CSV: {e}"));
    for row in rows {
        wtr.serialize(row).map_err(io)?;
    }
    wtr.flush()
        .map_err(|e| Error::InvalidArgument(format!("trace CSV: {e}")))
}

/// Chow weights `CH(e^{tA} V, A)` along a time grid.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub t_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `values[i+1] - values[i]`.
    pub differences: Vec<f64>,
    pub max_increase: f64,
}

/// Evaluates `CH(e^{tA} V, A)` with `A` replaced by its traceless part and
/// fails if any step increases by more than [`MONOTONICITY_SLACK`].
pub fn chow_monotonicity_scan(
    v: &ProjectiveCycle,
    a: &HermitianMatrix,
    t_grid: &[f64],
    g: &HermitianForm,
) -> Result<MonotonicityReport> {
    if t_grid.len() < 2 {
        return invalid("time grid needs at least two points");
    }
    if t_grid.windows(2).any(|p| !(p[1] > p[0])) {
        return invalid("time grid must be strictly increasing");
    }
    if a.dim() != v.ambient_dim() + 1 {
        return invalid("generator and cycle dimensions disagree");
    }
    let a = a.traceless_part();
    let values = t_grid
        .par_iter()
        .map(|&t| {
            let flow: DMatrix<Complex> = a.exp_scaled(t);
            chow_weight(&v.transformed(&flow)?, &a, g)
        })
        .collect::<Result<Vec<f64>>>()?;
    let differences: Vec<f64> = values.windows(2).map(|p| p[1] - p[0]).collect();
    let max_increase = differences.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if let Some(i) = differences.iter().position(|&d| d > MONOTONICITY_SLACK) {
        return Err(Error::VerificationFailure(format!(
            "Chow weight increases by {:.3e} between t = {} and t = {}",
            differences[i],
            t_grid[i],
            t_grid[i + 1]
        )));
    }
    Ok(MonotonicityReport {
        t_grid: t_grid.to_vec(),
        values,
        differences,
        max_increase,
    })
}

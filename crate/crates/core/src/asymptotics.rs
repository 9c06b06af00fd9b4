//! The one-dimensional deformation to the normal cone as a sequence of
//! embedded central fibers: the generator `A_k`, the torus-fixed central
//! fiber in `CP^{2k}`, and `k^{-1} CH_k` compared with the Futaki invariant.
//!
//! Throughout `X = CP^1`, `L = O(2)`, `D = {0, inf}`, so `d_k = 2k + 1` and
//! every `H0(D, L^j)` is two-dimensional.

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::{format_rational, int, to_f64, Rational};
use crate::futaki::lambda_to_beta;
use crate::models::{pair_center_of_mass_exact, TorusCycle};
use crate::normal_cone::{
    check_c, futaki_normal_cone, hilbert_pn_anticanonical, weight_sequences, NormalConeConfig,
};
use crate::projective::{
    check_lambda, pair_chow_weight, HermitianForm, HermitianMatrix, ProjectiveCycle,
};

/// Diagonal generator of the `C*`-action on `H0(X_0, L_0^k)`, dualized.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    pub k: usize,
    pub c: Rational,
    /// Diagonal entries: `2(1-c)k + 1` zeros, then `ck - i` twice for each
    /// `i = 0..ck`.
    pub weights: Vec<i64>,
    pub a: HermitianMatrix,
}

impl GeneratorMatrix {
    /// `Tr A_k`.
    pub fn trace(&self) -> i64 {
        self.weights.iter().sum()
    }

    /// `Tr A_k^2`.
    pub fn trace_sq(&self) -> i64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    /// `ck`.
    pub fn ck(&self) -> usize {
        (self.weights.len() - self.x_block_len()) / 2
    }

    /// Length `2(1-c)k + 1` of the zero-weight block.
    pub fn x_block_len(&self) -> usize {
        self.weights.iter().take_while(|w| **w == 0).count()
    }
}

/// `(ck, (1-c)k)` after checking `ck` is an integer, `(1-c)k >= 2`, `k >= 4`.
fn split(k: usize, c: &Rational) -> Result<(usize, usize)> {
    check_c(c)?;
    if k < 4 {
        return invalid(format!("k must be >= 4, got {k}"));
    }
    let ck = c * int(k as i64);
    if !ck.is_integer() {
        return invalid(format!("ck = {} is not an integer", format_rational(&ck)));
    }
    let ck = ck.to_integer().to_usize().expect("0 < ck < k");
    if k - ck < 2 {
        return invalid(format!("(1-c)k = {} must be >= 2", k - ck));
    }
    Ok((ck, k - ck))
}

pub fn generator_n1(k: usize, c: &Rational) -> Result<GeneratorMatrix> {
    let (ck, rest) = split(k, c)?;
    let mut weights = vec![0i64; 2 * rest + 1];
    for i in 0..ck {
        let w = (ck - i) as i64;
        weights.extend([w, w]);
    }
    let a = HermitianMatrix::from_real_diagonal(&weights.iter().map(|&w| w as f64).collect::<Vec<_>>());
    Ok(GeneratorMatrix {
        k,
        c: c.clone(),
        weights,
        a,
    })
}

/// Checks `Tr(-A_k) = w_k` against the weight sequence of the same
/// configuration; returns `w_k`.
pub fn check_generator_trace(g: &GeneratorMatrix) -> Result<Rational> {
    let config = NormalConeConfig::new(hilbert_pn_anticanonical(1)?, g.c.clone())?;
    let seq = weight_sequences(&config, &[g.k as i64])?;
    let w = seq.w[0].clone();
    if int(-g.trace()) != w || int(g.weights.len() as i64) != seq.d[0] {
        return Err(Error::InternalInconsistency(format!(
            "generator trace {} does not match w_k = {} at k = {}",
            -g.trace(),
            format_rational(&w),
            g.k
        )));
    }
    Ok(w)
}

/// Torus-fixed central fiber and its limit divisor.
///
/// Coordinates `0..=m` (with `m = 2(1-c)k`) carry the degree `m` rational
/// normal curve; the D-block `i` (weight `ck - i`) occupies `m + 1 + 2i`
/// (over `0`) and `m + 2 + 2i` (over `inf`). Lines run from `x_0` through
/// the `0`-coordinates of blocks `ck-1, ..., 0`, and from `x_m` through the
/// `inf`-coordinates likewise. The divisor is the two points of block `0`.
pub fn central_fiber_n1(k: usize, c: &Rational) -> Result<(TorusCycle, TorusCycle)> {
    let (ck, rest) = split(k, c)?;
    let m = 2 * rest;
    let mut x = TorusCycle::new(2 * k);
    x.add_curve((0..=m).collect(), 1)?;
    let zero = |i: usize| m + 1 + 2 * i;
    let inf = |i: usize| m + 2 + 2 * i;
    let (mut prev0, mut prev1) = (0, m);
    for i in (0..ck).rev() {
        x.add_curve(vec![prev0, zero(i)], 1)?;
        x.add_curve(vec![prev1, inf(i)], 1)?;
        prev0 = zero(i);
        prev1 = inf(i);
    }
    let mut d = TorusCycle::new(2 * k);
    d.add_point(zero(0), 1)?;
    d.add_point(inf(0), 1)?;
    Ok((x, d))
}

fn check_open_lambda(lambda: &Rational) -> Result<()> {
    check_lambda(lambda)?;
    if lambda.is_zero() {
        return invalid("lambda must lie in (0, 1]");
    }
    Ok(())
}

/// `CH_k(X_0, D_0, A_k, lambda)` assembled exactly from the diagonal
/// center of mass.
pub fn central_fiber_chow_n1_exact(k: usize, c: &Rational, lambda: &Rational) -> Result<Rational> {
    check_open_lambda(lambda)?;
    let g = generator_n1(k, c)?;
    let (x, d) = central_fiber_n1(k, c)?;
    let mu = pair_center_of_mass_exact(&x, &d, lambda)?;
    Ok(-mu
        .iter()
        .zip(&g.weights)
        .map(|(m, &w)| m * int(w))
        .sum::<Rational>())
}

/// `CH_k(X_0, D_0, A_k, lambda)` by quadrature, with `A_k` shifted by
/// `shift * Id`.
pub fn central_fiber_chow_n1_shifted(
    k: usize,
    c: &Rational,
    lambda: &Rational,
    shift: f64,
) -> Result<f64> {
    check_open_lambda(lambda)?;
    let g = generator_n1(k, c)?;
    let (x, d) = central_fiber_n1(k, c)?;
    let (x, d): (ProjectiveCycle, ProjectiveCycle) = (x.to_cycle()?, d.to_cycle()?);
    pair_chow_weight(
        &x,
        &d,
        &g.a.shifted(shift),
        lambda,
        &HermitianForm::identity(2 * k + 1),
    )
}

/// `CH_k(X_0, D_0, A_k, lambda)` by quadrature.
pub fn central_fiber_chow_n1(k: usize, c: &Rational, lambda: &Rational) -> Result<f64> {
    central_fiber_chow_n1_shifted(k, c, lambda, 0.0)
}

/// `(2ck^2 - c^2k^2) / (2k + 1)`, the closed form at `lambda = 1`.
pub fn central_fiber_chow_n1_classical(k: usize, c: &Rational) -> Result<Rational> {
    let (ck, _) = split(k, c)?;
    let (k, m) = (k as i64, ck as i64);
    Ok(int(2 * k * m - m * m) / int(2 * k + 1))
}

/// One row of a Chow-weight sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub c: String,
    pub lambda: String,
    pub chow_over_kn: f64,
    pub futaki_target: String,
}

/// `k^{-1} CH_k` for each `k` alongside the exact Futaki value
/// `Fut(1, c, beta(lambda), 2)`, from the exact assembly or by quadrature.
pub fn chow_sweep(
    ks: &[usize],
    c: &Rational,
    lambda: &Rational,
    quadrature: bool,
) -> Result<Vec<SweepRow>> {
    check_open_lambda(lambda)?;
    let beta = lambda_to_beta(lambda)?;
    let target = futaki_normal_cone(1, c, &beta, &int(2))?;
    ks.par_iter()
        .map(|&k| {
            let ch = if quadrature {
                central_fiber_chow_n1(k, c, lambda)?
            } else {
                to_f64(&central_fiber_chow_n1_exact(k, c, lambda)?)
            };
            Ok(SweepRow {
                k,
                c: format_rational(c),
                lambda: format_rational(lambda),
                chow_over_kn: ch / k as f64,
                futaki_target: format_rational(&target),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::models::log_log_slope;
    use crate::projective::fs_volume;

    #[test]
    fn generator_example() {
        let g = generator_n1(4, &rat(1, 2)).unwrap();
        assert_eq!(g.weights, vec![0, 0, 0, 0, 0, 2, 2, 1, 1]);
        assert_eq!(g.ck(), 2);
        assert_eq!(g.x_block_len(), 5);
        assert_eq!(check_generator_trace(&g).unwrap(), int(-6));
        assert!(generator_n1(3, &rat(1, 3)).is_err());
        assert!(generator_n1(4, &rat(1, 3)).is_err());
        assert!(generator_n1(4, &rat(3, 4)).is_err());
        assert!(generator_n1(8, &rat(3, 2)).is_err());
    }

    #[test]
    fn trace_matches_weights() {
        for c in [rat(1, 4), rat(1, 2), rat(1, 3), rat(2, 3)] {
            for k in (4..40).filter(|k| generator_n1(*k, &c).is_ok()) {
                check_generator_trace(&generator_n1(k, &c).unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn trace_sq_slope() {
        let ks = [8usize, 16, 32, 64];
        let ys: Vec<f64> = ks
            .iter()
            .map(|&k| generator_n1(k, &rat(1, 2)).unwrap().trace_sq() as f64)
            .collect();
        let xs: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
        let s = log_log_slope(&xs, &ys).unwrap();
        assert!((s - 3.0).abs() < 0.3, "slope {s}");
    }

    #[test]
    fn central_fiber_shape() {
        let (x, d) = central_fiber_n1(8, &rat(1, 2)).unwrap();
        assert_eq!(x.volume(), int(16));
        assert_eq!(d.points(), &[(9, 1), (10, 1)]);
        let cyc = x.to_cycle().unwrap();
        let v = fs_volume(&cyc, &HermitianForm::identity(17)).unwrap();
        assert!((v - 16.0).abs() < 1e-8);
    }

    #[test]
    fn exact_and_quadrature_agree() {
        for (k, c) in [(8, rat(1, 2)), (6, rat(1, 3)), (8, rat(1, 4))] {
            for l in [rat(2, 3), int(1), rat(4, 5)] {
                let exact = to_f64(&central_fiber_chow_n1_exact(k, &c, &l).unwrap());
                let quad = central_fiber_chow_n1(k, &c, &l).unwrap();
                assert!((exact - quad).abs() < 1e-8, "k={k} exact={exact} quad={quad}");
            }
        }
    }

    #[test]
    fn closed_forms() {
        for k in [8usize, 16, 32, 64] {
            let c = rat(1, 2);
            assert!(central_fiber_chow_n1_exact(k, &c, &rat(2, 3)).unwrap().is_zero());
            assert_eq!(
                central_fiber_chow_n1_exact(k, &c, &int(1)).unwrap(),
                central_fiber_chow_n1_classical(k, &c).unwrap()
            );
        }
    }

    #[test]
    fn scalar_shift_irrelevant() {
        let c = rat(1, 2);
        let base = central_fiber_chow_n1(8, &c, &int(1)).unwrap();
        let moved = central_fiber_chow_n1_shifted(8, &c, &int(1), 5.0).unwrap();
        assert!((base - moved).abs() < 1e-8);
    }

    #[test]
    fn sweep_rows() {
        let rows = chow_sweep(&[8, 16, 32], &rat(1, 2), &int(1), false).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.futaki_target == "3/4"));
        assert!(rows.windows(2).all(|p| p[1].chow_over_kn > p[0].chow_over_kn));
        let rows = chow_sweep(&[8, 16, 32], &rat(1, 2), &rat(2, 3), false).unwrap();
        assert!(rows.iter().all(|r| r.chow_over_kn == 0.0 && r.futaki_target == "0"));
        assert!(chow_sweep(&[8], &rat(1, 2), &int(0), true).is_err());
    }
}

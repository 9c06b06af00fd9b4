//! Deformation to the normal cone of an anticanonical divisor, as exact
//! dimension and weight bookkeeping.
//!
//! The central fiber's sections split into weight spaces
//!
//! ```text
//! H0(X, L^((1-c)k))  (+)  sum_{i=0}^{ck-1} t^(ck-i) H0(D, L^(k-i))
//! ```
//!
//! with `t` of weight `-1`. Everything in this module is built from that
//! decomposition and the restriction sequence
//! `0 -> H0(X, L^(j-1)) -> H0(X, L^j) -> H0(D, L^j) -> 0`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};
use crate::exact::{binomial_int, factorial, format_rational, int, Rational};
use crate::futaki::{fit_from_sequences, futaki_pair, ExpansionCoefficients};

type DimensionFn = dyn Fn(i64) -> BigInt + Send + Sync;

/// Exact Hilbert functions of a polarized `(X, L)` and of the divisor `D`,
/// with the leading coefficient `a0` of the Hilbert polynomial of `X`.
///
/// For a genuine pair `dim_d(j) = dim_x(j) - dim_x(j-1)`; the two tables are
/// stored independently so that [`weight_sequences`] can detect a model
/// violating it.
#[derive(Clone)]
pub struct HilbertModel {
    n: i64,
    a0: Rational,
    dim_x: Arc<DimensionFn>,
    dim_d: Arc<DimensionFn>,
}

impl fmt::Debug for HilbertModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HilbertModel")
            .field("n", &self.n)
            .field("a0", &format_rational(&self.a0))
            .finish()
    }
}

impl HilbertModel {
    pub fn new(
        n: i64,
        a0: Rational,
        dim_x: impl Fn(i64) -> BigInt + Send + Sync + 'static,
        dim_d: impl Fn(i64) -> BigInt + Send + Sync + 'static,
    ) -> Result<Self> {
        if n < 1 {
            return invalid(format!("dimension must be >= 1, got {n}"));
        }
        if !a0.is_positive() {
            return invalid("a0 must be positive");
        }
        Ok(Self {
            n,
            a0,
            dim_x: Arc::new(dim_x),
            dim_d: Arc::new(dim_d),
        })
    }

    /// Model whose divisor table is derived from `dim_x` through the
    /// restriction sequence.
    pub fn from_dim_x(
        n: i64,
        a0: Rational,
        dim_x: impl Fn(i64) -> BigInt + Send + Sync + 'static,
    ) -> Result<Self> {
        let dim_x: Arc<DimensionFn> = Arc::new(dim_x);
        let inner = Arc::clone(&dim_x);
        let mut model = Self::new(n, a0, |_| BigInt::zero(), move |j| inner(j) - inner(j - 1))?;
        model.dim_x = dim_x;
        Ok(model)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn a0(&self) -> &Rational {
        &self.a0
    }

    /// `dim H0(X, L^k)`.
    pub fn dim_x(&self, k: i64) -> BigInt {
        (self.dim_x)(k)
    }

    /// `dim H0(D, L^j)`, defined for `j >= 1`.
    pub fn dim_d(&self, j: i64) -> Result<BigInt> {
        if j < 1 {
            return invalid(format!("divisor dimension requested at j = {j} < 1"));
        }
        Ok((self.dim_d)(j))
    }
}

/// `X = P^n` polarized by `-K_X = O(n+1)`, with `D` a smooth hypersurface of
/// degree `n + 1`.
pub fn hilbert_pn_anticanonical(n: i64) -> Result<HilbertModel> {
    if n < 1 {
        return invalid(format!("dimension must be >= 1, got {n}"));
    }
    let a0 = Rational::new(
        num_traits::pow(BigInt::from(n + 1), n as usize),
        factorial(n as u64),
    );
    HilbertModel::from_dim_x(n, a0, move |k| binomial_int(k * (n + 1) + n, n))
}

/// Deformation to the normal cone with polarization `L(-cP)`, `0 < c < 1`.
#[derive(Debug, Clone)]
pub struct NormalConeConfig {
    model: HilbertModel,
    c: Rational,
}

impl NormalConeConfig {
    pub fn new(model: HilbertModel, c: Rational) -> Result<Self> {
        check_c(&c)?;
        Ok(Self { model, c })
    }

    pub fn model(&self) -> &HilbertModel {
        &self.model
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// `ck` as an integer, or an error when `k` is not admissible.
    pub fn ck(&self, k: i64) -> Result<i64> {
        let ck = &self.c * int(k);
        if !ck.is_integer() {
            return invalid(format!("ck = {} is not an integer", format_rational(&ck)));
        }
        let ck = ck.to_integer().to_i64().expect("ck fits in i64");
        if k - ck < 1 {
            return invalid(format!("(1-c)k = {} must be >= 1", k - ck));
        }
        Ok(ck)
    }

    /// Admissible sample points `k = q (M + j)`, `j = 0..count`, where `q` is
    /// the denominator of `c` and `M = max(2, ceil(1 / (1 - c)))`.
    pub fn sample_ks(&self, count: usize) -> Vec<i64> {
        let q = self.c.denom().to_i64().expect("denominator fits in i64");
        let one_minus_c = Rational::one() - &self.c;
        let m = (Rational::one() / one_minus_c)
            .ceil()
            .to_integer()
            .to_i64()
            .expect("small")
            .max(2);
        (0..count as i64).map(|j| q * (m + j)).collect()
    }
}

pub(crate) fn check_c(c: &Rational) -> Result<()> {
    if !c.is_positive() || *c >= Rational::one() {
        return invalid(format!("c must lie in (0, 1), got {}", format_rational(c)));
    }
    Ok(())
}

/// Dimension and weight sequences of the central fiber and of the limit
/// divisor, one entry per sampled `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSequences {
    pub ks: Vec<i64>,
    pub d: Vec<Rational>,
    pub w: Vec<Rational>,
    pub d_t: Vec<Rational>,
    pub w_t: Vec<Rational>,
}

/// Builds `d_k, w_k, d~_k, w~_k` from the weight decomposition, checking the
/// flatness identity `d_k = dim H0(X, L^k)` at every sample.
pub fn weight_sequences(config: &NormalConeConfig, ks: &[i64]) -> Result<WeightSequences> {
    let model = &config.model;
    let mut out = WeightSequences {
        ks: ks.to_vec(),
        d: Vec::with_capacity(ks.len()),
        w: Vec::with_capacity(ks.len()),
        d_t: Vec::with_capacity(ks.len()),
        w_t: Vec::with_capacity(ks.len()),
    };
    for &k in ks {
        let ck = config.ck(k)?;
        let mut dim = model.dim_x(k - ck);
        let mut weight = BigInt::zero();
        for i in 0..ck {
            let block = model.dim_d(k - i)?;
            weight -= BigInt::from(ck - i) * &block;
            dim += block;
        }
        let expected = model.dim_x(k);
        if dim != expected {
            return Err(Error::InternalInconsistency(format!(
                "flatness fails at k = {k}: central fiber has {dim} sections, generic fiber {expected}"
            )));
        }
        let top = model.dim_d(k)?;
        out.d.push(Rational::from_integer(dim));
        out.w.push(Rational::from_integer(weight));
        out.w_t.push(Rational::from_integer(-BigInt::from(ck) * &top));
        out.d_t.push(Rational::from_integer(top));
    }
    Ok(out)
}

/// Fits the expansion coefficients of the configuration from `n + 3`
/// admissible samples.
pub fn fitted_coefficients(config: &NormalConeConfig) -> Result<ExpansionCoefficients> {
    let n = config.model.n();
    let ks = config.sample_ks((n + 3) as usize);
    let seq = weight_sequences(config, &ks)?;
    fit_from_sequences(n, &seq.ks, &seq.d, &seq.w, &seq.d_t, &seq.w_t)
}

/// `(1 - (1-c)^(n+1)) / (n+1)`.
fn volume_fraction(n: i64, c: &Rational) -> Rational {
    let pow = num_traits::pow(Rational::one() - c, (n + 1) as usize);
    (Rational::one() - pow) / int(n + 1)
}

/// Closed-form coefficients of the configuration. `a1_t` and `b1_t` have no
/// closed form and are set to zero; [`ExpansionCoefficients::leading_eq`]
/// skips them.
pub fn closed_form_coefficients(
    n: i64,
    c: &Rational,
    a0: &Rational,
) -> Result<ExpansionCoefficients> {
    if n < 1 {
        return invalid(format!("dimension must be >= 1, got {n}"));
    }
    check_c(c)?;
    if !a0.is_positive() {
        return invalid("a0 must be positive");
    }
    let nr = int(n);
    Ok(ExpansionCoefficients {
        a0: a0.clone(),
        a1: &nr * a0 / int(2),
        b0: (volume_fraction(n, c) - c) * a0,
        b1: -(&nr * c * a0) / int(2),
        a0_t: &nr * a0,
        a1_t: Rational::zero(),
        b0_t: -(&nr * c * a0),
        b1_t: Rational::zero(),
    })
}

/// `n beta (1 - (1-c)^(n+1)) / (n+1) a0`.
pub fn futaki_normal_cone(n: i64, c: &Rational, beta: &Rational, a0: &Rational) -> Result<Rational> {
    if n < 1 {
        return invalid(format!("dimension must be >= 1, got {n}"));
    }
    check_c(c)?;
    Ok(int(n) * beta * volume_fraction(n, c) * a0)
}

/// Checks that the fitted coefficients agree with the closed forms and that
/// the fitted invariant equals the closed-form value at `beta`.
pub fn cross_check(config: &NormalConeConfig, beta: &Rational) -> Result<Rational> {
    let n = config.model.n();
    let fitted = fitted_coefficients(config)?;
    let closed = closed_form_coefficients(n, &config.c, config.model.a0())?;
    if !fitted.leading_eq(&closed) {
        return Err(Error::InternalInconsistency(format!(
            "fitted coefficients {fitted:?} differ from closed forms {closed:?}"
        )));
    }
    let fut = futaki_pair(&fitted, beta)?;
    let expected = futaki_normal_cone(n, &config.c, beta, config.model.a0())?;
    if fut != expected {
        return Err(Error::InternalInconsistency(format!(
            "fitted invariant {} differs from closed form {}",
            format_rational(&fut),
            format_rational(&expected)
        )));
    }
    Ok(fut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::futaki::futaki_classical;

    #[test]
    fn pn_models() {
        let m1 = hilbert_pn_anticanonical(1).unwrap();
        for k in 0..10 {
            assert_eq!(m1.dim_x(k), BigInt::from(2 * k + 1));
        }
        for j in 1..10 {
            assert_eq!(m1.dim_d(j).unwrap(), BigInt::from(2));
        }
        assert_eq!(m1.a0(), &int(2));

        let m2 = hilbert_pn_anticanonical(2).unwrap();
        assert_eq!(m2.dim_x(1), BigInt::from(10));
        assert_eq!(m2.a0(), &rat(9, 2));
        for n in 1..=4 {
            let m = hilbert_pn_anticanonical(n).unwrap();
            for j in 1..8 {
                assert_eq!(m.dim_d(j).unwrap(), m.dim_x(j) - m.dim_x(j - 1));
            }
        }
        assert!(hilbert_pn_anticanonical(0).is_err());
        assert!(m1.dim_d(0).is_err());
    }

    #[test]
    fn sequences_n1_k4() {
        let cfg = NormalConeConfig::new(hilbert_pn_anticanonical(1).unwrap(), rat(1, 2)).unwrap();
        let s = weight_sequences(&cfg, &[4]).unwrap();
        assert_eq!(s.d, vec![int(9)]);
        assert_eq!(s.w, vec![int(-6)]);
        assert_eq!(s.d_t, vec![int(2)]);
        assert_eq!(s.w_t, vec![int(-4)]);
    }

    #[test]
    fn sequences_n2_brute_force_weight() {
        let model = hilbert_pn_anticanonical(2).unwrap();
        let cfg = NormalConeConfig::new(model, rat(1, 3)).unwrap();
        let s = weight_sequences(&cfg, &[9]).unwrap();
        // Direct summation over i = 0..2 with dim H0(D, L^j) = C(3j+2,2) - C(3j-1,2).
        let dim_d = |j: i64| {
            let c = |m: i64| m * (m - 1) / 2;
            c(3 * j + 2) - c(3 * j - 1)
        };
        let brute: i64 = (0..3).map(|i| -(3 - i) * dim_d(9 - i)).sum();
        assert_eq!(s.w, vec![int(brute)]);
        assert_eq!(s.d, vec![Rational::from_integer(cfg.model().dim_x(9))]);
    }

    #[test]
    fn inadmissible_k_rejected() {
        let cfg = NormalConeConfig::new(hilbert_pn_anticanonical(1).unwrap(), rat(1, 3)).unwrap();
        assert!(weight_sequences(&cfg, &[4]).is_err());
        assert!(NormalConeConfig::new(hilbert_pn_anticanonical(1).unwrap(), int(1)).is_err());
        assert!(NormalConeConfig::new(hilbert_pn_anticanonical(1).unwrap(), int(0)).is_err());
    }

    #[test]
    fn flatness_violation_detected() {
        // Divisor table of three points against a conic's Hilbert function.
        let model = HilbertModel::new(1, int(2), |k| BigInt::from(2 * k + 1), |_| BigInt::from(3))
            .unwrap();
        let cfg = NormalConeConfig::new(model, rat(1, 2)).unwrap();
        let err = weight_sequences(&cfg, &[4]).unwrap_err();
        assert!(matches!(err, Error::InternalInconsistency(_)));
    }

    #[test]
    fn closed_form_n1() {
        let c = closed_form_coefficients(1, &rat(1, 2), &int(2)).unwrap();
        assert_eq!(c.b0, rat(-1, 4));
        assert_eq!(c.b1, rat(-1, 2));
        assert_eq!(c.a0_t, int(2));
        assert_eq!(c.b0_t, int(-1));
        assert!(closed_form_coefficients(1, &rat(3, 2), &int(2)).is_err());
    }

    #[test]
    fn closed_form_small_c() {
        let c = rat(1, 100);
        for n in 1..=4 {
            let cf = closed_form_coefficients(n, &c, &int(1)).unwrap();
            assert!(cf.b0.is_negative());
            // Leading term of the series is -n c^2 / 2.
            let ratio = (-&cf.b0) / (&c * &c);
            assert!(ratio > rat(n, 4) && ratio < int(n), "n={n}");
        }
    }

    #[test]
    fn futaki_closed_form_examples() {
        for n in 1..=4 {
            for c in [rat(1, 4), rat(1, 2)] {
                assert!(futaki_normal_cone(n, &c, &int(0), &int(3)).unwrap().is_zero());
            }
        }
        assert_eq!(
            futaki_normal_cone(2, &rat(1, 2), &int(-1), &int(1)).unwrap(),
            rat(-7, 12)
        );
        assert_eq!(
            futaki_normal_cone(1, &rat(1, 2), &int(1), &int(2)).unwrap(),
            rat(3, 4)
        );
    }

    #[test]
    fn fit_matches_closed_form_grid() {
        for n in 1..=3 {
            for c in [rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3)] {
                let cfg = NormalConeConfig::new(hilbert_pn_anticanonical(n).unwrap(), c.clone())
                    .unwrap();
                let fitted = fitted_coefficients(&cfg).unwrap();
                let closed = closed_form_coefficients(n, &c, cfg.model().a0()).unwrap();
                assert!(fitted.leading_eq(&closed), "n={n} c={c}");
                for beta in [int(-1), int(0), rat(1, 2), int(1)] {
                    assert_eq!(
                        futaki_pair(&closed, &beta).unwrap(),
                        futaki_normal_cone(n, &c, &beta, cfg.model().a0()).unwrap()
                    );
                    cross_check(&cfg, &beta).unwrap();
                }
            }
        }
    }

    #[test]
    fn p2_fit_at_stated_samples() {
        let cfg = NormalConeConfig::new(hilbert_pn_anticanonical(2).unwrap(), rat(1, 3)).unwrap();
        let ks = [9, 12, 15, 18, 21];
        let s = weight_sequences(&cfg, &ks).unwrap();
        let fitted = fit_from_sequences(2, &s.ks, &s.d, &s.w, &s.d_t, &s.w_t).unwrap();
        assert_eq!(&fitted.b0 / &fitted.a0, rat(-8, 81));
        let closed = closed_form_coefficients(2, &rat(1, 3), &rat(9, 2)).unwrap();
        assert_eq!(fitted.b0, closed.b0);
    }

    #[test]
    fn sign_law_and_monotone_c() {
        let grid: Vec<_> = (1..20).map(|i| rat(i, 20)).collect();
        for n in 1..=5 {
            for beta in [int(-2), rat(-1, 3), rat(1, 2), int(1)] {
                let mut prev: Option<Rational> = None;
                for c in &grid {
                    let f = futaki_normal_cone(n, c, &beta, &int(1)).unwrap();
                    assert_eq!(f.signum(), beta.signum());
                    let per_beta = f / &beta;
                    if let Some(p) = &prev {
                        assert!(&per_beta > p);
                    }
                    prev = Some(per_beta);
                }
            }
        }
    }

    #[test]
    fn classical_value_from_fit() {
        let cfg = NormalConeConfig::new(hilbert_pn_anticanonical(1).unwrap(), rat(1, 2)).unwrap();
        let fitted = fitted_coefficients(&cfg).unwrap();
        assert_eq!(fitted.a0, int(2));
        assert_eq!(fitted.a1, int(1));
        assert_eq!(futaki_classical(&fitted).unwrap(), rat(3, 4));
    }
}

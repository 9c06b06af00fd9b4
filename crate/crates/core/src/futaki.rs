//! Pair Futaki invariants from the leading coefficients of the dimension and
//! weight sequences of a test configuration.
//!
//! For a test configuration of an `n`-dimensional pair the sequences expand as
//!
//! ```text
//! d_k   = a0 k^n     + a1 k^(n-1) + ...
//! w_k   = b0 k^(n+1) + b1 k^n     + ...
//! d~_k  = a0~ k^(n-1) + a1~ k^(n-2) + ...
//! w~_k  = b0~ k^n     + b1~ k^(n-1) + ...
//! ```
//!
//! and the invariant with cone angle `beta` is
//! `2 (a1 b0 - a0 b1) / a0 + (1 - beta) (b0~ - (a0~ / a0) b0)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::exact::{int, interpolate, ExactPolynomial, Rational};

/// The eight leading expansion coefficients. Tilded quantities carry a `_t`
/// suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionCoefficients {
    pub a0: Rational,
    pub a1: Rational,
    pub b0: Rational,
    pub b1: Rational,
    pub a0_t: Rational,
    pub a1_t: Rational,
    pub b0_t: Rational,
    pub b1_t: Rational,
}

impl ExpansionCoefficients {
    /// Compares the six coefficients that enter the invariant or have closed
    /// forms (`a0, a1, b0, b1, a0_t, b0_t`); `a1_t` and `b1_t` are ignored.
    pub fn leading_eq(&self, other: &Self) -> bool {
        self.a0 == other.a0
            && self.a1 == other.a1
            && self.b0 == other.b0
            && self.b1 == other.b1
            && self.a0_t == other.a0_t
            && self.b0_t == other.b0_t
    }

    /// Multiplies every coefficient by `t`.
    pub fn scaled(&self, t: &Rational) -> Self {
        Self {
            a0: &self.a0 * t,
            a1: &self.a1 * t,
            b0: &self.b0 * t,
            b1: &self.b1 * t,
            a0_t: &self.a0_t * t,
            a1_t: &self.a1_t * t,
            b0_t: &self.b0_t * t,
            b1_t: &self.b1_t * t,
        }
    }

    /// `(name, value)` pairs in declaration order.
    pub fn named(&self) -> [(&'static str, &Rational); 8] {
        [
            ("a0", &self.a0),
            ("a1", &self.a1),
            ("b0", &self.b0),
            ("b1", &self.b1),
            ("a0_t", &self.a0_t),
            ("a1_t", &self.a1_t),
            ("b0_t", &self.b0_t),
            ("b1_t", &self.b1_t),
        ]
    }
}

/// Sign-based reading of a Futaki value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FutakiClassification {
    /// Positive: compatible with stability.
    #[serde(rename = "stable-compatible")]
    StableCompatible,
    /// Zero: the configuration rules out strict stability.
    #[serde(rename = "semistable-boundary")]
    SemistableBoundary,
    /// Negative: the configuration witnesses instability.
    #[serde(rename = "unstable")]
    Unstable,
}

impl FutakiClassification {
    pub fn label(self) -> &'static str {
        match self {
            Self::StableCompatible => "stable-compatible",
            Self::SemistableBoundary => "semistable-boundary",
            Self::Unstable => "unstable",
        }
    }
}

impl fmt::Display for FutakiClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Interpolates the four sequences exactly and reads off the two leading
/// coefficients of each.
///
/// Degree bounds are `n`, `n + 1`, `n - 1` and `n` for `d`, `w`, `d_t` and
/// `w_t`; a sequence that interpolates to a higher degree is rejected.
pub fn fit_from_sequences(
    n: i64,
    ks: &[i64],
    d: &[Rational],
    w: &[Rational],
    d_t: &[Rational],
    w_t: &[Rational],
) -> Result<ExpansionCoefficients> {
    if n < 1 {
        return invalid(format!("dimension must be >= 1, got {n}"));
    }
    let len = ks.len();
    if [d.len(), w.len(), d_t.len(), w_t.len()]
        .iter()
        .any(|&l| l != len)
    {
        return invalid("all sequences must have the same length as ks");
    }
    if (len as i64) < n + 2 {
        return invalid(format!("need at least n + 2 = {} samples, got {len}", n + 2));
    }
    if ks.windows(2).any(|p| p[0] >= p[1]) {
        return invalid("sample points must be strictly increasing");
    }

    let fit = |name: &'static str, ys: &[Rational], bound: i64| -> Result<ExactPolynomial> {
        let samples: Vec<_> = ks.iter().zip(ys).map(|(&k, y)| (int(k), y.clone())).collect();
        let poly = interpolate(&samples)?;
        if let Some(deg) = poly.degree() {
            if deg as i64 > bound {
                return Err(Error::DegreeMismatch {
                    sequence: name,
                    expected: bound,
                    found: deg as i64,
                });
            }
        }
        Ok(poly)
    };
    // Coefficient of k^power, zero for negative powers.
    let coeff = |p: &ExactPolynomial, power: i64| {
        if power < 0 {
            Rational::zero()
        } else {
            p.coefficient(power as usize)
        }
    };

    let dp = fit("d", d, n)?;
    let wp = fit("w", w, n + 1)?;
    let dtp = fit("d_t", d_t, n - 1)?;
    let wtp = fit("w_t", w_t, n)?;

    Ok(ExpansionCoefficients {
        a0: coeff(&dp, n),
        a1: coeff(&dp, n - 1),
        b0: coeff(&wp, n + 1),
        b1: coeff(&wp, n),
        a0_t: coeff(&dtp, n - 1),
        a1_t: coeff(&dtp, n - 2),
        b0_t: coeff(&wtp, n),
        b1_t: coeff(&wtp, n - 1),
    })
}

/// `2 (a1 b0 - a0 b1) / a0 + (1 - beta) (b0_t - (a0_t / a0) b0)`.
pub fn futaki_pair(c: &ExpansionCoefficients, beta: &Rational) -> Result<Rational> {
    let classical = futaki_classical(c)?;
    let divisor_term = &c.b0_t - &c.a0_t / &c.a0 * &c.b0;
    Ok(classical + (Rational::one() - beta) * divisor_term)
}

/// `2 (a1 b0 - a0 b1) / a0`.
pub fn futaki_classical(c: &ExpansionCoefficients) -> Result<Rational> {
    if c.a0.is_zero() {
        return invalid("a0 must be nonzero");
    }
    Ok(int(2) * (&c.a1 * &c.b0 - &c.a0 * &c.b1) / &c.a0)
}

/// Cone angle attached to the pair parameter: `beta = (3 lambda - 2) / lambda`.
pub fn lambda_to_beta(lambda: &Rational) -> Result<Rational> {
    if lambda.is_zero() {
        return invalid("lambda must be nonzero");
    }
    Ok((int(3) * lambda - int(2)) / lambda)
}

/// Inverse of [`lambda_to_beta`]: `lambda = 2 / (3 - beta)`.
pub fn beta_to_lambda(beta: &Rational) -> Result<Rational> {
    let den = int(3) - beta;
    if den.is_zero() {
        return invalid("beta = 3 has no corresponding lambda");
    }
    Ok(int(2) / den)
}

pub fn classify(fut: &Rational) -> FutakiClassification {
    if fut.is_positive() {
        FutakiClassification::StableCompatible
    } else if fut.is_zero() {
        FutakiClassification::SemistableBoundary
    } else {
        FutakiClassification::Unstable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn trivial() -> ExpansionCoefficients {
        ExpansionCoefficients {
            a0: int(2),
            a1: int(1),
            b0: int(0),
            b1: int(0),
            a0_t: int(2),
            a1_t: int(0),
            b0_t: int(0),
            b1_t: int(0),
        }
    }

    // Normal-cone coefficients for n, c, a0, entered by hand from the
    // closed forms (independent of the normal_cone module).
    fn normal_cone_by_hand(n: i64, c: Rational, a0: Rational) -> ExpansionCoefficients {
        let one_minus_c_pow = num_traits::pow(Rational::one() - &c, (n + 1) as usize);
        let frac = (Rational::one() - one_minus_c_pow) / int(n + 1);
        ExpansionCoefficients {
            a1: int(n) * &a0 / int(2),
            b0: (frac - &c) * &a0,
            b1: -(int(n) * &c * &a0) / int(2),
            a0_t: int(n) * &a0,
            a1_t: int(0),
            b0_t: -(int(n) * &c * &a0),
            b1_t: int(0),
            a0,
        }
    }

    #[test]
    fn trivial_configuration_vanishes() {
        for beta in [rat(-1, 1), rat(0, 1), rat(1, 2), rat(1, 1)] {
            assert!(futaki_pair(&trivial(), &beta).unwrap().is_zero());
        }
        assert!(futaki_classical(&trivial()).unwrap().is_zero());
    }

    #[test]
    fn normal_cone_values() {
        let a0 = rat(9, 2);
        let c = normal_cone_by_hand(2, rat(1, 2), a0.clone());
        assert_eq!(futaki_pair(&c, &int(1)).unwrap(), rat(7, 12) * &a0);

        let c1 = normal_cone_by_hand(1, rat(1, 2), int(2));
        assert_eq!(futaki_classical(&c1).unwrap(), rat(3, 8) * int(2));
        assert_eq!(
            futaki_classical(&c1).unwrap(),
            futaki_pair(&c1, &int(1)).unwrap()
        );
    }

    #[test]
    fn zero_a0_rejected() {
        let mut c = trivial();
        c.a0 = int(0);
        assert!(futaki_classical(&c).is_err());
        assert!(futaki_pair(&c, &int(0)).is_err());
    }

    #[test]
    fn lambda_beta_conversion() {
        assert_eq!(lambda_to_beta(&rat(2, 3)).unwrap(), int(0));
        assert_eq!(lambda_to_beta(&int(1)).unwrap(), int(1));
        assert_eq!(beta_to_lambda(&int(0)).unwrap(), rat(2, 3));
        assert!(lambda_to_beta(&int(0)).is_err());
        assert!(beta_to_lambda(&int(3)).is_err());
        for l in [rat(1, 3), rat(2, 3), rat(5, 7), int(1)] {
            let b = lambda_to_beta(&l).unwrap();
            assert_eq!(beta_to_lambda(&b).unwrap(), l);
        }
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&rat(3, 8)), FutakiClassification::StableCompatible);
        assert_eq!(classify(&int(0)), FutakiClassification::SemistableBoundary);
        assert_eq!(classify(&rat(-7, 12)), FutakiClassification::Unstable);
    }

    #[test]
    fn fit_n1_line_model() {
        // d_k = 2k + 1, a constant divisor of two points, no weights.
        let ks = [2, 4, 6, 8];
        let d: Vec<_> = ks.iter().map(|&k| int(2 * k + 1)).collect();
        let zeros = vec![int(0); 4];
        let twos = vec![int(2); 4];
        let c = fit_from_sequences(1, &ks, &d, &zeros, &twos, &zeros).unwrap();
        assert_eq!(c.a0, int(2));
        assert_eq!(c.a1, int(1));
        assert_eq!(c.a0_t, int(2));
    }

    #[test]
    fn fit_guards() {
        let ks = [1, 2, 3];
        let ones = vec![int(1); 3];
        let zeros = vec![int(0); 3];
        assert!(fit_from_sequences(0, &ks, &ones, &zeros, &ones, &zeros).is_err());
        // d quadratic while n = 1 bounds it to degree 1.
        let d: Vec<_> = ks.iter().map(|&k| int(k * k)).collect();
        let err = fit_from_sequences(1, &ks, &d, &zeros, &ones, &zeros).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { sequence: "d", .. }));
        assert!(fit_from_sequences(1, &[1, 1, 2], &ones, &zeros, &ones, &zeros).is_err());
        assert!(fit_from_sequences(2, &ks, &ones, &zeros, &ones, &zeros).is_err());
    }

    fn arb_coeffs() -> impl Strategy<Value = ExpansionCoefficients> {
        let r = || (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d));
        (
            (1i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d)),
            r(),
            r(),
            r(),
            r(),
            r(),
            r(),
            r(),
        )
            .prop_map(|(a0, a1, b0, b1, a0_t, a1_t, b0_t, b1_t)| ExpansionCoefficients {
                a0,
                a1,
                b0,
                b1,
                a0_t,
                a1_t,
                b0_t,
                b1_t,
            })
    }

    proptest! {
        #[test]
        fn affine_in_beta(c in arb_coeffs(), bn in -20i64..20, bd in 1i64..9) {
            let beta = rat(bn, bd);
            let f0 = futaki_pair(&c, &int(0)).unwrap();
            let f1 = futaki_pair(&c, &int(1)).unwrap();
            prop_assert_eq!(futaki_pair(&c, &beta).unwrap(), &f0 + &beta * (f1 - &f0));
        }

        #[test]
        fn beta_one_is_classical(c in arb_coeffs()) {
            prop_assert_eq!(futaki_pair(&c, &int(1)).unwrap(), futaki_classical(&c).unwrap());
        }

        #[test]
        fn positive_scaling(c in arb_coeffs(), tn in 1i64..30, td in 1i64..7, bn in -5i64..5) {
            let t = rat(tn, td);
            let beta = int(bn);
            let f = futaki_pair(&c, &beta).unwrap();
            let g = futaki_pair(&c.scaled(&t), &beta).unwrap();
            prop_assert_eq!(&g, &(&f * &t));
            prop_assert_eq!(classify(&g), classify(&f));
        }
    }
}

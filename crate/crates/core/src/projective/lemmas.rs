//! Fiber integrals of the ruled bundle `N(D)` joining two embeddings of `D`.
//!
//! Along a ruling line `[1 : 0 : t : 0]` the top power of the Fubini–Study
//! form expands as `n (1 + x)^(-n-1) (w1 + x w2)^(n-1) dx` with `x = |t|^2`.
//! The coefficient of `w1^i w2^(n-1-i)` therefore involves
//! `C(n-1, i) x^(n-1-i)`, and each fiber integral reduces to a Beta integral.

use serde::Serialize;

use super::quadrature::gauss_legendre;
use crate::error::{invalid, Error, Result};
use crate::exact::{beta_integral, binomial, int, to_f64, Rational};

fn check_n(n: i64) -> Result<()> {
    if n < 1 {
        return invalid(format!("dimension must be >= 1, got {n}"));
    }
    Ok(())
}

/// Coefficients of `w1^i w2^(n-1-i)`, `i = 0..n`, in the pushforward of the
/// top Fubini–Study power along the fibers. All equal one.
pub fn lemma31_coefficients(n: i64) -> Result<Vec<Rational>> {
    check_n(n)?;
    (0..n)
        .map(|i| Ok(int(n) * binomial(n - 1, i)? * beta_integral(n - 1 - i, i)?))
        .collect()
}

/// For each `i`, the pushforward coefficients of the two diagonal blocks of
/// the second moment: the `1/(1+|t|^2)` weight gives `(i+1)/(n+1)`, the
/// `|t|^2/(1+|t|^2)` weight gives `(n-i)/(n+1)`.
pub fn lemma32_coefficients(n: i64) -> Result<Vec<(Rational, Rational)>> {
    check_n(n)?;
    (0..n)
        .map(|i| {
            let outer = int(n) * binomial(n - 1, i)?;
            Ok((
                &outer * beta_integral(n - 1 - i, i + 1)?,
                &outer * beta_integral(n - i, i)?,
            ))
        })
        .collect()
}

/// Outcome of comparing quadrature against the exact fiber coefficients.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub n_max: i64,
    pub checked: usize,
    pub max_deviation: f64,
    pub worst_n: i64,
    pub worst_i: i64,
}

/// `int_0^inf x^p (1+x)^(-m) dx` over the two charts `x <= 1` and `1/x <= 1`.
fn fiber_integral(p: i64, m: i64) -> f64 {
    let rule = gauss_legendre(48);
    let near = rule.integrate(0.0, 1.0, |x| x.powi(p as i32) * (1.0 + x).powi(-(m as i32)));
    let far = rule.integrate(0.0, 1.0, |y| {
        y.powi((m - p - 2) as i32) * (1.0 + y).powi(-(m as i32))
    });
    near + far
}

/// Numerically integrates every fiber coefficient for `1 <= n' <= n` and
/// compares with [`lemma31_coefficients`] and [`lemma32_coefficients`].
pub fn quadrature_check_lemma32(n: i64, tol: f64) -> Result<LemmaReport> {
    check_n(n)?;
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let mut report = LemmaReport {
        n_max: n,
        checked: 0,
        max_deviation: 0.0,
        worst_n: 1,
        worst_i: 0,
    };
    for nn in 1..=n {
        let unit = lemma31_coefficients(nn)?;
        let pairs = lemma32_coefficients(nn)?;
        for i in 0..nn {
            let outer = to_f64(&(int(nn) * binomial(nn - 1, i)?));
            let q = nn - 1 - i;
            let numeric = [
                outer * fiber_integral(q, nn + 1),
                outer * fiber_integral(q, nn + 2),
                outer * fiber_integral(q + 1, nn + 2),
            ];
            let (first, second) = &pairs[i as usize];
            let exact = [to_f64(&unit[i as usize]), to_f64(first), to_f64(second)];
            for (a, b) in numeric.iter().zip(&exact) {
                report.checked += 1;
                let dev = (a - b).abs();
                if dev > report.max_deviation {
                    report.max_deviation = dev;
                    report.worst_n = nn;
                    report.worst_i = i;
                }
            }
        }
    }
    if report.max_deviation >= tol {
        return Err(Error::VerificationFailure(format!(
            "fiber quadrature deviates by {:.3e} at n = {}, i = {}",
            report.max_deviation, report.worst_n, report.worst_i
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_traits::One;

    #[test]
    fn lemma31_examples() {
        assert_eq!(lemma31_coefficients(1).unwrap(), vec![int(1)]);
        assert_eq!(lemma31_coefficients(3).unwrap(), vec![int(1); 3]);
        for n in 1..=8 {
            assert!(lemma31_coefficients(n).unwrap().iter().all(One::is_one));
        }
        assert!(lemma31_coefficients(0).is_err());
    }

    #[test]
    fn lemma32_examples() {
        assert_eq!(lemma32_coefficients(1).unwrap(), vec![(rat(1, 2), rat(1, 2))]);
        assert_eq!(lemma32_coefficients(3).unwrap()[1], (rat(1, 2), rat(1, 2)));
        for n in 1..=8 {
            for (i, (a, b)) in lemma32_coefficients(n).unwrap().into_iter().enumerate() {
                let i = i as i64;
                assert_eq!(a, rat(i + 1, n + 1));
                assert_eq!(b, rat(n - i, n + 1));
                assert!((a + b).is_one());
            }
        }
    }

    #[test]
    fn quadrature_agrees() {
        let r = quadrature_check_lemma32(2, 1e-8).unwrap();
        assert!(r.max_deviation < 1e-12);
        let r = quadrature_check_lemma32(6, 1e-8).unwrap();
        assert_eq!(r.checked, 3 * (1..=6).sum::<usize>());
        assert!(quadrature_check_lemma32(2, 0.0).is_err());
    }
}

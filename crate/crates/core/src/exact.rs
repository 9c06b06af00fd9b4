//! Exact rational arithmetic, binomials, polynomial interpolation and the
//! Beta-type integrals used as oracles elsewhere in the crate.
//!
//! Everything here is computed in arbitrary precision; no value in this
//! module ever passes through floating point.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`]. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| crate::Error::InvalidArgument(format!("not a rational: {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| crate::Error::InvalidArgument(format!("not a rational: {s:?}")))?;
    if den.is_zero() {
        return invalid(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `p/q` rendering (`p` alone for integers).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `C(m, r)` with the combinatorial convention: zero whenever `m < r`,
/// including every negative `m`.
pub fn binomial(m: i64, r: i64) -> Result<Rational> {
    if r < 0 {
        return invalid(format!("binomial lower index must be >= 0, got {r}"));
    }
    Ok(Rational::from_integer(binomial_int(m, r)))
}

pub(crate) fn binomial_int(m: i64, r: i64) -> BigInt {
    if r < 0 || m < r {
        return BigInt::zero();
    }
    let r = r.min(m - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}

/// Dense univariate polynomial with exact rational coefficients; index is
/// the power. Trailing zeros are always trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactPolynomial {
    coefficients: Vec<Rational>,
}

impl ExactPolynomial {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self {
            coefficients: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Coefficient of `x^power`; zero beyond the degree.
    pub fn coefficient(&self, power: usize) -> Rational {
        self.coefficients
            .get(power)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Debug for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactPolynomial({self})")
    }
}

impl fmt::Display for ExactPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (power, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let abs = c.abs();
            match power {
                0 => write!(f, "{}", format_rational(&abs))?,
                1 => write!(f, "{}*x", format_rational(&abs))?,
                _ => write!(f, "{}*x^{power}", format_rational(&abs))?,
            }
        }
        Ok(())
    }
}

/// Unique polynomial of degree `<= samples.len() - 1` through the samples,
/// by Newton divided differences.
pub fn interpolate(samples: &[(Rational, Rational)]) -> Result<ExactPolynomial> {
    if samples.is_empty() {
        return invalid("interpolation needs at least one sample");
    }
    for (i, (xi, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(xj, _)| xj == xi) {
            return invalid(format!(
                "duplicate interpolation node {}",
                format_rational(xi)
            ));
        }
    }

    let xs: Vec<&Rational> = samples.iter().map(|(x, _)| x).collect();
    let mut table: Vec<Rational> = samples.iter().map(|(_, y)| y.clone()).collect();
    let n = table.len();
    for level in 1..n {
        for i in (level..n).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (xs[i] - xs[i - level]);
        }
    }

    // Horner expansion of the Newton form into the monomial basis.
    let mut coeffs = vec![Rational::zero(); n];
    coeffs[0] = table[n - 1].clone();
    for (len, i) in (1..).zip((0..n - 1).rev()) {
        // coeffs <- coeffs * (x - xs[i]) + table[i]
        for p in (0..=len).rev() {
            let shifted = if p > 0 {
                coeffs[p - 1].clone()
            } else {
                Rational::zero()
            };
            let here = if p < len {
                &coeffs[p] * xs[i]
            } else {
                Rational::zero()
            };
            coeffs[p] = shifted - here;
        }
        coeffs[0] += &table[i];
    }
    Ok(ExactPolynomial::new(coeffs))
}

/// `p! q! / (p + q + 1)!`, the value of the integral of
/// `x^p (1 + x)^(-(p + q + 2))` over `[0, inf)`.
pub fn beta_integral(p: i64, q: i64) -> Result<Rational> {
    if p < 0 || q < 0 {
        return invalid(format!("beta integral needs p, q >= 0, got ({p}, {q})"));
    }
    let (p, q) = (p as u64, q as u64);
    Ok(Rational::new(
        factorial(p) * factorial(q),
        factorial(p + q + 1),
    ))
}

/// Defect of the weight-sum identity for the `j`-th block of the bundle
/// chain:
///
/// `sum_i [ (i+1)/(n+1) j^i (j-1)^(n-1-i) + (n-i)/(n+1) (j+1)^i j^(n-1-i) ] - n j^(n-1)`.
///
/// As a function of `j` this is a polynomial of degree at most `n - 3`.
pub fn weight_sum_identity_defect(n: i64, j: i64) -> Result<Rational> {
    if n < 1 || j < 1 {
        return invalid(format!("need n >= 1 and j >= 1, got n={n}, j={j}"));
    }
    let jr = int(j);
    let pow = |base: &Rational, e: i64| num_traits::pow(base.clone(), e as usize);
    let (jm, jp) = (int(j - 1), int(j + 1));
    let mut total = Rational::zero();
    for i in 0..n {
        total += rat(i + 1, n + 1) * pow(&jr, i) * pow(&jm, n - 1 - i);
        total += rat(n - i, n + 1) * pow(&jp, i) * pow(&jr, n - 1 - i);
    }
    Ok(total - int(n) * pow(&jr, n - 1))
}

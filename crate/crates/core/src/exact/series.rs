use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{self, int, Rational};
use crate::error::{Error, Result};

/// Power series `Σ c_i x^i + O(x^prec)` with exact coefficients.
///
/// `prec` is the number of known coefficients. Results of binary operations
/// carry the smaller precision of the operands; reading past `prec` is an
/// error rather than a silent zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(prec: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); prec] }
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(Rational::one(), prec)
    }

    pub fn constant(c: Rational, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if prec > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// Known coefficients `c_0 .. c_{prec-1}`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self { coeffs: coeffs.iter().map(|&c| int(c)).collect() }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Result<&Rational> {
        self.coeffs
            .get(i)
            .ok_or(Error::Precision { requested: i + 1, available: self.prec() })
    }

    /// Drops terms beyond `prec`; asking for more than is known is an error.
    pub fn truncate(&self, prec: usize) -> Result<Self> {
        if prec > self.prec() {
            return Err(Error::Precision { requested: prec, available: self.prec() });
        }
        Ok(Self { coeffs: self.coeffs[..prec].to_vec() })
    }

    fn common(&self, other: &Self) -> usize {
        self.prec().min(other.prec())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.common(other);
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.prec());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.prec();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &out[k - j];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let n = self.common(other);
        Ok(self.truncate(n)?.mul(&other.truncate(n)?.inverse()?))
    }

    /// Substitutes `x -> x^k`, keeping every coefficient that is determined.
    pub fn stretch(&self, k: usize) -> Self {
        assert!(k >= 1);
        let n = if self.prec() == 0 { 0 } else { (self.prec() - 1) * k + 1 };
        let mut out = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self { coeffs: out }
    }

    /// Expansion of `(1 - x^m)^e` to `prec` terms.
    pub fn binomial_factor(m: usize, e: &Rational, prec: usize) -> Self {
        assert!(m >= 1);
        let mut out = vec![Rational::zero(); prec];
        // C(e, j) (-1)^j built incrementally
        let mut c = Rational::one();
        let mut j = 0usize;
        while j * m < prec {
            out[j * m] = c.clone();
            c = -c * (e - int(j as i64)) / int(j as i64 + 1);
            j += 1;
        }
        Self { coeffs: out }
    }

    /// Evaluates the known terms at a float point (reporting only).
    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let n = self.common(rhs);
        QSeries { coeffs: (0..n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let n = self.common(rhs);
        QSeries { coeffs: (0..n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect() }
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = rational::format(c);
            parts.push(match i {
                0 => c,
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{} + O(x^{})", parts.join(" + "), self.prec())
    }
}

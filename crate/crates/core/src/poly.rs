//! Exact-rational univariate polynomials and Hermite polynomial generation.
//!
//! Every coefficient table in this crate (Hermite polynomials, the expansion
//! bases, the Edgeworth polynomials) is held exactly as arbitrary-precision
//! rationals; floating point enters only at evaluation time. Degrees stay
//! small (nothing above 11), so a dense representation is used.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, ToPrimitive, Zero};

/// Arbitrary-precision rational number. The representation is always reduced
/// with a positive denominator (enforced by `num`).
pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Dense univariate polynomial with exact rational coefficients.
///
/// Invariant: `coeffs` carries no trailing zero, so the zero polynomial is
/// the empty coefficient vector and otherwise the leading coefficient is
/// nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    /// Build from coefficients indexed by degree; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Build from small integer coefficients indexed by degree.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rational(c, 1)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Coefficient of `x^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation in double precision.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Coefficients converted to `f64`, indexed by degree.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rational(k as i64, 1))
            .collect();
        Polynomial::from_coeffs(coeffs)
    }

    /// Multiply every coefficient by a rational scalar.
    pub fn scale(&self, s: &Rational) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + other.coeff(k));
        }
        Polynomial::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }

    /// Probabilists' Hermite polynomial `H_r`, generated by
    /// `H_{r+1}(x) = x H_r(x) - r H_{r-1}(x)` with `H_0 = 1`, `H_1 = x`.
    ///
    /// This is the convention with generator
    /// `H_r(x) = exp(x^2/2) (-d/dx)^r exp(-x^2/2)` (not the physicists' one).
    pub fn hermite(r: u32) -> Polynomial {
        let mut prev = Polynomial::from_integers(&[1]);
        if r == 0 {
            return prev;
        }
        let mut cur = Polynomial::from_integers(&[0, 1]);
        for k in 1..r {
            // x * H_k - k * H_{k-1}
            let mut shifted = vec![Rational::zero()];
            shifted.extend(cur.coeffs.iter().cloned());
            let next =
                Polynomial::from_coeffs(shifted).add(&prev.scale(&rational(-(k as i64), 1)));
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// Weighted sum `sum_i weights[i] * polys[i]`, exact over rationals.
pub fn combine(weights: &[Rational], polys: &[Polynomial]) -> Result<Polynomial> {
    if weights.len() != polys.len() {
        return Err(Error::LengthMismatch { weights: weights.len(), polys: polys.len() });
    }
    let mut acc = Polynomial::zero();
    for (w, p) in weights.iter().zip(polys) {
        acc = acc.add(&p.scale(w));
    }
    Ok(acc)
}

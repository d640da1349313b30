//! Exact arithmetic substrate: factorials and binomials over big integers,
//! dense integer polynomials with rational truncation, dense rational
//! polynomials with exact integration, and integer Laurent classes in the
//! Tate symbol `u`.
//!
//! Everything in this module is arbitrary precision; no floating point.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Signed, ToPrimitive, Zero};
use num::{BigInt, BigRational};

use crate::error::{Error, Result};

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact binomial coefficient. `k < 0` or `k > n` gives 0; negative `n` is
/// rejected.
pub fn binomial(n: i64, k: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!(
            "binomial: n = {n} must be nonnegative"
        )));
    }
    if k < 0 || k > n {
        return Ok(BigInt::zero());
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        // exact: C(n, i+1) = C(n, i) * (n - i) / (i + 1)
        acc /= BigInt::from(i + 1);
    }
    Ok(acc)
}

/// n! / (parts_1! ... parts_r!) for nonnegative parts summing to n.
pub fn multinomial(n: i64, parts: &[i64]) -> Result<BigInt> {
    if parts.iter().any(|&p| p < 0) {
        return Err(Error::InvalidParameter(
            "multinomial: parts must be nonnegative".into(),
        ));
    }
    if parts.iter().sum::<i64>() != n {
        return Err(Error::InvalidParameter(format!(
            "multinomial: parts must sum to n = {n}"
        )));
    }
    let mut rem = n;
    let mut acc = BigInt::one();
    for &p in parts {
        acc *= binomial(rem, p)?;
        rem -= p;
    }
    Ok(acc)
}

pub(crate) fn int_pow(base: &BigInt, exp: u32) -> BigInt {
    let mut acc = BigInt::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Dense integer polynomial in one variable, exponents >= 0.
///
/// The zero polynomial stores an empty coefficient vector; otherwise the
/// leading coefficient is nonzero, so equality of values is equality of
/// representations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigInt, exp: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// 1 + q + ... + q^{len-1}; `len = 0` gives the zero polynomial.
    pub fn geometric(len: usize) -> Self {
        Self {
            coeffs: vec![BigInt::one(); len],
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, exp: usize) -> BigInt {
        self.coeffs.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Product truncated to exponents <= max_deg.
    pub fn mul_trunc(&self, rhs: &Self, max_deg: usize) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + rhs.coeffs.len() - 1).min(max_deg + 1);
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > max_deg || a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j > max_deg {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow_trunc(&self, exp: u32, max_deg: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc.mul_trunc(self, max_deg);
        }
        acc
    }

    /// Keep exactly the terms with exponent strictly below `threshold`.
    pub fn truncate_below(&self, threshold: &BigRational) -> Self {
        let cutoff = threshold.ceil().to_integer();
        if !cutoff.is_positive() {
            return Self::zero();
        }
        let len = cutoff.to_usize().unwrap_or(usize::MAX).min(self.coeffs.len());
        Self::from_coeffs(self.coeffs[..len].to_vec())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::from_coeffs(out)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        IntPoly::from_coeffs(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(out)
    }
}

/// Dense polynomial with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigRational, exp: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); exp + 1];
        coeffs[exp] = c;
        Self::from_coeffs(coeffs)
    }

    /// c0 + c1 * x.
    pub fn linear(c0: BigRational, c1: BigRational) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: usize) -> BigRational {
        self.coeffs
            .get(exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// p(c * x): rescales the variable.
    pub fn substitute_scaled(&self, c: &BigRational) -> Self {
        let mut power = BigRational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let out = a * &power;
                power *= c;
                out
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Antiderivative with zero constant term.
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![BigRational::zero()];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / BigRational::from_integer(BigInt::from(i as u64 + 1)));
        }
        Self::from_coeffs(coeffs)
    }

    pub fn definite_integral(&self, lo: &BigRational, hi: &BigRational) -> BigRational {
        let f = self.integrate();
        f.eval(hi) - f.eval(lo)
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        RatPoly::from_coeffs(out)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigRational::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        RatPoly::from_coeffs(out)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(out)
    }
}

/// Integer Laurent polynomial in the Tate symbol `u`.
///
/// The exponent-k term records the multiplicity of the weight-2k Tate class
/// Q(-k) inside a class in the Grothendieck group of mixed Hodge structures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TateClass {
    terms: BTreeMap<i64, BigInt>,
}

impl TateClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: BigInt, exp: i64) -> Self {
        let mut t = Self::default();
        t.add_term(exp, &c);
        t
    }

    pub fn from_poly(p: &IntPoly) -> Self {
        let mut t = Self::default();
        for (i, c) in p.coeffs().iter().enumerate() {
            t.add_term(i as i64, c);
        }
        t
    }

    pub fn add_term(&mut self, exp: i64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Read off a Betti-type series: all exponents and coefficients must be
    /// nonnegative, otherwise the class is not pure of Tate type.
    pub fn into_betti_series(self) -> Result<IntPoly> {
        let mut coeffs = Vec::new();
        for (exp, c) in &self.terms {
            if *exp < 0 || c.is_negative() {
                return Err(Error::PurityViolated(format!(
                    "term {c} * u^{exp} cannot appear in a pure Tate class"
                )));
            }
            let exp = *exp as usize;
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] = c.clone();
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }
}

impl Add for &TateClass {
    type Output = TateClass;

    fn add(self, rhs: &TateClass) -> TateClass {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &TateClass {
    type Output = TateClass;

    fn sub(self, rhs: &TateClass) -> TateClass {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, &-c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(3, 2).unwrap(), BigInt::from(3));
        assert_eq!(binomial(9, 3).unwrap(), BigInt::from(84));
        assert_eq!(binomial(5, -1).unwrap(), BigInt::zero());
        assert_eq!(binomial(5, 6).unwrap(), BigInt::zero());
        assert!(binomial(-1, 0).is_err());
    }

    #[test]
    fn multinomial_small_values() {
        assert_eq!(multinomial(2, &[1, 1]).unwrap(), BigInt::from(2));
        assert_eq!(multinomial(3, &[2, 1]).unwrap(), BigInt::from(3));
        assert!(multinomial(3, &[1, 1]).is_err());
        assert!(multinomial(2, &[-1, 3]).is_err());
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    #[test]
    fn poly_products() {
        let p = IntPoly::from_i64s(&[1, 1]);
        assert_eq!(&p * &p, IntPoly::from_i64s(&[1, 2, 1]));

        let q = IntPoly::from_i64s(&[3, 0, -2, 7]);
        assert_eq!(&q * &IntPoly::one(), q);

        let r = IntPoly::from_i64s(&[1, 2]);
        assert_eq!(&r * &r, IntPoly::from_i64s(&[1, 4, 4]));
    }

    #[test]
    fn truncation_keeps_strictly_below_threshold() {
        let p = IntPoly::from_i64s(&[1, 3, 5, 7]);
        assert_eq!(
            p.truncate_below(&rat(5, 2)),
            IntPoly::from_i64s(&[1, 3, 5])
        );
        assert_eq!(p.truncate_below(&rat(0, 1)), IntPoly::zero());

        // (1-q) * q * (q+1) = q - q^3, truncated below 2 leaves q
        let inner = &(&IntPoly::from_i64s(&[0, 1]) * &IntPoly::from_i64s(&[1, -1]))
            * &IntPoly::from_i64s(&[1, 1]);
        assert_eq!(inner.truncate_below(&rat(2, 1)), IntPoly::from_i64s(&[0, 1]));

        // integer threshold is strict
        let q = IntPoly::from_i64s(&[4, 4, 4]);
        assert_eq!(q.truncate_below(&rat(2, 1)), IntPoly::from_i64s(&[4, 4]));
    }

    #[test]
    fn geometric_series() {
        assert_eq!(IntPoly::geometric(3), IntPoly::from_i64s(&[1, 1, 1]));
        assert_eq!(IntPoly::geometric(0), IntPoly::zero());
    }

    #[test]
    fn rat_poly_integration() {
        // int_0^1 (1 - x)^2 dx = 1/3
        let p = RatPoly::linear(rat(1, 1), rat(-1, 1)).pow(2);
        assert_eq!(p.definite_integral(&rat(0, 1), &rat(1, 1)), rat(1, 3));
    }

    #[test]
    fn tate_class_betti_read_off() {
        let mut t = TateClass::from_poly(&IntPoly::from_i64s(&[1, 2]));
        assert_eq!(
            t.clone().into_betti_series().unwrap(),
            IntPoly::from_i64s(&[1, 2])
        );
        t.add_term(1, &BigInt::from(-5));
        assert!(t.into_betti_series().is_err());
    }
}

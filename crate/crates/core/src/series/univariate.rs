//! Univariate truncated series and the calculus needed for the Todd-type
//! generating functions: exp, log, sqrt, division, composition.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorial, int, Rational};

/// Coefficients `c_0..=c_N` of a series known through degree `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnivariateSeries {
    coeffs: Vec<Rational>,
}

impl UnivariateSeries {
    pub fn zero(cap: usize) -> Self {
        Self {
            coeffs: vec![Rational::zero(); cap + 1],
        }
    }

    pub fn one(cap: usize) -> Self {
        Self::constant(cap, Rational::one())
    }

    pub fn constant(cap: usize, c: Rational) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = c;
        s
    }

    /// The series `x`.
    pub fn x(cap: usize) -> Self {
        let mut s = Self::zero(cap);
        if cap >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Takes the given coefficients, padding with zeros or dropping the tail
    /// to reach `cap`.
    pub fn from_coeffs(cap: usize, mut coeffs: Vec<Rational>) -> Self {
        coeffs.resize(cap + 1, Rational::zero());
        Self { coeffs }
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, cap: usize) -> Self {
        let cap = cap.min(self.cap());
        Self {
            coeffs: self.coeffs[..=cap].to_vec(),
        }
    }

    fn binary<F: Fn(&Rational, &Rational) -> Rational>(&self, other: &Self, f: F) -> Self {
        let cap = self.cap().min(other.cap());
        Self {
            coeffs: (0..=cap).map(|k| f(&self.coeffs[k], &other.coeffs[k])).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product truncated at the smaller cap.
    pub fn mul_series(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        let mut out = vec![Rational::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(cap + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.cap());
        for _ in 0..k {
            acc = acc.mul_series(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let n = self.cap();
        if n == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=n).map(|k| &self.coeffs[k] * int(k as i64)).collect(),
        }
    }

    /// Antiderivative with zero constant term; the cap rises by one.
    pub fn integral(&self) -> Self {
        let mut coeffs = vec![Rational::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / int(k as i64 + 1));
        }
        Self { coeffs }
    }

    /// Divides by `x`; requires a vanishing constant term. The cap drops by one.
    pub fn div_x(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidConstantTerm("division by x needs c_0 = 0"));
        }
        if self.cap() == 0 {
            return Err(Error::InvalidConstantTerm("no coefficients left after division by x"));
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Multiplies by `x`; the cap rises by one.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `f(c x)`.
    pub fn rescale_var(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a * &p);
            p *= c;
        }
        Self { coeffs }
    }

    /// `self / divisor`; the divisor needs a nonzero constant term.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        let b0 = divisor.coeffs[0].clone();
        if b0.is_zero() {
            return Err(Error::InvalidConstantTerm("divisor must have c_0 != 0"));
        }
        let cap = self.cap().min(divisor.cap());
        let mut q: Vec<Rational> = Vec::with_capacity(cap + 1);
        for k in 0..=cap {
            let mut acc = self.coeffs[k].clone();
            for i in 1..=k {
                acc -= &divisor.coeffs[i] * &q[k - i];
            }
            q.push(acc / &b0);
        }
        Ok(Self { coeffs: q })
    }

    /// `exp(f)` for `f(0) = 0`, via `g' = f' g`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidConstantTerm("exp needs c_0 = 0"));
        }
        let n = self.cap();
        let mut g = vec![Rational::zero(); n + 1];
        g[0] = Rational::one();
        // k g_k = sum_{i=1}^{k} i f_i g_{k-i}
        for k in 1..=n {
            let mut acc = Rational::zero();
            for i in 1..=k {
                acc += int(i as i64) * &self.coeffs[i] * &g[k - i];
            }
            g[k] = acc / int(k as i64);
        }
        Ok(Self { coeffs: g })
    }

    /// `log(f)` for `f(0) = 1`, as the antiderivative of `f'/f`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidConstantTerm("log needs c_0 = 1"));
        }
        let n = self.cap();
        if n == 0 {
            return Ok(Self::zero(0));
        }
        let ratio = self.derivative().div(&self.truncate(n - 1))?;
        Ok(ratio.integral())
    }

    /// `log(f)` for `f(0) = 1` by substituting `u = f - 1` into
    /// `log(1 + u) = sum (-1)^{k+1} u^k / k`.
    pub fn log_by_composition(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidConstantTerm("log needs c_0 = 1"));
        }
        let n = self.cap();
        let mut outer = vec![Rational::zero(); n + 1];
        for (k, c) in outer.iter_mut().enumerate().skip(1) {
            let s = if k % 2 == 1 { 1 } else { -1 };
            *c = Rational::new(BigInt::from(s), BigInt::from(k));
        }
        let u = self - &Self::one(n);
        Self { coeffs: outer }.compose(&u)
    }

    /// `sqrt(f)` for `f(0) = 1`, solving `g^2 = f` term by term.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidConstantTerm("sqrt needs c_0 = 1"));
        }
        let n = self.cap();
        let mut g = vec![Rational::zero(); n + 1];
        g[0] = Rational::one();
        let two = int(2);
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &g[i] * &g[k - i];
            }
            g[k] = acc / &two;
        }
        Ok(Self { coeffs: g })
    }

    /// `self(inner(x))` for `inner(0) = 0`, by Horner's scheme.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidConstantTerm("inner series must have c_0 = 0"));
        }
        let cap = self.cap().min(inner.cap());
        let inner = inner.truncate(cap);
        let mut acc = Self::zero(cap);
        for c in self.coeffs[..=cap].iter().rev() {
            acc = acc.mul_series(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// `exp(x)` through degree `cap`.
    pub fn exp_x(cap: usize) -> Self {
        Self {
            coeffs: (0..=cap)
                .map(|k| Rational::new(BigInt::one(), factorial(k)))
                .collect(),
        }
    }

    /// Evaluates a polynomial truncation at a rational point.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl Add<&UnivariateSeries> for &UnivariateSeries {
    type Output = UnivariateSeries;
    fn add(self, rhs: &UnivariateSeries) -> UnivariateSeries {
        self.binary(rhs, |a, b| a + b)
    }
}

impl Sub<&UnivariateSeries> for &UnivariateSeries {
    type Output = UnivariateSeries;
    fn sub(self, rhs: &UnivariateSeries) -> UnivariateSeries {
        self.binary(rhs, |a, b| a - b)
    }
}

impl Mul<&UnivariateSeries> for &UnivariateSeries {
    type Output = UnivariateSeries;
    fn mul(self, rhs: &UnivariateSeries) -> UnivariateSeries {
        self.mul_series(rhs)
    }
}

impl Neg for &UnivariateSeries {
    type Output = UnivariateSeries;
    fn neg(self) -> UnivariateSeries {
        self.scale(&-Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sinh_half_quotient(cap: usize) -> UnivariateSeries {
        // (e^{x/2} - e^{-x/2}) / x, computed at cap + 1 then divided by x
        let e = UnivariateSeries::exp_x(cap + 1);
        let num = &e.rescale_var(&rat(1, 2)) - &e.rescale_var(&rat(-1, 2));
        num.div_x().unwrap()
    }

    #[test]
    fn modified_bernoulli_by_hand() {
        let s = sinh_half_quotient(6).log().unwrap().scale(&rat(1, 2));
        assert_eq!(s.coeff(0), rat(0, 1));
        assert_eq!(s.coeff(1), rat(0, 1));
        assert_eq!(s.coeff(2), rat(1, 48));
        assert_eq!(s.coeff(3), rat(0, 1));
        assert_eq!(s.coeff(4), rat(-1, 5760));
    }

    #[test]
    fn todd_series_by_division() {
        let e = UnivariateSeries::exp_x(7).rescale_var(&rat(-1, 1));
        let denom = (&UnivariateSeries::one(7) - &e).div_x().unwrap();
        let q = UnivariateSeries::one(6).div(&denom).unwrap();
        let want = [rat(1, 1), rat(1, 2), rat(1, 12), rat(0, 1), rat(-1, 720)];
        assert_eq!(&q.coeffs()[..5], &want);
    }

    #[test]
    fn log_of_exp_is_identity() {
        let x = UnivariateSeries::x(9);
        let back = x.exp().unwrap().log().unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn constant_term_preconditions() {
        let x = UnivariateSeries::x(4);
        assert!(x.log().is_err());
        assert!(x.sqrt().is_err());
        assert!(UnivariateSeries::one(4).exp().is_err());
        assert!(UnivariateSeries::one(4).div(&x).is_err());
        assert!(UnivariateSeries::one(4).compose(&UnivariateSeries::one(4)).is_err());
    }

    #[test]
    fn two_log_routes_agree() {
        let f = sinh_half_quotient(10);
        assert_eq!(f.log().unwrap(), f.log_by_composition().unwrap());
    }

    #[test]
    fn sqrt_squares_back() {
        let f = UnivariateSeries::from_coeffs(6, vec![rat(1, 1), rat(3, 2), rat(-2, 5), rat(7, 1)]);
        let g = f.sqrt().unwrap();
        assert_eq!(&g * &g, f);
    }
}

//! Truncated formal power series over exact rationals.
//!
//! A [`TruncatedSeries`] stands for an element of `k[[t_1, ..., t_d]]` known
//! only through total degree `cap`. Arithmetic propagates the cap so that a
//! coefficient is never reported beyond the degree at which it is valid:
//!
//! - sums and products take the minimum of the operand caps,
//! - every partial derivative lowers the cap by one.
//!
//! A negative cap means no coefficient is known at all.

pub mod matrix;
pub mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{from_parts, to_parts, Rational};

pub use matrix::{MatrixEntry, SeriesMatrix};
pub use univariate::UnivariateSeries;

/// Default working cap for series computations.
pub const DEFAULT_CAP: i32 = 8;

/// Exponent multi-index; its length is the dimension of the ambient disk.
pub type Exponent = Vec<u32>;

pub fn total_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    dim: usize,
    cap: i32,
    terms: BTreeMap<Exponent, Rational>,
}

impl TruncatedSeries {
    pub fn zero(dim: usize, cap: i32) -> Self {
        Self {
            dim,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, cap: i32, c: Rational) -> Self {
        Self::monomial(dim, cap, vec![0; dim], c)
    }

    pub fn one(dim: usize, cap: i32) -> Self {
        Self::constant(dim, cap, Rational::one())
    }

    /// The coordinate function `t_axis` (0-based axis).
    pub fn variable(dim: usize, cap: i32, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Self::monomial(dim, cap, e, Rational::one())
    }

    /// `c * t^exp`, dropped silently when its degree exceeds the cap.
    pub fn monomial(dim: usize, cap: i32, exp: Exponent, c: Rational) -> Self {
        assert_eq!(exp.len(), dim, "exponent length must equal dimension");
        let mut s = Self::zero(dim, cap);
        s.insert(exp, c);
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(dim: usize, cap: i32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Rational)>,
    {
        let mut s = Self::zero(dim, cap);
        for (e, c) in terms {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: e.len(),
                });
            }
            s.add_term(e, c);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> i32 {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.dim])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest total degree of a stored term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    fn in_range(&self, e: &[u32]) -> bool {
        self.cap >= 0 && total_degree(e) as i64 <= self.cap as i64
    }

    fn insert(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() || !self.in_range(&e) {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, c);
        }
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() || !self.in_range(&e) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Lowers the cap, discarding coefficients beyond it. Raising is not
    /// allowed since the missing coefficients are unknown.
    pub fn truncate(&self, cap: i32) -> Self {
        let cap = cap.min(self.cap);
        let mut s = Self::zero(self.dim, cap);
        for (e, c) in &self.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    /// Re-labels the cap of an exact polynomial. Only meaningful when the
    /// series is known to have no terms beyond what it stores.
    pub fn with_cap(&self, cap: i32) -> Self {
        let mut s = Self::zero(self.dim, cap);
        for (e, c) in &self.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    /// Equality of all coefficients that both operands know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let cap = self.cap.min(other.cap);
        self.truncate(cap) == other.truncate(cap)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut s = self.truncate(other.cap);
        for (e, c) in &other.terms {
            s.add_term(e.clone(), c.clone());
        }
        Ok(s)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let cap = self.cap.min(other.cap);
        let mut s = Self::zero(self.dim, cap);
        if cap < 0 {
            return Ok(s);
        }
        for (ea, ca) in &self.terms {
            let da = total_degree(ea);
            if da as i64 > cap as i64 {
                continue;
            }
            for (eb, cb) in &other.terms {
                if (da + total_degree(eb)) as i64 > cap as i64 {
                    continue;
                }
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                s.add_term(e, ca * cb);
            }
        }
        Ok(s)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = Self::zero(self.dim, self.cap);
        if c.is_zero() {
            return s;
        }
        for (e, v) in &self.terms {
            s.terms.insert(e.clone(), v * c);
        }
        s
    }

    fn neg_ref(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.dim, self.cap);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative along a 0-based axis; the cap drops by one.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let mut s = Self::zero(self.dim, self.cap - 1);
        for (e, c) in &self.terms {
            if e[axis] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[axis] -= 1;
            s.add_term(f, c * Rational::from_integer(BigInt::from(e[axis])));
        }
        Ok(s)
    }

    /// `∂^alpha` for a multi-index `alpha`; the cap drops by `|alpha|`.
    pub fn partial_multi(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: alpha.len(),
            });
        }
        let order = total_degree(alpha) as i32;
        let mut s = Self::zero(self.dim, self.cap - order);
        for (e, c) in &self.terms {
            if e.iter().zip(alpha).any(|(x, a)| x < a) {
                continue;
            }
            let mut factor = BigInt::one();
            let mut f = e.clone();
            for (k, &a) in alpha.iter().enumerate() {
                for r in 0..a {
                    factor *= BigInt::from(e[k] - r);
                }
                f[k] -= a;
            }
            s.add_term(f, c * Rational::from_integer(factor));
        }
        Ok(s)
    }

    /// Substitutes exact rational values for all variables. Only sensible for
    /// polynomials (every stored term is used).
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            acc += m;
        }
        acc
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (i, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{}", i + 1, p)?,
                }
            }
        }
        write!(f, " + O({})", self.cap + 1)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                self.$checked(rhs).expect("series dimension mismatch")
            }
        }
        impl $tr<TruncatedSeries> for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.neg_ref()
    }
}

impl Neg for TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        self.neg_ref()
    }
}

/// JSON form: `{"d": .., "cap": .., "terms": [{"exp": [..], "num": "..", "den": ".."}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub d: usize,
    pub cap: i32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub num: String,
    pub den: String,
}

impl From<&TruncatedSeries> for SeriesJson {
    fn from(s: &TruncatedSeries) -> Self {
        SeriesJson {
            d: s.dim,
            cap: s.cap,
            terms: s
                .terms
                .iter()
                .map(|(e, c)| {
                    let (num, den) = to_parts(c);
                    TermJson {
                        exp: e.clone(),
                        num,
                        den,
                    }
                })
                .collect(),
        }
    }
}

impl TryFrom<&SeriesJson> for TruncatedSeries {
    type Error = Error;
    fn try_from(j: &SeriesJson) -> Result<Self> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exp.len() != j.d {
                return Err(Error::Parse(format!(
                    "exponent {:?} has length {} but d = {}",
                    t.exp,
                    t.exp.len(),
                    j.d
                )));
            }
            if j.cap < 0 || total_degree(&t.exp) as i64 > j.cap as i64 {
                return Err(Error::Parse(format!(
                    "exponent {:?} exceeds cap {}",
                    t.exp, j.cap
                )));
            }
            terms.push((t.exp.clone(), from_parts(&t.num, &t.den)?));
        }
        TruncatedSeries::from_terms(j.d, j.cap, terms)
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SeriesJson::deserialize(d)?;
        TruncatedSeries::try_from(&j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn t(dim: usize, cap: i32, axis: usize) -> TruncatedSeries {
        TruncatedSeries::variable(dim, cap, axis)
    }

    fn one(dim: usize, cap: i32) -> TruncatedSeries {
        TruncatedSeries::one(dim, cap)
    }

    #[test]
    fn difference_of_squares() {
        let a = &one(2, 8) + &t(2, 8, 0);
        let b = &one(2, 8) - &t(2, 8, 0);
        let expect = &one(2, 8) - &t(2, 8, 0).pow(2);
        let prod = &a * &b;
        assert_eq!(prod, expect);
        assert_eq!(prod.cap(), 8);
    }

    #[test]
    fn zero_absorbs() {
        let a = &one(2, 5) + &t(2, 5, 1);
        assert!((&a * &TruncatedSeries::zero(2, 5)).is_zero());
    }

    #[test]
    fn convolution_at_cap_two() {
        // (1 + t1 + t2)(1 + t1) = 1 + 2t1 + t2 + t1^2 + t1 t2, nothing above degree 2 anyway
        let a = &(&one(2, 2) + &t(2, 2, 0)) + &t(2, 2, 1);
        let b = &one(2, 2) + &t(2, 2, 0);
        let got = &a * &b;
        let want = TruncatedSeries::from_terms(
            2,
            2,
            vec![
                (vec![0, 0], int(1)),
                (vec![1, 0], int(2)),
                (vec![0, 1], int(1)),
                (vec![2, 0], int(1)),
                (vec![1, 1], int(1)),
            ],
        )
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn product_truncates_at_min_cap() {
        let a = &one(1, 3) + &t(1, 3, 0);
        let b = (&one(1, 1) + &t(1, 1, 0)).with_cap(1);
        let p = &a * &b;
        assert_eq!(p.cap(), 1);
        assert_eq!(p.coeff(&[1]), int(2));
        assert_eq!(p.coeff(&[2]), int(0));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = one(2, 3);
        let b = one(3, 3);
        assert!(matches!(
            a.checked_mul(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn partial_derivatives() {
        let x = t(2, 8, 0);
        let y = t(2, 8, 1);
        let f = &x.pow(2) * &y;
        let d1 = f.partial(0).unwrap();
        assert_eq!(d1, (&x * &y).scale(&int(2)).truncate(7));
        assert_eq!(d1.cap(), 7);
        assert!(x.partial(1).unwrap().is_zero());
        let g = &x.pow(2) * &y.pow(2);
        let d12 = g.partial(0).unwrap().partial(1).unwrap();
        assert_eq!(d12, (&x * &y).scale(&int(4)).truncate(6));
        assert_eq!(g.partial_multi(&[1, 1]).unwrap(), d12);
        assert!(matches!(
            g.partial(2),
            Err(Error::AxisOutOfRange { axis: 2, dim: 2 })
        ));
    }

    #[test]
    fn cap_exhausted_by_derivatives() {
        let f = t(1, 0, 0); // nothing of degree 1 survives at cap 0
        assert!(f.is_zero());
        let g = one(1, 0).partial(0).unwrap();
        assert_eq!(g.cap(), -1);
        assert!(g.is_zero());
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let f = (&t(2, 4, 0) * &t(2, 4, 1)).scale(&rat(-3, 7));
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"num\":\"-3\""));
        let back: TruncatedSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"d":1,"cap":1,"terms":[{"exp":[2],"num":"1","den":"1"}]}"#;
        assert!(serde_json::from_str::<TruncatedSeries>(bad).is_err());
    }

    #[test]
    fn agreement_uses_common_cap() {
        let a = &one(1, 5) + &t(1, 5, 0).pow(4);
        let b = one(1, 3);
        assert!(a.agrees_with(&b));
        assert!(!a.agrees_with(&one(1, 5)));
    }
}

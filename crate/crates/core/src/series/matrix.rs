//! Square matrices over a coefficient ring whose entries are graded.
//!
//! Powers and traces are only taken when every entry has even total degree,
//! so the entries commute with each other and the trace of a power does not
//! depend on the multiplication order.

use num_traits::Zero;

use super::{TruncatedSeries, UnivariateSeries};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Ring operations a matrix entry must support.
pub trait MatrixEntry: Clone {
    /// Zero element in the same ambient ring as `self`.
    fn zero_like(&self) -> Self;
    fn add_entry(&self, other: &Self) -> Self;
    fn mul_entry(&self, other: &Self) -> Self;
    fn scale_entry(&self, c: &Rational) -> Self;
    fn is_zero_entry(&self) -> bool;
    /// Whether the entry is a sum of even-degree homogeneous pieces.
    fn is_even(&self) -> bool;
}

impl MatrixEntry for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn add_entry(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_entry(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_entry(&self, c: &Rational) -> Self {
        self * c
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn is_even(&self) -> bool {
        true
    }
}

impl MatrixEntry for UnivariateSeries {
    fn zero_like(&self) -> Self {
        UnivariateSeries::zero(self.cap())
    }
    fn add_entry(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_entry(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_entry(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn is_even(&self) -> bool {
        true
    }
}

impl MatrixEntry for TruncatedSeries {
    fn zero_like(&self) -> Self {
        TruncatedSeries::zero(self.dim(), self.cap())
    }
    fn add_entry(&self, other: &Self) -> Self {
        self + other
    }
    fn mul_entry(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_entry(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn is_even(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesMatrix<T> {
    size: usize,
    entries: Vec<T>,
}

impl<T: MatrixEntry> SeriesMatrix<T> {
    /// Row-major construction; `rows` must be square and non-empty.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::MatrixShape("empty matrix".into()));
        }
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::MatrixShape(format!("rows of a {size}x? matrix differ in length")));
        }
        Ok(Self {
            size,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix with every entry equal to `zero` except where `f` says otherwise.
    pub fn from_fn<F: FnMut(usize, usize) -> T>(size: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.size + j]
    }

    fn zero_entry(&self) -> T {
        self.entries[0].zero_like()
    }

    pub fn identity_like(&self, one: T) -> Self {
        let zero = self.zero_entry();
        Self::from_fn(self.size, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn check_even(&self) -> Result<()> {
        for i in 0..self.size {
            for j in 0..self.size {
                if !self.get(i, j).is_even() {
                    return Err(Error::OddDegreeEntry { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::MatrixShape(format!("{} vs {}", self.size, other.size)));
        }
        Ok(Self {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add_entry(b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            size: self.size,
            entries: self.entries.iter().map(|a| a.scale_entry(c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::MatrixShape(format!("{} vs {}", self.size, other.size)));
        }
        let n = self.size;
        let zero = self.zero_entry();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = zero.clone();
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero_entry() || b.is_zero_entry() {
                        continue;
                    }
                    acc = acc.add_entry(&a.mul_entry(b));
                }
                entries.push(acc);
            }
        }
        Ok(Self { size: n, entries })
    }

    pub fn trace(&self) -> T {
        let mut acc = self.zero_entry();
        for i in 0..self.size {
            acc = acc.add_entry(self.get(i, i));
        }
        acc
    }

    /// `M^l` for `l >= 1`; all entries must be even.
    pub fn power(&self, l: u32) -> Result<Self> {
        self.check_even()?;
        if l == 0 {
            return Err(Error::MatrixShape("power 0 needs an explicit unit".into()));
        }
        let mut acc = self.clone();
        for _ in 1..l {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `Tr(M^l)` for `l >= 1`.
    pub fn trace_power(&self, l: u32) -> Result<T> {
        Ok(self.power(l)?.trace())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn var(axis: usize) -> TruncatedSeries {
        TruncatedSeries::variable(2, 8, axis)
    }

    #[test]
    fn strictly_upper_triangular_square_is_traceless() {
        let z = TruncatedSeries::zero(2, 8);
        let m = SeriesMatrix::from_rows(vec![vec![z.clone(), var(0)], vec![z.clone(), z]]).unwrap();
        assert!(m.trace_power(2).unwrap().is_zero());
    }

    #[test]
    fn scalar_power() {
        let m = SeriesMatrix::from_rows(vec![vec![var(0).pow(2)]]).unwrap();
        assert_eq!(m.trace_power(3).unwrap(), var(0).pow(6));
    }

    #[test]
    fn two_by_two_antidiagonal() {
        let z = TruncatedSeries::zero(2, 8);
        let (a, b) = (var(0), var(1));
        let m = SeriesMatrix::from_rows(vec![vec![z.clone(), a.clone()], vec![b.clone(), z]]).unwrap();
        assert_eq!(m.trace_power(2).unwrap(), (&a * &b).scale(&int(2)));
    }

    #[test]
    fn shape_errors() {
        let r: Result<SeriesMatrix<Rational>> =
            SeriesMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(3)]]);
        assert!(r.is_err());
        let e: Result<SeriesMatrix<Rational>> = SeriesMatrix::from_rows(vec![]);
        assert!(e.is_err());
    }
}

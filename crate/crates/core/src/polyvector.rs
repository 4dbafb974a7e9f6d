//! Poly-vector fields on the formal disk and differential forms.
//!
//! A homogeneous poly-vector field of shifted degree `p` is a sum of
//! `f * ∂_{i_0} ∧ ... ∧ ∂_{i_p}` with strictly increasing indices. Internally
//! each wedge monomial is a bit mask; unsorted index tuples are normalized by
//! the sign of the sorting permutation.
//!
//! The Schouten bracket is computed in the odd-coordinate picture: with
//! `θ_i` standing for `∂_i`,
//!
//! `[A, B] = Σ_i (A ∂⃖/∂θ_i)(∂B/∂t_i) - (∂A/∂t_i)(∂⃗/∂θ_i B)`,
//!
//! which restricts to the commutator on vector fields and to `X(f)` on a
//! vector field and a function, and is graded antisymmetric for the shifted
//! degree.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann;
use crate::rational::{int, Rational};
use crate::series::TruncatedSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVectorField {
    dim: usize,
    degree: i32,
    comps: BTreeMap<u32, TruncatedSeries>,
}

fn check_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

fn accumulate(map: &mut BTreeMap<u32, TruncatedSeries>, key: u32, value: TruncatedSeries) {
    match map.remove(&key) {
        Some(old) => {
            let sum = &old + &value;
            if !sum.is_zero() {
                map.insert(key, sum);
            }
        }
        None => {
            if !value.is_zero() {
                map.insert(key, value);
            }
        }
    }
}

impl PolyVectorField {
    /// The zero field of shifted degree `degree` (`-1` for functions).
    pub fn zero(dim: usize, degree: i32) -> Self {
        assert!(degree >= -1, "shifted degree must be >= -1");
        Self {
            dim,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn function(f: TruncatedSeries) -> Self {
        let mut p = Self::zero(f.dim(), -1);
        accumulate(&mut p.comps, 0, f);
        p
    }

    /// `Σ_i fields[i] ∂_i`.
    pub fn vector_field(fields: Vec<TruncatedSeries>) -> Result<Self> {
        let dim = fields.len();
        let mut p = Self::zero(dim, 0);
        for (i, f) in fields.into_iter().enumerate() {
            check_dim(dim, f.dim())?;
            accumulate(&mut p.comps, 1 << i, f);
        }
        Ok(p)
    }

    /// `f ∂_{i_0} ∧ ... ∧ ∂_{i_p}` for an arbitrary (possibly unsorted) tuple.
    pub fn monomial(f: TruncatedSeries, indices: &[usize]) -> Result<Self> {
        let dim = f.dim();
        if indices.is_empty() {
            return Ok(Self::function(f));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::AxisOutOfRange { axis: bad, dim });
        }
        let mut p = Self::zero(dim, indices.len() as i32 - 1);
        if let Some((mask, sign)) = grassmann::mask_of(indices) {
            accumulate(&mut p.comps, mask, f.scale(&int(sign as i64)));
        }
        Ok(p)
    }

    /// `∂_{i_0} ∧ ... ∧ ∂_{i_p}` with unit coefficient.
    pub fn basis(dim: usize, cap: i32, indices: &[usize]) -> Result<Self> {
        Self::monomial(TruncatedSeries::one(dim, cap), indices)
    }

    pub fn from_components<I>(dim: usize, degree: i32, comps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, TruncatedSeries)>,
    {
        let mut p = Self::zero(dim, degree);
        for (idx, f) in comps {
            if idx.len() as i32 != degree + 1 {
                return Err(Error::DegreeMismatch {
                    expected: degree as i64 + 1,
                    found: idx.len() as i64,
                });
            }
            p = p.checked_add(&Self::monomial(f, &idx)?)?;
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Shifted degree: one less than the number of wedge factors.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn factors(&self) -> usize {
        (self.degree + 1) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &TruncatedSeries)> {
        self.comps.iter().map(|(m, f)| (grassmann::indices(*m), f))
    }

    /// `γ^{i_0 ... i_p}`, antisymmetric in the indices.
    pub fn component(&self, indices: &[usize]) -> Option<TruncatedSeries> {
        let (mask, sign) = grassmann::mask_of(indices)?;
        let f = self.comps.get(&mask)?;
        Some(if sign == 1 { f.clone() } else { -f })
    }

    /// Smallest cap among the components, if any.
    pub fn min_cap(&self) -> Option<i32> {
        self.comps.values().map(|f| f.cap()).min()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: self.degree as i64,
                found: other.degree as i64,
            });
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut comps = self.comps.clone();
        for (m, f) in &other.comps {
            accumulate(&mut comps, *m, f.clone());
        }
        Ok(Self {
            dim: self.dim,
            degree,
            comps,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = Self::zero(self.dim, self.degree);
        for (m, f) in &self.comps {
            accumulate(&mut p.comps, *m, f.scale(c));
        }
        p
    }

    /// Multiplies every component by a function.
    pub fn mul_function(&self, g: &TruncatedSeries) -> Self {
        let mut p = Self::zero(self.dim, self.degree);
        for (m, f) in &self.comps {
            accumulate(&mut p.comps, *m, f * g);
        }
        p
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Coefficient-wise `∂/∂t_axis`.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        let mut p = Self::zero(self.dim, self.degree);
        for (m, f) in &self.comps {
            accumulate(&mut p.comps, *m, f.partial(axis)?);
        }
        Ok(p)
    }

    /// `A ∂⃖/∂θ_i`; the degree drops by one.
    fn right_theta(&self, i: usize) -> Self {
        let mut p = Self::zero(self.dim, self.degree - 1);
        for (m, f) in &self.comps {
            if let Some((m2, s)) = grassmann::right_derivative(i, *m) {
                accumulate(&mut p.comps, m2, f.scale(&int(s as i64)));
            }
        }
        p
    }

    /// `∂⃗/∂θ_i B`; the degree drops by one.
    fn left_theta(&self, i: usize) -> Self {
        let mut p = Self::zero(self.dim, self.degree - 1);
        for (m, f) in &self.comps {
            if let Some((m2, s)) = grassmann::left_derivative(i, *m) {
                accumulate(&mut p.comps, m2, f.scale(&int(s as i64)));
            }
        }
        p
    }

    /// Exterior product; shifted degree `|a| + |b| + 1`.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut p = Self::zero(self.dim, self.degree + other.degree + 1);
        for (ma, fa) in &self.comps {
            for (mb, fb) in &other.comps {
                if let Some((m, s)) = grassmann::merge(*ma, *mb) {
                    accumulate(&mut p.comps, m, (fa * fb).scale(&int(s as i64)));
                }
            }
        }
        Ok(p)
    }

    /// Schouten bracket; shifted degree `|a| + |b|`.
    pub fn schouten(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let degree = self.degree + other.degree;
        let mut out = Self::zero(self.dim, degree.max(-1));
        if degree < -1 {
            // two functions
            return Ok(Self::zero(self.dim, -1));
        }
        for i in 0..self.dim {
            if self.degree >= 0 {
                let a = self.right_theta(i);
                if !a.is_zero() {
                    let t = a.wedge(&other.partial(i)?)?;
                    out = out.checked_add(&t)?;
                }
            }
            if other.degree >= 0 {
                let b = other.left_theta(i);
                if !b.is_zero() {
                    let t = self.partial(i)?.wedge(&b)?;
                    out = out.checked_add(&t.neg())?;
                }
            }
        }
        out.degree = degree;
        Ok(out)
    }
}

/// Homogeneous differential form `Σ σ_K dt_K` of degree `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialForm {
    dim: usize,
    degree: usize,
    comps: BTreeMap<u32, TruncatedSeries>,
}

impl DifferentialForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self {
            dim,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// `f dt_{i_1} ∧ ... ∧ dt_{i_q}` for an arbitrary tuple.
    pub fn monomial(f: TruncatedSeries, indices: &[usize]) -> Result<Self> {
        let dim = f.dim();
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::AxisOutOfRange { axis: bad, dim });
        }
        let mut s = Self::zero(dim, indices.len());
        if let Some((mask, sign)) = grassmann::mask_of(indices) {
            accumulate(&mut s.comps, mask, f.scale(&int(sign as i64)));
        }
        Ok(s)
    }

    pub fn basis(dim: usize, cap: i32, indices: &[usize]) -> Result<Self> {
        Self::monomial(TruncatedSeries::one(dim, cap), indices)
    }

    /// `df = Σ ∂_i f dt_i`.
    pub fn exact(f: &TruncatedSeries) -> Self {
        let mut s = Self::zero(f.dim(), 1);
        for i in 0..f.dim() {
            accumulate(&mut s.comps, 1 << i, f.partial(i).expect("axis in range"));
        }
        s
    }

    pub(crate) fn from_mask_map(dim: usize, degree: usize, comps: BTreeMap<u32, TruncatedSeries>) -> Self {
        Self { dim, degree, comps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &TruncatedSeries)> {
        self.comps.iter().map(|(m, f)| (grassmann::indices(*m), f))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: self.degree as i64,
                found: other.degree as i64,
            });
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut comps = self.comps.clone();
        for (m, f) in &other.comps {
            accumulate(&mut comps, *m, f.clone());
        }
        Ok(Self {
            dim: self.dim,
            degree,
            comps,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = Self::zero(self.dim, self.degree);
        for (m, f) in &self.comps {
            accumulate(&mut s.comps, *m, f.scale(c));
        }
        s
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut s = Self::zero(self.dim, self.degree + other.degree);
        for (ma, fa) in &self.comps {
            for (mb, fb) in &other.comps {
                if let Some((m, sign)) = grassmann::merge(*ma, *mb) {
                    accumulate(&mut s.comps, m, (fa * fb).scale(&int(sign as i64)));
                }
            }
        }
        Ok(s)
    }
}

/// Determinant pairing `⟨σ_1 ∧ ... ∧ σ_n, l_1 ∧ ... ∧ l_n⟩ = det σ_i(l_j)`.
pub fn pairing(form: &DifferentialForm, field: &PolyVectorField) -> Result<TruncatedSeries> {
    check_dim(form.dim, field.dim)?;
    if form.degree as i64 != field.degree as i64 + 1 {
        return Err(Error::DegreeMismatch {
            expected: field.degree as i64 + 1,
            found: form.degree as i64,
        });
    }
    let cap = form
        .comps
        .values()
        .chain(field.comps.values())
        .map(|f| f.cap())
        .min()
        .unwrap_or(0);
    let mut acc = TruncatedSeries::zero(form.dim, cap);
    for (m, s) in &form.comps {
        if let Some(g) = field.comps.get(m) {
            acc = &acc + &(s * g);
        }
    }
    Ok(acc)
}

/// Contraction `τ ∧ γ` of a form into a poly-vector field:
/// `(τ_1 ∧ ... ∧ τ_m) ∧ L = τ_1 ∧ (τ_2 ∧ (... (τ_m ∧ L)))` with
/// `τ ∧ (l_1 ∧ ... ∧ l_n) = Σ (-1)^{i-1} τ(l_i) l_1 ∧ ..^.. ∧ l_n`.
pub fn contract(form: &DifferentialForm, field: &PolyVectorField) -> Result<PolyVectorField> {
    check_dim(form.dim, field.dim)?;
    if form.degree > field.factors() {
        return Err(Error::FormDegreeTooLarge {
            form: form.degree,
            factors: field.factors(),
        });
    }
    let degree = field.degree - form.degree as i32;
    let mut out = PolyVectorField::zero(field.dim, degree);
    for (mk, s) in &form.comps {
        let ks = grassmann::indices(*mk);
        for (mj, g) in &field.comps {
            let mut mask = *mj;
            let mut sign = 1;
            let mut alive = true;
            // innermost contraction uses the largest index
            for &k in ks.iter().rev() {
                match grassmann::left_derivative(k, mask) {
                    Some((m2, s2)) => {
                        mask = m2;
                        sign *= s2;
                    }
                    None => {
                        alive = false;
                        break;
                    }
                }
            }
            if alive {
                accumulate(&mut out.comps, mask, (s * g).scale(&int(sign as i64)));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldTermJson {
    /// 1-based axis labels, strictly increasing.
    pub tuple: Vec<usize>,
    pub coeff: TruncatedSeries,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyVectorJson {
    pub d: usize,
    pub degree: i32,
    pub terms: Vec<FieldTermJson>,
}

impl Serialize for PolyVectorField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyVectorJson {
            d: self.dim,
            degree: self.degree,
            terms: self
                .components()
                .map(|(idx, f)| FieldTermJson {
                    tuple: idx.iter().map(|i| i + 1).collect(),
                    coeff: f.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyVectorField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyVectorJson::deserialize(d)?;
        if j.degree < -1 {
            return Err(D::Error::custom("shifted degree below -1"));
        }
        let mut comps = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            if t.tuple.iter().any(|&i| i == 0 || i > j.d) {
                return Err(D::Error::custom(format!("axis label out of range in {:?}", t.tuple)));
            }
            if t.tuple.windows(2).any(|w| w[0] >= w[1]) {
                return Err(D::Error::custom(format!("tuple {:?} not strictly increasing", t.tuple)));
            }
            comps.push((t.tuple.iter().map(|i| i - 1).collect(), t.coeff));
        }
        PolyVectorField::from_components(j.d, j.degree, comps).map_err(D::Error::custom)
    }
}

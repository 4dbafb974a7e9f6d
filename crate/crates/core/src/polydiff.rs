//! Polydifferential operators on the formal disk.
//!
//! An operator of degree `n` has `n + 1` slots and is stored in the PBW basis
//! as a sum of `c(t) ∂^{α_0} ⊗ ... ⊗ ∂^{α_n}` with the coefficient on the
//! left. Degree `-1` operators have no slots and are just functions.
//!
//! The brace product
//!
//! `D1 • D2 = Σ_{i=0}^{|D1|} (-1)^{i|D2|} D1(.., D2(..) in slot i, ..)`
//!
//! is implemented twice: [`bullet`] distributes the slot derivative over the
//! inserted product by the multinomial Leibniz rule, while
//! [`bullet_coproduct`] first splits the slot derivative by the iterated
//! coproduct of `∂^α` and then multiplies slotwise in the algebra of
//! differential operators. The two share no code beyond the term container.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grassmann;
use crate::polyvector::PolyVectorField;
use crate::rational::{factorial, int, sign_pow, Rational};
use crate::series::{total_degree, Exponent, TruncatedSeries};

/// One tensor slot: a derivative multi-index of length `d`.
pub type Slot = Exponent;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyDiffOp {
    dim: usize,
    degree: i32,
    terms: BTreeMap<Vec<Slot>, TruncatedSeries>,
}

fn check_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

impl PolyDiffOp {
    pub fn zero(dim: usize, degree: i32) -> Self {
        assert!(degree >= -1, "degree must be >= -1");
        Self {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree `-1` operator holding the function `f`.
    pub fn function(f: TruncatedSeries) -> Self {
        let mut d = Self::zero(f.dim(), -1);
        d.add_term(Vec::new(), f);
        d
    }

    /// `c ∂^{slots[0]} ⊗ ... ⊗ ∂^{slots[n]}`.
    pub fn term(coeff: TruncatedSeries, slots: Vec<Slot>) -> Result<Self> {
        let dim = coeff.dim();
        if let Some(s) = slots.iter().find(|s| s.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: s.len(),
            });
        }
        let mut d = Self::zero(dim, slots.len() as i32 - 1);
        d.add_term(slots, coeff);
        Ok(d)
    }

    /// The multiplication `m = 1 ⊗ 1`.
    pub fn multiplication(dim: usize, cap: i32) -> Self {
        Self::term(TruncatedSeries::one(dim, cap), vec![vec![0; dim], vec![0; dim]])
            .expect("unit slots have the right length")
    }

    /// `∂_axis` as a one-slot operator.
    pub fn partial(dim: usize, cap: i32, axis: usize) -> Self {
        let mut e = vec![0; dim];
        e[axis] = 1;
        Self::term(TruncatedSeries::one(dim, cap), vec![e]).expect("slot length matches")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn arity(&self) -> usize {
        (self.degree + 1) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Slot>, &TruncatedSeries)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_term(&mut self, slots: Vec<Slot>, coeff: TruncatedSeries) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.remove(&slots) {
            Some(old) => {
                let sum = &old + &coeff;
                if !sum.is_zero() {
                    self.terms.insert(slots, sum);
                }
            }
            None => {
                self.terms.insert(slots, coeff);
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch {
                expected: self.degree as i64,
                found: other.degree as i64,
            });
        }
        let mut out = self.clone();
        if self.is_zero() {
            out.degree = other.degree;
        }
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (s, v) in &self.terms {
            out.add_term(s.clone(), v.scale(c));
        }
        out
    }

    pub fn mul_function(&self, g: &TruncatedSeries) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (s, v) in &self.terms {
            out.add_term(s.clone(), v * g);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn truncate(&self, cap: i32) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (s, v) in &self.terms {
            out.add_term(s.clone(), v.truncate(cap));
        }
        out
    }

    pub fn min_cap(&self) -> Option<i32> {
        self.terms.values().map(|c| c.cap()).min()
    }

    /// Equality of all coefficients both operands know: terms are compared
    /// after truncating to the smallest cap present on either side.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if self.is_zero() && other.is_zero() {
            return true;
        }
        let cap = match (self.min_cap(), other.min_cap()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return true,
        };
        let diff = self.truncate(cap).sub(&other.truncate(cap));
        matches!(diff, Ok(d) if d.is_zero())
    }

    /// `Σ c · Π_k ∂^{slot_k} args[k]`.
    pub fn apply(&self, args: &[TruncatedSeries]) -> Result<TruncatedSeries> {
        if args.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: args.len(),
            });
        }
        for a in args {
            check_dim(self.dim, a.dim())?;
        }
        let mut acc: Option<TruncatedSeries> = None;
        for (slots, c) in &self.terms {
            let mut prod = c.clone();
            for (alpha, f) in slots.iter().zip(args) {
                prod = &prod * &f.partial_multi(alpha)?;
            }
            acc = Some(match acc {
                Some(a) => &a + &prod,
                None => prod,
            });
        }
        let cap = args.iter().map(|a| a.cap()).min().unwrap_or(i32::MAX);
        Ok(acc.unwrap_or_else(|| TruncatedSeries::zero(self.dim, cap.min(crate::series::DEFAULT_CAP))))
    }
}

/// All ways of writing the multi-index `alpha` as an ordered sum of `parts`
/// multi-indices, with the multinomial weight `alpha! / Π parts!`.
fn multinomial_splits(alpha: &[u32], parts: usize) -> Vec<(Vec<Exponent>, BigInt)> {
    let dim = alpha.len();
    let mut out = vec![(vec![vec![0u32; dim]; parts], BigInt::one())];
    for axis in 0..dim {
        let k = alpha[axis];
        let mut next = Vec::new();
        for (split, w) in &out {
            for comp in compositions(k, parts) {
                let mut s = split.clone();
                let mut weight = w * factorial(k as usize);
                for (p, &c) in comp.iter().enumerate() {
                    s[p][axis] = c;
                    weight /= factorial(c as usize);
                }
                next.push((s, weight));
            }
        }
        out = next;
    }
    out
}

/// Ordered compositions of `k` into `parts` non-negative integers.
fn compositions(k: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in compositions(k - first, parts - 1) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn add_exp(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn binomial_multi(alpha: &[u32], beta: &[u32]) -> BigInt {
    alpha
        .iter()
        .zip(beta)
        .map(|(&a, &b)| crate::rational::binomial(a as usize, b as usize))
        .product()
}

/// Brace product via the multinomial Leibniz rule.
pub fn bullet(d1: &PolyDiffOp, d2: &PolyDiffOp) -> Result<PolyDiffOp> {
    check_dim(d1.dim, d2.dim)?;
    let degree = d1.degree + d2.degree;
    let mut out = PolyDiffOp::zero(d1.dim, degree.max(-1));
    if d1.degree < 0 {
        // no slot to insert into
        out.degree = degree.max(-1);
        return Ok(out);
    }
    let n2 = d2.arity();
    for i in 0..d1.arity() {
        let sign = sign_pow(i as i64 * d2.degree as i64);
        for (s1, c1) in &d1.terms {
            let alpha = &s1[i];
            for (s2, c2) in &d2.terms {
                // factor 0 is the coefficient of D2, factors 1..=n2 its arguments
                for (split, w) in multinomial_splits(alpha, n2 + 1) {
                    let coeff = c1 * &c2.partial_multi(&split[0])?;
                    let coeff = coeff.scale(&(Rational::from_integer(w) * &sign));
                    let mut slots = Vec::with_capacity(s1.len() + n2 - 1);
                    slots.extend(s1[..i].iter().cloned());
                    for k in 0..n2 {
                        slots.push(add_exp(&s2[k], &split[k + 1]));
                    }
                    slots.extend(s1[i + 1..].iter().cloned());
                    out.add_term(slots, coeff);
                }
            }
        }
    }
    Ok(out)
}

/// Brace product via the iterated coproduct `Δ^{|D2|}` of the slot
/// derivative followed by slotwise composition of differential operators,
/// with the coefficient of `D2` placed in its first slot.
pub fn bullet_coproduct(d1: &PolyDiffOp, d2: &PolyDiffOp) -> Result<PolyDiffOp> {
    check_dim(d1.dim, d2.dim)?;
    let degree = d1.degree + d2.degree;
    let mut out = PolyDiffOp::zero(d1.dim, degree.max(-1));
    if d1.degree < 0 {
        return Ok(out);
    }
    for i in 0..d1.arity() {
        let sign = sign_pow(i as i64 * d2.degree as i64);
        for (s1, c1) in &d1.terms {
            let alpha = &s1[i];
            for (s2, c2) in &d2.terms {
                if d2.degree < 0 {
                    // inserting a function: the slot derivative hits it directly
                    let coeff = (c1 * &c2.partial_multi(alpha)?).scale(&sign);
                    let mut slots = s1.clone();
                    slots.remove(i);
                    out.add_term(slots, coeff);
                    continue;
                }
                for pieces in coproduct(alpha, d2.arity()) {
                    // first slot: ∂^{pieces[0]} ∘ (c2 ∂^{s2[0]})
                    let head = &pieces[0];
                    for beta in sub_indices(head) {
                        let rest: Exponent = head.iter().zip(&beta).map(|(h, b)| h - b).collect();
                        let w = binomial_multi(head, &beta) * multinomial_weight(alpha, &pieces);
                        let coeff = (c1 * &c2.partial_multi(&beta)?)
                            .scale(&(Rational::from_integer(w) * &sign));
                        let mut slots = Vec::new();
                        slots.extend(s1[..i].iter().cloned());
                        slots.push(add_exp(&rest, &s2[0]));
                        for k in 1..d2.arity() {
                            slots.push(add_exp(&pieces[k], &s2[k]));
                        }
                        slots.extend(s1[i + 1..].iter().cloned());
                        out.add_term(slots, coeff);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Support of `Δ^{parts-1}(∂^α)`: all ordered splittings of `α` (weights
/// are supplied separately by [`multinomial_weight`]).
fn coproduct(alpha: &[u32], parts: usize) -> Vec<Vec<Exponent>> {
    let mut out: Vec<Vec<Exponent>> = vec![Vec::new()];
    for p in 0..parts {
        let mut next = Vec::new();
        for prefix in &out {
            let used: Exponent = (0..alpha.len())
                .map(|a| prefix.iter().map(|e: &Exponent| e[a]).sum())
                .collect();
            let remaining: Exponent = alpha.iter().zip(&used).map(|(a, u)| a - u).collect();
            if p + 1 == parts {
                let mut v = prefix.clone();
                v.push(remaining);
                next.push(v);
            } else {
                for piece in sub_indices(&remaining) {
                    let mut v = prefix.clone();
                    v.push(piece);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

fn multinomial_weight(alpha: &[u32], pieces: &[Exponent]) -> BigInt {
    let mut w = BigInt::one();
    for (axis, &a) in alpha.iter().enumerate() {
        w *= factorial(a as usize);
        for p in pieces {
            w /= factorial(p[axis] as usize);
        }
    }
    w
}

/// All multi-indices `β ≤ α` componentwise.
fn sub_indices(alpha: &[u32]) -> Vec<Exponent> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        let mut next = Vec::new();
        for prefix in &out {
            for b in 0..=a {
                let mut v: Exponent = prefix.clone();
                v.push(b);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// `[D1, D2]_G = D1 • D2 - (-1)^{|D1||D2|} D2 • D1`.
pub fn gerstenhaber_bracket(d1: &PolyDiffOp, d2: &PolyDiffOp) -> Result<PolyDiffOp> {
    let a = bullet(d1, d2)?;
    let b = bullet(d2, d1)?.scale(&sign_pow(d1.degree as i64 * d2.degree as i64));
    a.sub(&b)
}

/// Hochschild differential `d(D) = [m, D]_G`, with `m` at the cap of `D`.
pub fn hochschild_differential(d: &PolyDiffOp) -> Result<PolyDiffOp> {
    let cap = d.min_cap().unwrap_or(crate::series::DEFAULT_CAP);
    let m = PolyDiffOp::multiplication(d.dim, cap);
    let out = gerstenhaber_bracket(&m, d)?;
    Ok(PolyDiffOp {
        degree: d.degree + 1,
        ..out
    })
}

/// Cup product `D1 ∪ D2 = (-1)^{|D1||D2|} D1 ⊗ D2`.
pub fn cup(d1: &PolyDiffOp, d2: &PolyDiffOp) -> Result<PolyDiffOp> {
    check_dim(d1.dim, d2.dim)?;
    let sign = sign_pow(d1.degree as i64 * d2.degree as i64);
    let mut out = PolyDiffOp::zero(d1.dim, d1.degree + d2.degree + 1);
    for (s1, c1) in &d1.terms {
        for (s2, c2) in &d2.terms {
            let mut slots = s1.clone();
            slots.extend(s2.iter().cloned());
            out.add_term(slots, (c1 * c2).scale(&sign));
        }
    }
    Ok(out)
}

/// Signed HKR map: `∂_{i_1} ∧ ... ∧ ∂_{i_p}` goes to
/// `(-1)^{p(p-1)/2} (1/p!) Σ_{σ ∈ S_p} sgn(σ) ∂_{i_σ(1)} ⊗ ... ⊗ ∂_{i_σ(p)}`,
/// extended linearly over functions; a function maps to itself.
pub fn hkr(field: &PolyVectorField) -> PolyDiffOp {
    let dim = field.dim();
    let p = field.factors();
    let mut out = PolyDiffOp::zero(dim, field.degree());
    let prefactor = sign_pow((p * p.saturating_sub(1) / 2) as i64) / Rational::from_integer(factorial(p));
    let perms = permutations(p);
    for (idx, f) in field.components() {
        for perm in &perms {
            let sgn = grassmann::permutation_sign(perm);
            let slots: Vec<Slot> = perm
                .iter()
                .map(|&k| {
                    let mut e = vec![0; dim];
                    e[idx[k]] = 1;
                    e
                })
                .collect();
            out.add_term(slots, f.scale(&(&prefactor * int(sgn as i64))));
        }
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Highest total derivative order appearing in any slot.
pub fn max_order(d: &PolyDiffOp) -> u32 {
    d.terms
        .keys()
        .flat_map(|s| s.iter().map(|e| total_degree(e)))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpTermJson {
    pub coeff: TruncatedSeries,
    pub slots: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDiffJson {
    pub d: usize,
    pub degree: i32,
    pub terms: Vec<OpTermJson>,
}

impl Serialize for PolyDiffOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyDiffJson {
            d: self.dim,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(slots, c)| OpTermJson {
                    coeff: c.clone(),
                    slots: slots.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyDiffOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyDiffJson::deserialize(d)?;
        if j.degree < -1 {
            return Err(D::Error::custom("degree below -1"));
        }
        let mut out = PolyDiffOp::zero(j.d, j.degree);
        for t in j.terms {
            if t.slots.len() as i32 != j.degree + 1 {
                return Err(D::Error::custom("slot count does not match degree"));
            }
            if t.coeff.dim() != j.d || t.slots.iter().any(|s| s.len() != j.d) {
                return Err(D::Error::custom("dimension mismatch in term"));
            }
            out.add_term(t.slots, t.coeff);
        }
        Ok(out)
    }
}

impl Zero for PolyDiffOp {
    fn zero() -> Self {
        PolyDiffOp::zero(0, -1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for PolyDiffOp {
    type Output = PolyDiffOp;
    fn add(self, rhs: PolyDiffOp) -> PolyDiffOp {
        if self.terms.is_empty() && self.dim == 0 {
            return rhs;
        }
        if rhs.terms.is_empty() && rhs.dim == 0 {
            return self;
        }
        self.checked_add(&rhs).expect("operator sum mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    const CAP: i32 = 8;

    fn t(dim: usize, axis: usize) -> TruncatedSeries {
        TruncatedSeries::variable(dim, CAP, axis)
    }

    fn e(dim: usize, axis: usize, k: u32) -> Slot {
        let mut v = vec![0; dim];
        v[axis] = k;
        v
    }

    fn unit(dim: usize) -> Slot {
        vec![0; dim]
    }

    /// Evaluation of the brace product straight from its definition.
    fn bullet_by_insertion(d1: &PolyDiffOp, d2: &PolyDiffOp, args: &[TruncatedSeries]) -> TruncatedSeries {
        let n2 = d2.arity();
        let mut acc = TruncatedSeries::zero(d1.dim(), CAP);
        for i in 0..d1.arity() {
            let inner = d2.apply(&args[i..i + n2]).unwrap();
            let mut outer_args: Vec<TruncatedSeries> = args[..i].to_vec();
            outer_args.push(inner);
            outer_args.extend_from_slice(&args[i + n2..]);
            let v = d1.apply(&outer_args).unwrap();
            acc = &acc + &v.scale(&sign_pow(i as i64 * d2.degree() as i64));
        }
        acc
    }

    #[test]
    fn apply_examples() {
        let d = PolyDiffOp::term(TruncatedSeries::one(2, CAP), vec![e(2, 0, 1), e(2, 1, 1)]).unwrap();
        assert_eq!(d.apply(&[t(2, 0), t(2, 1)]).unwrap().constant_term(), int(1));
        let m = PolyDiffOp::multiplication(2, CAP);
        let (f, g) = (&t(2, 0) + &t(2, 1), &t(2, 1) * &t(2, 1));
        assert!(m.apply(&[f.clone(), g.clone()]).unwrap().agrees_with(&(&f * &g)));
        // (t2 ∂1^2 ⊗ 1)(t1^2, g) = 2 t2 g
        let d = PolyDiffOp::term(t(2, 1), vec![e(2, 0, 2), unit(2)]).unwrap();
        let got = d.apply(&[t(2, 0).pow(2), g.clone()]).unwrap();
        assert!(got.agrees_with(&(&t(2, 1) * &g).scale(&int(2))));
        assert!(matches!(d.apply(&[g]), Err(Error::ArityMismatch { expected: 2, found: 1 })));
    }

    #[test]
    fn multiplication_is_associative_in_the_brace_sense() {
        let m = PolyDiffOp::multiplication(2, CAP);
        assert!(bullet(&m, &m).unwrap().is_zero());
        assert!(gerstenhaber_bracket(&m, &m).unwrap().is_zero());
        assert!(hochschild_differential(&m).unwrap().is_zero());
    }

    #[test]
    fn bullet_with_function_inserts_everywhere() {
        let d = PolyDiffOp::term(TruncatedSeries::one(2, CAP), vec![e(2, 0, 1), e(2, 1, 1)]).unwrap();
        let f = PolyDiffOp::function(&t(2, 0) * &t(2, 1));
        let got = bullet(&d, &f).unwrap();
        assert_eq!(got.degree(), 0);
        // slot 0: ∂1(t1 t2) ⊗ ∂2 = t2 ∂2 ; slot 1 (sign -1): ∂1 ⊗ ∂2(t1 t2) = t1 ∂1
        let want = PolyDiffOp::term(t(2, 1), vec![e(2, 1, 1)])
            .unwrap()
            .sub(&PolyDiffOp::term(t(2, 0), vec![e(2, 0, 1)]).unwrap())
            .unwrap();
        assert!(got.agrees_with(&want));
        assert!(got.agrees_with(&bullet_coproduct(&d, &f).unwrap()));
    }

    #[test]
    fn bullet_routes_and_insertion_agree() {
        let d1 = PolyDiffOp::term(t(2, 1), vec![e(2, 0, 1), unit(2)]).unwrap();
        let m = PolyDiffOp::multiplication(2, CAP);
        let a = bullet(&d1, &m).unwrap();
        let b = bullet_coproduct(&d1, &m).unwrap();
        assert!(a.agrees_with(&b));
        let args = [&t(2, 0) + &t(2, 1).pow(2), t(2, 0).pow(2), &t(2, 1) + &TruncatedSeries::one(2, CAP)];
        assert!(a.apply(&args).unwrap().agrees_with(&bullet_by_insertion(&d1, &m, &args)));
        // second-order slot with a coefficient that gets differentiated
        let d2 = PolyDiffOp::term(t(2, 0).pow(2), vec![e(2, 0, 1), e(2, 1, 1)]).unwrap();
        let d1 = PolyDiffOp::term(TruncatedSeries::one(2, CAP), vec![vec![2, 1], e(2, 0, 1)]).unwrap();
        assert!(bullet(&d1, &d2).unwrap().agrees_with(&bullet_coproduct(&d1, &d2).unwrap()));
        let args = [t(2, 0).pow(3), &t(2, 1).pow(2) * &t(2, 0), t(2, 1).pow(3)];
        assert!(bullet(&d1, &d2)
            .unwrap()
            .apply(&args)
            .unwrap()
            .agrees_with(&bullet_by_insertion(&d1, &d2, &args)));
    }

    #[test]
    fn bracket_examples() {
        let p1 = PolyDiffOp::partial(2, CAP, 0);
        let p2 = PolyDiffOp::partial(2, CAP, 1);
        assert!(gerstenhaber_bracket(&p1, &p2).unwrap().is_zero());
        let d = PolyDiffOp::term(t(2, 1), vec![e(2, 0, 1), unit(2)]).unwrap();
        let twice = bullet(&d, &d).unwrap().scale(&int(2));
        assert!(gerstenhaber_bracket(&d, &d).unwrap().agrees_with(&twice));
    }

    #[test]
    fn derivations_are_cocycles() {
        let x = PolyDiffOp::term(&t(3, 1) * &t(3, 2), vec![e(3, 0, 1)]).unwrap();
        assert!(hochschild_differential(&x).unwrap().is_zero());
        assert!(hochschild_differential(&PolyDiffOp::partial(2, CAP, 0)).unwrap().is_zero());
    }

    /// Hochschild coboundary by face maps, `(δD)(f_0..f_n)`.
    fn face_coboundary(d: &PolyDiffOp, args: &[TruncatedSeries]) -> TruncatedSeries {
        let n = args.len() - 1;
        let mut acc = &args[0] * &d.apply(&args[1..]).unwrap();
        for i in 0..n {
            let mut merged: Vec<TruncatedSeries> = args[..i].to_vec();
            merged.push(&args[i] * &args[i + 1]);
            merged.extend_from_slice(&args[i + 2..]);
            acc = &acc + &d.apply(&merged).unwrap().scale(&sign_pow(i as i64 + 1));
        }
        let last = &d.apply(&args[..n]).unwrap() * &args[n];
        &acc + &last.scale(&sign_pow(n as i64 + 1))
    }

    #[test]
    fn differential_matches_face_maps() {
        let d = PolyDiffOp::term(TruncatedSeries::one(2, CAP), vec![unit(2), e(2, 0, 1)]).unwrap();
        let dd = hochschild_differential(&d).unwrap();
        assert_eq!(dd.degree(), 2);
        let expect_op = PolyDiffOp::term(TruncatedSeries::one(2, CAP), vec![unit(2), unit(2), e(2, 0, 1)])
            .unwrap()
            .neg();
        assert!(dd.agrees_with(&expect_op));
        let ops = [
            d,
            PolyDiffOp::term(t(2, 1), vec![e(2, 0, 2), e(2, 1, 1)]).unwrap(),
            PolyDiffOp::term(&t(2, 0) * &t(2, 1), vec![vec![1, 1]]).unwrap(),
        ];
        let pool = [t(2, 1), t(2, 0).pow(2), &t(2, 0) + &t(2, 1), t(2, 0).pow(3), &t(2, 0) * &t(2, 1).pow(2)];
        for op in &ops {
            let dd = hochschild_differential(op).unwrap();
            let args = &pool[..op.arity() + 1];
            let want = face_coboundary(op, args).scale(&sign_pow(op.degree() as i64));
            assert!(dd.apply(args).unwrap().agrees_with(&want));
            assert!(hochschild_differential(&dd).unwrap().is_zero());
        }
    }

    #[test]
    fn cup_signs() {
        let m = PolyDiffOp::multiplication(2, CAP);
        let mm = cup(&m, &m).unwrap();
        let want = PolyDiffOp::term(TruncatedSeries::one(2, CAP), vec![unit(2); 4]).unwrap().neg();
        assert_eq!(mm, want);
        let (f, g) = (t(2, 0), t(2, 1));
        let fg = cup(&PolyDiffOp::function(f.clone()), &PolyDiffOp::function(g.clone())).unwrap();
        assert_eq!(fg, PolyDiffOp::function(&f * &g).neg());
        let p12 = cup(&PolyDiffOp::partial(2, CAP, 0), &PolyDiffOp::partial(2, CAP, 1)).unwrap();
        assert_eq!(
            p12,
            PolyDiffOp::term(TruncatedSeries::one(2, CAP), vec![e(2, 0, 1), e(2, 1, 1)]).unwrap()
        );
    }

    #[test]
    fn hkr_examples() {
        let one = TruncatedSeries::one(2, CAP);
        let v = PolyVectorField::basis(2, CAP, &[0]).unwrap();
        assert_eq!(hkr(&v), PolyDiffOp::partial(2, CAP, 0));
        let bi = PolyVectorField::basis(2, CAP, &[0, 1]).unwrap();
        let got = hkr(&bi);
        let a = PolyDiffOp::term(one.clone(), vec![e(2, 0, 1), e(2, 1, 1)]).unwrap();
        let b = PolyDiffOp::term(one, vec![e(2, 1, 1), e(2, 0, 1)]).unwrap();
        let want = a.sub(&b).unwrap().scale(&rat(-1, 2));
        assert_eq!(got, want);
        assert!(hochschild_differential(&got).unwrap().is_zero());
        let f = PolyVectorField::function(t(2, 0));
        assert_eq!(hkr(&f), PolyDiffOp::function(t(2, 0)));
    }

    #[test]
    fn json_roundtrip() {
        let d = PolyDiffOp::term(t(2, 1).scale(&rat(2, 3)), vec![e(2, 0, 2), unit(2)]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"slots\":[[2,0],[0,0]]"));
        let back: PolyDiffOp = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}

//! L∞ structures through Taylor coefficients, Maurer-Cartan elements and twisting.
//!
//! A DG-Lie algebra `(g, d, [,])` is the L∞ structure with `Q_1 = -d` and
//! `Q_2(a, b) = (-1)^{|a|} [a, b]`, all higher coefficients vanishing. The
//! concrete algebras are graded Lie algebras tensored with an exterior
//! algebra `∧(η_1..η_s)` of degree-one generators, which makes every sum
//! over powers of a Maurer-Cartan element finite.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::grassmann;
use crate::polydiff::{gerstenhaber_bracket, hochschild_differential, PolyDiffOp};
use crate::polyvector::PolyVectorField;
use crate::rational::{factorial, int, sign_pow, Rational};

/// An L∞ algebra given by its Taylor coefficients `Q_i`.
pub trait LInftyAlgebra {
    type Elem: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, a: &Self::Elem, c: &Rational) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Total degree of a homogeneous element; `None` for mixed or zero elements.
    fn degree(&self, a: &Self::Elem) -> Option<i32>;
    /// Largest `i` with `Q_i` possibly nonzero.
    fn max_arity(&self) -> usize;
    /// `Q_i(a_1, ..., a_i)` with `i = args.len()`.
    fn taylor(&self, args: &[Self::Elem]) -> Result<Self::Elem>;
}

/// An L∞ morphism given by its Taylor coefficients `ψ_i`.
pub trait LInftyMorphism<S: LInftyAlgebra, T: LInftyAlgebra> {
    fn max_arity(&self) -> usize;
    fn taylor(&self, source: &S, target: &T, args: &[S::Elem]) -> Result<T::Elem>;
}

fn check_degree_one<L: LInftyAlgebra>(g: &L, omega: &L::Elem) -> Result<()> {
    match g.degree(omega) {
        Some(1) => Ok(()),
        None if g.is_zero(omega) => Ok(()),
        other => Err(Error::WrongDegree(format!("Maurer-Cartan input must have degree 1, found {other:?}"))),
    }
}

/// `ω^j` followed by `args`.
fn with_powers<E: Clone>(omega: &E, j: usize, args: &[E]) -> Vec<E> {
    let mut v = vec![omega.clone(); j];
    v.extend_from_slice(args);
    v
}

/// `Σ_{i ≥ 1} (1/i!) Q_i(ω^i)`.
pub fn mc_residual<L: LInftyAlgebra>(g: &L, omega: &L::Elem) -> Result<L::Elem> {
    check_degree_one(g, omega)?;
    let mut acc = g.zero();
    for i in 1..=g.max_arity() {
        let q = g.taylor(&with_powers(omega, i, &[]))?;
        acc = g.add(&acc, &g.scale(&q, &Rational::new(One::one(), factorial(i))))?;
    }
    Ok(acc)
}

/// The structure twisted by a Maurer-Cartan element:
/// `Q_{ω,i}(γ) = Σ_{j ≥ 0} (1/j!) Q_{i+j}(ω^j γ)`.
#[derive(Clone, Debug)]
pub struct Twisted<L: LInftyAlgebra> {
    inner: L,
    omega: L::Elem,
}

impl<L: LInftyAlgebra> Twisted<L> {
    pub fn inner(&self) -> &L {
        &self.inner
    }

    pub fn omega(&self) -> &L::Elem {
        &self.omega
    }
}

/// Twists `g` by `ω`, rejecting elements with nonzero Maurer-Cartan residual.
pub fn twist_structure<L: LInftyAlgebra>(g: L, omega: L::Elem) -> Result<Twisted<L>> {
    if !g.is_zero(&mc_residual(&g, &omega)?) {
        return Err(Error::NotMaurerCartan);
    }
    Ok(Twisted { inner: g, omega })
}

impl<L: LInftyAlgebra> LInftyAlgebra for Twisted<L> {
    type Elem = L::Elem;

    fn zero(&self) -> Self::Elem {
        self.inner.zero()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.inner.add(a, b)
    }
    fn scale(&self, a: &Self::Elem, c: &Rational) -> Self::Elem {
        self.inner.scale(a, c)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.inner.is_zero(a)
    }
    fn degree(&self, a: &Self::Elem) -> Option<i32> {
        self.inner.degree(a)
    }
    fn max_arity(&self) -> usize {
        self.inner.max_arity()
    }
    fn taylor(&self, args: &[Self::Elem]) -> Result<Self::Elem> {
        let i = args.len();
        let mut acc = self.inner.zero();
        for j in 0..=self.inner.max_arity().saturating_sub(i) {
            if i + j == 0 {
                continue;
            }
            let q = self.inner.taylor(&with_powers(&self.omega, j, args))?;
            acc = self.inner.add(&acc, &self.inner.scale(&q, &Rational::new(One::one(), factorial(j))))?;
        }
        Ok(acc)
    }
}

/// The twisted morphism `ψ_{ω,i}(γ) = Σ_{j ≥ 0} (1/j!) ψ_{i+j}(ω^j γ)`.
pub struct TwistedMorphism<'a, M> {
    psi: &'a M,
    omega_len: usize,
}

/// Twists `ψ` by `ω` and returns the pushforward `ω' = Σ_{j ≥ 1} (1/j!) ψ_j(ω^j)`.
pub fn twist_morphism<'a, S, T, M>(
    psi: &'a M,
    source: &S,
    target: &T,
    omega: &S::Elem,
) -> Result<(TwistedMorphism<'a, M>, T::Elem)>
where
    S: LInftyAlgebra,
    T: LInftyAlgebra,
    M: LInftyMorphism<S, T>,
{
    check_degree_one(source, omega)?;
    let mut pushed = target.zero();
    for j in 1..=psi.max_arity() {
        let v = psi.taylor(source, target, &with_powers(omega, j, &[]))?;
        pushed = target.add(&pushed, &target.scale(&v, &Rational::new(One::one(), factorial(j))))?;
    }
    Ok((
        TwistedMorphism {
            psi,
            omega_len: psi.max_arity(),
        },
        pushed,
    ))
}

impl<M> TwistedMorphism<'_, M> {
    /// `ψ_{ω,i}(args)` with `i = args.len()`.
    pub fn taylor<S, T>(&self, source: &S, target: &T, omega: &S::Elem, args: &[S::Elem]) -> Result<T::Elem>
    where
        S: LInftyAlgebra,
        T: LInftyAlgebra,
        M: LInftyMorphism<S, T>,
    {
        let i = args.len();
        let mut acc = target.zero();
        for j in 0..=self.omega_len.saturating_sub(i) {
            if i + j == 0 {
                continue;
            }
            let v = self.psi.taylor(source, target, &with_powers(omega, j, args))?;
            acc = target.add(&acc, &target.scale(&v, &Rational::new(One::one(), factorial(j))))?;
        }
        Ok(acc)
    }
}

/// A graded Lie algebra with differential, on homogeneous elements.
pub trait DgLieBase: Clone {
    type Elem: Clone + Debug + PartialEq;

    fn zero(&self, degree: i32) -> Self::Elem;
    fn degree(&self, x: &Self::Elem) -> i32;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, x: &Self::Elem, c: &Rational) -> Self::Elem;
    fn differential(&self, x: &Self::Elem) -> Result<Self::Elem>;
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem>;
}

/// Element of `g ⊗ ∧(η)`: a sum of `η_A ⊗ x`, keyed by mask and degree of `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaElement<E> {
    terms: BTreeMap<(u32, i32), E>,
}

impl<E> Default for EtaElement<E> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<E> EtaElement<E> {
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, i32), &E)> {
        self.terms.iter()
    }

    pub fn get(&self, eta: u32, degree: i32) -> Option<&E> {
        self.terms.get(&(eta, degree))
    }
}

/// `g ⊗ ∧(η_1..η_s)` as a DG-Lie algebra, hence as an L∞ algebra.
///
/// `d(η_A x) = (-1)^{|A|} η_A dx` and
/// `[η_A x, η_B y] = (-1)^{|x||B|} η_A η_B [x, y]`.
#[derive(Clone, Debug)]
pub struct EtaDgLie<B> {
    base: B,
    generators: usize,
}

impl<B: DgLieBase> EtaDgLie<B> {
    pub fn new(base: B, generators: usize) -> Result<Self> {
        if generators > 32 {
            return Err(Error::WrongDegree("at most 32 η generators".into()));
        }
        Ok(Self { base, generators })
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// `c · η_{i_1} ⋯ η_{i_k} ⊗ x` for 0-based generator indices.
    pub fn element(&self, eta: &[usize], x: B::Elem) -> Result<EtaElement<B::Elem>> {
        if eta.iter().any(|&i| i >= self.generators) {
            return Err(Error::WrongDegree(format!("η index out of range for {} generators", self.generators)));
        }
        let mut out = EtaElement::default();
        if let Some((mask, sign)) = grassmann::mask_of(eta) {
            self.push(&mut out, mask, self.base.scale(&x, &int(sign as i64)))?;
        }
        Ok(out)
    }

    fn push(&self, out: &mut EtaElement<B::Elem>, eta: u32, x: B::Elem) -> Result<()> {
        if self.base.is_zero(&x) {
            return Ok(());
        }
        let key = (eta, self.base.degree(&x));
        let sum = match out.terms.remove(&key) {
            Some(old) => self.base.add(&old, &x)?,
            None => x,
        };
        if !self.base.is_zero(&sum) {
            out.terms.insert(key, sum);
        }
        Ok(())
    }

    /// `d` extended over the η coefficients.
    pub fn differential(&self, a: &EtaElement<B::Elem>) -> Result<EtaElement<B::Elem>> {
        let mut out = EtaElement::default();
        for (&(eta, _), x) in &a.terms {
            let dx = self.base.differential(x)?;
            self.push(&mut out, eta, self.base.scale(&dx, &sign_pow(eta.count_ones() as i64)))?;
        }
        Ok(out)
    }

    /// Bracket extended over the η coefficients.
    pub fn bracket(&self, a: &EtaElement<B::Elem>, b: &EtaElement<B::Elem>) -> Result<EtaElement<B::Elem>> {
        let mut out = EtaElement::default();
        for (&(ea, dx), x) in &a.terms {
            for (&(eb, _), y) in &b.terms {
                let Some((mask, s)) = grassmann::merge(ea, eb) else { continue };
                let sign = sign_pow((dx.rem_euclid(2) as u32 * eb.count_ones()) as i64) * int(s as i64);
                let xy = self.base.bracket(x, y)?;
                self.push(&mut out, mask, self.base.scale(&xy, &sign))?;
            }
        }
        Ok(out)
    }

    /// `d_ω = d + [ω, -]`.
    pub fn twisted_differential(&self, omega: &EtaElement<B::Elem>, a: &EtaElement<B::Elem>) -> Result<EtaElement<B::Elem>> {
        LInftyAlgebra::add(self, &self.differential(a)?, &self.bracket(omega, a)?)
    }

    fn homogeneous_parts(&self, a: &EtaElement<B::Elem>) -> BTreeMap<i32, EtaElement<B::Elem>> {
        let mut out: BTreeMap<i32, EtaElement<B::Elem>> = BTreeMap::new();
        for (&(eta, deg), x) in &a.terms {
            out.entry(eta.count_ones() as i32 + deg).or_default().terms.insert((eta, deg), x.clone());
        }
        out
    }
}

impl<B: DgLieBase> LInftyAlgebra for EtaDgLie<B> {
    type Elem = EtaElement<B::Elem>;

    fn zero(&self) -> Self::Elem {
        EtaElement::default()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        let mut out = a.clone();
        for (&(eta, _), x) in &b.terms {
            self.push(&mut out, eta, x.clone())?;
        }
        Ok(out)
    }
    fn scale(&self, a: &Self::Elem, c: &Rational) -> Self::Elem {
        let mut out = EtaElement::default();
        if c.is_zero() {
            return out;
        }
        for (&k, x) in &a.terms {
            out.terms.insert(k, self.base.scale(x, c));
        }
        out
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }
    fn degree(&self, a: &Self::Elem) -> Option<i32> {
        let parts = self.homogeneous_parts(a);
        match parts.len() {
            1 => parts.keys().next().copied(),
            _ => None,
        }
    }
    fn max_arity(&self) -> usize {
        2
    }
    fn taylor(&self, args: &[Self::Elem]) -> Result<Self::Elem> {
        match args {
            [a] => Ok(self.scale(&self.differential(a)?, &-Rational::one())),
            [a, b] => {
                let mut acc = self.zero();
                for (deg, part) in self.homogeneous_parts(a) {
                    let br = self.bracket(&part, b)?;
                    acc = LInftyAlgebra::add(self, &acc, &self.scale(&br, &sign_pow(deg as i64)))?;
                }
                Ok(acc)
            }
            _ => Ok(self.zero()),
        }
    }
}

/// Poly-vector fields with the Schouten bracket and zero differential.
#[derive(Clone, Debug)]
pub struct PolyVectorLie {
    pub dim: usize,
}

impl DgLieBase for PolyVectorLie {
    type Elem = PolyVectorField;

    fn zero(&self, degree: i32) -> Self::Elem {
        PolyVectorField::zero(self.dim, degree)
    }
    fn degree(&self, x: &Self::Elem) -> i32 {
        x.degree()
    }
    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        x.checked_add(y)
    }
    fn scale(&self, x: &Self::Elem, c: &Rational) -> Self::Elem {
        x.scale(c)
    }
    fn differential(&self, x: &Self::Elem) -> Result<Self::Elem> {
        Ok(PolyVectorField::zero(self.dim, x.degree() + 1))
    }
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        x.schouten(y)
    }
}

/// Polydifferential operators with the Hochschild differential and the
/// Gerstenhaber bracket.
#[derive(Clone, Debug)]
pub struct PolyDiffLie {
    pub dim: usize,
}

impl DgLieBase for PolyDiffLie {
    type Elem = PolyDiffOp;

    fn zero(&self, degree: i32) -> Self::Elem {
        PolyDiffOp::zero(self.dim, degree)
    }
    fn degree(&self, x: &Self::Elem) -> i32 {
        x.degree()
    }
    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.is_zero()
    }
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        x.checked_add(y)
    }
    fn scale(&self, x: &Self::Elem, c: &Rational) -> Self::Elem {
        x.scale(c)
    }
    fn differential(&self, x: &Self::Elem) -> Result<Self::Elem> {
        hochschild_differential(x)
    }
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        gerstenhaber_bracket(x, y)
    }
}

/// A finite-dimensional DG-Lie algebra with homogeneous basis vectors,
/// structure constants and a differential matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteDgLie {
    degrees: Vec<i32>,
    /// `d e_i = Σ_k d[i][k] e_k`.
    differential: Vec<Vec<Rational>>,
    /// `[e_i, e_j] = Σ_k brackets[(i, j)][k] e_k`, stored for `i ≤ j` or both orders.
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
}

/// Vector of a [`FiniteDgLie`] of a single degree.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteVector {
    degree: i32,
    coords: Vec<Rational>,
}

impl FiniteVector {
    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }
}

impl FiniteDgLie {
    /// Builds the algebra; brackets given on pairs `(i, j)` are extended by
    /// graded antisymmetry. Degrees of the differential and bracket are checked.
    pub fn new(
        degrees: Vec<i32>,
        differential: Vec<(usize, usize, Rational)>,
        brackets: Vec<(usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let n = degrees.len();
        let mut d = vec![vec![Rational::zero(); n]; n];
        for (i, k, c) in differential {
            if degrees[k] != degrees[i] + 1 {
                return Err(Error::DegreeMismatch {
                    expected: (degrees[i] + 1) as i64,
                    found: degrees[k] as i64,
                });
            }
            d[i][k] += c;
        }
        let mut table: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for (i, j, k, c) in brackets {
            if degrees[k] != degrees[i] + degrees[j] {
                return Err(Error::DegreeMismatch {
                    expected: (degrees[i] + degrees[j]) as i64,
                    found: degrees[k] as i64,
                });
            }
            let swap = -sign_pow((degrees[i] * degrees[j]) as i64);
            table.entry((i, j)).or_insert_with(|| vec![Rational::zero(); n])[k] += &c;
            if i != j {
                table.entry((j, i)).or_insert_with(|| vec![Rational::zero(); n])[k] += c * swap;
            }
        }
        Ok(Self {
            degrees,
            differential: d,
            brackets: table,
        })
    }

    pub fn basis(&self, i: usize) -> FiniteVector {
        let mut coords = vec![Rational::zero(); self.degrees.len()];
        coords[i] = Rational::one();
        FiniteVector {
            degree: self.degrees[i],
            coords,
        }
    }

    fn vector(&self, degree: i32, coords: Vec<Rational>) -> FiniteVector {
        FiniteVector { degree, coords }
    }
}

impl DgLieBase for FiniteDgLie {
    type Elem = FiniteVector;

    fn zero(&self, degree: i32) -> Self::Elem {
        self.vector(degree, vec![Rational::zero(); self.degrees.len()])
    }
    fn degree(&self, x: &Self::Elem) -> i32 {
        x.degree
    }
    fn is_zero(&self, x: &Self::Elem) -> bool {
        x.coords.iter().all(Zero::is_zero)
    }
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        if x.degree != y.degree && !self.is_zero(x) && !self.is_zero(y) {
            return Err(Error::DegreeMismatch {
                expected: x.degree as i64,
                found: y.degree as i64,
            });
        }
        let degree = if self.is_zero(x) { y.degree } else { x.degree };
        Ok(self.vector(degree, x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect()))
    }
    fn scale(&self, x: &Self::Elem, c: &Rational) -> Self::Elem {
        self.vector(x.degree, x.coords.iter().map(|a| a * c).collect())
    }
    fn differential(&self, x: &Self::Elem) -> Result<Self::Elem> {
        let n = self.degrees.len();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for k in 0..n {
                out[k] += a * &self.differential[i][k];
            }
        }
        Ok(self.vector(x.degree + 1, out))
    }
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        let n = self.degrees.len();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in x.coords.iter().enumerate() {
            for (j, b) in y.coords.iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                if let Some(row) = self.brackets.get(&(i, j)) {
                    for k in 0..n {
                        out[k] += a * b * &row[k];
                    }
                }
            }
        }
        Ok(self.vector(x.degree + y.degree, out))
    }
}

/// A morphism between η-extended finite DG-Lie algebras given by a linear
/// part and a quadratic part on basis vectors, extended over η with the
/// Koszul rule for coefficients of degree zero on the shifted spaces:
/// `ψ_2(η_A x, η_B y) = (-1)^{|B|(|x|-1)} η_A η_B ψ_2(x, y)`.
#[derive(Clone, Debug)]
pub struct FiniteMorphism {
    /// `ψ_1(e_i) = Σ_k linear[i][k] f_k`.
    pub linear: Vec<Vec<Rational>>,
    /// `ψ_2(e_i, e_j) = Σ_k quadratic[(i, j)][k] f_k`.
    pub quadratic: BTreeMap<(usize, usize), Vec<Rational>>,
}

pub type FiniteEta = EtaDgLie<FiniteDgLie>;

impl LInftyMorphism<FiniteEta, FiniteEta> for FiniteMorphism {
    fn max_arity(&self) -> usize {
        if self.quadratic.is_empty() {
            1
        } else {
            2
        }
    }

    fn taylor(&self, _source: &FiniteEta, target: &FiniteEta, args: &[EtaElement<FiniteVector>]) -> Result<EtaElement<FiniteVector>> {
        let tdim = target.base().degrees.len();
        let mut out = EtaElement::default();
        match args {
            [a] => {
                for (&(eta, _), x) in &a.terms {
                    let mut coords = vec![Rational::zero(); tdim];
                    for (i, c) in x.coords.iter().enumerate() {
                        for k in 0..tdim {
                            coords[k] += c * &self.linear[i][k];
                        }
                    }
                    let degree = (0..tdim).find(|&k| !coords[k].is_zero()).map(|k| target.base().degrees[k]).unwrap_or(x.degree);
                    target.push(&mut out, eta, target.base().vector(degree, coords))?;
                }
            }
            [a, b] => {
                for (&(ea, dx), x) in &a.terms {
                    for (&(eb, _), y) in &b.terms {
                        let Some((mask, s)) = grassmann::merge(ea, eb) else { continue };
                        let sign = sign_pow(((dx - 1).rem_euclid(2) as u32 * eb.count_ones()) as i64) * int(s as i64);
                        let mut coords = vec![Rational::zero(); tdim];
                        for (i, ci) in x.coords.iter().enumerate() {
                            for (j, cj) in y.coords.iter().enumerate() {
                                if let Some(row) = self.quadratic.get(&(i, j)) {
                                    for k in 0..tdim {
                                        coords[k] += ci * cj * &row[k];
                                    }
                                }
                            }
                        }
                        let degree = (0..tdim).find(|&k| !coords[k].is_zero()).map(|k| target.base().degrees[k]).unwrap_or(0);
                        let v = target.base().vector(degree, coords.into_iter().map(|c| c * &sign).collect());
                        target.push(&mut out, mask, v)?;
                    }
                }
            }
            _ => {}
        }
        Ok(out)
    }
}

/// The toy pair used to exercise twisted morphisms.
///
/// Source: abelian `span{a, b}` in degree 0. Target: `span{u, v, c, w}` with
/// `u, v, w` in degree 0, `c` in degree -1, `dc = w` and `[u, v] = w`.
/// The morphism sends `a ↦ u`, `b ↦ v` and `ψ_2(a, b) = -ψ_2(b, a) = c`.
pub fn toy_morphism(generators: usize) -> Result<(FiniteEta, FiniteEta, FiniteMorphism)> {
    let source = EtaDgLie::new(FiniteDgLie::new(vec![0, 0], vec![], vec![])?, generators)?;
    let target = EtaDgLie::new(
        FiniteDgLie::new(vec![0, 0, -1, 0], vec![(2, 3, Rational::one())], vec![(0, 1, 3, Rational::one())])?,
        generators,
    )?;
    let unit = |k: usize| {
        let mut v = vec![Rational::zero(); 4];
        v[k] = Rational::one();
        v
    };
    let mut quadratic = BTreeMap::new();
    quadratic.insert((0, 1), unit(2));
    quadratic.insert((1, 0), unit(2).into_iter().map(|c| -c).collect());
    let psi = FiniteMorphism {
        linear: vec![unit(0), unit(1)],
        quadratic,
    };
    Ok((source, target, psi))
}

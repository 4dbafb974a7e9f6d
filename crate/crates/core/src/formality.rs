//! The twisted first Taylor coefficient of the formality morphism.
//!
//! Two independent computations of `Ũ_{ω,1}(γ)` for `ω = Σ_α η_α ω_α`:
//!
//! * [`twisted_first_taylor`] sums labelled graphs. Surviving graphs are
//!   found by brute-force enumeration, each operator `U_Γ` is built by
//!   Einstein summation over edge indices, and weights come from the exact
//!   wheel weights with the sign bookkeeping for graphs made of wheels.
//! * [`closed_form_map`] contracts `det(e^Θ) = exp(Tr Θ)` into `γ` and
//!   applies HKR, where `Θ = Σ_l (-1)^{l(l-1)/2} (1/l) W_l Ξ^l`.
//!
//! Coefficients live in `∧(η_1..η_s) ⊗ Ω(F)`, see [`EtaForm`].

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, AdmissibleGraph};
use crate::grassmann;
use crate::polydiff::{hkr, PolyDiffOp};
use crate::polyvector::{contract, DifferentialForm, PolyVectorField};
use crate::rational::{factorial, int, sign_pow, Rational};
use crate::series::{MatrixEntry, SeriesMatrix, TruncatedSeries, UnivariateSeries, DEFAULT_CAP};
use crate::weight::{sinh_half_quotient, wheel_weight_closed};

/// Element of `∧(η) ⊗ Ω(F)`: a sum of `c · η_A ⊗ dt_σ` with series `c`.
///
/// Products carry the Koszul sign `(η_A σ)(η_B τ) = (-1)^{|σ||B|} η_A η_B στ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaForm {
    dim: usize,
    cap: i32,
    terms: BTreeMap<(u32, u32), TruncatedSeries>,
}

impl EtaForm {
    pub fn zero(dim: usize, cap: i32) -> Self {
        Self {
            dim,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize, cap: i32) -> Self {
        Self::term(0, 0, TruncatedSeries::one(dim, cap))
    }

    /// `c · η_A ⊗ dt_σ` for masks `eta` and `form`.
    pub fn term(eta: u32, form: u32, c: TruncatedSeries) -> Self {
        let mut out = Self::zero(c.dim(), c.cap());
        out.add_term(eta, form, c);
        out
    }

    fn add_term(&mut self, eta: u32, form: u32, c: TruncatedSeries) {
        if c.is_zero() {
            return;
        }
        let key = (eta, form);
        let sum = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Termwise equality up to the smaller validity cap.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let zero = TruncatedSeries::zero(self.dim, self.cap.min(other.cap));
        let keys: std::collections::BTreeSet<(u32, u32)> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.into_iter()
            .all(|k| self.terms.get(&k).unwrap_or(&zero).agrees_with(other.terms.get(&k).unwrap_or(&zero)))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &TruncatedSeries)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.cap = self.cap.min(other.cap);
        for (&(a, s), c) in &other.terms {
            out.add_term(a, s, c.clone());
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut out = Self::zero(self.dim, self.cap);
        for (&(a, s), c) in &self.terms {
            out.add_term(a, s, c.scale(q));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.cap.min(other.cap));
        for (&(a, s), c1) in &self.terms {
            for (&(b, t), c2) in &other.terms {
                let (Some((ab, s1)), Some((st, s2))) = (grassmann::merge(a, b), grassmann::merge(s, t)) else {
                    continue;
                };
                let koszul = if (s.count_ones() * b.count_ones()) % 2 == 0 { 1 } else { -1 };
                out.add_term(ab, st, (c1 * c2).scale(&int((s1 * s2 * koszul) as i64)));
            }
        }
        out
    }

    /// `exp(x)` for `x` without a scalar part, where the series terminates.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if self.terms.contains_key(&(0, 0)) {
            return Err(Error::InvalidConstantTerm("exp needs a nilpotent argument"));
        }
        let mut acc = Self::one(self.dim, self.cap);
        let mut power = Self::one(self.dim, self.cap);
        let mut k = 0usize;
        loop {
            k += 1;
            power = power.mul(self).scale(&Rational::new(One::one(), k.into()));
            if power.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&power);
        }
    }

    /// Terms grouped by η mask and then by form degree.
    pub fn by_eta(&self) -> BTreeMap<(u32, usize), BTreeMap<u32, TruncatedSeries>> {
        let mut out: BTreeMap<(u32, usize), BTreeMap<u32, TruncatedSeries>> = BTreeMap::new();
        for (&(a, s), c) in &self.terms {
            out.entry((a, s.count_ones() as usize)).or_default().insert(s, c.clone());
        }
        out
    }
}

impl MatrixEntry for EtaForm {
    fn zero_like(&self) -> Self {
        EtaForm::zero(self.dim, self.cap)
    }
    fn add_entry(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn mul_entry(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn scale_entry(&self, c: &Rational) -> Self {
        self.scale(c)
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn is_even(&self) -> bool {
        self.terms.keys().all(|(a, s)| (a.count_ones() + s.count_ones()) % 2 == 0)
    }
}

/// Operator with coefficients in `∧(η)`: η mask to polydifferential operator.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EtaOp {
    terms: BTreeMap<u32, PolyDiffOp>,
}

impl EtaOp {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, eta: u32, op: PolyDiffOp) -> Result<()> {
        if op.is_zero() {
            return Ok(());
        }
        let sum = match self.terms.remove(&eta) {
            Some(old) => old.checked_add(&op)?,
            None => op,
        };
        if !sum.is_zero() {
            self.terms.insert(eta, sum);
        }
        Ok(())
    }

    pub fn get(&self, eta: u32) -> Option<&PolyDiffOp> {
        self.terms.get(&eta)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u32, &PolyDiffOp)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Equality of every η component on the coefficients both sides know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let keys: std::collections::BTreeSet<u32> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        keys.into_iter().all(|k| match (self.terms.get(&k), other.terms.get(&k)) {
            (Some(a), Some(b)) => a.agrees_with(b),
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct EtaOpTermJson {
    /// 1-based η generators.
    eta: Vec<usize>,
    op: PolyDiffOp,
}

impl Serialize for EtaOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<EtaOpTermJson> = self
            .terms
            .iter()
            .map(|(m, op)| EtaOpTermJson {
                eta: grassmann::indices(*m).into_iter().map(|i| i + 1).collect(),
                op: op.clone(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EtaOp {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<EtaOpTermJson>::deserialize(d)?;
        let mut out = EtaOp::new();
        for t in terms {
            if t.eta.iter().any(|&i| i == 0 || i > 32) {
                return Err(D::Error::custom("η index out of range"));
            }
            let idx: Vec<usize> = t.eta.iter().map(|i| i - 1).collect();
            let (mask, sign) = grassmann::mask_of(&idx).ok_or_else(|| D::Error::custom("repeated η index"))?;
            out.add_term(mask, t.op.scale(&int(sign as i64))).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}

/// `ω = Σ_α η_α ω_α` with vector fields `ω_α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MaurerCartanJson")]
pub struct MaurerCartanForm {
    #[serde(rename = "d")]
    dim: usize,
    fields: Vec<PolyVectorField>,
}

#[derive(Deserialize)]
struct MaurerCartanJson {
    d: usize,
    fields: Vec<PolyVectorField>,
}

impl TryFrom<MaurerCartanJson> for MaurerCartanForm {
    type Error = Error;

    fn try_from(j: MaurerCartanJson) -> Result<Self> {
        let form = Self::new(j.fields)?;
        if form.dim != j.d {
            return Err(Error::DimensionMismatch { left: j.d, right: form.dim });
        }
        Ok(form)
    }
}

impl MaurerCartanForm {
    pub fn new(fields: Vec<PolyVectorField>) -> Result<Self> {
        let dim = fields.first().map(|f| f.dim()).ok_or_else(|| Error::WrongDegree("no η generators".into()))?;
        for f in &fields {
            if f.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: f.dim() });
            }
            if f.degree() != 0 && !f.is_zero() {
                return Err(Error::WrongDegree(format!("ω_α must be a vector field, found degree {}", f.degree())));
            }
        }
        if fields.len() > 32 {
            return Err(Error::WrongDegree("at most 32 η generators".into()));
        }
        Ok(Self { dim, fields })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of η generators.
    pub fn generators(&self) -> usize {
        self.fields.len()
    }

    pub fn fields(&self) -> &[PolyVectorField] {
        &self.fields
    }

    /// Component `ω^i_α`.
    pub fn component(&self, alpha: usize, i: usize) -> TruncatedSeries {
        self.fields[alpha].component(&[i]).unwrap_or_else(|| TruncatedSeries::zero(self.dim, DEFAULT_CAP))
    }

    fn cap(&self) -> i32 {
        self.fields.iter().filter_map(|f| f.min_cap()).min().unwrap_or(DEFAULT_CAP)
    }
}

/// `Ξ_{ij} = Σ_α η_α d(∂_j ω^i_α)`.
pub fn xi_matrix(omega: &MaurerCartanForm) -> Result<SeriesMatrix<EtaForm>> {
    let d = omega.dim();
    let cap = omega.cap();
    let mut rows = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let mut entry = EtaForm::zero(d, cap);
            for alpha in 0..omega.generators() {
                let dj = omega.component(alpha, i).partial(j)?;
                for k in 0..d {
                    let c = dj.partial(k)?;
                    entry = entry.add(&EtaForm::term(1 << alpha, 1 << k, c));
                }
            }
            row.push(entry);
        }
        rows.push(row);
    }
    SeriesMatrix::from_rows(rows)
}

/// `Θ = Σ_{l=1}^{max_l} (-1)^{l(l-1)/2} (1/l) W_l Ξ^l` for any matrix entry type.
pub fn theta_series<T: MatrixEntry>(xi: &SeriesMatrix<T>, max_l: usize) -> Result<SeriesMatrix<T>> {
    let mut acc = xi.scale(&Rational::zero());
    for l in 1..=max_l {
        let w = wheel_weight_closed(l)?;
        if w.is_zero() {
            continue;
        }
        let c = sign_pow((l * (l - 1) / 2) as i64) * w / int(l as i64);
        acc = acc.add(&xi.power(l as u32)?.scale(&c))?;
    }
    Ok(acc)
}

/// `Θ` and `det(e^Θ) = exp(Tr Θ)`; the sum is cut at the η count `s`,
/// beyond which every power of `Ξ` vanishes.
pub fn theta_and_det(xi: &SeriesMatrix<EtaForm>, s: usize) -> Result<(SeriesMatrix<EtaForm>, EtaForm)> {
    let theta = theta_series(xi, s.max(1))?;
    let det = theta.trace().exp_nilpotent()?;
    Ok((theta, det))
}

/// `HKR(x ∧ γ)` for `x` in `∧(η) ⊗ Ω(F)`, extended η-linearly with η on the left.
pub fn hkr_contract(x: &EtaForm, gamma: &PolyVectorField) -> Result<EtaOp> {
    let mut out = EtaOp::new();
    for ((eta, deg), comps) in x.by_eta() {
        if deg > gamma.factors() {
            continue;
        }
        let form = DifferentialForm::from_mask_map(x.dim(), deg, comps);
        out.add_term(eta, hkr(&contract(&form, gamma)?))?;
    }
    Ok(out)
}

/// Closed form `HKR(det(e^Θ) ∧ γ)`.
pub fn closed_form_map(omega: &MaurerCartanForm, gamma: &PolyVectorField) -> Result<EtaOp> {
    let xi = xi_matrix(omega)?;
    let (_, det) = theta_and_det(&xi, omega.generators())?;
    hkr_contract(&det, gamma)
}

/// `U_Γ(γ_1 ⋯ γ_n)` as an `m`-slot operator: Einstein summation over axis
/// indices on edges, each aerial vertex contributing the component of its
/// field indexed by its outgoing edges (in edge order) differentiated by its
/// incoming edges, each ground vertex a slot differentiated by its incoming
/// edges. Zero unless every out-degree matches the number of wedge factors.
pub fn graph_operator(g: &AdmissibleGraph, gammas: &[PolyVectorField]) -> Result<PolyDiffOp> {
    if gammas.len() != g.n() {
        return Err(Error::ArityMismatch {
            expected: g.n(),
            found: gammas.len(),
        });
    }
    let dim = gammas.first().map(|x| x.dim()).unwrap_or(0);
    for x in gammas {
        if x.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: x.dim() });
        }
    }
    let mut out = PolyDiffOp::zero(dim, g.m() as i32 - 1);
    if (1..=g.n()).any(|v| g.out_degree(v) != gammas[v - 1].factors()) {
        return Ok(out);
    }
    let edges = g.edges();
    let mut assignment = vec![0usize; edges.len()];
    let mut picked: Vec<TruncatedSeries> = Vec::with_capacity(g.n());
    assign(g, gammas, 1, &mut assignment, &mut picked, &mut out)?;
    Ok(out)
}

/// Assigns indices to the outgoing edges of aerial vertex `v` and recurses.
fn assign(
    g: &AdmissibleGraph,
    gammas: &[PolyVectorField],
    v: usize,
    assignment: &mut Vec<usize>,
    picked: &mut Vec<TruncatedSeries>,
    out: &mut PolyDiffOp,
) -> Result<()> {
    let dim = gammas[0].dim();
    if v > g.n() {
        return finish(g, dim, assignment, picked, out);
    }
    let outs: Vec<usize> = (0..g.edges().len()).filter(|&e| g.edges()[e].0 == v).collect();
    let k = outs.len();
    let total = dim.pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let mut idx = Vec::with_capacity(k);
        for _ in 0..k {
            idx.push(c % dim);
            c /= dim;
        }
        idx.reverse();
        let Some(comp) = gammas[v - 1].component(&idx) else { continue };
        if comp.is_zero() {
            continue;
        }
        for (e, &i) in outs.iter().zip(&idx) {
            assignment[*e] = i;
        }
        picked.push(comp);
        assign(g, gammas, v + 1, assignment, picked, out)?;
        picked.pop();
    }
    Ok(())
}

fn finish(
    g: &AdmissibleGraph,
    dim: usize,
    assignment: &[usize],
    picked: &[TruncatedSeries],
    out: &mut PolyDiffOp,
) -> Result<()> {
    let incoming = |v: usize| -> Vec<u32> {
        let mut alpha = vec![0u32; dim];
        for (e, &(_, t)) in g.edges().iter().enumerate() {
            if t == v {
                alpha[assignment[e]] += 1;
            }
        }
        alpha
    };
    let mut coeff: Option<TruncatedSeries> = None;
    for v in 1..=g.n() {
        let f = picked[v - 1].partial_multi(&incoming(v))?;
        if f.is_zero() {
            return Ok(());
        }
        coeff = Some(match coeff {
            Some(c) => &c * &f,
            None => f,
        });
    }
    let Some(coeff) = coeff else { return Ok(()) };
    let slots = (g.n() + 1..=g.n() + g.m()).map(incoming).collect();
    let term = PolyDiffOp::term(coeff, slots)?;
    *out = out.checked_add(&term)?;
    Ok(())
}

/// `U_Γ(γ_1 ⋯ γ_n)(f_1, ..., f_m)`.
pub fn evaluate_graph(g: &AdmissibleGraph, gammas: &[PolyVectorField], fs: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    graph_operator(g, gammas)?.apply(fs)
}

/// `U_1(γ) = W_{Γ_0} U_{Γ_0}(γ)` with `W_{Γ_0} = (-1)^{m(m-1)/2}/m!`.
pub fn u_one(gamma: &PolyVectorField) -> Result<PolyDiffOp> {
    let m = gamma.factors();
    let op = graph_operator(&graph::gamma_zero(m), std::slice::from_ref(gamma))?;
    let w = sign_pow((m * m.saturating_sub(1) / 2) as i64) / Rational::from_integer(factorial(m));
    Ok(op.scale(&w))
}

/// Exact weight of a labelled graph made of wheels of sizes `cycles` around
/// a center with `m` further ground targets:
/// `(-1)^{Σ_{p<q} l_p l_q} (-1)^{(m+2j)(m+2j-1)/2} (-1)^j (1/m!) Π W_{l_i}`.
pub fn wheel_graph_weight(cycles: &[usize], m: usize) -> Result<Rational> {
    let j: usize = cycles.iter().sum();
    let mut cross = 0usize;
    for a in 0..cycles.len() {
        for b in a + 1..cycles.len() {
            cross += cycles[a] * cycles[b];
        }
    }
    let inner: usize = cycles.iter().map(|l| l * (l - 1) / 2).sum();
    assert_eq!(j * j.saturating_sub(1) / 2, cross + inner, "wheel sign identity");
    let total = m + 2 * j;
    assert_eq!(
        (total * total.saturating_sub(1) / 2) % 2,
        (m * m.saturating_sub(1) / 2 + j) % 2,
        "edge-count sign identity"
    );
    let mut w = sign_pow(cross as i64) * sign_pow((total * total.saturating_sub(1) / 2) as i64) * sign_pow(j as i64)
        / Rational::from_integer(factorial(m));
    for &l in cycles {
        w *= wheel_weight_closed(l)?;
    }
    Ok(w)
}

/// `Σ_{j ≤ j_max} (1/j!) Σ_Γ W_Γ Σ_α η_{α_j}⋯η_{α_1} U_Γ(ω_{α_1}⋯ω_{α_j} γ)`
/// over all labelled graphs that survive the vanishing lemmas.
pub fn twisted_first_taylor(omega: &MaurerCartanForm, gamma: &PolyVectorField, j_max: usize) -> Result<EtaOp> {
    let mut out = EtaOp::new();
    if gamma.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            left: omega.dim(),
            right: gamma.dim(),
        });
    }
    if gamma.degree() < 0 {
        out.add_term(0, u_one(gamma)?)?;
        return Ok(out);
    }
    let p = gamma.degree() as usize;
    let s = omega.generators();
    for j in 0..=j_max.min(s) {
        if j > p + 1 {
            break;
        }
        let m = p + 1 - j;
        let jfact = Rational::from_integer(factorial(j));
        for g in graph::wheel_setting_graphs(j, p)? {
            if graph::wheel_vanishing_detector(&g, j, j + 1).is_some() {
                continue;
            }
            let cycles = graph::omega_cycle_type(&g, j).ok_or_else(|| Error::InvalidGraph(format!("{g} is not a wheel graph")))?;
            let w = wheel_graph_weight(&cycles, m)? / &jfact;
            if w.is_zero() {
                continue;
            }
            for alphas in distinct_tuples(s, j) {
                let reversed: Vec<usize> = alphas.iter().rev().copied().collect();
                let (mask, sign) = grassmann::mask_of(&reversed).expect("distinct generators");
                let mut args: Vec<PolyVectorField> = alphas.iter().map(|&a| omega.fields()[a].clone()).collect();
                args.push(gamma.clone());
                let op = graph_operator(&g, &args)?;
                out.add_term(mask, op.scale(&(&w * int(sign as i64))))?;
            }
        }
    }
    Ok(out)
}

/// Ordered `j`-tuples of distinct elements of `0..s`.
fn distinct_tuples(s: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..j {
        let mut next = Vec::new();
        for t in &out {
            for a in 0..s {
                if !t.contains(&a) {
                    let mut v = t.clone();
                    v.push(a);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

/// Todd series `q(x) = x / (1 - e^{-x})` through degree `n`.
pub fn todd_series(n: usize) -> UnivariateSeries {
    let e = UnivariateSeries::exp_x(n + 1).rescale_var(&int(-1));
    let denom = (&UnivariateSeries::one(n + 1) - &e).div_x().expect("vanishes at 0");
    UnivariateSeries::one(n).div(&denom).expect("unit denominator")
}

/// Modified Todd series `q̃(x) = x / (e^{x/2} - e^{-x/2})` through degree `n`.
pub fn tilde_todd_series(n: usize) -> UnivariateSeries {
    UnivariateSeries::one(n).div(&sinh_half_quotient(n)).expect("unit denominator")
}

/// `Σ_k c_k M^k` for a scalar series `c` and a square matrix `M`.
pub fn matrix_series<T: MatrixEntry>(coeffs: &UnivariateSeries, m: &SeriesMatrix<T>, one: T) -> Result<SeriesMatrix<T>> {
    let id = m.identity_like(one);
    let mut acc = id.scale(&coeffs.coeff(0));
    let mut power = id;
    for k in 1..=coeffs.cap() {
        power = power.mul(m)?;
        let c = coeffs.coeff(k);
        if !c.is_zero() {
            acc = acc.add(&power.scale(&c))?;
        }
    }
    Ok(acc)
}

/// Matrix exponential `Σ_{k ≤ order} A^k / k!`.
pub fn matrix_exp<T: MatrixEntry>(a: &SeriesMatrix<T>, one: T, order: usize) -> Result<SeriesMatrix<T>> {
    matrix_series(&UnivariateSeries::exp_x(order), a, one)
}

/// Square root of `I + U` by the binomial series `Σ_k binom(1/2, k) U^k`.
pub fn matrix_sqrt_unipotent<T: MatrixEntry>(a: &SeriesMatrix<T>, one: T, order: usize) -> Result<SeriesMatrix<T>> {
    let id = a.identity_like(one.clone());
    let u = a.add(&id.scale(&-Rational::one()))?;
    let mut coeffs = Vec::with_capacity(order + 1);
    let half = Rational::new(1.into(), 2.into());
    let mut c = Rational::one();
    for k in 0..=order {
        coeffs.push(c.clone());
        c = c * (&half - int(k as i64)) / int(k as i64 + 1);
    }
    matrix_series(&UnivariateSeries::from_coeffs(order, coeffs), &u, one)
}

/// Both sides of `e^Θ = sqrt(q̃(M))` for `M = x·A` over a formal variable
/// `x` cut at `order`: the left side through the `W_l` series and the
/// matrix exponential, the right side through `q̃` and the binomial square root.
pub fn theta_identity_sides(
    a: &SeriesMatrix<Rational>,
    order: usize,
) -> Result<(SeriesMatrix<UnivariateSeries>, SeriesMatrix<UnivariateSeries>)> {
    let x = UnivariateSeries::x(order);
    let m = SeriesMatrix::from_fn(a.size(), |i, j| x.scale(a.get(i, j)));
    let one = UnivariateSeries::one(order);
    let lhs = matrix_exp(&theta_series(&m, order)?, one.clone(), order)?;
    let rhs = matrix_sqrt_unipotent(&matrix_series(&tilde_todd_series(order), &m, one.clone())?, one, order)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{classify_wheels, gamma_zero};
    use crate::rational::rat;
    use crate::weight::modified_bernoulli;

    const CAP: i32 = 8;

    fn t(d: usize, i: usize) -> TruncatedSeries {
        TruncatedSeries::variable(d, CAP, i)
    }

    fn field(comps: Vec<TruncatedSeries>) -> PolyVectorField {
        PolyVectorField::vector_field(comps).unwrap()
    }

    #[test]
    fn eta_form_signs() {
        let one = TruncatedSeries::one(2, CAP);
        let a = EtaForm::term(0b01, 0b01, one.clone());
        let b = EtaForm::term(0b10, 0b10, one.clone());
        // (η1 dt1)(η2 dt2) = (-1)^{1·1} η1η2 dt1dt2
        assert_eq!(a.mul(&b), EtaForm::term(0b11, 0b11, one.scale(&int(-1))));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert!(a.mul(&a).is_zero());
        assert!(a.is_even());
        assert!(!EtaForm::term(0b01, 0, one.clone()).is_even());
        let e = a.exp_nilpotent().unwrap();
        assert_eq!(e, EtaForm::one(2, CAP).add(&a));
        assert!(EtaForm::one(2, CAP).exp_nilpotent().is_err());
    }

    #[test]
    fn gamma_zero_is_the_pairing() {
        let gamma = PolyVectorField::monomial(t(2, 0), &[0, 1]).unwrap();
        let (f, g) = (t(2, 0).pow(2), &t(2, 0) * &t(2, 1));
        let got = evaluate_graph(&gamma_zero(2), std::slice::from_ref(&gamma), &[f.clone(), g.clone()]).unwrap();
        let df = DifferentialForm::exact(&f).wedge(&DifferentialForm::exact(&g)).unwrap();
        let want = crate::polyvector::pairing(&df, &gamma).unwrap();
        assert!(got.agrees_with(&want));
        // out-degree mismatch gives zero
        let v = PolyVectorField::basis(2, CAP, &[0]).unwrap();
        assert!(graph_operator(&gamma_zero(2), &[v]).unwrap().is_zero());
        assert!(matches!(graph_operator(&gamma_zero(2), &[]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn two_wheel_graph_by_hand() {
        // ω1 = t2² ∂1, ω2 = t1² ∂2, γ = ∂1∧∂2; vertices ω1, ω2, γ; no grounds.
        let w1 = field(vec![t(2, 1).pow(2), TruncatedSeries::zero(2, CAP)]);
        let w2 = field(vec![TruncatedSeries::zero(2, CAP), t(2, 0).pow(2)]);
        let gamma = PolyVectorField::basis(2, CAP, &[0, 1]).unwrap();
        let g = classify_wheels(2, 1).unwrap()[0].representative();
        let got = evaluate_graph(&g, &[w1, w2, gamma], &[]).unwrap();
        // edges 1→2 (a), 2→1 (b), 3→1 (e1), 3→2 (e2):
        // (∂_b ∂_{e1} ω1^a)(∂_a ∂_{e2} ω2^b) γ^{e1 e2}; only a = 1, b = 2 survive:
        // ∂2∂_{e1} t2² · ∂1∂_{e2} t1² γ^{e1e2} = 2·2·γ^{22} = 0 unless e1 = 2, e2 = 1: γ^{21} = -1
        assert_eq!(got.constant_term(), int(-4));
        assert_eq!(got.num_terms(), 1);
    }

    #[test]
    fn u_one_matches_hkr() {
        for d in 1..=3 {
            for mask in 0u32..(1 << d) {
                let idx = grassmann::indices(mask);
                let gamma = if idx.is_empty() {
                    PolyVectorField::function(&t(d, 0) + &TruncatedSeries::one(d, CAP))
                } else {
                    PolyVectorField::monomial(&t(d, d - 1) + &TruncatedSeries::one(d, CAP), &idx).unwrap()
                };
                assert_eq!(u_one(&gamma).unwrap(), hkr(&gamma), "d={d} {idx:?}");
            }
        }
    }

    #[test]
    fn theta_matches_bernoulli_form() {
        let w1 = field(vec![t(2, 1).pow(2), &t(2, 0) * &t(2, 1)]);
        let w2 = field(vec![t(2, 0).pow(2), t(2, 1).pow(3)]);
        let omega = MaurerCartanForm::new(vec![w1, w2]).unwrap();
        let xi = xi_matrix(&omega).unwrap();
        let (theta, det) = theta_and_det(&xi, 2).unwrap();
        // Θ = -Σ (-1)^l ŝ_l Ξ^l
        let mut alt = xi.scale(&Rational::zero());
        for l in 1..=2 {
            alt = alt.add(&xi.power(l).unwrap().scale(&(-sign_pow(l as i64) * modified_bernoulli(l as usize)))).unwrap();
        }
        assert_eq!(theta, alt);
        // det(e^Θ) = 1 - ŝ2 Tr(Ξ²) for two generators
        let tr2 = xi.trace_power(2).unwrap();
        let want = EtaForm::one(2, CAP).add(&tr2.scale(&-modified_bernoulli(2)));
        assert!(det.agrees_with(&want));
        assert!(!tr2.is_zero());
    }

    #[test]
    fn zero_twist_is_hkr() {
        let zero = field(vec![TruncatedSeries::zero(3, CAP); 3]);
        let omega = MaurerCartanForm::new(vec![zero.clone(), zero]).unwrap();
        let gamma = PolyVectorField::basis(3, CAP, &[0, 1, 2]).unwrap();
        let got = closed_form_map(&omega, &gamma).unwrap();
        let mut want = EtaOp::new();
        want.add_term(0, hkr(&gamma)).unwrap();
        assert!(got.agrees_with(&want));
        assert!(twisted_first_taylor(&omega, &gamma, 2).unwrap().agrees_with(&want));
    }

    #[test]
    fn j_one_contributes_nothing() {
        let w1 = field(vec![t(2, 1).pow(2), t(2, 0).pow(2)]);
        let omega = MaurerCartanForm::new(vec![w1]).unwrap();
        let gamma = PolyVectorField::basis(2, CAP, &[0, 1]).unwrap();
        let mut want = EtaOp::new();
        want.add_term(0, hkr(&gamma)).unwrap();
        assert!(twisted_first_taylor(&omega, &gamma, 1).unwrap().agrees_with(&want));
    }

    #[test]
    fn graph_side_equals_closed_form_quadratic() {
        let z = || TruncatedSeries::zero(2, CAP);
        let w1 = field(vec![t(2, 1).pow(2), z()]);
        let w2 = field(vec![z(), t(2, 0).pow(2)]);
        let omega = MaurerCartanForm::new(vec![w1, w2]).unwrap();
        for idx in [vec![0, 1], vec![0], vec![1]] {
            let gamma = PolyVectorField::monomial(&TruncatedSeries::one(2, CAP) + &t(2, 0), &idx).unwrap();
            let graph_side = twisted_first_taylor(&omega, &gamma, 2).unwrap();
            let closed = closed_form_map(&omega, &gamma).unwrap();
            assert!(graph_side.agrees_with(&closed), "{idx:?}\n{graph_side:?}\n{closed:?}");
        }
        let gamma = PolyVectorField::basis(2, CAP, &[0, 1]).unwrap();
        assert!(twisted_first_taylor(&omega, &gamma, 2).unwrap().get(0b11).is_some());
    }

    #[test]
    fn graph_side_equals_closed_form_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(96);
        let mut nontrivial = 0;
        for _ in 0..24 {
            let d = rng.random_range(2..=3);
            let s = rng.random_range(2..=3);
            let fields = (0..s).map(|_| crate::random::vector_field(&mut rng, d, CAP, 2)).collect();
            let omega = MaurerCartanForm::new(fields).unwrap();
            let factors = rng.random_range(0..=d.min(3));
            let gamma = crate::random::poly_vector(&mut rng, d, CAP, factors, 1);
            let graph_side = twisted_first_taylor(&omega, &gamma, s).unwrap();
            let closed = closed_form_map(&omega, &gamma).unwrap();
            assert!(graph_side.agrees_with(&closed), "{omega:?}\n{gamma:?}");
            nontrivial += graph_side.terms().filter(|(m, _)| **m != 0).count();
        }
        assert!(nontrivial > 0);
    }

    #[test]
    fn todd_series_values() {
        let q = todd_series(4);
        assert_eq!(q.coeffs(), &[rat(1, 1), rat(1, 2), rat(1, 12), rat(0, 1), rat(-1, 720)]);
        let qt = tilde_todd_series(4);
        assert_eq!(qt.coeffs(), &[rat(1, 1), rat(0, 1), rat(-1, 24), rat(0, 1), rat(7, 5760)]);
        let e = UnivariateSeries::exp_x(10).rescale_var(&rat(-1, 2));
        assert_eq!(tilde_todd_series(10), todd_series(10).mul_series(&e));
    }

    #[test]
    fn theta_matrix_identity() {
        for rows in [vec![vec![rat(0, 1), rat(1, 1)], vec![rat(0, 1), rat(0, 1)]], vec![vec![rat(1, 2), rat(-3, 1)], vec![rat(2, 1), rat(5, 3)]]] {
            let a = SeriesMatrix::from_rows(rows).unwrap();
            let (lhs, rhs) = theta_identity_sides(&a, 6).unwrap();
            assert_eq!(lhs, rhs);
        }
        // N² = 0, so Θ = W_1 N = 0 and both sides are I
        let n = SeriesMatrix::from_rows(vec![vec![rat(2, 1), rat(-4, 1)], vec![rat(1, 1), rat(-2, 1)]]).unwrap();
        let theta = theta_series(&n, 6).unwrap();
        assert_eq!(matrix_exp(&theta, rat(1, 1), 6).unwrap(), matrix_sqrt_unipotent(&matrix_series(&tilde_todd_series(6), &n, rat(1, 1)).unwrap(), rat(1, 1), 6).unwrap());
    }

    #[test]
    fn wheel_weight_signs() {
        assert_eq!(wheel_graph_weight(&[], 2).unwrap(), rat(-1, 2));
        assert_eq!(wheel_graph_weight(&[2], 0).unwrap(), rat(1, 24));
        assert_eq!(wheel_graph_weight(&[2], 1).unwrap(), rat(1, 24));
        assert_eq!(wheel_graph_weight(&[2, 2], 0).unwrap(), rat(1, 576));
    }

    #[test]
    fn maurer_cartan_json() {
        let w = field(vec![t(2, 1).pow(2), TruncatedSeries::zero(2, CAP)]);
        let omega = MaurerCartanForm::new(vec![w]).unwrap();
        let s = serde_json::to_string(&omega).unwrap();
        assert!(s.starts_with("{\"d\":2,\"fields\":"));
        assert_eq!(serde_json::from_str::<MaurerCartanForm>(&s).unwrap(), omega);
        let bivector = serde_json::to_string(&PolyVectorField::basis(2, CAP, &[0, 1]).unwrap()).unwrap();
        assert!(serde_json::from_str::<MaurerCartanForm>(&format!("{{\"d\":2,\"fields\":[{bivector}]}}")).is_err());
        assert!(serde_json::from_str::<MaurerCartanForm>(&s.replacen("\"d\":2", "\"d\":3", 1)).is_err());
    }

    #[test]
    fn eta_op_json_roundtrip() {
        let mut op = EtaOp::new();
        op.add_term(0b11, PolyDiffOp::partial(2, CAP, 1)).unwrap();
        let s = serde_json::to_string(&op).unwrap();
        assert!(s.starts_with("[{\"eta\":[1,2]"));
        let back: EtaOp = serde_json::from_str(&s).unwrap();
        assert_eq!(back, op);
    }
}

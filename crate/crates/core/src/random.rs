//! Seeded random instances for the randomized verification suites.
//!
//! Everything is polynomial with small rational coefficients so that exact
//! arithmetic stays cheap.

use rand::Rng;

use crate::grassmann;
use crate::polydiff::PolyDiffOp;
use crate::polyvector::PolyVectorField;
use crate::rational::{rat, Rational};
use crate::series::TruncatedSeries;

/// Small nonzero rational `a/b` with `|a| ≤ 3`, `b ∈ {1, 2}`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let mut a = rng.random_range(1..=3i64);
    if rng.random_bool(0.5) {
        a = -a;
    }
    rat(a, rng.random_range(1..=2))
}

fn exponent<R: Rng>(rng: &mut R, dim: usize, max_degree: u32) -> Vec<u32> {
    let total = rng.random_range(0..=max_degree);
    let mut e = vec![0u32; dim];
    for _ in 0..total {
        e[rng.random_range(0..dim)] += 1;
    }
    e
}

/// Polynomial with up to `max_terms` monomials of total degree at most `max_degree`.
pub fn series<R: Rng>(rng: &mut R, dim: usize, cap: i32, max_degree: u32, max_terms: usize) -> TruncatedSeries {
    let count = rng.random_range(1..=max_terms.max(1));
    let terms: Vec<(Vec<u32>, Rational)> = (0..count)
        .map(|_| (exponent(rng, dim, max_degree), small_rational(rng)))
        .collect();
    TruncatedSeries::from_terms(dim, cap, terms).expect("exponents have the right length")
}

/// Poly-vector field with `factors` wedge factors (shifted degree `factors - 1`).
pub fn poly_vector<R: Rng>(rng: &mut R, dim: usize, cap: i32, factors: usize, max_degree: u32) -> PolyVectorField {
    let mut out = PolyVectorField::zero(dim, factors as i32 - 1);
    if factors > dim {
        return out;
    }
    let subsets: Vec<u32> = (0u32..1 << dim).filter(|m| m.count_ones() as usize == factors).collect();
    let picks = rng.random_range(1..=subsets.len().min(3));
    for _ in 0..picks {
        let mask = subsets[rng.random_range(0..subsets.len())];
        let f = series(rng, dim, cap, max_degree, 2);
        let term = PolyVectorField::monomial(f, &grassmann::indices(mask)).expect("distinct indices");
        out = out.checked_add(&term).expect("same degree");
    }
    out
}

/// Vector field with polynomial components.
pub fn vector_field<R: Rng>(rng: &mut R, dim: usize, cap: i32, max_degree: u32) -> PolyVectorField {
    let comps = (0..dim).map(|_| series(rng, dim, cap, max_degree, 2)).collect();
    PolyVectorField::vector_field(comps).expect("one component per axis")
}

/// Polydifferential operator of the given degree with slot orders at most `max_order`.
pub fn polydiff<R: Rng>(rng: &mut R, dim: usize, cap: i32, degree: i32, max_order: u32, max_terms: usize) -> PolyDiffOp {
    let mut out = PolyDiffOp::zero(dim, degree);
    let count = rng.random_range(1..=max_terms.max(1));
    for _ in 0..count {
        let slots = (0..degree + 1).map(|_| exponent(rng, dim, max_order)).collect();
        let coeff = series(rng, dim, cap, 2, 2);
        let term = PolyDiffOp::term(coeff, slots).expect("slot lengths match");
        out = out.checked_add(&term).expect("same degree");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic_and_well_formed() {
        let mut a = ChaCha8Rng::seed_from_u64(5);
        let mut b = ChaCha8Rng::seed_from_u64(5);
        assert_eq!(series(&mut a, 3, 6, 3, 4), series(&mut b, 3, 6, 3, 4));
        let p = poly_vector(&mut a, 3, 6, 2, 2);
        assert_eq!(p.degree(), 1);
        assert!(!p.is_zero());
        let d = polydiff(&mut a, 2, 6, 1, 2, 3);
        assert_eq!(d.degree(), 1);
        assert!(d.terms().all(|(s, _)| s.len() == 2));
        assert!(poly_vector(&mut a, 2, 6, 3, 1).is_zero());
    }
}

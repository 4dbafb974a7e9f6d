//! Randomized algebraic invariants.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hkr_core::formality::{theta_series, xi_matrix, MaurerCartanForm};
use hkr_core::graph::classify_wheels;
use hkr_core::polydiff::{cup, hochschild_differential};
use hkr_core::random;
use hkr_core::rational::{rat, sign_pow};
use hkr_core::verify::{derivation_suite, closed_form_suite, gerstenhaber_suite};
use hkr_core::weight::{mc_weight, modified_bernoulli, modified_bernoulli_series, MonteCarloConfig};
use hkr_core::{Rational, UnivariateSeries};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_series(seed: u64, cap: usize) -> UnivariateSeries {
    let mut r = rng(seed);
    let mut coeffs = vec![rat(1, 1)];
    coeffs.extend((1..=cap).map(|_| random::small_rational(&mut r)));
    UnivariateSeries::from_coeffs(cap, coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_ring_axioms(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let a = random::series(&mut r, d, 6, 4, 4);
        let b = random::series(&mut r, d, 6, 4, 4);
        let c = random::series(&mut r, d, 6, 4, 4);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn higher_working_cap_agrees(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let a = random::series(&mut r, d, 8, 5, 4);
        let b = random::series(&mut r, d, 8, 5, 4);
        let low = &a.truncate(4) * &b.truncate(4);
        prop_assert!(low.agrees_with(&(&a * &b)));
        let da = a.partial(0).unwrap();
        prop_assert_eq!(da.cap(), 7);
        prop_assert!(a.truncate(4).partial(0).unwrap().agrees_with(&da));
    }

    #[test]
    fn exp_log_and_sqrt(seed in any::<u64>()) {
        let f = unit_series(seed, 7);
        prop_assert_eq!(f.log().unwrap().exp().unwrap(), f.clone());
        let s = f.sqrt().unwrap();
        prop_assert_eq!(s.mul_series(&s), f);
    }

    #[test]
    fn schouten_graded_antisymmetry(seed in any::<u64>(), d in 1usize..=3) {
        let mut r = rng(seed);
        let fa = (seed % 4) as usize % (d + 1);
        let fb = ((seed / 4) % 4) as usize % (d + 1);
        let a = random::poly_vector(&mut r, d, 6, fa, 2);
        let b = random::poly_vector(&mut r, d, 6, fb, 2);
        let sign = -sign_pow(i64::from(a.degree()) * i64::from(b.degree()));
        prop_assert!(a.schouten(&b).unwrap().sub(&b.schouten(&a).unwrap().scale(&sign)).unwrap().is_zero());
    }

    #[test]
    fn gerstenhaber_identities(seed in any::<u64>()) {
        let report = gerstenhaber_suite(3, 3, 6, seed).unwrap();
        prop_assert!(report.passed(), "{}", serde_json::to_string(&report).unwrap());
    }

    #[test]
    fn hochschild_differential_over_cup(seed in any::<u64>(), d in 1usize..=2) {
        // d(a ∪ b) = -(da ∪ b) + (-1)^{|a|} a ∪ db
        let mut r = rng(seed);
        let a = random::polydiff(&mut r, d, 6, (seed % 2) as i32, 2, 2);
        let b = random::polydiff(&mut r, d, 6, ((seed / 2) % 2) as i32 - 1, 2, 2);
        let lhs = hochschild_differential(&cup(&a, &b).unwrap()).unwrap();
        let rhs = cup(&hochschild_differential(&a).unwrap(), &b).unwrap().neg()
            .checked_add(&cup(&a, &hochschild_differential(&b).unwrap()).unwrap().scale(&sign_pow(i64::from(a.degree()))))
            .unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn contraction_is_a_derivation(seed in any::<u64>()) {
        prop_assert!(derivation_suite(2, 3, 6, seed).unwrap().passed());
    }

    #[test]
    fn theta_from_weights_matches_bernoulli(seed in any::<u64>(), d in 1usize..=3, s in 1usize..=3) {
        let mut r = rng(seed);
        let fields = (0..s).map(|_| random::vector_field(&mut r, d, 6, 3)).collect();
        let omega = MaurerCartanForm::new(fields).unwrap();
        let xi = xi_matrix(&omega).unwrap();
        let theta = theta_series(&xi, s).unwrap();
        let mut alt = xi.scale(&Rational::from_integer(0.into()));
        for l in 1..=s {
            let c = -sign_pow(l as i64) * modified_bernoulli(l);
            alt = alt.add(&xi.power(l as u32).unwrap().scale(&c)).unwrap();
        }
        prop_assert_eq!(theta, alt);
    }

    #[test]
    fn graph_side_equals_closed_form(seed in any::<u64>()) {
        let (report, _) = closed_form_suite(1, 6, seed).unwrap();
        prop_assert!(report.passed(), "{}", serde_json::to_string(&report).unwrap());
    }
}

#[test]
fn odd_modified_bernoulli_vanish() {
    let s = modified_bernoulli_series(15);
    for l in (1..=15).step_by(2) {
        assert_eq!(s.coeff(l), rat(0, 1), "ŝ_{l}");
    }
}

#[test]
fn stderr_halves_with_four_times_the_samples() {
    let g = classify_wheels(2, 1).unwrap()[0].representative();
    let run = |samples| {
        mc_weight(&g, &MonteCarloConfig { samples, seed: 5, workers: 1 }).unwrap()
    };
    let (small, large) = (run(200_000), run(800_000));
    let ratio = large.stderr / small.stderr;
    assert!((0.35..=0.65).contains(&ratio), "stderr ratio {ratio}: {small:?} {large:?}");
}

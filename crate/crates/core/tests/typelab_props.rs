use explab::random::{random_probability, rng};
use explab::typelab::{
    enumerate_types, exact_errors, projectivize, type_round_halfspace, type_stats, verify_rounding, SymmetricTest,
};
use explab::verify::random_rounding_instance;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn type_class_masses_sum_to_one(seed in any::<u64>(), k in 2usize..=4, n in 1usize..=40) {
        let mut r = rng(seed);
        let p = random_probability(k, 0.0, &mut r);
        let total: f64 = enumerate_types(n, k)
            .unwrap()
            .map(|t| type_stats(&p, &t).unwrap().1.exp())
            .sum();
        prop_assert!((total - 1.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn errors_respect_total_variation(seed in any::<u64>(), k in 2usize..=3, n in 1usize..=12) {
        let mut r = rng(seed);
        let p = random_probability(k, 0.01, &mut r);
        let q = random_probability(k, 0.01, &mut r);
        let test = SymmetricTest::from_fn(n, k, |_| r.random::<f64>()).unwrap();
        let e = exact_errors(&test, &[p.clone()], &[q.clone()]).unwrap();
        // symmetric densities: the ℓ1 distance collapses onto type classes
        let l1: f64 = test
            .types
            .iter()
            .map(|t| (type_stats(&p, t).unwrap().1.exp() - type_stats(&q, t).unwrap().1.exp()).abs())
            .sum();
        prop_assert!(e.alpha_n + e.beta_n >= 1.0 - 0.5 * l1 - 1e-12);
    }

    #[test]
    fn projectivize_at_most_doubles_errors(seed in any::<u64>(), k in 2usize..=3, n in 1usize..=10) {
        let mut r = rng(seed);
        let p = random_probability(k, 0.01, &mut r);
        let q = random_probability(k, 0.01, &mut r);
        let test = SymmetricTest::from_fn(n, k, |_| r.random::<f64>()).unwrap();
        let e = exact_errors(&test, &[p.clone()], &[q.clone()]).unwrap();
        let f = exact_errors(&projectivize(&test), &[p], &[q]).unwrap();
        prop_assert!(f.alpha_n <= 2.0 * e.alpha_n + 1e-14);
        prop_assert!(f.beta_n <= 2.0 * e.beta_n + 1e-14);
    }

    #[test]
    fn rounding_postconditions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (rho, v, c, n) = random_rounding_instance(&mut r);
        let t = type_round_halfspace(&rho, &v, &c, n).unwrap();
        let check = verify_rounding(&rho, &v, &c, n, &t);
        prop_assert!(check.all(), "{check:?}");
    }
}

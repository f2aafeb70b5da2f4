use explab::divergence::{classical as dc, quantum as dq};
use explab::random::{random_pd_density, random_probability, rng};
use explab::Herm;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn renyi_ordering(seed in any::<u64>(), d in 2usize..=3, ai in 0usize..3) {
        let alpha = [0.25, 0.5, 0.75][ai];
        let mut r = rng(seed);
        let (rho, sigma) = (random_pd_density(d, &mut r), random_pd_density(d, &mut r));
        let petz = dq::petz_renyi(&rho, &sigma, alpha).unwrap().unwrap();
        let flat = dq::log_euclidean_renyi(&rho, &sigma, alpha).unwrap();
        let max = dq::maximal_renyi(&rho, &sigma, alpha).unwrap();
        prop_assert!(flat - petz >= -1e-10, "petz {petz} flat {flat}");
        prop_assert!(max - flat >= -1e-10, "flat {flat} max {max}");
        if rho.commutator_norm(&sigma) > 0.05 {
            prop_assert!(flat - petz > 1e-6 && max - flat > 1e-6);
        }
    }

    #[test]
    fn petz_and_sandwiched_monotone_in_alpha(seed in any::<u64>(), d in 2usize..=3) {
        let mut r = rng(seed);
        let (rho, sigma) = (random_pd_density(d, &mut r), random_pd_density(d, &mut r));
        let low: Vec<f64> = (0..=18).map(|i| 0.05 * i as f64).map(|a| dq::petz_renyi(&rho, &sigma, a).unwrap().unwrap()).collect();
        for w in low.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-10);
        }
        let high: Vec<f64> = [1.1, 1.5, 2.0, 4.0, 10.0, 50.0]
            .iter()
            .map(|&a| dq::sandwiched_renyi(&rho, &sigma, a).unwrap().unwrap())
            .collect();
        for w in high.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-10);
        }
        let dmax = dq::max_rel_entropy(&rho, &sigma).unwrap().unwrap();
        prop_assert!(high[high.len() - 1] <= dmax + 1e-9);
        prop_assert!(dq::sandwiched_renyi(&rho, &sigma, 1e4).unwrap().unwrap() > dmax - 1e-3);
    }

    #[test]
    fn classical_psi_convex(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let (p, q) = (random_probability(n, 1e-3, &mut r), random_probability(n, 1e-3, &mut r));
        let h = 0.05;
        for i in 1..20 {
            let a = i as f64 * h;
            let second = dc::psi(&p, &q, a + h).unwrap() - 2.0 * dc::psi(&p, &q, a).unwrap() + dc::psi(&p, &q, a - h).unwrap();
            prop_assert!(second >= -1e-9);
        }
    }

    #[test]
    fn classical_sandwiched_equals_petz(seed in any::<u64>(), n in 2usize..=6, alpha in 1.01f64..8.0) {
        let mut r = rng(seed);
        let (p, q) = (random_probability(n, 1e-3, &mut r), random_probability(n, 1e-3, &mut r));
        let s = dc::sandwiched_renyi(&p, &q, alpha).unwrap().unwrap();
        let t = dc::psi(&p, &q, alpha).unwrap() / (alpha - 1.0);
        prop_assert!((s - t).abs() < 1e-10);
        let (pd, qd) = (Herm::diag(p.as_slice()), Herm::diag(q.as_slice()));
        let u = dq::sandwiched_renyi(&pd, &qd, alpha).unwrap().unwrap();
        prop_assert!((s - u).abs() < 1e-10, "classical {s} quantum {u}");
    }

    #[test]
    fn relative_entropy_is_limit_of_renyi(seed in any::<u64>(), n in 2usize..=6) {
        let mut r = rng(seed);
        let (p, q) = (random_probability(n, 1e-2, &mut r), random_probability(n, 1e-2, &mut r));
        let d = dc::rel_entropy(&p, &q).unwrap().unwrap();
        // Richardson on α = 1 − h, 1 − h/2 cancels the linear term
        let h = 1e-3;
        let a = dc::petz_renyi(&p, &q, 1.0 - h).unwrap().unwrap();
        let b = dc::petz_renyi(&p, &q, 1.0 - h / 2.0).unwrap().unwrap();
        prop_assert!((2.0 * b - a - d).abs() < 1e-4);
    }
}

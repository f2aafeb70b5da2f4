use explab::composite::{
    minimize_hr_over_hulls, optimality_certificate, set_divergence, set_petz_renyi, HypothesisSet, SolverConfig,
};
use explab::divergence::{DivergenceKind, State};
use explab::random::{random_probability, rng};
use explab::tradeoff::hoeffding_classical;
use proptest::prelude::*;

fn sets(seed: u64, k: usize, m: usize) -> (HypothesisSet, HypothesisSet) {
    let mut r = rng(seed);
    let rs = (0..k).map(|_| random_probability(3, 0.05, &mut r)).collect();
    let ss = (0..m).map(|_| random_probability(3, 0.05, &mut r)).collect();
    (HypothesisSet::classical("R", rs).unwrap(), HypothesisSet::classical("S", ss).unwrap())
}

fn min_pairwise_hr(rs: &HypothesisSet, ss: &HypothesisSet, r: f64) -> f64 {
    let mut best = f64::INFINITY;
    for a in rs.classical_states().unwrap() {
        for b in ss.classical_states().unwrap() {
            best = best.min(hoeffding_classical(&a, &b, r).unwrap().to_float());
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn set_divergence_is_pairwise_minimum(seed in any::<u64>(), k in 1usize..=3, m in 1usize..=3) {
        let (rs, ss) = sets(seed, k, m);
        let v = set_divergence(DivergenceKind::Relative, &rs, &ss).unwrap().value.to_float();
        for a in &rs.states {
            for b in &ss.states {
                let e = explab::divergence::evaluate(DivergenceKind::Relative, a, b).unwrap().to_float();
                prop_assert!(v <= e + 1e-15);
            }
        }
    }

    #[test]
    fn hull_minimum_below_generator_minimum(seed in any::<u64>(), k in 1usize..=2, m in 1usize..=2, frac in 0.1f64..0.9) {
        let (rs, ss) = sets(seed, k, m);
        let dmin = set_divergence(DivergenceKind::Relative, &rs, &ss).unwrap().value.to_float();
        let r = frac * dmin;
        let pair = minimize_hr_over_hulls(&rs, &ss, r, &SolverConfig::default()).unwrap();
        let hull = pair.value.to_float();
        let gens = min_pairwise_hr(&rs, &ss, r);
        prop_assert!(hull <= gens + 1e-8, "hull {hull} generators {gens}");
        if k == 1 && m == 1 {
            prop_assert!((hull - gens).abs() < 1e-8);
        }
        let cert = optimality_certificate(&pair, &rs, &ss).unwrap();
        prop_assert!(cert.min_slack >= -1e-8);
    }

    #[test]
    fn composite_renyi_tends_to_relative_entropy(seed in any::<u64>(), k in 1usize..=3, m in 1usize..=3) {
        let (rs, ss) = sets(seed, k, m);
        let d = set_divergence(DivergenceKind::Relative, &rs, &ss).unwrap().value.to_float();
        let h = 1e-4;
        let a = set_petz_renyi(&rs, &ss, 1.0 - h).unwrap().to_float();
        let b = set_petz_renyi(&rs, &ss, 1.0 - h / 2.0).unwrap().to_float();
        prop_assert!((2.0 * b - a - d).abs() < 1e-4, "extrapolated {} vs {d}", 2.0 * b - a);
    }
}

#[test]
fn hypothesis_sets_round_trip_json() {
    let (rs, _) = sets(5, 2, 1);
    let back = HypothesisSet::from_json(&rs.to_json()).unwrap();
    assert_eq!(back.len(), 2);
    assert!(matches!(back.states[0], State::Classical(_)));
}

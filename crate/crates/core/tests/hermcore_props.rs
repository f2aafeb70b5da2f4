use explab::hermcore::{fidelity, geometric_mean, kron, mat_fn_on_support, MatFn, EPS_SUPP};
use explab::random::{random_pd_density, rng};
use explab::Herm;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn geometric_mean_is_symmetric(seed in any::<u64>(), d in 2usize..=4) {
        let mut r = rng(seed);
        let (a, b) = (random_pd_density(d, &mut r), random_pd_density(d, &mut r));
        let ab = geometric_mean(&a, &b, 0.5).unwrap();
        let ba = geometric_mean(&b, &a, 0.5).unwrap();
        prop_assert!(ab.max_abs_diff(&ba) < 1e-9);
    }

    #[test]
    fn geometric_mean_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a1 = random_pd_density(2, &mut r);
        let b1 = random_pd_density(2, &mut r);
        let a2 = random_pd_density(2, &mut r);
        let b2 = random_pd_density(2, &mut r);
        let lhs = kron(&geometric_mean(&a1, &b1, 0.5).unwrap(), &geometric_mean(&a2, &b2, 0.5).unwrap());
        let rhs = geometric_mean(&kron(&a1, &a2), &kron(&b1, &b2), 0.5).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }

    #[test]
    fn trace_of_mean_below_fidelity(seed in any::<u64>(), d in 2usize..=4) {
        let mut r = rng(seed);
        let (a, b) = (random_pd_density(d, &mut r), random_pd_density(d, &mut r));
        let t = geometric_mean(&a, &b, 0.5).unwrap().trace();
        let f = fidelity(&a, &b).unwrap();
        prop_assert!(t <= f + 1e-10, "Tr A#B = {t}, F = {f}");
        prop_assert!(f <= 1.0 + 1e-10);
        let same = geometric_mean(&a, &a, 0.5).unwrap().trace();
        prop_assert!((same - 1.0).abs() < 1e-9);
        prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn log_on_support_matches_eigenvalues(d in 2usize..=5, rank in 1usize..=5, seed in any::<u64>()) {
        let rank = rank.min(d);
        let mut r = rng(seed);
        let full = random_pd_density(d, &mut r);
        let e = full.eig().unwrap();
        let ev: Vec<f64> = (0..d).map(|i| if i >= d - rank { e.values[i] } else { 0.0 }).collect();
        let a = Herm::diag(&ev).congruence(&e.vectors);
        let l = mat_fn_on_support(&a, MatFn::Log, EPS_SUPP).unwrap();
        let le = l.eig().unwrap();
        let mut want: Vec<f64> = ev.iter().map(|&x| if x > 0.0 { x.ln() } else { 0.0 }).collect();
        want.sort_by(f64::total_cmp);
        for (got, w) in le.values.iter().zip(&want) {
            prop_assert!((got - w).abs() < 1e-9, "{got} vs {w}");
        }
    }
}

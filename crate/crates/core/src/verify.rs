//! Seeded invariant suites. Each suite returns a report whose rows aggregate
//! the worst case over its random instances.

use crate::classical::ClassicalWeight;
use crate::composite::{minimize_hr_over_hulls, optimality_certificate, HypothesisSet, SolverConfig};
use crate::divergence::{classical as dc, quantum as dq, Family};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::gallery::{self, CounterexampleReport, Inequality, Relation};
use crate::hermcore::{fidelity, geometric_mean, kron, spectral_apply, HermitianOperator};
use crate::optim::golden_max;
use crate::random::{random_pd_density, random_probability, rng, Rng64};
use num_rational::BigRational;
use crate::tradeoff::{hoeffding_anti_classical, hoeffding_classical, r_infty, solve_rate_alpha, LegendreData};
use crate::typelab::{adversarial_product_errors, type_round_halfspace, verify_rounding};
use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

type Herm = HermitianOperator;
type W = ClassicalWeight<f64>;

/// Suite parameters. `count = 0` selects each suite's default size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub tol: f64,
    pub seed: u64,
    pub count: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            seed: 0,
            count: 0,
        }
    }
}

impl SuiteConfig {
    fn n(&self, default: usize) -> usize {
        if self.count == 0 {
            default
        } else {
            self.count
        }
    }
}

pub const SUITES: &[&str] = &[
    "geommean",
    "renyi_order",
    "hoeffding",
    "rounding",
    "certificates",
    "semiclassical",
    "gallery",
];

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<CounterexampleReport> {
    match name {
        "geommean" => geommean_suite(cfg),
        "renyi_order" => renyi_order_suite(cfg),
        "hoeffding" => hoeffding_suite(cfg),
        "rounding" => rounding_suite(cfg),
        "certificates" => certificates_suite(cfg),
        "semiclassical" => semiclassical_suite(cfg),
        "gallery" => gallery_suite(cfg),
        _ => Err(Error::Parse(format!("unknown suite \"{name}\"; expected one of {}", SUITES.join(", ")))),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<CounterexampleReport>> {
    SUITES.iter().map(|s| run_suite(s, cfg)).collect()
}

fn seeded(seed: u64, i: usize) -> Rng64 {
    rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64))
}

fn worst(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| if x.is_nan() { f64::INFINITY } else { m.max(x) })
}

/// `A#B = B#A`, `(A#B)A⁻¹(A#B) = B`, `(A⊗C)#(B⊗D) = (A#B)⊗(C#D)` and `Tr A#B ≤ F(A, B)`.
pub fn geommean_suite(cfg: &SuiteConfig) -> Result<CounterexampleReport> {
    let count = cfg.n(100);
    let rows = (0..count)
        .into_par_iter()
        .map(|i| -> Result<[f64; 4]> {
            let mut r = seeded(cfg.seed, i);
            let (d1, d2) = (2 + i % 2, 2 + (i / 2) % 2);
            let (a, b) = (random_pd_density(d1, &mut r), random_pd_density(d1, &mut r));
            let (c, d) = (random_pd_density(d2, &mut r), random_pd_density(d2, &mut r));
            let ab = geometric_mean(&a, &b, 0.5)?;
            let sym = ab.max_abs_diff(&geometric_mean(&b, &a, 0.5)?);
            let ainv = spectral_apply(&a, |x| 1.0 / x)?;
            let ric = Herm::new(ab.matrix() * ainv.matrix() * ab.matrix())?.max_abs_diff(&b);
            let lhs = geometric_mean(&kron(&a, &c), &kron(&b, &d), 0.5)?;
            let mult = lhs.max_abs_diff(&kron(&ab, &geometric_mean(&c, &d, 0.5)?));
            let fid = ab.trace() - fidelity(&a, &b)?;
            Ok([sym, ric, mult, fid])
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = CounterexampleReport::new("geommean");
    rep.param("count", count as f64).param("seed", cfg.seed as f64);
    let names = ["max |A#B - B#A|", "max |(A#B)A^-1(A#B) - B|", "max |(A(x)C)#(B(x)D) - (A#B)(x)(C#D)|"];
    for (k, name) in names.iter().enumerate() {
        rep.push(Inequality::finite(*name, worst(rows.iter().map(|x| x[k])), Relation::Le, 0.0, cfg.tol));
    }
    let fid = rows.iter().map(|x| x[3]).fold(f64::NEG_INFINITY, f64::max);
    rep.push(Inequality::finite("max (Tr A#B - F(A,B))", fid, Relation::Le, 0.0, cfg.tol));
    Ok(rep)
}

/// Random noncommuting pair of PD densities in dimension 2..=4.
pub fn random_pd_pair(i: usize, r: &mut Rng64) -> (Herm, Herm) {
    let d = 2 + i % 3;
    (random_pd_density(d, r), random_pd_density(d, r))
}

/// `D_α ≤ D♭_α ≤ D^max_α` for `α ∈ {1/4, 1/2, 3/4}`; strict (margin `1e-6`) when `‖[ρ,σ]‖ > 0.05`.
pub fn renyi_order_suite(cfg: &SuiteConfig) -> Result<CounterexampleReport> {
    let count = cfg.n(100);
    let alphas = [0.25, 0.5, 0.75];
    let rows = (0..count)
        .into_par_iter()
        .map(|i| -> Result<Vec<(f64, f64, f64)>> {
            let mut r = seeded(cfg.seed, i);
            let (rho, sigma) = random_pd_pair(i, &mut r);
            let comm = rho.commutator_norm(&sigma);
            alphas
                .iter()
                .map(|&a| {
                    let petz = dq::petz_renyi(&rho, &sigma, a)?.to_float();
                    let flat = dq::log_euclidean_renyi(&rho, &sigma, a)?;
                    let max = dq::maximal_renyi(&rho, &sigma, a)?;
                    Ok((comm, flat - petz, max - flat))
                })
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    let flat: Vec<(f64, f64, f64)> = rows.into_iter().flatten().collect();
    let min_gap = |k: usize, pred: &dyn Fn(f64) -> bool| {
        flat.iter()
            .filter(|x| pred(x.0))
            .map(|x| if k == 0 { x.1 } else { x.2 })
            .fold(f64::INFINITY, f64::min)
    };
    let all = |_: f64| true;
    let far = |c: f64| c > 0.05;
    let mut rep = CounterexampleReport::new("renyi_order");
    rep.param("count", count as f64).param("seed", cfg.seed as f64);
    rep.param("noncommuting pairs", flat.iter().filter(|x| far(x.0)).count() as f64 / alphas.len() as f64);
    rep.push(Inequality::finite("min (D_flat - D_petz)", min_gap(0, &all), Relation::Ge, 0.0, 1e-10))
        .push(Inequality::finite("min (D_max - D_flat)", min_gap(1, &all), Relation::Ge, 0.0, 1e-10));
    if flat.iter().any(|x| far(x.0)) {
        rep.push(Inequality::finite("min (D_flat - D_petz), |[rho,sigma]| > 0.05", min_gap(0, &far), Relation::Gt, 0.0, 1e-6))
            .push(Inequality::finite("min (D_max - D_flat), |[rho,sigma]| > 0.05", min_gap(1, &far), Relation::Gt, 0.0, 1e-6));
    }
    Ok(rep)
}

/// Random full-support classical pair on 3..=5 letters.
pub fn random_classical_pair(i: usize, r: &mut Rng64) -> (W, W) {
    let k = 3 + i % 3;
    (random_probability(k, 0.02, r), random_probability(k, 0.02, r))
}

/// Dense-grid supremum of `u r − ψ̃(u)` over `[0, 1]`, refined by golden search
/// around the best grid cell.
pub fn tilde_psi_by_grid(rho: &W, sigma: &W, r: f64, points: usize) -> f64 {
    let f = |u: f64| u * r - dc::psi_tilde(rho, sigma, u, Family::Sandwiched).unwrap_or(f64::INFINITY);
    let h = 1.0 / (points - 1) as f64;
    let (mut best, mut at) = (f64::NEG_INFINITY, 0);
    for k in 0..points {
        let v = f(k as f64 * h);
        if v > best {
            best = v;
            at = k;
        }
    }
    let lo = (at as f64 - 1.0).max(0.0) * h;
    let hi = ((at + 1) as f64 * h).min(1.0);
    best.max(golden_max(f, lo, hi, 1e-13).value)
}

/// Arc identities, the scaling law, monotonicity in `r`, and the three-case `Ψ̃` formula.
pub fn hoeffding_suite(cfg: &SuiteConfig) -> Result<CounterexampleReport> {
    let count = cfg.n(50);
    let per = (0..count)
        .into_par_iter()
        .map(|i| -> Result<[f64; 7]> {
            let mut g = seeded(cfg.seed, i);
            let (rho, sigma) = random_classical_pair(i, &mut g);
            let d = dc::rel_entropy(&rho, &sigma)?.to_float();
            let d0 = dc::d0(&rho, &sigma)?.to_float();
            let rinf = r_infty(&rho, &sigma)?.to_float();
            let (mut arc_rate, mut arc_value) = (0.0f64, 0.0f64);
            for k in 1..=7 {
                let r = d0 + (rinf - d0) * k as f64 / 8.0;
                let pt = solve_rate_alpha(&rho, &sigma, r)?;
                arc_rate = arc_rate.max((pt.rate_to_sigma - r).abs());
                let expect = if r < d {
                    hoeffding_classical(&rho, &sigma, r)?.to_float()
                } else {
                    hoeffding_anti_classical(&rho, &sigma, r)?
                };
                arc_value = arc_value.max((pt.rate_to_rho - expect).abs());
            }
            let mut scaling = 0.0f64;
            for (t, s) in [(0.5, 0.5), (0.5, 2.0), (2.0, 0.5), (2.0, 2.0)] {
                for r in [0.3 * d, 0.8 * d, 1.0, 2.0] {
                    let lhs = hoeffding_classical(&rho.scale(t), &sigma.scale(s), r)?;
                    let shifted = r + f64::ln(s);
                    let rhs = if shifted < d0 {
                        ExtReal::PosInf
                    } else {
                        ExtReal::Finite(hoeffding_classical(&rho, &sigma, shifted)?.to_float() - f64::ln(t))
                    };
                    scaling = scaling.max(match (lhs, rhs) {
                        (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs(),
                        (a, b) if a == b => 0.0,
                        _ => f64::INFINITY,
                    });
                }
            }
            let grid: Vec<f64> = (1..=24).map(|k| 1.5 * rinf * k as f64 / 24.0).collect();
            let h: Vec<f64> = grid
                .iter()
                .map(|&r| hoeffding_classical(&rho, &sigma, r).map(|x| x.to_float()))
                .collect::<Result<_>>()?;
            let hs: Vec<f64> = grid
                .iter()
                .map(|&r| hoeffding_anti_classical(&rho, &sigma, r))
                .collect::<Result<_>>()?;
            let h_incr = worst(h.windows(2).filter(|w| w[0].is_finite()).map(|w| w[1] - w[0]));
            let hs_decr = worst(hs.windows(2).map(|w| w[0] - w[1]));
            let hs_concave = worst(hs.windows(3).map(|w| 2.0 * w[1] - w[0] - w[2]));
            let legendre = LegendreData::classical(&rho, &sigma)?;
            let mut case_vs_grid = 0.0f64;
            for k in 1..=12 {
                let r = 1.5 * rinf * k as f64 / 12.0;
                let (v, _) = legendre.tilde_psi(r)?;
                case_vs_grid = case_vs_grid.max((v - tilde_psi_by_grid(&rho, &sigma, r, 4001)).abs());
            }
            Ok([arc_rate, arc_value, scaling, h_incr, hs_decr, hs_concave, case_vs_grid])
        })
        .collect::<Result<Vec<_>>>()?;
    let col = |k: usize| worst(per.iter().map(|x| x[k]));
    let mut rep = CounterexampleReport::new("hoeffding");
    rep.param("count", count as f64).param("seed", cfg.seed as f64);
    rep.push(Inequality::finite("max |D(mu_ar||sigma) - r|", col(0), Relation::Le, 0.0, 1e-8))
        .push(Inequality::finite("max |D(mu_ar||rho) - H_r or H*_r|", col(1), Relation::Le, 0.0, 1e-8))
        .push(Inequality::finite("max |H_r(t rho||s sigma) - H_{r+log s} + log t|", col(2), Relation::Le, 0.0, 1e-9))
        .push(Inequality::finite("max increase of H_r in r", col(3), Relation::Le, 0.0, 1e-10))
        .push(Inequality::finite("max decrease of H*_r in r", col(4), Relation::Le, 0.0, 1e-10))
        .push(Inequality::finite("max concavity defect of H*_r", col(5), Relation::Le, 0.0, 1e-9))
        .push(Inequality::finite("max |three-case Psi~ - grid sup|", col(6), Relation::Le, 0.0, 1e-7));
    Ok(rep)
}

/// Random exact instance for halfspace rounding: `(ρ, v, c, n)` with `ρ` in the halfspace.
pub fn random_rounding_instance(r: &mut Rng64) -> (Vec<BigRational>, Vec<BigRational>, BigRational, usize) {
    let k = r.random_range(2..=6usize);
    let mut w: Vec<i64> = (0..k).map(|_| if r.random_bool(0.2) { 0 } else { r.random_range(1..=40) }).collect();
    if w.iter().all(|&x| x == 0) {
        w[0] = 1;
    }
    let total: i64 = w.iter().sum();
    let rho: Vec<BigRational> = w.iter().map(|&x| BigRational::new(BigInt::from(x), BigInt::from(total))).collect();
    let v: Vec<BigRational> = (0..k).map(|_| BigRational::from_integer(BigInt::from(r.random_range(-5..=5i64)))).collect();
    let dot = rho.iter().zip(&v).fold(BigRational::from_integer(BigInt::from(0)), |acc, (a, b)| acc + a * b);
    let slack = BigRational::new(BigInt::from(r.random_range(0..=3i64)), BigInt::from(10));
    let supp = w.iter().filter(|&&x| x > 0).count();
    let n = supp * (supp - 1).max(1) + r.random_range(0..60usize);
    (rho, v, dot - slack, n)
}

/// Exact halfspace rounding postconditions on random rational instances.
pub fn rounding_suite(cfg: &SuiteConfig) -> Result<CounterexampleReport> {
    let count = cfg.n(1000);
    let fails: Vec<[bool; 3]> = (0..count)
        .into_par_iter()
        .map(|i| -> Result<[bool; 3]> {
            let mut r = seeded(cfg.seed, i);
            let (rho, v, c, n) = random_rounding_instance(&mut r);
            let t = type_round_halfspace(&rho, &v, &c, n)?;
            let chk = verify_rounding(&rho, &v, &c, n, &t);
            Ok([!chk.is_type_within_support, !chk.in_halfspace, !chk.l1_ok])
        })
        .collect::<Result<_>>()?;
    let mut rep = CounterexampleReport::new("rounding");
    rep.param("count", count as f64).param("seed", cfg.seed as f64);
    for (k, name) in ["n-type within supp rho", "halfspace membership", "||rho - rho_n||_1 <= 2(r-1)/n"].iter().enumerate() {
        let bad = fails.iter().filter(|f| f[k]).count();
        rep.push(Inequality::finite(format!("violations: {name}"), bad as f64, Relation::Eq, 0.0, 0.0));
    }
    Ok(rep)
}

/// Small random classical composite instance on 3 letters.
pub fn random_composite_instance(i: usize, r: &mut Rng64) -> Result<(HypothesisSet, HypothesisSet)> {
    let k_null = 1 + i % 2;
    let rhos: Vec<W> = (0..k_null).map(|_| random_probability(3, 0.05, r)).collect();
    let sigmas: Vec<W> = (0..2).map(|_| random_probability(3, 0.05, r)).collect();
    Ok((HypothesisSet::classical("R", rhos)?, HypothesisSet::classical("S", sigmas)?))
}

/// Certified hull minimizers and the adversarial bound chain.
pub fn certificates_suite(cfg: &SuiteConfig) -> Result<CounterexampleReport> {
    let count = cfg.n(20);
    let n = 8;
    let per = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(f64, f64, f64, bool)> {
            let mut g = seeded(cfg.seed, i);
            let (rs, ss) = random_composite_instance(i, &mut g)?;
            let pairwise = crate::composite::pairwise_rel_entropy(&rs, &ss)?;
            let dmin = pairwise.iter().map(|p| p.value.to_float()).fold(f64::INFINITY, f64::min);
            let rate = 0.5 * dmin;
            let solver = SolverConfig::default();
            let pair = minimize_hr_over_hulls(&rs, &ss, rate, &solver)?;
            let cert = optimality_certificate(&pair, &rs, &ss)?;
            let adv = adversarial_product_errors(&rs.classical_states()?, &ss.classical_states()?, &pair, rate, pair.theta, n)?;
            Ok((
                cert.min_slack,
                adv.max_beta / adv.beta_bound,
                adv.max_alpha / adv.alpha_bound,
                pair.certified,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = CounterexampleReport::new("certificates");
    rep.param("count", count as f64).param("seed", cfg.seed as f64).param("n", n as f64);
    let min_slack = per.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
    rep.push(Inequality::finite("min certificate slack", min_slack, Relation::Ge, 0.0, 1e-8))
        .push(Inequality::finite(
            "uncertified minimizers",
            per.iter().filter(|x| !x.3).count() as f64,
            Relation::Eq,
            0.0,
            0.0,
        ))
        .push(Inequality::finite("max beta / product bound", worst(per.iter().map(|x| x.1)), Relation::Le, 1.0, 1e-12))
        .push(Inequality::finite("max alpha / product bound", worst(per.iter().map(|x| x.2)), Relation::Le, 1.0, 1e-12));
    Ok(rep)
}

/// Combiner bounds on random semiclassical instances, half with Neyman–Pearson tests.
pub fn semiclassical_suite(cfg: &SuiteConfig) -> Result<CounterexampleReport> {
    let count = cfg.n(50);
    let reports = (0..count)
        .into_par_iter()
        .map(|i| -> Result<CounterexampleReport> {
            let (k, m) = (1 + i % 3, 1 + (i / 3) % 3);
            let (rhos, sigmas, tests) =
                gallery::random_semiclassical_instance(k, m, i % 2 == 0, cfg.seed.wrapping_mul(1000).wrapping_add(i as u64));
            Ok(gallery::semiclassical_combine(&rhos, &sigmas, &tests)?.report)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rep = CounterexampleReport::new("semiclassical");
    rep.param("count", count as f64).param("seed", cfg.seed as f64);
    let failing = reports.iter().filter(|r| !r.pass()).count();
    let slack = reports.iter().map(|r| r.worst_slack()).fold(f64::INFINITY, f64::min);
    rep.quantity("worst row slack", slack);
    rep.push(Inequality::finite("instances with a failed bound", failing as f64, Relation::Eq, 0.0, 0.0));
    Ok(rep)
}

/// Every gallery construction at its reference parameters.
pub fn gallery_suite(cfg: &SuiteConfig) -> Result<CounterexampleReport> {
    let mut reports = vec![
        gallery::coin_example_report(1, &[0.2, 0.5, 1.0, 1.4, 2.0], 14)?,
        gallery::coin_example_report(2, &[0.5, 2.8, 3.0], 14)?,
        gallery::interval_example_report(10, 0.3, 64)?,
        gallery::minimal_report()?,
    ];
    let (rho, s1, s2) = gallery::minimal_triple();
    reports.push(gallery::stein_gap_report(&rho, &s1, &s2)?);
    let top = gallery::top_diff_state(&s1, &s2)?;
    reports.push(gallery::stein_gap_report(&top, &s1, &s2)?);
    reports.push(gallery::tune_stein_example(&rho, &s1, &s2, 0.25, 0.5)?);
    reports.push(gallery::tune_direct_example(&rho, &s1, &s2, 0.2, 0.2)?);
    let mut r = seeded(cfg.seed, 0);
    let psis: Vec<_> = (0..3).map(|_| crate::random::random_unit_vector(4, &mut r)).collect();
    let phis: Vec<_> = (0..2).map(|_| crate::random::random_unit_vector(4, &mut r)).collect();
    reports.push(gallery::pure_state_report(&psis, &phis, 30)?);
    let mut rep = CounterexampleReport::new("gallery");
    rep.param("seed", cfg.seed as f64);
    for sub in &reports {
        let bad = sub.failures().count();
        rep.push(Inequality::finite(format!("{}: failed rows", sub.name), bad as f64, Relation::Eq, 0.0, 0.0));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, count: usize) -> SuiteConfig {
        SuiteConfig { tol: 1e-8, seed, count }
    }

    #[test]
    fn small_suites_pass() {
        for name in ["geommean", "renyi_order", "hoeffding", "rounding", "certificates", "semiclassical"] {
            let rep = run_suite(name, &small(3, 4)).unwrap();
            assert!(rep.pass(), "{name}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", &SuiteConfig::default()), Err(Error::Parse(_))));
    }

    #[test]
    fn grid_sup_matches_case_formula_on_coin() {
        let rho = W::new(vec![0.5, 0.5]).unwrap();
        let sigma = W::new(vec![0.25, 0.75]).unwrap();
        let data = LegendreData::classical(&rho, &sigma).unwrap();
        let (v, _) = data.tilde_psi(1.0).unwrap();
        assert!((v - tilde_psi_by_grid(&rho, &sigma, 1.0, 4001)).abs() < 1e-7);
    }
}

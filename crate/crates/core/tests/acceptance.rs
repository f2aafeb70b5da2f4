//! Acceptance criteria, one line per check. Exit status is nonzero only when a
//! check fails that is not listed in `KNOWN_DEVIATIONS`.

use explab::composite::CERT_TOL;
use explab::divergence::{classical as dc, quantum as dq};
use explab::gallery::{self, Relation};
use explab::hermcore::geometric_mean;
use explab::random::{random_pd_density, random_unit_vector, rng};
use explab::tradeoff::{hoeffding_anti_classical, r_infty};
use explab::typelab::{ball_log_beta_bound, ball_test, type_stats};
use explab::verify::{run_suite, SuiteConfig};
use explab::{Herm, Weight};
use std::time::{Duration, Instant};

/// Checks expected to fail as literally stated; see the decisions ledger.
const KNOWN_DEVIATIONS: &[&str] = &["C4-literal", "C12-bound"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Harness {
    unexpected: Vec<String>,
    deviations: Vec<String>,
}

impl Harness {
    fn run(&mut self, id: &str, title: &str, budget: Duration, f: impl FnOnce() -> explab::Result<Outcome>) {
        let t0 = Instant::now();
        let out = f().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        let dt = t0.elapsed();
        // budgets are for optimized builds
        let over = !cfg!(debug_assertions) && dt > budget;
        let pass = out.pass && !over;
        let budget_note = if over { " OVER BUDGET" } else { "" };
        println!(
            "{} {id:<12} {title}: {} [{:.2} s / {:.0} s{budget_note}]",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            dt.as_secs_f64(),
            budget.as_secs_f64()
        );
        if !pass {
            if KNOWN_DEVIATIONS.contains(&id) {
                self.deviations.push(id.into());
            } else {
                self.unexpected.push(id.into());
            }
        }
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.into_iter().filter(|x| *x > f64::NEG_INFINITY).collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

mod oracle {
    use dashu_float::round::mode::HalfAway;
    use dashu_float::FBig;

    pub type Big = FBig<HalfAway, 2>;
    pub const PREC: usize = 128;

    pub fn int(x: i64) -> Big {
        Big::from(x).with_precision(PREC).value()
    }

    pub fn sqrt(x: &Big) -> Big {
        (x.ln() / int(2)).exp()
    }

    pub fn f(x: &Big) -> f64 {
        x.to_f64().value()
    }

    /// `log(2√6)`.
    pub fn d_geommean() -> Big {
        (int(2) * sqrt(&int(6))).ln()
    }

    /// `D(ρ‖σ_j)` for the pure `ρ` on `(1,−1)/√2`: eigenvalues `(2 ± √2)/4`
    /// with overlaps `(3 ∓ 2√2)/(4 ∓ 2√2)`.
    pub fn d_pairwise() -> Big {
        let s2 = sqrt(&int(2));
        let lp = (int(2) + s2.clone()) / int(4);
        let lm = (int(2) - s2.clone()) / int(4);
        let wp = (int(3) - int(2) * s2.clone()) / (int(4) - int(2) * s2.clone());
        let wm = int(1) - wp.clone();
        -(wp * lp.ln() + wm * lm.ln())
    }
}

fn c1() -> explab::Result<Outcome> {
    let mut worst = 0.0f64;
    let mut gap_slack = f64::INFINITY;
    for k in [1usize, 2] {
        let (rho, s1, s2) = gallery::coin_states(k)?;
        let kf = k as f64;
        let d = dc::rel_entropy(&rho, &s1)?.unwrap();
        let dinf = dc::max_rel_entropy(&rho, &s1)?.unwrap();
        let rinf = r_infty(&rho, &s1)?.unwrap();
        for (got, want) in [(d, kf * (2.0 / 3f64.sqrt()).ln()), (dinf, kf * 2f64.ln()), (rinf, kf * 4f64.ln())] {
            worst = worst.max((got - want).abs());
        }
        for i in 0..=10 {
            let r = kf * 4f64.ln() + 0.2 * i as f64;
            let h = hoeffding_anti_classical(&rho, &s1, r)?.max(hoeffding_anti_classical(&rho, &s2, r)?);
            gap_slack = gap_slack.min((r - d) - h - 0.5 * kf * 3f64.ln());
        }
    }
    Ok(outcome(
        worst <= 1e-9 && gap_slack >= -1e-9,
        format!("max |const err| = {worst:.1e} (tol 1e-9); min gap - k log sqrt3 = {gap_slack:.1e} (tol -1e-9)"),
    ))
}

fn c2() -> explab::Result<Outcome> {
    let mut tests = 0u64;
    let mut violations = 0u64;
    let mut worst: f64 = 0.0;
    for k in [1usize, 2] {
        for n in 1..=14 / k {
            let c = gallery::coin_finite_n_check(k, n)?;
            tests += c.tests;
            violations += c.violations_max;
            worst = worst.max(c.worst_ratio);
        }
    }
    Ok(outcome(
        violations == 0,
        format!("{tests} projective symmetric tests over kn <= 14, {violations} violations (exact integers); max ratio {worst:.6}"),
    ))
}

fn c3() -> explab::Result<Outcome> {
    let mut bad = Vec::new();
    let mut rows = 0;
    for n in 8u32..=24 {
        for i in 1..=6 {
            let r = 0.1 * i as f64;
            let m = (n as f64 * r).exp().ceil() as u64;
            let rep = gallery::interval_example_report(n, r, m)?;
            rows += rep.inequalities.len();
            let e = gallery::interval_constructed_test(n, r)?;
            let want = -(m as f64 * (-(2f64.powi(-(n as i32)))).ln_1p()).exp_m1();
            if (e.alpha - want).abs() > 1e-12 * want {
                bad.push(format!("alpha n={n} r={r:.1}"));
            }
            bad.extend(rep.failures().map(|f| format!("{} n={n} r={r:.1}", f.name)));
        }
    }
    let cyl = gallery::random_cylinder_tests(8, 2, 1000, 0)?;
    let min_slack = cyl.iter().map(|c| c.tradeoff_slack).fold(f64::INFINITY, f64::min);
    let pass = bad.is_empty() && min_slack >= -1e-12;
    Ok(outcome(
        pass,
        format!(
            "{rows} rows over n in 8..24, r in 0.1..0.6 (rate tol 3 log2/n), {} failed{}; 1000 cylinder tests at n=8 min trade-off slack {min_slack:.3e}",
            bad.len(),
            bad.first().map(|b| format!(" (first: {b})")).unwrap_or_default()
        ),
    ))
}

struct SteinStats {
    literal: f64,
    corrected: f64,
    top: f64,
}

fn stein_stats() -> explab::Result<SteinStats> {
    let mut s = SteinStats {
        literal: 0.0,
        corrected: 0.0,
        top: 0.0,
    };
    for i in 0..100u64 {
        let mut r = rng(0x5EED_0000 + i);
        let d = 2 + (i % 3) as usize;
        let (rho, s1, s2) = (random_pd_density(d, &mut r), random_pd_density(d, &mut r), random_pd_density(d, &mut r));
        let dd = gallery::diff_delta(&s1, &s2)?;
        let gap = |rho: &Herm| -> explab::Result<(f64, f64)> {
            let hat = gallery::hat_triple(rho, &s1, &s2)?;
            let g = geometric_mean(&hat.sigma1, &hat.sigma2, 0.5)?;
            let v = dq::rel_entropy(&hat.rho, &hat.sigma1)?.unwrap() - dq::rel_entropy(&hat.rho, &g)?.unwrap();
            Ok((v, rho.trace_product(&dd.diff)))
        };
        let (g, tr) = gap(&rho)?;
        s.literal = s.literal.max((g - 2.0 * tr).abs());
        s.corrected = s.corrected.max((g - tr).abs());
        let (gt, _) = gap(&Herm::outer(&dd.top))?;
        s.top = s.top.max((gt - dd.delta).abs());
    }
    Ok(s)
}

fn c5() -> explab::Result<Outcome> {
    let rep = gallery::minimal_report()?;
    let (rho, s1, s2) = gallery::minimal_triple();
    let g = geometric_mean(&s1, &s2, 0.5)?;
    let dg = dq::rel_entropy(&rho, &g)?.unwrap();
    let d1 = dq::rel_entropy(&rho, &s1)?.unwrap();
    let d2 = dq::rel_entropy(&rho, &s2)?.unwrap();
    let og = oracle::f(&oracle::d_geommean());
    let op = oracle::f(&oracle::d_pairwise());
    let err = (dg - og).abs().max((d1 - op).abs()).max((d2 - op).abs());
    let margin = d1.min(d2) - dg;
    Ok(outcome(
        rep.pass() && margin > 1e-3 && err <= 1e-10,
        format!("D(rho||G) = {dg:.12}, min_j D(rho||sigma_j) = {:.12}, margin {margin:.4} (> 1e-3); 128-bit oracle error {err:.1e} (tol 1e-10)", d1.min(d2)),
    ))
}

fn c6() -> explab::Result<Outcome> {
    let (rho, s1, s2) = gallery::minimal_triple();
    let rep = gallery::tune_direct_example(&rho, &s1, &s2, 0.2, 0.2)?;
    let strict = rep.inequalities.iter().filter(|i| !i.informational && matches!(i.relation, Relation::Lt | Relation::Gt));
    let min_strict = strict.map(|i| i.evaluate().0).fold(f64::INFINITY, f64::min);
    let j = rep.params.get("scan_j").copied().unwrap_or(f64::NAN);
    Ok(outcome(
        rep.pass() && min_strict >= 1e-6,
        format!(
            "{} rows, {} failed; min strict slack {min_strict:.3e} (>= 1e-6) at 1-nu = 2^-{j}",
            rep.inequalities.len(),
            rep.failures().count()
        ),
    ))
}

fn suite(name: &str, count: usize) -> explab::Result<Outcome> {
    let rep = run_suite(name, &SuiteConfig { tol: 1e-8, seed: 0, count })?;
    let failed: Vec<&str> = rep.failures().map(|f| f.name.as_str()).collect();
    Ok(outcome(
        failed.is_empty(),
        format!(
            "{count} instances, {} rows, worst slack {:.3e}{}",
            rep.inequalities.len(),
            rep.worst_slack(),
            if failed.is_empty() { String::new() } else { format!(", failed: {}", failed.join("; ")) }
        ),
    ))
}

fn c9() -> explab::Result<Outcome> {
    let (rho, sigma, _) = gallery::coin_states(1)?;
    let mut beta_bad = 0;
    let mut rate_bad = 0;
    let mut worst_rate = f64::NEG_INFINITY;
    let mut checks = 0;
    for r in [0.3, 0.6, 0.9, 1.2] {
        let h = hoeffding_anti_classical(&rho, &sigma, r)?;
        for n in 20..=200usize {
            let test = ball_test(&sigma, r, n)?;
            let mass = |p: &Weight| -> explab::Result<f64> {
                let terms = test
                    .types
                    .iter()
                    .zip(&test.accept)
                    .filter(|(_, &a)| a > 0.0)
                    .map(|(t, _)| type_stats(p, t).map(|s| s.1))
                    .collect::<explab::Result<Vec<_>>>()?;
                Ok(log_sum_exp(terms))
            };
            let (log_beta, log_keep) = (mass(&sigma)?, mass(&rho)?);
            checks += 1;
            if log_beta > ball_log_beta_bound(n, 2, r) {
                beta_bad += 1;
            }
            let dev = (-log_keep / n as f64 - h).abs();
            let tol = (2.0 * ((n + 1) as f64).ln() + 10.0) / n as f64;
            worst_rate = worst_rate.max(dev - tol);
            if dev > tol {
                rate_bad += 1;
            }
        }
    }
    Ok(outcome(
        beta_bad == 0 && rate_bad == 0,
        format!("{checks} (n, r) points: beta bound violations {beta_bad}, rate violations {rate_bad} (max dev - tol {worst_rate:.3})"),
    ))
}

struct PureStats {
    families: usize,
    no_threshold: usize,
    below_half: usize,
    rate_literal_bad: usize,
    rate_proven_bad: usize,
    bound_rate_bad: usize,
    points: usize,
}

fn pure_stats() -> explab::Result<PureStats> {
    let mut s = PureStats {
        families: 0,
        no_threshold: 0,
        below_half: 0,
        rate_literal_bad: 0,
        rate_proven_bad: 0,
        bound_rate_bad: 0,
        points: 0,
    };
    for i in 0..20u64 {
        let mut r = rng(0x9E3 + i);
        let (dim, k, m) = (3 + (i % 2) as usize, 2 + (i % 3) as usize, 1 + (i % 2) as usize);
        let psis: Vec<_> = (0..k).map(|_| random_unit_vector(dim, &mut r)).collect();
        let phis: Vec<_> = (0..m).map(|_| random_unit_vector(dim, &mut r)).collect();
        let steps = gallery::pure_state_steps(&psis, &phis, 30)?;
        let maxov = psis
            .iter()
            .flat_map(|p| phis.iter().map(move |f| p.dotc(f).norm_sqr()))
            .fold(0.0, f64::max);
        let c_min = -maxov.ln();
        s.families += 1;
        let Some(n0) = steps.iter().position(|x| x.lambda_min > 0.5) else {
            s.no_threshold += 1;
            continue;
        };
        for st in &steps[n0..] {
            let n = st.n as f64;
            s.points += 1;
            if st.lambda_min <= 0.5 {
                s.below_half += 1;
            }
            let rate = -st.beta_exact.ln() / n;
            if (rate - c_min).abs() > 2.0 * c_min / n + 1e-12 {
                s.rate_literal_bad += 1;
            }
            if rate > c_min + 1e-9 || rate < c_min - (2.0 * k as f64).ln() / n - 1e-12 {
                s.rate_proven_bad += 1;
            }
            let bound_rate = -st.beta_bound.ln() / n;
            if (bound_rate - c_min).abs() > 2.0 * c_min / n + 1e-12 {
                s.bound_rate_bad += 1;
            }
        }
    }
    Ok(s)
}

fn main() {
    let threads = std::env::var("EXPLAB_THREADS").ok().and_then(|v| v.parse().ok());
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().ok();
    }
    println!("acceptance ({} build)", if cfg!(debug_assertions) { "debug; runtime budgets not enforced" } else { "release" });
    let mut h = Harness {
        unexpected: vec![],
        deviations: vec![],
    };
    h.run("C1", "coin constants and sc gap", secs(1), c1);
    h.run("C2", "coin finite-n bound", secs(30), c2);
    h.run("C3", "interval example", secs(60), c3);

    h.run("C4-literal", "Stein gap = 2 Tr rho diff", secs(10), || {
        let s = stein_stats()?;
        Ok(outcome(s.literal <= 1e-8, format!("max |gap - 2 Tr rho diff| = {:.3e} on 100 triples (tol 1e-8)", s.literal)))
    });
    h.run("C4", "Stein gap = Tr rho diff; top state gap = delta", secs(10), || {
        let s = stein_stats()?;
        Ok(outcome(
            s.corrected <= 1e-8 && s.top <= 1e-8,
            format!("max |gap - Tr rho diff| = {:.3e}, max |gap_top - delta| = {:.3e} (tol 1e-8)", s.corrected, s.top),
        ))
    });
    h.run("C5", "minimal 2x2 Stein separation", secs(1), c5);
    h.run("C6", "direct-exponent separation at (0.2, 0.2)", secs(10), c6);
    h.run("C7", "Renyi ordering", secs(5), || suite("renyi_order", 100));
    h.run("C8", "Hoeffding machinery", secs(20), || suite("hoeffding", 50));
    h.run("C9", "ball test", secs(30), c9);
    h.run("C10", "type rounding", secs(5), || suite("rounding", 1000));
    h.run("C11", "adversarial bound chain and certificates", secs(60), || {
        let mut o = suite("certificates", 20)?;
        o.detail.push_str(&format!(" (certificate tol {CERT_TOL:e})"));
        Ok(o)
    });

    h.run("C12", "pure states: Gram threshold and beta rate", secs(5), || {
        let s = pure_stats()?;
        Ok(outcome(
            s.no_threshold == 0 && s.below_half == 0 && s.rate_proven_bad == 0 && s.rate_literal_bad == 0,
            format!(
                "{} families, n <= 30, {} points past threshold: no threshold {}, lambda_min <= 1/2 {}; \
                 |rate - C_min| > 2|log max overlap|/n at {}; C_min - log(2k)/n <= rate <= C_min violated at {}",
                s.families, s.points, s.no_threshold, s.below_half, s.rate_literal_bad, s.rate_proven_bad
            ),
        ))
    });
    h.run("C12-bound", "pure states: rate of 2k max^n within 2|log max overlap|/n", secs(5), || {
        let s = pure_stats()?;
        Ok(outcome(s.bound_rate_bad == 0, format!("outside at {} of {} points (deviation is exactly log(2k)/n)", s.bound_rate_bad, s.points)))
    });
    h.run("C13", "geometric mean and semiclassical combiner", secs(10), || {
        let a = suite("geommean", 100)?;
        let b = suite("semiclassical", 50)?;
        Ok(outcome(a.pass && b.pass, format!("geommean: {}; semiclassical: {}", a.detail, b.detail)))
    });

    println!(
        "summary: {} unexpected failure(s){}; known deviations failing as expected: {}",
        h.unexpected.len(),
        if h.unexpected.is_empty() { String::new() } else { format!(" ({})", h.unexpected.join(", ")) },
        if h.deviations.is_empty() { "none".into() } else { h.deviations.join(", ") }
    );
    if !h.unexpected.is_empty() {
        std::process::exit(1);
    }
}

//! Fair coin against two biased coins, on `k`-fold tensor powers.

use super::{CounterexampleReport, Inequality, Relation};
use crate::classical::ClassicalWeight;
use crate::divergence::classical as dc;
use crate::error::{Error, Result};
use crate::tradeoff::{hoeffding_anti_classical, r_infty};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

type W = ClassicalWeight<f64>;

/// `(ρ, σ₁, σ₂)^{⊗k}` with heads probabilities `1/2, 1/4, 3/4`.
pub fn coin_states(k: usize) -> Result<(W, W, W)> {
    if k == 0 {
        return Err(Error::OutOfRange { what: "k", value: 0.0 });
    }
    let rho = W::new(vec![0.5, 0.5])?;
    let s1 = W::new(vec![0.25, 0.75])?;
    let s2 = W::new(vec![0.75, 0.25])?;
    Ok((rho.kron_power(k), s1.kron_power(k), s2.kron_power(k)))
}

/// Exhaustive check of `1 − α_n ≤ (2/√3)^{kn} β_n` over projective tests that
/// depend on the number of heads among `kn` tosses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteNCheck {
    pub k: usize,
    pub n: usize,
    pub tests: u64,
    /// Tests violating the bound with `β_n = max_j β_j`.
    pub violations_max: u64,
    /// Tests violating the stronger bound with `β_n` replaced by `(β₁ + β₂)/2`.
    pub violations_avg: u64,
    /// Largest `(1 − α_n)/((2/√3)^{kn} max_j β_j)`, in floating point.
    pub worst_ratio: f64,
}

/// Largest `kn` accepted by [`coin_finite_n_check`].
pub const COIN_KN_CAP: usize = 20;

/// All computations are in integers scaled by `4^{kn}`: a type with `m` heads has
/// `ρ`-mass `C(kn,m)·2^{kn}`, `σ₁`-mass `C(kn,m)·3^{kn−m}`, `σ₂`-mass `C(kn,m)·3^m`.
/// The bound squared reads `3^{kn}·A² ≤ 4^{kn}·B²`.
pub fn coin_finite_n_check(k: usize, n: usize) -> Result<FiniteNCheck> {
    let kn = k * n;
    if kn == 0 {
        return Err(Error::OutOfRange { what: "kn", value: 0.0 });
    }
    if kn > COIN_KN_CAP {
        return Err(Error::CapExceeded {
            required: kn,
            cap: COIN_KN_CAP,
        });
    }
    let big = |x: u64| BigUint::from(x);
    let pow = |b: u64, e: usize| big(b).pow(e as u32);
    let binom: Vec<BigUint> = (0..=kn).map(|m| BigUint::from(crate::special::binomial(kn as u64, m as u64))).collect();
    let a: Vec<BigUint> = binom.iter().map(|c| c * pow(2, kn)).collect();
    let b1: Vec<BigUint> = (0..=kn).map(|m| &binom[m] * pow(3, kn - m)).collect();
    let b2: Vec<BigUint> = (0..=kn).map(|m| &binom[m] * pow(3, m)).collect();
    let (three, four) = (pow(3, kn), pow(4, kn));
    let tests = 1u64 << (kn + 1);
    let scale = (2.0 / 3f64.sqrt()).powi(kn as i32);
    let (vmax, vavg, worst) = (0..tests)
        .into_par_iter()
        .map(|mask| {
            let (mut sa, mut s1, mut s2) = (BigUint::ZERO, BigUint::ZERO, BigUint::ZERO);
            for m in 0..=kn {
                if mask >> m & 1 == 1 {
                    sa += &a[m];
                    s1 += &b1[m];
                    s2 += &b2[m];
                }
            }
            let lhs = &three * &sa * &sa;
            let bmax = (&s1).max(&s2).clone();
            let over_max = lhs > &four * &bmax * &bmax;
            let sum = &s1 + &s2;
            // average form: 3^{kn} A² ≤ 4^{kn} ((B₁+B₂)/2)²
            let over_avg = &lhs * 4u32 > &four * &sum * &sum;
            let ratio = if bmax == BigUint::ZERO {
                if sa == BigUint::ZERO {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                to_f64(&sa) / (scale * to_f64(&bmax))
            };
            (over_max as u64, over_avg as u64, ratio)
        })
        .reduce(|| (0, 0, 0.0), |x, y| (x.0 + y.0, x.1 + y.1, x.2.max(y.2)));
    Ok(FiniteNCheck {
        k,
        n,
        tests,
        violations_max: vmax,
        violations_avg: vavg,
        worst_ratio: worst,
    })
}

fn to_f64(x: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Constants, strong-converse gap on an `r` grid, and the exhaustive finite-`n`
/// check for every `n` with `kn ≤ kn_max`.
pub fn coin_example_report(k: usize, r_grid: &[f64], kn_max: usize) -> Result<CounterexampleReport> {
    let (rho, s1, s2) = coin_states(k)?;
    let kf = k as f64;
    let d = dc::rel_entropy(&rho, &s1)?.unwrap();
    let dinf = dc::max_rel_entropy(&rho, &s1)?.unwrap();
    let rinf = r_infty(&rho, &s1)?.unwrap();
    let exact = [
        kf * (2.0 / 3f64.sqrt()).ln(),
        kf * 2f64.ln(),
        kf * 4f64.ln(),
    ];
    let mut rep = CounterexampleReport::new("coin");
    rep.param("k", kf)
        .quantity("D", d)
        .quantity("D_inf", dinf)
        .quantity("r_inf", rinf);
    rep.push(Inequality::finite("D == k log(2/sqrt 3)", d, Relation::Eq, exact[0], 1e-9))
        .push(Inequality::finite("D_inf == k log 2", dinf, Relation::Eq, exact[1], 1e-9))
        .push(Inequality::finite("r_inf == k log 4", rinf, Relation::Eq, exact[2], 1e-9))
        .push(Inequality::finite(
            "D(rho||sigma1) == D(rho||sigma2)",
            d,
            Relation::Eq,
            dc::rel_entropy(&rho, &s2)?.unwrap(),
            1e-12,
        ));

    let rows = r_grid
        .par_iter()
        .map(|&r| -> Result<Vec<(String, f64, Inequality)>> {
            let h = hoeffding_anti_classical(&rho, &s1, r)?.max(hoeffding_anti_classical(&rho, &s2, r)?);
            let lower = r - d;
            let gap = lower - h;
            let mut out = vec![];
            if r > d {
                out.push((
                    format!("H*_r r={r}"),
                    h,
                    Inequality::finite(format!("gap > 0 at r={r}"), gap, Relation::Gt, 0.0, 0.0),
                ));
            }
            if r >= exact[2] {
                out.push((
                    format!("gap r={r}"),
                    gap,
                    Inequality::finite(format!("gap >= k log sqrt 3 at r={r}"), gap, Relation::Ge, 0.5 * kf * 3f64.ln(), 1e-9),
                ));
            }
            if out.is_empty() {
                out.push((format!("H*_r r={r}"), h, Inequality::finite(format!("H*_r >= 0 at r={r}"), h, Relation::Ge, 0.0, 1e-12)));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    for (name, v, row) in rows.into_iter().flatten() {
        rep.quantity(name, v);
        rep.push(row);
    }

    for n in 1..=kn_max / k {
        let c = coin_finite_n_check(k, n)?;
        rep.quantity(format!("worst ratio kn={}", k * n), c.worst_ratio);
        rep.push(Inequality::finite(
            format!("1-alpha <= (2/sqrt3)^kn max_j beta_j, kn={} ({} tests, exact)", k * n, c.tests),
            c.violations_max as f64,
            Relation::Eq,
            0.0,
            0.0,
        ))
        .push(Inequality::finite(
            format!("1-alpha <= (2/sqrt3)^kn avg_j beta_j, kn={} (exact)", k * n),
            c.violations_avg as f64,
            Relation::Eq,
            0.0,
            0.0,
        ));
    }
    rep.note("composite lower bound on the strong converse exponent: r - D");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k1_constants() {
        let rep = coin_example_report(1, &[0.2, 0.5, 1.4, 1.6], 8).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures().collect::<Vec<_>>());
        assert!((rep.quantities["D"].unwrap() - 0.143841036).abs() < 1e-9);
    }

    #[test]
    fn finite_n_equality_case_is_tight() {
        // m = kn/2 alone attains the AM-GM bound with equality
        let c = coin_finite_n_check(1, 4).unwrap();
        assert_eq!(c.violations_max, 0);
        assert!((c.worst_ratio - 1.0).abs() < 1e-12);
        assert!(coin_finite_n_check(1, 21).is_err());
    }
}

//! Uniform null on `[0,1]` against the countable mixture `Σ q_k σ_k`, with
//! `σ_k = 2·1_{H_k}` and `H_k = {x : k-th binary digit of x is 0}`.
//!
//! The events `H_k^n ⊂ [0,1]^n` are independent under the uniform measure, so
//! every test measurable with respect to finitely many digits has closed-form errors.

use super::{CounterexampleReport, Inequality, Relation};
use crate::error::{Error, Result};
use crate::random::{rng, Rng64};
use crate::special::tail_inverse_squares;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{LN_2, PI};

const SIX_OVER_PI2: f64 = 6.0 / (PI * PI);

/// `n` copies and digit depth `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalModel {
    pub n: u32,
    pub m: u64,
}

impl IntervalModel {
    pub fn new(n: u32, m: u64) -> Result<Self> {
        if n == 0 || n > 52 {
            return Err(Error::OutOfRange { what: "n", value: n as f64 });
        }
        if m == 0 {
            return Err(Error::OutOfRange { what: "depth m", value: 0.0 });
        }
        Ok(Self { n, m })
    }

    /// Mixture weight `q_k = (6/π²)/k²`.
    pub fn q(k: u64) -> f64 {
        SIX_OVER_PI2 / (k as f64 * k as f64)
    }

    /// `Σ_{k>m} q_k`.
    pub fn q_tail(m: u64) -> f64 {
        SIX_OVER_PI2 * tail_inverse_squares(m)
    }

    /// `λ(H_k^n) = 2^{−n}`.
    pub fn cell(&self) -> f64 {
        0.5f64.powi(self.n as i32)
    }

    /// `(1 − 2^{−n})^j`.
    pub fn miss(&self, j: u64) -> f64 {
        (j as f64 * (-self.cell()).ln_1p()).exp()
    }
}

/// Errors of the test that rejects the null on `∪_{k≤m_n} H_k^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntervalErrors {
    pub n: u32,
    pub r: f64,
    pub m_n: u64,
    pub alpha: f64,
    pub beta: f64,
    /// `sup_k σ_k^{⊗n}(K_n)`.
    pub beta_supp: f64,
}

/// `m_n = ⌈e^{nr}⌉`, `α_n = 1 − (1−2^{−n})^{m_n}`, `β_n = (1−2^{−n})^{m_n} Σ_{k>m_n} q_k`.
pub fn interval_constructed_test(n: u32, r: f64) -> Result<IntervalErrors> {
    if !(r > 0.0) {
        return Err(Error::OutOfRange { what: "r", value: r });
    }
    let x = (n as f64 * r).exp().ceil();
    if x > 1e15 {
        return Err(Error::CapExceeded {
            required: usize::MAX,
            cap: 1_000_000_000_000_000,
        });
    }
    let m_n = x as u64;
    let model = IntervalModel::new(n, m_n)?;
    let keep = model.miss(m_n);
    Ok(IntervalErrors {
        n,
        r,
        m_n,
        alpha: -(m_n as f64 * (-model.cell()).ln_1p()).exp_m1(),
        beta: keep * IntervalModel::q_tail(m_n),
        beta_supp: keep,
    })
}

/// Report for the constructed test at `(n, r)`; `depth` is the digit depth of
/// the test family and must reach `m_n`.
pub fn interval_example_report(n: u32, r: f64, depth: u64) -> Result<CounterexampleReport> {
    let e = interval_constructed_test(n, r)?;
    if depth < e.m_n {
        return Err(Error::DepthTooSmall { m: depth, needed: e.m_n });
    }
    let model = IntervalModel::new(n, depth)?;
    let two_n = 2f64.powi(n as i32);
    let nf = n as f64;
    let mut rep = CounterexampleReport::new("interval");
    rep.param("n", nf)
        .param("r", r)
        .param("depth", depth as f64)
        .param("m_n", e.m_n as f64)
        .quantity("alpha", e.alpha)
        .quantity("beta", e.beta)
        .quantity("beta_supp", e.beta_supp);

    // geometric-sum form of α as an independent evaluation
    if e.m_n <= 10_000_000 {
        let mut s = 0.0;
        let q = 1.0 - model.cell();
        let mut p = 1.0;
        for _ in 0..e.m_n {
            s += p;
            p *= q;
        }
        let alt = model.cell() * s;
        rep.push(Inequality::finite("alpha == 2^-n sum_k (1-2^-n)^k", e.alpha, Relation::Eq, alt, 1e-12 * alt.max(1e-300)));
    }
    rep.push(Inequality::finite("beta <= 6/(pi^2 m_n)", e.beta, Relation::Le, SIX_OVER_PI2 / e.m_n as f64, 0.0))
        .push(Inequality::finite("alpha <= m_n 2^-n", e.alpha, Relation::Le, e.m_n as f64 * model.cell(), 1e-15))
        .push(Inequality::finite(
            "2 alpha + (pi^2/3) 2^n beta >= 1",
            2.0 * e.alpha + PI * PI / 3.0 * two_n * e.beta,
            Relation::Ge,
            1.0,
            1e-12,
        ));
    if (e.m_n as f64) <= two_n {
        let m = e.m_n as f64;
        rep.push(Inequality::finite(
            "2^(n+1) alpha + (pi^2/3) m_n^2 beta >= m_n",
            2.0 * two_n * e.alpha + PI * PI / 3.0 * m * m * e.beta,
            Relation::Ge,
            m,
            1e-12 * m,
        ));
    }
    rep.push(Inequality::finite(
        "alpha + beta_supp >= 1 - (1-2^-n)^(2^n)",
        e.alpha + e.beta_supp,
        Relation::Ge,
        1.0 - model.miss(1u64 << n.min(62)),
        1e-12,
    ));
    let rate_a = -e.alpha.ln() / nf;
    let rate_b = -e.beta.ln() / nf;
    let tol = 3.0 * LN_2 / nf;
    rep.quantity("rate_alpha", rate_a).quantity("rate_beta", rate_b);
    rep.push(Inequality::finite("|rate_alpha - max(log2 - r, 0)|", (rate_a - (LN_2 - r).max(0.0)).abs(), Relation::Le, tol, 0.0))
        .push(Inequality::finite("|rate_beta - r|", (rate_b - r).abs(), Relation::Le, tol, 0.0));
    Ok(rep)
}

/// A union of depth-`depth` digit cylinders in `[0,1]^n`, as a bitset over the
/// `2^{n·depth}` cylinders (bit `i·depth + d` is digit `d+1` of coordinate `i`).
#[derive(Debug, Clone)]
pub struct CylinderTest {
    pub n: u32,
    pub depth: u32,
    pub member: Vec<bool>,
}

/// Exact `(α, β)` of a cylinder test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CylinderErrors {
    pub alpha: f64,
    pub beta: f64,
    /// `2α + (π²/3)2ⁿβ − 1`.
    pub tradeoff_slack: f64,
}

const CYLINDER_CAP: u32 = 24;

impl CylinderTest {
    fn in_h(&self, cyl: usize, k: u32) -> bool {
        (0..self.n).all(|i| cyl >> (i * self.depth + k - 1) & 1 == 0)
    }

    /// `β = 2ⁿ[Σ_{k≤depth} q_k λ(H_k^n ∩ K) + λ(K) 2^{−n} Σ_{k>depth} q_k]`; deeper digits are independent of `K`.
    pub fn errors(&self) -> CylinderErrors {
        let total = self.member.len() as f64;
        let mut inside = 0u64;
        let mut hits = vec![0u64; self.depth as usize];
        for (cyl, &m) in self.member.iter().enumerate() {
            if m {
                inside += 1;
                for k in 1..=self.depth {
                    if self.in_h(cyl, k) {
                        hits[k as usize - 1] += 1;
                    }
                }
            }
        }
        let vol = inside as f64 / total;
        let two_n = 2f64.powi(self.n as i32);
        let head: f64 = hits
            .iter()
            .enumerate()
            .map(|(k, &h)| IntervalModel::q(k as u64 + 1) * h as f64 / total)
            .sum();
        let beta = two_n * head + vol * IntervalModel::q_tail(self.depth as u64);
        let alpha = 1.0 - vol;
        CylinderErrors {
            alpha,
            beta,
            tradeoff_slack: 2.0 * alpha + PI * PI / 3.0 * two_n * beta - 1.0,
        }
    }
}

fn random_cylinder(n: u32, depth: u32, r: &mut Rng64) -> CylinderTest {
    let cells = 1usize << (n * depth);
    let flip = [0.0, 1e-3, 1e-2, 0.1, 0.5][r.random_range(0..5)];
    let excluded: Vec<u32> = (1..=depth).filter(|_| r.random_bool(0.5)).collect();
    let mut t = CylinderTest {
        n,
        depth,
        member: vec![true; cells],
    };
    for cyl in 0..cells {
        let mut m = !excluded.iter().any(|&k| t.in_h(cyl, k));
        if flip > 0.0 && r.random_bool(flip) {
            m = !m;
        }
        t.member[cyl] = m;
    }
    t
}

/// `count` seeded random cylinder tests at depth `depth`, with exact errors.
pub fn random_cylinder_tests(n: u32, depth: u32, count: usize, seed: u64) -> Result<Vec<CylinderErrors>> {
    if n * depth > CYLINDER_CAP || depth == 0 {
        return Err(Error::CapExceeded {
            required: (n * depth) as usize,
            cap: CYLINDER_CAP as usize,
        });
    }
    Ok((0..count)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(seed.wrapping_add(i as u64));
            random_cylinder(n, depth, &mut r).errors()
        })
        .collect())
}

/// Seeded Monte Carlo estimate of the constructed test's errors (demonstration only).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub samples: usize,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// The index of the first digit that vanishes in all `n` coordinates is
/// geometric with parameter `2^{−n}`; the null is rejected iff it is `≤ m_n`.
pub fn interval_monte_carlo(n: u32, r: f64, samples: usize, seed: u64) -> Result<McEstimate> {
    let e = interval_constructed_test(n, r)?;
    let p = 0.5f64.powi(n as i32);
    let mut g = rng(seed);
    let first_zero = |g: &mut Rng64| -> f64 {
        let u: f64 = g.random();
        ((1.0 - u).ln() / (-p).ln_1p()).floor() + 1.0
    };
    let mut rejects = 0usize;
    let mut accepts_alt = 0usize;
    for _ in 0..samples {
        if first_zero(&mut g) <= e.m_n as f64 {
            rejects += 1;
        }
        // alternative: draw k from q, then digit k is zero in every coordinate
        let u: f64 = g.random();
        let k = sample_q(u);
        if k > e.m_n && first_zero(&mut g) > e.m_n as f64 {
            accepts_alt += 1;
        }
    }
    Ok(McEstimate {
        samples,
        alpha_hat: rejects as f64 / samples as f64,
        beta_hat: accepts_alt as f64 / samples as f64,
        alpha: e.alpha,
        beta: e.beta,
    })
}

/// Inverse CDF of `q`: the smallest `k` with `Σ_{j>k} q_j ≤ 1 − u`.
fn sample_q(u: f64) -> u64 {
    let target = 1.0 - u;
    let (mut lo, mut hi) = (0u64, 1u64);
    while IntervalModel::q_tail(hi) > target {
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi == u64::MAX {
            return hi;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if IntervalModel::q_tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n10_r03() {
        let e = interval_constructed_test(10, 0.3).unwrap();
        assert_eq!(e.m_n, 21);
        assert!((e.alpha - (1.0 - (1023.0f64 / 1024.0).powi(21))).abs() < 1e-15);
        let rep = interval_example_report(10, 0.3, 21).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures().collect::<Vec<_>>());
        assert!(matches!(interval_example_report(10, 0.3, 20), Err(Error::DepthTooSmall { .. })));
    }

    #[test]
    fn q_tail_matches_partial_sums() {
        let m = 50u64;
        let head: f64 = (m + 1..=2_000_000).map(IntervalModel::q).sum();
        let rest = SIX_OVER_PI2 / 2_000_000.5; // midpoint tail estimate
        assert!((IntervalModel::q_tail(m) - head - rest).abs() < 1e-13);
        let all: f64 = IntervalModel::q_tail(0);
        assert!((all - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cylinder_model_reproduces_constructed_test() {
        // reject on H_1 ∪ H_2 at n = 3, depth 2
        let n = 3;
        let mut t = CylinderTest {
            n,
            depth: 2,
            member: vec![true; 1 << 6],
        };
        for c in 0..t.member.len() {
            t.member[c] = !(t.in_h(c, 1) || t.in_h(c, 2));
        }
        let e = t.errors();
        let model = IntervalModel::new(n, 2).unwrap();
        assert!((e.alpha - (1.0 - model.miss(2))).abs() < 1e-15);
        assert!((e.beta - model.miss(2) * IntervalModel::q_tail(2)).abs() < 1e-15);
    }

    #[test]
    fn random_cylinders_obey_tradeoff() {
        let v = random_cylinder_tests(4, 2, 50, 9).unwrap();
        assert!(v.iter().all(|e| e.tradeoff_slack >= -1e-12));
    }

    #[test]
    fn monte_carlo_is_close() {
        let mc = interval_monte_carlo(4, 0.3, 200_000, 5).unwrap();
        assert!((mc.alpha_hat - mc.alpha).abs() < 0.01);
        assert!((mc.beta_hat - mc.beta).abs() < 0.01);
        assert_eq!(mc, interval_monte_carlo(4, 0.3, 200_000, 5).unwrap());
    }
}

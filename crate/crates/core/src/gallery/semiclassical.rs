//! Combining pairwise tests into one projective test when every null state
//! commutes with every alternative.

use super::{CounterexampleReport, Inequality, Relation};
use crate::error::{Error, Result};
use crate::hermcore::{spectral_apply, support_projection, CMat, HermitianOperator, EPS_SUPP};
use crate::random::{random_pd_density, random_unitary, rng, Rng64};
use rand::Rng;

type Herm = HermitianOperator;

const COMMUTE_TOL: f64 = 1e-10;

/// Spectral projections of `a`, grouping eigenvalues closer than `1e-9·max(1, ‖a‖)`.
fn spectral_projections(a: &Herm) -> Result<Vec<CMat>> {
    let e = a.eig()?;
    let d = a.dim();
    let tol = 1e-9 * e.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=d {
        if k == d || e.values[k] - e.values[k - 1] > tol {
            let v = e.vectors.columns(start, k - start);
            out.push(&v * v.adjoint());
            start = k;
        }
    }
    Ok(out)
}

/// Pinching of `t` by the joint spectral projections of commuting `a`, `b`.
/// Leaves `Tr a t` and `Tr b t` unchanged.
pub fn pinch(t: &Herm, a: &Herm, b: &Herm) -> Result<Herm> {
    let pa = spectral_projections(a)?;
    let pb = spectral_projections(b)?;
    let d = t.dim();
    let mut acc = CMat::zeros(d, d);
    for p in &pa {
        for q in &pb {
            let j = p * q;
            if j.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12 {
                continue;
            }
            acc += &j * t.matrix() * j.adjoint();
        }
    }
    Ok(Herm::hermitize(acc))
}

/// `f(T)` with `f = 1_{[1/2, 1]}`.
pub fn to_projective(t: &Herm) -> Result<Herm> {
    spectral_apply(t, |x| if x >= 0.5 { 1.0 } else { 0.0 })
}

fn alpha(a: &Herm, t: &Herm) -> f64 {
    a.trace() - a.trace_product(t)
}

fn beta(b: &Herm, t: &Herm) -> f64 {
    b.trace_product(t)
}

/// One combination step: `Q = (Σ_i f(pinch_{A_i,B}(T_i)))⁰`.
fn combine_once(a: &[Herm], b: &Herm, tests: &[Herm]) -> Result<Herm> {
    let d = b.dim();
    let mut sum = Herm::zeros(d);
    for (ai, ti) in a.iter().zip(tests) {
        sum = sum.add(&to_projective(&pinch(ti, ai, b)?)?);
    }
    if sum.max_abs() == 0.0 {
        return Ok(sum);
    }
    Ok(support_projection(&sum, EPS_SUPP)?.projector())
}

/// The combined test and its bound report.
#[derive(Debug, Clone)]
pub struct SemiclassicalOutcome {
    pub q: Herm,
    pub report: CounterexampleReport,
}

/// Builds a projective `Q` from tests `T_ij` (`tests[i][j]`) with
/// `max_i α(ρ_i|Q) ≤ 4k ΣΣ α(ρ_i|T_ij)` and `max_j β(σ_j|Q) ≤ 4 ΣΣ β(σ_j|T_ij)`.
pub fn semiclassical_combine(rhos: &[Herm], sigmas: &[Herm], tests: &[Vec<Herm>]) -> Result<SemiclassicalOutcome> {
    let (k, m) = (rhos.len(), sigmas.len());
    if k == 0 || m == 0 || tests.len() != k || tests.iter().any(|row| row.len() != m) {
        return Err(Error::ShapeMismatch(format!("need a {k}x{m} grid of tests")));
    }
    let d = rhos[0].dim();
    for x in rhos.iter().chain(sigmas).chain(tests.iter().flatten()) {
        if x.dim() != d {
            return Err(Error::DimMismatch { left: d, right: x.dim() });
        }
    }
    for (i, r) in rhos.iter().enumerate() {
        for (j, s) in sigmas.iter().enumerate() {
            if r.commutator_norm(s) > COMMUTE_TOL {
                return Err(Error::NotSemiClassical(i, j));
            }
        }
    }
    let mut rep = CounterexampleReport::new("semiclassical");
    rep.param("k", k as f64).param("m", m as f64).param("dim", d as f64);

    // first pass: one alternative at a time
    let mut qs = Vec::with_capacity(m);
    for (j, s) in sigmas.iter().enumerate() {
        let col: Vec<Herm> = tests.iter().map(|row| row[j].clone()).collect();
        let qj = combine_once(rhos, s, &col)?;
        let a_max = rhos.iter().map(|r| alpha(r, &qj)).fold(f64::NEG_INFINITY, f64::max);
        let a_sum: f64 = rhos.iter().zip(&col).map(|(r, t)| alpha(r, t)).sum();
        let b_sum: f64 = col.iter().map(|t| beta(s, t)).sum();
        rep.push(Inequality::finite(format!("max_i alpha(rho_i|Q_{j}) <= 2 sum_i alpha(rho_i|T_i{j})"), a_max, Relation::Le, 2.0 * a_sum, 1e-12))
            .push(Inequality::finite(format!("beta(sigma_{j}|Q_{j}) <= 2 sum_i beta(sigma_{j}|T_i{j})"), beta(s, &qj), Relation::Le, 2.0 * b_sum, 1e-12));
        qs.push(qj);
    }

    // second pass: roles swapped, against the sum of the null states
    let abar = rhos.iter().skip(1).fold(rhos[0].clone(), |acc, r| acc.add(r));
    let id = Herm::identity(d);
    let flipped: Vec<Herm> = qs.iter().map(|q| id.sub(q)).collect();
    let q_tilde = combine_once(sigmas, &abar, &flipped)?;
    let q = id.sub(&q_tilde);

    let idem = Herm::hermitize(q.matrix() * q.matrix()).max_abs_diff(&q);
    let a_max = rhos.iter().map(|r| alpha(r, &q)).fold(f64::NEG_INFINITY, f64::max);
    let b_max = sigmas.iter().map(|s| beta(s, &q)).fold(f64::NEG_INFINITY, f64::max);
    let a_sum: f64 = rhos.iter().zip(tests).map(|(r, row)| row.iter().map(|t| alpha(r, t)).sum::<f64>()).sum();
    let b_sum: f64 = tests
        .iter()
        .map(|row| row.iter().zip(sigmas).map(|(t, s)| beta(s, t)).sum::<f64>())
        .sum();
    rep.quantity("max_i alpha(rho_i|Q)", a_max)
        .quantity("max_j beta(sigma_j|Q)", b_max)
        .quantity("sum alpha(rho_i|T_ij)", a_sum)
        .quantity("sum beta(sigma_j|T_ij)", b_sum);
    rep.push(Inequality::finite("Q^2 == Q", idem, Relation::Le, 0.0, 1e-10))
        .push(Inequality::finite("max_i alpha(rho_i|Q) <= 4k sum alpha", a_max, Relation::Le, 4.0 * k as f64 * a_sum, 1e-12))
        .push(Inequality::finite("max_j beta(sigma_j|Q) <= 4 sum beta", b_max, Relation::Le, 4.0 * b_sum, 1e-12));
    Ok(SemiclassicalOutcome { q, report: rep })
}

fn rotate(u: &CMat, a: &Herm) -> Herm {
    a.congruence(u)
}

fn random_test(d: usize, r: &mut Rng64) -> Herm {
    let u = random_unitary(d, r);
    let ev: Vec<f64> = (0..d).map(|_| r.random::<f64>()).collect();
    rotate(&u, &Herm::diag(&ev))
}

/// Random semiclassical instance on `ℂ²⊕ℂ²` (in a random basis): alternatives
/// are `c_j I ⊕ diag`, null states are `X_i ⊕ diag` with generic `X_i`, so the
/// null states need not commute with each other. With `np_tests` the pairwise
/// tests are the projections `{ρ_i > σ_j}`; otherwise random tests.
pub fn random_semiclassical_instance(k: usize, m: usize, np_tests: bool, seed: u64) -> (Vec<Herm>, Vec<Herm>, Vec<Vec<Herm>>) {
    let mut r = rng(seed);
    let u = random_unitary(4, &mut r);
    let pos = |r: &mut Rng64| 0.05 + r.random::<f64>();
    let sigmas: Vec<Herm> = (0..m)
        .map(|_| {
            let c = pos(&mut r);
            let blk = Herm::diag(&[c, c, pos(&mut r), pos(&mut r)]);
            let t = blk.trace();
            rotate(&u, &blk.scale(1.0 / t))
        })
        .collect();
    let rhos: Vec<Herm> = (0..k)
        .map(|_| {
            let x = random_pd_density(2, &mut r).scale(pos(&mut r));
            let tail = Herm::diag(&[pos(&mut r), pos(&mut r)]);
            let blk = Herm::direct_sum(&[&x, &tail]);
            let t = blk.trace();
            rotate(&u, &blk.scale(1.0 / t))
        })
        .collect();
    let tests = rhos
        .iter()
        .map(|rho| {
            sigmas
                .iter()
                .map(|s| {
                    if np_tests {
                        spectral_apply(&rho.sub(s), |x| if x > 0.0 { 1.0 } else { 0.0 }).expect("hermitian difference")
                    } else {
                        random_test(4, &mut r)
                    }
                })
                .collect()
        })
        .collect();
    (rhos, sigmas, tests)
}

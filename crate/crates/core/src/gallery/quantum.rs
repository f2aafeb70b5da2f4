//! Block constructions separating composite and pairwise exponents for one null
//! state against two non-commuting alternatives.

use super::{CounterexampleReport, Inequality, Relation};
use crate::classical::ClassicalWeight;
use crate::divergence::classical as dc;
use crate::divergence::quantum as dq;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::hermcore::{geometric_mean, is_definite, lambda_extremes, logn, CMat, HermitianOperator, C64, EPS_SUPP};
use crate::tradeoff::{d2, hoeffding_classical, solve_d2};
use nalgebra::DVector;
use serde::Serialize;

type Herm = HermitianOperator;

/// Commutator norm below which two alternatives count as commuting.
const COMMUTE_TOL: f64 = 1e-10;

fn require_pd(a: &Herm) -> Result<()> {
    if is_definite(a, EPS_SUPP)? {
        Ok(())
    } else {
        let e = a.eig()?;
        Err(Error::NotPd { min_eig: e.values[0] })
    }
}

/// `diff(A, B) = log(A#B) − (log A + log B)/2` and `δ = λ_max(diff)`.
#[derive(Debug, Clone)]
pub struct DiffDelta {
    pub diff: Herm,
    pub delta: f64,
    pub trace: f64,
    /// Unit eigenvector of `diff` for `δ`.
    pub top: DVector<C64>,
}

pub fn diff_delta(a: &Herm, b: &Herm) -> Result<DiffDelta> {
    require_pd(a)?;
    require_pd(b)?;
    let g = geometric_mean(a, b, 0.5)?;
    let diff = logn(&g)?.sub(&logn(a)?.add(&logn(b)?).scale(0.5));
    let e = diff.eig()?;
    let d = diff.dim();
    Ok(DiffDelta {
        trace: diff.trace(),
        delta: e.values[d - 1],
        top: e.vectors.column(d - 1).into_owned(),
        diff,
    })
}

/// `ρ̂ = ½ ρ⊕ρ`, `σ̂₁ = ½ σ₁⊕σ₂`, `σ̂₂ = ½ σ₂⊕σ₁`.
#[derive(Debug, Clone)]
pub struct HatTriple {
    pub rho: Herm,
    pub sigma1: Herm,
    pub sigma2: Herm,
    /// `|Tr ρ̂ log σ̂₁ − Tr ρ̂ log σ̂₂|`.
    pub symmetry_residual: f64,
}

pub fn hat_triple(rho: &Herm, sigma1: &Herm, sigma2: &Herm) -> Result<HatTriple> {
    require_pd(sigma1)?;
    require_pd(sigma2)?;
    for s in [sigma1, sigma2] {
        if s.dim() != rho.dim() {
            return Err(Error::DimMismatch {
                left: rho.dim(),
                right: s.dim(),
            });
        }
    }
    let rh = Herm::direct_sum(&[rho, rho]).scale(0.5);
    let s1 = Herm::direct_sum(&[sigma1, sigma2]).scale(0.5);
    let s2 = Herm::direct_sum(&[sigma2, sigma1]).scale(0.5);
    let symmetry_residual = (rh.trace_product(&logn(&s1)?) - rh.trace_product(&logn(&s2)?)).abs();
    Ok(HatTriple {
        rho: rh,
        sigma1: s1,
        sigma2: s2,
        symmetry_residual,
    })
}

/// Pure state on the top eigenvector of `diff(σ₁, σ₂)`, so `Tr ρ diff = δ`.
pub fn top_diff_state(sigma1: &Herm, sigma2: &Herm) -> Result<Herm> {
    Ok(Herm::outer(&diff_delta(sigma1, sigma2)?.top))
}

/// Invertible state with `Tr ρ diff = δ/2`: the midpoint between the top
/// eigenvector and the maximally mixed state (`Tr diff = 0`).
pub fn half_delta_state(sigma1: &Herm, sigma2: &Herm) -> Result<Herm> {
    let top = top_diff_state(sigma1, sigma2)?;
    let d = top.dim();
    Ok(top.scale(0.5).add(&Herm::identity(d).scale(0.5 / d as f64)))
}

fn fin(x: ExtReal) -> Result<f64> {
    x.finite()
        .ok_or_else(|| Error::InfiniteValue("relative entropy with PD alternative".into()))
}

/// Composite Stein gap of the hat construction against `Tr ρ diff(σ₁, σ₂)`.
pub fn stein_gap_report(rho: &Herm, sigma1: &Herm, sigma2: &Herm) -> Result<CounterexampleReport> {
    let hat = hat_triple(rho, sigma1, sigma2)?;
    let dd = diff_delta(sigma1, sigma2)?;
    let g = geometric_mean(&hat.sigma1, &hat.sigma2, 0.5)?;
    let d1 = fin(dq::rel_entropy(&hat.rho, &hat.sigma1)?)?;
    let d2v = fin(dq::rel_entropy(&hat.rho, &hat.sigma2)?)?;
    let dg = fin(dq::rel_entropy(&hat.rho, &g)?)?;
    let tr = rho.trace_product(&dd.diff);
    let gap = d1 - dg;

    let mut rep = CounterexampleReport::new("stein_gap");
    rep.param("dim", rho.dim() as f64)
        .quantity("D(rho_hat||sigma1_hat)", d1)
        .quantity("D(rho_hat||sigma2_hat)", d2v)
        .quantity("D(rho_hat||sigma1_hat#sigma2_hat)", dg)
        .quantity("gap", gap)
        .quantity("Tr rho diff", tr)
        .quantity("delta", dd.delta)
        .quantity("Tr diff", dd.trace);
    rep.push(Inequality::finite("Tr diff == 0", dd.trace, Relation::Eq, 0.0, 1e-9))
        .push(Inequality::finite("symmetry Tr rho log sigma_hat_j", hat.symmetry_residual, Relation::Le, 0.0, 1e-9))
        .push(Inequality::finite("gap_1 == gap_2", d1, Relation::Eq, d2v, 1e-9))
        .push(Inequality::finite("gap >= 0", gap, Relation::Ge, 0.0, 1e-10).informational())
        .push(Inequality::finite("gap == Tr rho diff", gap, Relation::Eq, tr, 1e-8))
        .push(Inequality::finite("gap <= delta", gap, Relation::Le, dd.delta, 1e-8))
        .push(Inequality::finite("gap == 2 Tr rho diff (literal form)", gap, Relation::Eq, 2.0 * tr, 1e-8).informational());
    rep.note("the printed identity carries a factor 2; direct evaluation gives gap = Tr rho diff, consistent with gap = delta at the top eigenvector");
    Ok(rep)
}

/// Members of the `(λ, η, μ, ν)` family on `H⊕H⊕ℂ⊕ℂ`.
#[derive(Debug, Clone)]
pub struct ParamFamily {
    pub rho: Herm,
    pub sigma1: Herm,
    pub sigma2: Herm,
    /// `νμ σ̂₁#σ̂₂ ⊕ ν(1−μ) ⊕ (1−ν)`.
    pub geommean: Herm,
}

fn check_unit(what: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, value: v })
    }
}

fn scalar(x: f64) -> Herm {
    Herm::diag(&[x])
}

/// `ρ_{λ,η} = ηλ ρ̂ ⊕ η(1−λ) ⊕ (1−η)` and `σ_{j,μ,ν} = νμ σ̂_j ⊕ ν(1−μ) ⊕ (1−ν)`.
pub fn param_family(hat: &HatTriple, lambda: f64, eta: f64, mu: f64, nu: f64) -> Result<ParamFamily> {
    check_unit("lambda", lambda)?;
    check_unit("eta", eta)?;
    check_unit("mu", mu)?;
    check_unit("nu", nu)?;
    let g = geometric_mean(&hat.sigma1, &hat.sigma2, 0.5)?;
    let tail_r = [scalar(eta * (1.0 - lambda)), scalar(1.0 - eta)];
    let tail_s = [scalar(nu * (1.0 - mu)), scalar(1.0 - nu)];
    let build = |core: Herm, tail: &[Herm; 2]| Herm::direct_sum(&[&core, &tail[0], &tail[1]]);
    Ok(ParamFamily {
        rho: build(hat.rho.scale(eta * lambda), &tail_r),
        sigma1: build(hat.sigma1.scale(nu * mu), &tail_s),
        sigma2: build(hat.sigma2.scale(nu * mu), &tail_s),
        geommean: build(g.scale(nu * mu), &tail_s),
    })
}

/// `λη D(ρ̂‖τ̂) + η d₂(λ‖μ) + d₂(η‖ν)` for `τ̂ ∈ {σ̂₁, σ̂₂, σ̂₁#σ̂₂}`.
pub fn param_family_closed_form(hat: &HatTriple, lambda: f64, eta: f64, mu: f64, nu: f64) -> Result<[ExtReal; 3]> {
    let g = geometric_mean(&hat.sigma1, &hat.sigma2, 0.5)?;
    let inner = if eta == 0.0 { 0.0 } else { eta * d2(lambda, mu)?.to_float() };
    let tail = inner + d2(eta, nu)?.to_float();
    let mut out = [ExtReal::PosInf; 3];
    for (o, s) in out.iter_mut().zip([&hat.sigma1, &hat.sigma2, &g]) {
        let core = if lambda * eta == 0.0 {
            0.0
        } else {
            dq::rel_entropy(&hat.rho, s)?.to_float() * lambda * eta
        };
        *o = ExtReal::from_float(core + tail);
    }
    Ok(out)
}

/// `λ, μ` of the refined Stein construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SteinParams {
    pub r: f64,
    pub lambda: f64,
    pub mu: f64,
    /// `D(ρ̂‖σ̂₁#σ̂₂)`.
    pub r0: f64,
    /// `D(ρ̂‖σ̂_j) − r₀ = Tr ρ diff(σ₁, σ₂)`.
    pub gap: f64,
}

fn stein_params(hat: &HatTriple, r: f64, lambda_frac: f64) -> Result<SteinParams> {
    if !(r > 0.0) {
        return Err(Error::OutOfRange { what: "r", value: r });
    }
    if !(lambda_frac > 0.0 && lambda_frac < 1.0) {
        return Err(Error::OutOfRange {
            what: "lambda fraction",
            value: lambda_frac,
        });
    }
    let g = geometric_mean(&hat.sigma1, &hat.sigma2, 0.5)?;
    let r0 = fin(dq::rel_entropy(&hat.rho, &g)?)?;
    let gap = fin(dq::rel_entropy(&hat.rho, &hat.sigma1)?)? - r0;
    let cap = if r0 > 0.0 { (r / r0).min(1.0) } else { 1.0 };
    let lambda = lambda_frac * cap;
    let mu = solve_d2(lambda, r - lambda * r0)?;
    Ok(SteinParams { r, lambda, mu, r0, gap })
}

fn require_noncommuting(sigma1: &Herm, sigma2: &Herm) -> Result<()> {
    if sigma1.commutator_norm(sigma2) <= COMMUTE_TOL {
        Err(Error::CommutingInput)
    } else {
        Ok(())
    }
}

/// Refined Stein separation at rate `r`, with `λ = lambda_frac · min{1, r/r₀}`.
pub fn tune_stein_example(
    rho: &Herm,
    sigma1: &Herm,
    sigma2: &Herm,
    r: f64,
    lambda_frac: f64,
) -> Result<CounterexampleReport> {
    require_noncommuting(sigma1, sigma2)?;
    let hat = hat_triple(rho, sigma1, sigma2)?;
    let p = stein_params(&hat, r, lambda_frac)?;
    let fam = param_family(&hat, p.lambda, 1.0, p.mu, 1.0)?;
    let closed = param_family_closed_form(&hat, p.lambda, 1.0, p.mu, 1.0)?;
    let dg = fin(dq::rel_entropy(&fam.rho, &fam.geommean)?)?;
    let ds = [
        fin(dq::rel_entropy(&fam.rho, &fam.sigma1)?)?,
        fin(dq::rel_entropy(&fam.rho, &fam.sigma2)?)?,
    ];
    let mut rep = CounterexampleReport::new("tune_stein");
    rep.param("r", r)
        .param("lambda", p.lambda)
        .param("mu", p.mu)
        .param("lambda_fraction", lambda_frac)
        .quantity("r0", p.r0)
        .quantity("gap_hat", p.gap)
        .quantity("D(rho_l1||G_mu1)", dg)
        .quantity("D(rho_l1||sigma1_mu1)", ds[0])
        .quantity("D(rho_l1||sigma2_mu1)", ds[1]);
    rep.push(Inequality::finite("D(rho_l1||G_mu1) == r", dg, Relation::Eq, r, 1e-8));
    for (j, d) in ds.iter().enumerate() {
        rep.push(Inequality::finite(
            format!("D(rho_l1||sigma{}_mu1) - lambda*gap == r", j + 1),
            d - p.lambda * p.gap,
            Relation::Eq,
            r,
            1e-8,
        ))
        .push(Inequality::finite(
            format!("closed form D(rho_l1||sigma{}_mu1)", j + 1),
            *d,
            Relation::Eq,
            closed[j].to_float(),
            1e-9,
        ))
        .push(Inequality::finite(
            format!("D(rho_l1||G_mu1) < D(rho_l1||sigma{}_mu1)", j + 1),
            dg,
            Relation::Lt,
            *d,
            0.0,
        ));
    }
    rep.note("the composite Stein exponent is at most D(rho_l1||G_mu1) = r; the pairwise ones equal D(rho_l1||sigma_j_mu1) = r + lambda*gap");
    Ok(rep)
}

/// Parameters produced by [`tune_direct_example`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectParams {
    pub lambda: f64,
    pub eta: f64,
    pub mu: f64,
    /// `1 − ν = 2^{−j}`, kept separately since `ν` itself rounds to 1.
    pub one_minus_nu: f64,
    pub kappa: f64,
    pub s: f64,
    pub j: u32,
}

/// Largest `j` in the scan `ν = 1 − 2^{−j}`.
pub const NU_SCAN: u32 = 1000;
const DIRECT_MARGIN: f64 = 1e-6;
/// `λ` as a fraction of its upper limit `min{1, r/r₀}`; larger values give a larger `κ`.
const DIRECT_LAMBDA_FRAC: f64 = 0.99;

type W = ClassicalWeight<f64>;

/// Nussbaum–Szkoła pair of `(ρ_{λ,η}, τ_{μ,ν})` assembled block by block, with
/// `ε = 1 − ν` passed directly.
fn family_ns_pair(core: &(W, W), lambda: f64, eta: f64, mu: f64, eps: f64) -> Result<(W, W)> {
    let nu = 1.0 - eps;
    let mut p: Vec<f64> = core.0.as_slice().iter().map(|x| x * eta * lambda).collect();
    let mut q: Vec<f64> = core.1.as_slice().iter().map(|x| x * nu * mu).collect();
    p.extend([eta * (1.0 - lambda), 1.0 - eta]);
    q.extend([nu * (1.0 - mu), eps]);
    Ok((W::new(p)?, W::new(q)?))
}

fn hr_pair(pair: &(W, W), r: f64) -> Result<f64> {
    Ok(hoeffding_classical(&pair.0, &pair.1, r)?.to_float())
}

/// Direct-exponent separation at rates `(r, t)`; with `t = r` it also
/// certifies the Chernoff separation.
pub fn tune_direct_example(rho: &Herm, sigma1: &Herm, sigma2: &Herm, r: f64, t: f64) -> Result<CounterexampleReport> {
    require_noncommuting(sigma1, sigma2)?;
    if !(t > 0.0) {
        return Err(Error::OutOfRange { what: "t", value: t });
    }
    let hat = hat_triple(rho, sigma1, sigma2)?;
    let p = stein_params(&hat, r, DIRECT_LAMBDA_FRAC)?;
    let g = geometric_mean(&hat.sigma1, &hat.sigma2, 0.5)?;
    let cores = [
        dq::nussbaum_szkola(&hat.rho, &g)?,
        dq::nussbaum_szkola(&hat.rho, &hat.sigma1)?,
        dq::nussbaum_szkola(&hat.rho, &hat.sigma2)?,
    ];
    let at = |eta: f64, eps: f64| -> Result<[(W, W); 3]> {
        Ok([
            family_ns_pair(&cores[0], p.lambda, eta, p.mu, eps)?,
            family_ns_pair(&cores[1], p.lambda, eta, p.mu, eps)?,
            family_ns_pair(&cores[2], p.lambda, eta, p.mu, eps)?,
        ])
    };
    let kappa = hr_pair(&at(1.0, 0.0)?[1], r)?;
    let s = if kappa / 4.0 < t { 0.25 } else { t / (2.0 * kappa) };
    let eta = (s * kappa - t).exp();

    let at_one = at(eta, 0.0)?;
    let h_comp1 = hr_pair(&at_one[0], r)?;
    let h_pair1 = [hr_pair(&at_one[1], r)?, hr_pair(&at_one[2], r)?];

    let mut trace = Vec::new();
    let mut found = None;
    for j in 1..=NU_SCAN {
        let eps = 0.5f64.powi(j as i32);
        let fam = at(eta, eps)?;
        let hc = hr_pair(&fam[0], r)?;
        let hp = [hr_pair(&fam[1], r)?, hr_pair(&fam[2], r)?];
        let hmin = hp[0].min(hp[1]);
        if j <= 8 || j % 100 == 0 {
            trace.push(format!("j={j} H_comp={hc} H_pair={hmin}"));
        }
        if t - hc > DIRECT_MARGIN && hmin - (t + 2.0 * kappa / 3.0) > DIRECT_MARGIN {
            found = Some((j, eps, fam, hc, hp));
            break;
        }
    }
    let (j, eps, fam, hc, hp) = found.ok_or_else(|| Error::ScanFailed(trace.join("; ")))?;
    let params = DirectParams {
        lambda: p.lambda,
        eta,
        mu: p.mu,
        one_minus_nu: eps,
        kappa,
        s,
        j,
    };

    let mut rep = CounterexampleReport::new("tune_direct");
    rep.param("r", r)
        .param("t", t)
        .param("lambda", params.lambda)
        .param("eta", params.eta)
        .param("mu", params.mu)
        .param("1-nu", params.one_minus_nu)
        .param("s", params.s)
        .param("scan_j", j as f64)
        .quantity("kappa", kappa)
        .quantity("H_r(rho_le||G_mu1)", h_comp1)
        .quantity("H_r(rho_le||G_munu)", hc);
    rep.push(Inequality::finite("kappa > 0", kappa, Relation::Gt, 0.0, 0.0))
        .push(Inequality::finite("H_r(rho_le||G_mu1) == t - s*kappa", h_comp1, Relation::Eq, t - s * kappa, 1e-7));
    for (i, h) in h_pair1.iter().enumerate() {
        rep.push(Inequality::finite(
            format!("H_r(rho_le||sigma{}_mu1) == t + kappa(1-s)", i + 1),
            *h,
            Relation::Eq,
            t + kappa * (1.0 - s),
            1e-7,
        ));
    }
    rep.push(Inequality::finite("H_r(rho_le||G_munu) < t", hc, Relation::Lt, t, DIRECT_MARGIN));
    for (i, h) in hp.iter().enumerate() {
        rep.quantity(format!("H_r(rho_le||sigma{}_munu)", i + 1), *h);
        rep.push(Inequality::finite(
            format!("H_r(rho_le||sigma{}_munu) > t + 2kappa/3", i + 1),
            *h,
            Relation::Gt,
            t + 2.0 * kappa / 3.0,
            DIRECT_MARGIN,
        ));
    }
    // swapped roles: pairwise direct exponent at rate t exceeds r
    for (i, pair) in fam[1..].iter().enumerate() {
        let h = hr_pair(&(pair.1.clone(), pair.0.clone()), t)?;
        rep.quantity(format!("H_t(sigma{}_munu||rho_le)", i + 1), h);
        rep.push(Inequality::finite(format!("H_t(sigma{}_munu||rho_le) > r", i + 1), h, Relation::Gt, r, 0.0));
    }
    if (t - r).abs() <= f64::EPSILON * r.max(1.0) {
        for (i, pair) in fam[1..].iter().enumerate() {
            let c = dc::chernoff(&pair.0, &pair.1)?;
            rep.quantity(format!("C(rho_le||sigma{}_munu)", i + 1), c);
            rep.push(Inequality::new(
                format!("C(rho_le||sigma{}_munu) > r", i + 1),
                c,
                Relation::Gt,
                ExtReal::Finite(r),
                0.0,
            ));
        }
        rep.note("t = r: H_r(rho_le||G_munu) < r bounds the composite Chernoff exponent by r");
    }
    rep.note("the composite direct exponent is at most H_r(rho_le||G_munu); the pairwise ones equal H_r(rho_le||sigma_j_munu)");
    rep.note("nu = 1 - 2^-scan_j; all quantities use the block-wise Nussbaum-Szkola pair");
    Ok(rep)
}

/// The 2×2 triple: `ρ = ½[[1,−1],[−1,1]]`, `σ₁ = ¼[[3,1],[1,1]]`, `σ₂ = ¼[[1,1],[1,3]]`.
pub fn minimal_triple() -> (Herm, Herm, Herm) {
    let m = |rows: [[f64; 2]; 2], s: f64| {
        let v: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x * s).collect()).collect();
        Herm::from_real_rows(&v).expect("symmetric 2x2")
    };
    (
        m([[1.0, -1.0], [-1.0, 1.0]], 0.5),
        m([[3.0, 1.0], [1.0, 1.0]], 0.25),
        m([[1.0, 1.0], [1.0, 3.0]], 0.25),
    )
}

/// Strict Stein separation already in dimension 2.
pub fn minimal_report() -> Result<CounterexampleReport> {
    let (rho, s1, s2) = minimal_triple();
    let g = geometric_mean(&s1, &s2, 0.5)?;
    let closed = {
        let c = 1.0 / 6f64.sqrt();
        let m = CMat::from_fn(2, 2, |i, j| C64::new(if i == j { c } else { 0.5 * c }, 0.0));
        Herm::new(m)?
    };
    let dg = fin(dq::rel_entropy(&rho, &g)?)?;
    let d1 = fin(dq::rel_entropy(&rho, &s1)?)?;
    let d2v = fin(dq::rel_entropy(&rho, &s2)?)?;
    let (lmax, _) = lambda_extremes(&g)?;
    let mut rep = CounterexampleReport::new("minimal_2x2");
    rep.quantity("D(rho||sigma1#sigma2)", dg)
        .quantity("D(rho||sigma1)", d1)
        .quantity("D(rho||sigma2)", d2v)
        .quantity("Tr sigma1#sigma2", g.trace())
        .quantity("lambda_max(sigma1#sigma2)", lmax);
    rep.push(Inequality::finite("sigma1#sigma2 closed form", g.max_abs_diff(&closed), Relation::Le, 0.0, 1e-12))
        .push(Inequality::finite("D(rho||sigma1#sigma2) == log(2 sqrt 6)", dg, Relation::Eq, (2.0 * 6f64.sqrt()).ln(), 1e-12))
        .push(Inequality::finite("D(rho||sigma1) == D(rho||sigma2)", d1, Relation::Eq, d2v, 1e-12))
        .push(Inequality::finite("D(rho||sigma1#sigma2) < min_j D(rho||sigma_j)", dg, Relation::Lt, d1.min(d2v), 1e-3));
    rep.note("the symmetric (Chernoff) separation in dimension 2 is not attempted; tensor powers near 40 exceed the dense caps");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_pd_density, rng};

    #[test]
    fn commuting_diff_vanishes() {
        let a = Herm::diag(&[0.3, 0.7]);
        let b = Herm::diag(&[0.6, 0.4]);
        let dd = diff_delta(&a, &b).unwrap();
        assert!(dd.diff.max_abs() < 1e-12 && dd.delta.abs() < 1e-12);
        assert!(diff_delta(&a, &a).unwrap().diff.max_abs() < 1e-12);
        assert!(matches!(diff_delta(&Herm::diag(&[1.0, 0.0]), &b), Err(Error::NotPd { .. })));
    }

    #[test]
    fn minimal_diff_is_traceless_and_positive() {
        let (_, s1, s2) = minimal_triple();
        let dd = diff_delta(&s1, &s2).unwrap();
        assert!(dd.trace.abs() < 1e-12);
        assert!(dd.delta > 1e-3);
    }

    #[test]
    fn equal_sigmas_give_zero_gap() {
        let mut r = rng(1);
        let rho = random_pd_density(3, &mut r);
        let s = random_pd_density(3, &mut r);
        let rep = stein_gap_report(&rho, &s, &s).unwrap();
        assert!(rep.pass());
        assert!(rep.quantities["gap"].unwrap().abs() < 1e-10);
    }

    #[test]
    fn top_eigenvector_attains_delta() {
        let mut r = rng(2);
        let s1 = random_pd_density(3, &mut r);
        let s2 = random_pd_density(3, &mut r);
        let rho = top_diff_state(&s1, &s2).unwrap();
        let rep = stein_gap_report(&rho, &s1, &s2).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures().collect::<Vec<_>>());
        let gap = rep.quantities["gap"].unwrap();
        assert!((gap - rep.quantities["delta"].unwrap()).abs() < 1e-8);
        let half = half_delta_state(&s1, &s2).unwrap();
        let dd = diff_delta(&s1, &s2).unwrap();
        assert!((half.trace_product(&dd.diff) - dd.delta / 2.0).abs() < 1e-10);
        assert!(is_definite(&half, EPS_SUPP).unwrap());
    }

    #[test]
    fn family_at_ones_is_padded_hat() {
        let (rho, s1, s2) = minimal_triple();
        let hat = hat_triple(&rho, &s1, &s2).unwrap();
        let f = param_family(&hat, 1.0, 1.0, 1.0, 1.0).unwrap();
        let padded = Herm::direct_sum(&[&hat.sigma1, &scalar(0.0), &scalar(0.0)]);
        assert!(f.sigma1.max_abs_diff(&padded) < 1e-15);
        assert!((f.sigma1.trace() - 1.0).abs() < 1e-12);
        assert!(param_family(&hat, 1.2, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn family_closed_forms() {
        let mut r = rng(3);
        let rho = random_pd_density(2, &mut r);
        let s1 = random_pd_density(2, &mut r);
        let s2 = random_pd_density(2, &mut r);
        let hat = hat_triple(&rho, &s1, &s2).unwrap();
        let (l, e, m, n) = (0.3, 0.8, 0.45, 0.9);
        let f = param_family(&hat, l, e, m, n).unwrap();
        let closed = param_family_closed_form(&hat, l, e, m, n).unwrap();
        let direct = [
            dq::rel_entropy(&f.rho, &f.sigma1).unwrap(),
            dq::rel_entropy(&f.rho, &f.sigma2).unwrap(),
            dq::rel_entropy(&f.rho, &f.geommean).unwrap(),
        ];
        for (c, d) in closed.iter().zip(direct) {
            assert!((c.unwrap() - d.unwrap()).abs() < 1e-9);
        }
        let gm = geometric_mean(&f.sigma1, &f.sigma2, 0.5).unwrap();
        assert!(gm.max_abs_diff(&f.geommean) < 1e-9);
    }

    #[test]
    fn tune_stein_minimal() {
        let (rho, s1, s2) = minimal_triple();
        for frac in [0.5, 0.9] {
            let rep = tune_stein_example(&rho, &s1, &s2, 0.25, frac).unwrap();
            assert!(rep.pass(), "{:?}", rep.failures().collect::<Vec<_>>());
        }
        let c = Herm::diag(&[0.3, 0.7]);
        assert_eq!(
            tune_stein_example(&rho, &c, &Herm::diag(&[0.5, 0.5]), 0.25, 0.5).unwrap_err(),
            Error::CommutingInput
        );
    }

    #[test]
    fn minimal_margin() {
        let rep = minimal_report().unwrap();
        assert!(rep.pass(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn tune_direct_minimal() {
        let (rho, s1, s2) = minimal_triple();
        for (r, t) in [(0.2, 0.2), (0.5, 0.1), (0.1, 0.7)] {
            let rep = tune_direct_example(&rho, &s1, &s2, r, t).unwrap();
            assert!(rep.pass(), "r={r} t={t}: {:?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn block_pair_matches_dense_family() {
        let (rho, s1, s2) = minimal_triple();
        let hat = hat_triple(&rho, &s1, &s2).unwrap();
        let (l, e, m) = (0.3, 0.8, 0.2);
        let core = dq::nussbaum_szkola(&hat.rho, &hat.sigma1).unwrap();
        for eps in [0.5, 1e-3, 1e-8] {
            let fam = param_family(&hat, l, e, m, 1.0 - eps).unwrap();
            let pair = family_ns_pair(&core, l, e, m, eps).unwrap();
            for r in [0.05, 0.3, 1.0] {
                let dense = crate::tradeoff::hoeffding_quantum(&fam.rho, &fam.sigma1, r).unwrap();
                let block = hoeffding_classical(&pair.0, &pair.1, r).unwrap();
                match (block, dense) {
                    (ExtReal::Finite(a), ExtReal::Finite(b)) => assert!((a - b).abs() < 1e-9, "eps={eps} r={r}: {a} vs {b}"),
                    (a, b) => assert_eq!(a, b, "eps={eps} r={r}"),
                }
            }
        }
    }

    #[test]
    fn direct_scan_index_at_criterion_point() {
        let (rho, s1, s2) = minimal_triple();
        let rep = tune_direct_example(&rho, &s1, &s2, 0.2, 0.2).unwrap();
        let j = rep.params["scan_j"];
        assert!(j > 40.0 && j <= NU_SCAN as f64, "j = {j}");
        assert!(rep.pass());
    }
}

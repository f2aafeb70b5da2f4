//! Quantum divergences on `f64` Hermitian operators.
//!
//! Everything in the Petz family goes through the Nussbaum–Szkoła pair
//! `P(i,j) = pᵢ|⟨uᵢ|vⱼ⟩|²`, `Q(i,j) = qⱼ|⟨uᵢ|vⱼ⟩|²` built from the spectral
//! decompositions `ρ = Σ pᵢ|uᵢ⟩⟨uᵢ|`, `σ = Σ qⱼ|vⱼ⟩⟨vⱼ|`. Its classical cumulant
//! equals `log Tr ρ^α σ^{1−α}` for every α, so relative entropy, Petz Rényi,
//! Chernoff and the Petz Hoeffding quantities reuse the classical code.

use super::{classical, Family};
use crate::classical::ClassicalWeight;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::hermcore::{
    expm, geometric_mean, is_definite, logn, mat_fn_on_support, support_projection, support_threshold,
    HermitianOperator, MatFn, EPS_SUPP,
};
use crate::scalar::log_sum_exp;

/// Overlaps below this are treated as exact zeros (eigenvector rounding noise).
const OVERLAP_FLOOR: f64 = 1e-24;
/// Relative weight of ρ outside supp σ tolerated as rounding.
const LEAK_TOL: f64 = 1e-10;

fn check_pair(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    rho.check_psd()?;
    sigma.check_psd()
}

fn clipped_spectrum(a: &HermitianOperator) -> Result<Vec<f64>> {
    let e = a.eig()?;
    let thr = support_threshold(e, EPS_SUPP);
    Ok(e.values.iter().map(|&l| if l > thr { l } else { 0.0 }).collect())
}

/// Nussbaum–Szkoła pair `(P, Q)` on the `d × d` index set, row-major in `(i, j)`.
pub fn nussbaum_szkola(
    rho: &HermitianOperator,
    sigma: &HermitianOperator,
) -> Result<(ClassicalWeight<f64>, ClassicalWeight<f64>)> {
    check_pair(rho, sigma)?;
    let d = rho.dim();
    let (p, q) = (clipped_spectrum(rho)?, clipped_spectrum(sigma)?);
    let overlap = rho.eig()?.vectors.adjoint() * &sigma.eig()?.vectors;
    let mut pw = Vec::with_capacity(d * d);
    let mut qw = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let w = overlap[(i, j)].norm_sqr();
            let w = if w < OVERLAP_FLOOR { 0.0 } else { w };
            pw.push(p[i] * w);
            qw.push(q[j] * w);
        }
    }
    Ok((ClassicalWeight::new(pw)?, ClassicalWeight::new(qw)?))
}

/// Whether ρ⁰ ≤ σ⁰, up to a relative leak of `1e-10`.
pub fn support_contained(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<bool> {
    check_pair(rho, sigma)?;
    let ps = support_projection(sigma, EPS_SUPP)?.projector();
    let inside = rho.trace_product(&ps);
    let total = rho.trace();
    Ok(total - inside <= LEAK_TOL * total.max(f64::MIN_POSITIVE))
}

/// Umegaki relative entropy `Tr ρ(logn ρ − logn σ)`; `+∞` if ρ⁰ ≰ σ⁰.
pub fn rel_entropy(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<ExtReal> {
    if !support_contained(rho, sigma)? {
        return Ok(ExtReal::PosInf);
    }
    let v = rho.trace_product(&logn(rho)?) - rho.trace_product(&logn(sigma)?);
    Ok(ExtReal::Finite(v))
}

/// Petz cumulant `log Tr ρ^α σ^{1−α}` for α ∈ [0, 1] (`α = 0` uses ρ⁰, `α = 1` uses σ⁰).
pub fn psi_petz(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            what: "alpha (petz psi)",
            value: alpha,
        });
    }
    let (p, q) = nussbaum_szkola(rho, sigma)?;
    classical::psi(&p, &q, alpha)
}

/// `(ψ, ψ′, ψ″)` of the Petz cumulant at any real α, via the Nussbaum–Szkoła pair.
pub fn psi_petz_derivatives(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<(f64, f64, f64)> {
    let (p, q) = nussbaum_szkola(rho, sigma)?;
    classical::psi_derivatives(&p, &q, alpha)
}

/// Petz Rényi `D_α = ψ(α)/(α − 1)`, α ∈ [0, 1); `+∞` iff ρ ⟂ σ.
pub fn petz_renyi(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<ExtReal> {
    let (p, q) = nussbaum_szkola(rho, sigma)?;
    classical::petz_renyi(&p, &q, alpha)
}

/// Eigenvalues of `ρ^{1/2} σ^{(1−α)/α} ρ^{1/2}` (σ-power on its support).
fn sandwiched_spectrum(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<Vec<f64>> {
    let rh = mat_fn_on_support(rho, MatFn::Pow(0.5), EPS_SUPP)?;
    let sp = if alpha == 1.0 {
        support_projection(sigma, EPS_SUPP)?.projector()
    } else {
        mat_fn_on_support(sigma, MatFn::Pow((1.0 - alpha) / alpha), EPS_SUPP)?
    };
    let x = sp.congruence(rh.matrix());
    let e = x.eig()?;
    let thr = support_threshold(e, EPS_SUPP);
    Ok(e.values.iter().copied().filter(|&l| l > thr).collect())
}

/// Sandwiched cumulant `ψ*(α) = log Tr(ρ^{1/2} σ^{(1−α)/α} ρ^{1/2})^α` for α ≥ 1;
/// `+∞` if ρ⁰ ≰ σ⁰.
pub fn psi_sandwiched(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0) || alpha.is_infinite() {
        return Err(Error::OutOfRange {
            what: "alpha (sandwiched psi)",
            value: alpha,
        });
    }
    if !support_contained(rho, sigma)? {
        return Ok(f64::INFINITY);
    }
    let ls: Vec<f64> = sandwiched_spectrum(rho, sigma, alpha)?
        .iter()
        .map(|l| alpha * l.ln())
        .collect();
    Ok(log_sum_exp(&ls))
}

/// `ψ*(α)/α`, shifted by the top eigenvalue so large α does not overflow.
fn psi_sandwiched_over_alpha(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<f64> {
    let spec = sandwiched_spectrum(rho, sigma, alpha)?;
    let lmax = spec.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lmax == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let ls: Vec<f64> = spec.iter().map(|l| alpha * (l / lmax).ln()).collect();
    Ok(lmax.ln() + log_sum_exp(&ls) / alpha)
}

/// Sandwiched Rényi `D*_α` for α > 1; α = ∞ gives `D_∞`.
pub fn sandwiched_renyi(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<ExtReal> {
    if !(alpha > 1.0) {
        return Err(Error::OutOfRange { what: "alpha", value: alpha });
    }
    if alpha.is_infinite() {
        return max_rel_entropy(rho, sigma);
    }
    let p = psi_sandwiched(rho, sigma, alpha)?;
    Ok(ExtReal::from_float(p / (alpha - 1.0)))
}

/// `D_∞ = log λ_max(σ^{−1/2} ρ σ^{−1/2})`; `+∞` if ρ⁰ ≰ σ⁰.
pub fn max_rel_entropy(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<ExtReal> {
    if !support_contained(rho, sigma)? {
        return Ok(ExtReal::PosInf);
    }
    let sih = mat_fn_on_support(sigma, MatFn::Pow(-0.5), EPS_SUPP)?;
    let x = rho.congruence(sih.matrix());
    let lmax = x.eig()?.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ExtReal::from_float(lmax.ln()))
}

/// `ψ̃(u) = (1 − u)ψ(1/(1 − u))`: Petz for `u ≤ 0`, sandwiched for `u ∈ [0, 1]`.
pub fn psi_tilde(rho: &HermitianOperator, sigma: &HermitianOperator, u: f64, family: Family) -> Result<f64> {
    match family {
        Family::Petz => {
            let (p, q) = nussbaum_szkola(rho, sigma)?;
            classical::psi_tilde(&p, &q, u, Family::Petz)
        }
        Family::Sandwiched => {
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::OutOfRange {
                    what: "u (sandwiched psi tilde)",
                    value: u,
                });
            }
            if !support_contained(rho, sigma)? {
                return Ok(f64::INFINITY);
            }
            if u == 1.0 {
                return Ok(max_rel_entropy(rho, sigma)?.to_float());
            }
            if u == 0.0 {
                return psi_sandwiched(rho, sigma, 1.0);
            }
            psi_sandwiched_over_alpha(rho, sigma, 1.0 / (1.0 - u))
        }
    }
}

/// Log-Euclidean Rényi `log Tr exp(α log ρ + (1−α) log σ)/(α − 1)`, α ∈ (0, 1).
/// Both operators must be positive definite. A first argument with `Tr ρ ≠ 1`
/// gets the correction `−log Tr ρ/(α − 1)`.
pub fn log_euclidean_renyi(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfRange { what: "alpha", value: alpha });
    }
    check_pair(rho, sigma)?;
    for a in [rho, sigma] {
        if !is_definite(a, EPS_SUPP)? {
            return Err(Error::NotPd {
                min_eig: a.eig()?.values[0],
            });
        }
    }
    let h = logn(rho)?.scale(alpha).add(&logn(sigma)?.scale(1.0 - alpha));
    Ok((expm(&h)?.trace().ln() - rho.trace().ln()) / (alpha - 1.0))
}

/// Maximal Rényi `log Tr(σ #_α ρ)/(α − 1)`, α ∈ (0, 1), with the same
/// trace correction as [`log_euclidean_renyi`].
pub fn maximal_renyi(rho: &HermitianOperator, sigma: &HermitianOperator, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfRange { what: "alpha", value: alpha });
    }
    check_pair(rho, sigma)?;
    let g = geometric_mean(rho, sigma, alpha)?;
    Ok((g.trace().ln() - rho.trace().ln()) / (alpha - 1.0))
}

/// Quantum Chernoff divergence `−min_{α∈(0,1)} log Tr ρ^α σ^{1−α}`.
pub fn chernoff(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<ExtReal> {
    let (p, q) = nussbaum_szkola(rho, sigma)?;
    classical::chernoff(&p, &q)
}

/// Minimizer of the Petz cumulant on (0, 1) together with the Chernoff value.
pub fn chernoff_point(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<(f64, ExtReal)> {
    let (p, q) = nussbaum_szkola(rho, sigma)?;
    classical::chernoff_point(&p, &q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermcore::C64;
    use crate::random::{random_pd_density, rng};
    use nalgebra::DVector;

    fn ket(v: &[f64]) -> HermitianOperator {
        HermitianOperator::outer(&DVector::from_iterator(v.len(), v.iter().map(|&x| C64::new(x, 0.0))))
    }

    #[test]
    fn pure_state_relative_entropy() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = ket(&[1.0, 0.0]);
        let sigma = HermitianOperator::diag(&[0.25, 0.75]);
        let d = rel_entropy(&rho, &sigma).unwrap().unwrap();
        assert!((d - 4f64.ln()).abs() < 1e-12);
        let plus = ket(&[s, s]);
        assert!(rel_entropy(&plus, &rho).unwrap().is_inf());
        assert!(max_rel_entropy(&plus, &rho).unwrap().is_inf());
    }

    #[test]
    fn petz_matches_direct_trace() {
        let mut r = rng(11);
        let rho = random_pd_density(3, &mut r);
        let sigma = random_pd_density(3, &mut r);
        for a in [0.0, 0.2, 0.7, 1.0] {
            let direct = if a == 0.0 {
                sigma.trace()
            } else {
                let ra = mat_fn_on_support(&rho, MatFn::Pow(a), EPS_SUPP).unwrap();
                let sb = mat_fn_on_support(&sigma, MatFn::Pow(1.0 - a), EPS_SUPP).unwrap();
                ra.trace_product(&sb)
            };
            let psi = psi_petz(&rho, &sigma, a).unwrap();
            assert!((psi - direct.ln()).abs() < 1e-12, "alpha {a}");
        }
    }

    #[test]
    fn sandwiched_tends_to_max_relative() {
        let mut r = rng(5);
        let rho = random_pd_density(3, &mut r);
        let sigma = random_pd_density(3, &mut r);
        let dmax = max_rel_entropy(&rho, &sigma).unwrap().unwrap();
        let near = psi_tilde(&rho, &sigma, 1.0 - 1e-7, Family::Sandwiched).unwrap();
        assert!((near - dmax).abs() < 1e-5);
        let d2 = sandwiched_renyi(&rho, &sigma, 2.0).unwrap().unwrap();
        let d = rel_entropy(&rho, &sigma).unwrap().unwrap();
        assert!(d <= d2 + 1e-12 && d2 <= dmax + 1e-12);
    }

    #[test]
    fn renyi_ordering_on_random_pairs() {
        let mut r = rng(99);
        for _ in 0..10 {
            let rho = random_pd_density(3, &mut r);
            let sigma = random_pd_density(3, &mut r);
            for a in [0.2, 0.5, 0.8] {
                let petz = petz_renyi(&rho, &sigma, a).unwrap().unwrap();
                let le = log_euclidean_renyi(&rho, &sigma, a).unwrap();
                let mx = maximal_renyi(&rho, &sigma, a).unwrap();
                assert!(petz <= le + 1e-10 && le <= mx + 1e-10, "{petz} {le} {mx}");
            }
        }
    }
}

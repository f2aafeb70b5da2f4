//! Classical divergences, generic over the float type.
//!
//! The cumulant is `ψ(α) = log Σ_{x ∈ supp ρ ∩ supp σ} ρ(x)^α σ(x)^{1−α}`,
//! defined for every real α and evaluated in log-space.

use super::Family;
use crate::classical::ClassicalWeight;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::optim::{bisect, golden_min};
use crate::scalar::{compensated_sum, log_sum_exp, Real};

/// Log-likelihood ratios `logn ρ − logn σ` on the common support, with the
/// log-weights needed for tilted sums.
struct Common<F> {
    ln_rho: Vec<F>,
    ln_sigma: Vec<F>,
}

fn common<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>) -> Result<Common<F>> {
    rho.check_len(sigma)?;
    let mut c = Common {
        ln_rho: Vec::new(),
        ln_sigma: Vec::new(),
    };
    for (&r, &s) in rho.as_slice().iter().zip(sigma.as_slice()) {
        if r > F::zero() && s > F::zero() {
            c.ln_rho.push(r.ln());
            c.ln_sigma.push(s.ln());
        }
    }
    Ok(c)
}

/// Whether ρ⁰ ≤ σ⁰.
pub fn support_contained<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>) -> bool {
    rho.as_slice()
        .iter()
        .zip(sigma.as_slice())
        .all(|(&r, &s)| r == F::zero() || s > F::zero())
}

/// `D(ρ‖σ) = Σ ρ(logn ρ − logn σ)` if ρ⁰ ≤ σ⁰, else `+∞`.
pub fn rel_entropy<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>) -> Result<ExtReal<F>> {
    rho.check_len(sigma)?;
    if !support_contained(rho, sigma) {
        return Ok(ExtReal::PosInf);
    }
    let terms = rho
        .as_slice()
        .iter()
        .zip(sigma.as_slice())
        .filter(|(&r, _)| r > F::zero())
        .map(|(&r, &s)| r * (r.ln() - s.ln()));
    Ok(ExtReal::Finite(compensated_sum(terms)))
}

/// Classical cumulant `ψ(α)` for any real α; `−∞` when the supports are disjoint.
pub fn psi<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, alpha: F) -> Result<F> {
    let c = common(rho, sigma)?;
    Ok(psi_common(&c, alpha))
}

fn psi_common<F: Real>(c: &Common<F>, alpha: F) -> F {
    let xs: Vec<F> = c
        .ln_rho
        .iter()
        .zip(&c.ln_sigma)
        .map(|(&lr, &ls)| alpha * lr + (F::one() - alpha) * ls)
        .collect();
    log_sum_exp(&xs)
}

/// Family-specific `ψ`: Petz on `[0, 1]`; sandwiched on `[1, ∞)`, which is
/// `+∞` when ρ⁰ ≰ σ⁰ and otherwise equals the classical formula.
pub fn psi_family<F: Real>(
    rho: &ClassicalWeight<F>,
    sigma: &ClassicalWeight<F>,
    alpha: F,
    family: Family,
) -> Result<F> {
    match family {
        Family::Petz => {
            if !(alpha >= F::zero() && alpha <= F::one()) {
                return Err(Error::OutOfRange {
                    what: "alpha (petz psi)",
                    value: alpha.to_f64_lossy(),
                });
            }
            psi(rho, sigma, alpha)
        }
        Family::Sandwiched => {
            if !(alpha >= F::one()) {
                return Err(Error::OutOfRange {
                    what: "alpha (sandwiched psi)",
                    value: alpha.to_f64_lossy(),
                });
            }
            if !support_contained(rho, sigma) {
                return Ok(F::infinity());
            }
            psi(rho, sigma, alpha)
        }
    }
}

/// `ψ̃(u) = (1 − u) ψ(1/(1 − u))`.
///
/// Petz: `u ∈ (−∞, 0]`. Sandwiched: `u ∈ [0, 1]`, with `u = 1` giving `D_∞`.
/// Near `u = 1` the value is computed as `ψ(α)/α` in a form that does not overflow.
pub fn psi_tilde<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, u: F, family: Family) -> Result<F> {
    let one = F::one();
    if u == F::zero() {
        // ψ(1) = log ρ(supp σ), summed directly so normalized ρ gives exactly 0
        rho.check_len(sigma)?;
        let mass = compensated_sum(
            rho.as_slice()
                .iter()
                .zip(sigma.as_slice())
                .filter(|(_, &s)| s > F::zero())
                .map(|(&r, _)| r),
        );
        return Ok(mass.ln());
    }
    match family {
        Family::Petz => {
            if !(u <= F::zero()) {
                return Err(Error::OutOfRange {
                    what: "u (petz psi tilde)",
                    value: u.to_f64_lossy(),
                });
            }
            let a = one / (one - u);
            Ok((one - u) * psi(rho, sigma, a)?)
        }
        Family::Sandwiched => {
            if !(u >= F::zero() && u <= one) {
                return Err(Error::OutOfRange {
                    what: "u (sandwiched psi tilde)",
                    value: u.to_f64_lossy(),
                });
            }
            if !support_contained(rho, sigma) {
                return Ok(F::infinity());
            }
            if u == one {
                return Ok(max_rel_entropy(rho, sigma)?.to_float());
            }
            let c = common(rho, sigma)?;
            let a = one / (one - u);
            Ok(psi_over_alpha(&c, a))
        }
    }
}

/// `ψ(α)/α = log Σ σ e^{α L}/α` with `L = ln ρ − ln σ`, shifted by `max L`.
fn psi_over_alpha<F: Real>(c: &Common<F>, alpha: F) -> F {
    let l: Vec<F> = c.ln_rho.iter().zip(&c.ln_sigma).map(|(&a, &b)| a - b).collect();
    let lmax = l.iter().copied().fold(F::neg_infinity(), F::max);
    let xs: Vec<F> = l
        .iter()
        .zip(&c.ln_sigma)
        .map(|(&li, &ls)| ls + alpha * (li - lmax))
        .collect();
    lmax + log_sum_exp(&xs) / alpha
}

/// `(ψ, ψ′, ψ″)` at α via the tilted distribution μ_α on the common support.
pub fn psi_derivatives<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, alpha: F) -> Result<(F, F, F)> {
    let c = common(rho, sigma)?;
    if c.ln_rho.is_empty() {
        return Err(Error::DisjointSupports);
    }
    Ok(derivs_common(&c, alpha))
}

fn derivs_common<F: Real>(c: &Common<F>, alpha: F) -> (F, F, F) {
    let p = psi_common(c, alpha);
    let mut d1 = Vec::with_capacity(c.ln_rho.len());
    let mut mu = Vec::with_capacity(c.ln_rho.len());
    for (&lr, &ls) in c.ln_rho.iter().zip(&c.ln_sigma) {
        let m = (alpha * lr + (F::one() - alpha) * ls - p).exp();
        mu.push(m);
        d1.push(lr - ls);
    }
    let m1 = compensated_sum(mu.iter().zip(&d1).map(|(&m, &l)| m * l));
    let m2 = compensated_sum(mu.iter().zip(&d1).map(|(&m, &l)| m * (l - m1) * (l - m1)));
    (p, m1, m2.max(F::zero()))
}

/// `D_α = ψ(α)/(α − 1)` for α ∈ [0, 1); `+∞` iff the supports are disjoint.
pub fn petz_renyi<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, alpha: F) -> Result<ExtReal<F>> {
    if !(alpha >= F::zero() && alpha < F::one()) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha.to_f64_lossy(),
        });
    }
    let p = psi(rho, sigma, alpha)?;
    if p == F::neg_infinity() {
        return Ok(ExtReal::PosInf);
    }
    Ok(ExtReal::Finite(p / (alpha - F::one())))
}

/// Sandwiched `D*_α` for α > 1 (equals the Petz formula classically); α = ∞ gives `D_∞`.
pub fn sandwiched_renyi<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, alpha: F) -> Result<ExtReal<F>> {
    if !(alpha > F::one()) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha.to_f64_lossy(),
        });
    }
    if alpha == F::infinity() {
        return max_rel_entropy(rho, sigma);
    }
    rho.check_len(sigma)?;
    if !support_contained(rho, sigma) {
        return Ok(ExtReal::PosInf);
    }
    let p = psi(rho, sigma, alpha)?;
    Ok(ExtReal::Finite(p / (alpha - F::one())))
}

/// `D_∞ = log max_{x ∈ supp ρ} ρ(x)/σ(x)`, `+∞` if ρ⁰ ≰ σ⁰.
pub fn max_rel_entropy<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>) -> Result<ExtReal<F>> {
    rho.check_len(sigma)?;
    if !support_contained(rho, sigma) {
        return Ok(ExtReal::PosInf);
    }
    let m = rho
        .as_slice()
        .iter()
        .zip(sigma.as_slice())
        .filter(|(&r, _)| r > F::zero())
        .map(|(&r, &s)| r.ln() - s.ln())
        .fold(F::neg_infinity(), F::max);
    Ok(ExtReal::from_float(m))
}

/// `D_0 = −log σ(supp ρ)`.
pub fn d0<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>) -> Result<ExtReal<F>> {
    petz_renyi(rho, sigma, F::zero())
}

/// Argmin of ψ over (0, 1) and the Chernoff divergence `C = −min ψ`.
pub fn chernoff_point<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>) -> Result<(F, ExtReal<F>)> {
    let c = common(rho, sigma)?;
    if c.ln_rho.is_empty() {
        return Ok((F::c(0.5), ExtReal::PosInf));
    }
    let delta = F::c(1e-6);
    let (lo, hi) = (delta, F::one() - delta);
    let tol = F::c(1e-10).max(F::epsilon().sqrt());
    let g = golden_min(|a| psi_common(&c, a), lo, hi, tol);
    let mut best = (g.x, g.value);
    // refine on the sign of ψ′ where it changes inside the bracket
    let d = |a: F| derivs_common(&c, a).1;
    if d(lo) < F::zero() && d(hi) > F::zero() {
        if let Some(a) = bisect(d, lo, hi, F::epsilon() * F::c(4.0), 200) {
            let v = psi_common(&c, a);
            if v <= best.1 {
                best = (a, v);
            }
        }
    }
    Ok((best.0, ExtReal::Finite((-best.1).max(F::zero()))))
}

/// `C(ρ‖σ) = −min_{α∈(0,1)} ψ(α)`; `+∞` iff the supports are disjoint.
pub fn chernoff<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>) -> Result<ExtReal<F>> {
    Ok(chernoff_point(rho, sigma)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[f64]) -> ClassicalWeight<f64> {
        ClassicalWeight::new(v.to_vec()).unwrap()
    }

    #[test]
    fn coin_relative_entropy() {
        let d = rel_entropy(&w(&[0.5, 0.5]), &w(&[0.25, 0.75])).unwrap().unwrap();
        assert!((d - (2.0 / 3f64.sqrt()).ln()).abs() < 1e-15);
    }

    #[test]
    fn support_violation_gives_inf() {
        let d = rel_entropy(&w(&[0.5, 0.5]), &w(&[1.0, 0.0])).unwrap();
        assert!(d.is_inf());
        assert!(max_rel_entropy(&w(&[0.5, 0.5]), &w(&[1.0, 0.0])).unwrap().is_inf());
        assert!(petz_renyi(&w(&[1.0, 0.0]), &w(&[0.0, 1.0]), 0.5).unwrap().is_inf());
        assert!(chernoff(&w(&[1.0, 0.0]), &w(&[0.0, 1.0])).unwrap().is_inf());
    }

    #[test]
    fn self_divergences_vanish() {
        let p = w(&[0.2, 0.3, 0.5]);
        assert!(rel_entropy(&p, &p).unwrap().unwrap().abs() < 1e-15);
        assert!(petz_renyi(&p, &p, 0.4).unwrap().unwrap().abs() < 1e-15);
        assert!(sandwiched_renyi(&p, &p, 3.0).unwrap().unwrap().abs() < 1e-15);
        assert!(max_rel_entropy(&p, &p).unwrap().unwrap().abs() < 1e-15);
        assert!(chernoff(&p, &p).unwrap().unwrap().abs() < 1e-15);
    }

    #[test]
    fn bhattacharyya_value() {
        let (p, q) = (w(&[0.5, 0.5]), w(&[0.25, 0.75]));
        let d = petz_renyi(&p, &q, 0.5).unwrap().unwrap();
        let direct = -2.0 * ((0.5f64 * 0.25).sqrt() + (0.5f64 * 0.75).sqrt()).ln();
        assert!((d - direct).abs() < 1e-15);
    }

    #[test]
    fn psi_tilde_endpoints() {
        let (p, q) = (w(&[0.5, 0.5]), w(&[0.25, 0.75]));
        assert_eq!(psi_tilde(&p, &q, 0.0, Family::Sandwiched).unwrap(), 0.0);
        let at1 = psi_tilde(&p, &q, 1.0, Family::Sandwiched).unwrap();
        assert!((at1 - 2f64.ln()).abs() < 1e-15);
        let near = psi_tilde(&p, &q, 1.0 - 1e-12, Family::Sandwiched).unwrap();
        assert!((near - at1).abs() < 1e-9);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let (p, q) = (w(&[0.1, 0.6, 0.3]), w(&[0.3, 0.3, 0.4]));
        for a in [-0.5, 0.3, 1.0, 2.5] {
            let (_, d1, d2) = psi_derivatives(&p, &q, a).unwrap();
            let h = 1e-5;
            let f = |x| psi(&p, &q, x).unwrap();
            let fd1 = (f(a + h) - f(a - h)) / (2.0 * h);
            let fd2 = (f(a + h) - 2.0 * f(a) + f(a - h)) / (h * h);
            assert!((d1 - fd1).abs() < 1e-6);
            assert!((d2 - fd2).abs() < 1e-3);
        }
    }

    #[test]
    fn f32_instantiation() {
        let p = ClassicalWeight::<f32>::new(vec![0.5, 0.5]).unwrap();
        let q = ClassicalWeight::<f32>::new(vec![0.25, 0.75]).unwrap();
        let d = rel_entropy(&p, &q).unwrap().unwrap();
        assert!((d - 0.143_841_04).abs() < 1e-6);
        let c = chernoff(&p, &q).unwrap().unwrap();
        assert!(c > 0.0 && c < d);
    }
}

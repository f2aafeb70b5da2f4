//! Hoeffding divergence and anti-divergence, the Hellinger arc, and the
//! Legendre transforms `Ψ`, `Ψ⁻`, `Ψ̃` built from a cumulant `ψ`.
//!
//! Classical routines are generic over [`Real`]. Quantum `H_r` uses the Petz
//! cumulant and quantum `H*_r` the sandwiched one; [`LegendreData`] is `f64`.

use crate::classical::ClassicalWeight;
use crate::divergence::{classical as dc, quantum as dq, Family, State};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::hermcore::HermitianOperator;
use crate::optim::{bisect, concave_max_halfline, golden_max};
use crate::scalar::{compensated_sum, Real};
use serde::Serialize;

pub use crate::divergence::classical::psi_derivatives;

fn check_rate<F: Real>(r: F) -> Result<()> {
    if !(r > F::zero()) || !r.is_finite() {
        return Err(Error::OutOfRange {
            what: "r",
            value: r.to_f64_lossy(),
        });
    }
    Ok(())
}

fn x_tol<F: Real>() -> F {
    F::c(1e-13).max(F::epsilon().sqrt() * F::c(4.0))
}

/// `sup_{α∈(0,1)} ((α−1)r − ψ(α))/α` for a Petz-type cumulant; `+∞` iff `r < D₀ = −ψ(0)`.
fn hoeffding_from_psi<F: Real>(psi: impl Fn(F) -> F, r: F) -> ExtReal<F> {
    let d0 = -psi(F::zero());
    if r < d0 {
        return ExtReal::PosInf;
    }
    let g = |a: F| ((a - F::one()) * r - psi(a)) / a;
    let lo = F::c(1e-12).max(F::epsilon());
    let best = golden_max(g, lo, F::one(), x_tol());
    ExtReal::Finite(best.value)
}

/// Classical Hoeffding divergence `H_r(ρ‖σ)`.
pub fn hoeffding_classical<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, r: F) -> Result<ExtReal<F>> {
    check_rate(r)?;
    rho.check_len(sigma)?;
    if dc::psi(rho, sigma, F::one())? == F::neg_infinity() {
        return Ok(ExtReal::PosInf);
    }
    Ok(hoeffding_from_psi(|a| dc::psi(rho, sigma, a).expect("lengths checked"), r))
}

/// Quantum Hoeffding divergence with the Petz cumulant.
pub fn hoeffding_quantum(rho: &HermitianOperator, sigma: &HermitianOperator, r: f64) -> Result<ExtReal> {
    let (p, q) = dq::nussbaum_szkola(rho, sigma)?;
    hoeffding_classical(&p, &q, r)
}

/// `H_r` for either kind of state.
pub fn hoeffding(rho: &State, sigma: &State, r: f64) -> Result<ExtReal> {
    match (rho, sigma) {
        (State::Classical(a), State::Classical(b)) => hoeffding_classical(a, b, r),
        (State::Quantum(a), State::Quantum(b)) => hoeffding_quantum(a, b, r),
        _ => Err(Error::KindMismatch("classical and quantum states mixed".into())),
    }
}

/// `max_{u∈[0,1]} (u r − ψ̃(u))` for a concave objective in `u`.
fn anti_from_psi_tilde<F: Real>(psi_tilde: impl Fn(F) -> F, r: F) -> (F, F) {
    let best = golden_max(|u| u * r - psi_tilde(u), F::zero(), F::one(), x_tol());
    (best.x, best.value)
}

/// Classical Hoeffding anti-divergence `H*_r(ρ‖σ)`; requires ρ⁰ ≤ σ⁰.
pub fn hoeffding_anti_classical<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, r: F) -> Result<F> {
    check_rate(r)?;
    rho.check_len(sigma)?;
    if !dc::support_contained(rho, sigma) {
        return Err(Error::SupportViolation);
    }
    let pt = |u: F| dc::psi_tilde(rho, sigma, u, Family::Sandwiched).expect("checked inputs");
    Ok(anti_from_psi_tilde(pt, r).1)
}

/// Quantum Hoeffding anti-divergence with the sandwiched cumulant; requires ρ⁰ ≤ σ⁰.
pub fn hoeffding_anti_quantum(rho: &HermitianOperator, sigma: &HermitianOperator, r: f64) -> Result<f64> {
    check_rate(r)?;
    if !dq::support_contained(rho, sigma)? {
        return Err(Error::SupportViolation);
    }
    // evaluate once up front so numerical errors surface as errors, not panics
    dq::psi_tilde(rho, sigma, 0.5, Family::Sandwiched)?;
    let pt = |u: f64| dq::psi_tilde(rho, sigma, u, Family::Sandwiched).unwrap_or(f64::INFINITY);
    Ok(anti_from_psi_tilde(pt, r).1)
}

/// `H*_r` for either kind of state.
pub fn hoeffding_anti(rho: &State, sigma: &State, r: f64) -> Result<f64> {
    match (rho, sigma) {
        (State::Classical(a), State::Classical(b)) => hoeffding_anti_classical(a, b, r),
        (State::Quantum(a), State::Quantum(b)) => hoeffding_anti_quantum(a, b, r),
        _ => Err(Error::KindMismatch("classical and quantum states mixed".into())),
    }
}

/// A point `μ_α ∝ ρ^α σ^{1−α}` on the Hellinger arc with its two rates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcPoint<F = f64> {
    pub alpha: F,
    pub mu: ClassicalWeight<F>,
    /// `D(μ_α‖σ)`.
    pub rate_to_sigma: F,
    /// `D(μ_α‖ρ)`.
    pub rate_to_rho: F,
}

/// Hellinger arc point at α, rates by direct evaluation.
pub fn hellinger_arc<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, alpha: F) -> Result<ArcPoint<F>> {
    rho.check_len(sigma)?;
    let p = dc::psi(rho, sigma, alpha)?;
    if p == F::neg_infinity() {
        return Err(Error::DisjointSupports);
    }
    let mu: Vec<F> = rho
        .as_slice()
        .iter()
        .zip(sigma.as_slice())
        .map(|(&r, &s)| {
            if r > F::zero() && s > F::zero() {
                (alpha * r.ln() + (F::one() - alpha) * s.ln() - p).exp()
            } else {
                F::zero()
            }
        })
        .collect();
    let mu = ClassicalWeight::new(mu)?;
    let rate = |other: &ClassicalWeight<F>| -> F {
        compensated_sum(
            mu.as_slice()
                .iter()
                .zip(other.as_slice())
                .filter(|(&m, _)| m > F::zero())
                .map(|(&m, &o)| m * (m.ln() - o.ln())),
        )
    };
    Ok(ArcPoint {
        alpha,
        rate_to_sigma: rate(sigma),
        rate_to_rho: rate(rho),
        mu,
    })
}

/// `r_∞ = −log σ(X_∞)`, `X_∞` the set where `ρ/σ` is maximal (log-ratio tolerance `1e-10`).
pub fn r_infty<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>) -> Result<ExtReal<F>> {
    rho.check_len(sigma)?;
    if !dc::support_contained(rho, sigma) {
        return Err(Error::SupportViolation);
    }
    let dmax = dc::max_rel_entropy(rho, sigma)?.to_float();
    if dmax == F::neg_infinity() {
        return Err(Error::ZeroOperator);
    }
    let tol = F::c(1e-10).max(F::epsilon() * F::c(16.0));
    let mass = compensated_sum(
        rho.as_slice()
            .iter()
            .zip(sigma.as_slice())
            .filter(|(&r, _)| r > F::zero())
            .filter(|(&r, &s)| (r.ln() - s.ln()) >= dmax - tol)
            .map(|(_, &s)| s),
    );
    Ok(ExtReal::from_float(-mass.ln()))
}

/// `α > 0` with `D(μ_α‖σ) = r`, for `r ∈ (D₀, r_∞)`.
///
/// `D(μ_α‖σ) = αψ′(α) − ψ(α)` increases in α from `D₀` (α → 0) to `r_∞` (α → ∞).
/// The returned point carries `Ψ̃(r) = D(μ_{α_r}‖ρ)`.
pub fn solve_rate_alpha<F: Real>(rho: &ClassicalWeight<F>, sigma: &ClassicalWeight<F>, r: F) -> Result<ArcPoint<F>> {
    rho.check_len(sigma)?;
    if !dc::support_contained(rho, sigma) {
        return Err(Error::SupportViolation);
    }
    let (_, _, curv) = dc::psi_derivatives(rho, sigma, F::c(0.5))?;
    if curv < F::c(1e-12) {
        return Err(Error::Degenerate);
    }
    let d0 = dc::d0(rho, sigma)?.to_float();
    let rinf = r_infty(rho, sigma)?.to_float();
    if !(r > d0 && r < rinf) {
        return Err(Error::OutOfRange {
            what: "r outside (D0, r_inf)",
            value: r.to_f64_lossy(),
        });
    }
    let f = |a: F| {
        let (p, d1, _) = dc::psi_derivatives(rho, sigma, a).expect("nonempty common support");
        a * d1 - p - r
    };
    let mut hi = F::one();
    let mut guard = 0;
    while f(hi) < F::zero() {
        hi = hi * F::c(2.0);
        guard += 1;
        if guard > 200 || !hi.is_finite() {
            return Err(Error::NonConvergence("rate bracket".into()));
        }
    }
    let alpha = bisect(f, F::zero(), hi, F::epsilon() * hi, 400)
        .ok_or_else(|| Error::NonConvergence("rate bisection".into()))?;
    hellinger_arc(rho, sigma, alpha)
}

/// Binary relative entropy `D((a, 1−a)‖(b, 1−b))`.
pub fn d2(a: f64, b: f64) -> Result<ExtReal> {
    for (what, v) in [("a", a), ("b", b)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange { what, value: v });
        }
    }
    let term = |x: f64, y: f64| -> ExtReal {
        if x == 0.0 {
            ExtReal::zero()
        } else if y == 0.0 {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(x * (x / y).ln())
        }
    };
    Ok(match (term(a, b), term(1.0 - a, 1.0 - b)) {
        (ExtReal::Finite(x), ExtReal::Finite(y)) => ExtReal::Finite(x + y),
        _ => ExtReal::PosInf,
    })
}

/// The root `μ ∈ (0, λ]` of `d2(λ‖μ) = target` (the branch below λ).
pub fn solve_d2(lambda: f64, target: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::OutOfRange {
            what: "lambda",
            value: lambda,
        });
    }
    if target < 0.0 {
        return Err(Error::NegativeTarget(target));
    }
    if target == 0.0 {
        return Ok(lambda);
    }
    let g = |mu: f64| d2(lambda, mu).map(|v| v.to_float()).unwrap_or(f64::INFINITY) - target;
    bisect(g, f64::MIN_POSITIVE, lambda, 0.0, 2000).ok_or_else(|| Error::NonConvergence("solve_d2".into()))
}

/// Which regime of the three-case formula produced `Ψ̃(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TildeCase {
    /// `r ≤ r₁⁺`: value 0.
    Zero,
    /// `r₁⁺ < r < r_∞`: `r − Ψ⁻¹(r)`.
    Interior,
    /// `r ≥ r_∞`: `r − D_∞`.
    Linear,
}

/// Which transform [`LegendreData::legendre`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Transform {
    Psi(f64),
    PsiMinus(f64),
    TildePsi(f64),
}

type PsiFn<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// Cumulant `ψ` on `[1, ∞)` with the constants that fix the shape of `Ψ`.
pub struct LegendreData<'a> {
    psi: PsiFn<'a>,
    pub d1_plus: ExtReal,
    pub d_infty: ExtReal,
    pub r_infty: ExtReal,
}

impl std::fmt::Debug for LegendreData<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LegendreData")
            .field("d1_plus", &self.d1_plus)
            .field("d_infty", &self.d_infty)
            .field("r_infty", &self.r_infty)
            .finish()
    }
}

/// Upper end of the α search for `Ψ(c)`.
const ALPHA_CAP: f64 = 1e6;

impl<'a> LegendreData<'a> {
    /// From an arbitrary convex cumulant and its constants. `r_∞` defaults to
    /// `Ψ(D_∞)` evaluated numerically when not supplied.
    pub fn from_fn(
        psi: impl Fn(f64) -> f64 + Send + Sync + 'a,
        d1_plus: ExtReal,
        d_infty: ExtReal,
        r_infty: Option<ExtReal>,
    ) -> Self {
        let mut data = Self {
            psi: Box::new(psi),
            d1_plus,
            d_infty,
            r_infty: ExtReal::PosInf,
        };
        data.r_infty = match r_infty {
            Some(v) => v,
            None => match d_infty {
                ExtReal::Finite(c) => ExtReal::Finite(data.psi_sup(c)),
                ExtReal::PosInf => ExtReal::PosInf,
            },
        };
        data
    }

    /// Classical pair; `D₁⁺ = ψ′(1)`, `r_∞` in closed form.
    pub fn classical(rho: &'a ClassicalWeight<f64>, sigma: &'a ClassicalWeight<f64>) -> Result<Self> {
        if !dc::support_contained(rho, sigma) {
            return Err(Error::SupportViolation);
        }
        let (_, d1, _) = dc::psi_derivatives(rho, sigma, 1.0)?;
        let dinf = dc::max_rel_entropy(rho, sigma)?;
        let rinf = r_infty(rho, sigma)?;
        Ok(Self::from_fn(
            move |a| dc::psi(rho, sigma, a).expect("lengths checked"),
            ExtReal::Finite(d1),
            dinf,
            Some(rinf),
        ))
    }

    /// Quantum pair with the sandwiched cumulant; `D₁⁺ = D(ρ‖σ)` and `r_∞ = Ψ(D_∞)` numerically.
    pub fn quantum_sandwiched(rho: &'a HermitianOperator, sigma: &'a HermitianOperator) -> Result<Self> {
        if !dq::support_contained(rho, sigma)? {
            return Err(Error::SupportViolation);
        }
        let d = dq::rel_entropy(rho, sigma)?;
        let dinf = dq::max_rel_entropy(rho, sigma)?;
        dq::psi_sandwiched(rho, sigma, 2.0)?;
        Ok(Self::from_fn(
            move |a| dq::psi_sandwiched(rho, sigma, a).unwrap_or(f64::INFINITY),
            d,
            dinf,
            None,
        ))
    }

    pub fn psi(&self, alpha: f64) -> f64 {
        (self.psi)(alpha)
    }

    /// `sup_{α ≥ 1} (cα − ψ(α))` by bracket doubling, for finite `c ≤ D_∞`.
    fn psi_sup(&self, c: f64) -> f64 {
        concave_max_halfline(|a| c * a - (self.psi)(a), 1.0, ALPHA_CAP, 1e-12).value
    }

    /// `Ψ(c)`, `+∞` for `c > D_∞`.
    pub fn psi_conj(&self, c: f64) -> ExtReal {
        match self.d_infty {
            ExtReal::Finite(dinf) if c > dinf => ExtReal::PosInf,
            _ => ExtReal::Finite(self.psi_sup(c)),
        }
    }

    /// `r₁⁺ = Ψ(D₁⁺)`.
    pub fn r1_plus(&self) -> ExtReal {
        match self.d1_plus {
            ExtReal::Finite(c) => self.psi_conj(c),
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }

    /// `Ψ̃(r)` by the three-case formula, with the case used.
    pub fn tilde_psi(&self, r: f64) -> Result<(f64, TildeCase)> {
        let r1 = self.r1_plus();
        if r <= r1.to_float() {
            return Ok((0.0, TildeCase::Zero));
        }
        if let (ExtReal::Finite(rinf), ExtReal::Finite(dinf)) = (self.r_infty, self.d_infty) {
            if r >= rinf {
                return Ok((r - dinf, TildeCase::Linear));
            }
        }
        let lo = self.d1_plus.unwrap();
        let hi = match self.d_infty {
            ExtReal::Finite(d) => d,
            ExtReal::PosInf => {
                let mut h = lo + 1.0;
                while self.psi_sup(h) < r {
                    h = lo + 2.0 * (h - lo);
                    if h > 1e12 {
                        return Err(Error::NonConvergence("psi inverse bracket".into()));
                    }
                }
                h
            }
        };
        let c = bisect(|c| self.psi_sup(c) - r, lo, hi, 1e-15 * (1.0 + hi.abs()), 200)
            .ok_or_else(|| Error::NonConvergence("psi inverse".into()))?;
        Ok((r - c, TildeCase::Interior))
    }

    pub fn legendre(&self, which: Transform) -> Result<ExtReal> {
        Ok(match which {
            Transform::Psi(c) => self.psi_conj(c),
            Transform::PsiMinus(c) => self.psi_conj(c).map(|v| v - c),
            Transform::TildePsi(r) => ExtReal::Finite(self.tilde_psi(r)?.0),
        })
    }
}

//! Pairwise divergences of classical and quantum states.
//!
//! [`classical`] is generic over the float type; [`quantum`] works on
//! `f64` Hermitian operators. [`State`] and [`evaluate`] dispatch between the
//! two for callers that handle both kinds (hypothesis sets, CLI).
//!
//! All formulas are the raw ones, without a normalization correction for the
//! first argument, so the scaling law
//! `D_α(tρ‖sσ) = D_α(ρ‖σ) − log s + α/(α−1)·log t` holds exactly.
//! The cumulant `ψ(α) = (α−1)D_α` is returned as a plain float that may be
//! `−∞` (disjoint supports) or `+∞` (sandwiched family with ρ⁰ ≰ σ⁰).

pub mod classical;
pub mod quantum;

use crate::classical::ClassicalWeight;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::hermcore::HermitianOperator;
use serde::{Deserialize, Serialize};

/// Which Rényi family a cumulant `ψ` belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `ψ(α) = log Tr ρ^α σ^{1−α}`, α ∈ [0, 1].
    Petz,
    /// `ψ*(α) = log Tr(ρ^{1/2} σ^{(1−α)/α} ρ^{1/2})^α`, α ≥ 1.
    Sandwiched,
}

/// Divergence selector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "alpha", rename_all = "snake_case")]
pub enum DivergenceKind {
    Relative,
    Petz(f64),
    /// `f64::INFINITY` selects `D_∞`.
    Sandwiched(f64),
    LogEuclidean(f64),
    Maximal(f64),
    MaxRel,
    Chernoff,
}

/// A computed divergence tagged with its kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceValue {
    pub value: ExtReal,
    pub kind: DivergenceKind,
}

/// A classical weight or a quantum operator.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Classical(ClassicalWeight<f64>),
    Quantum(HermitianOperator),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Classical(w) => w.len(),
            State::Quantum(h) => h.dim(),
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, State::Classical(_))
    }

    /// Diagonal embedding of a classical state; quantum states pass through.
    pub fn to_operator(&self) -> HermitianOperator {
        match self {
            State::Classical(w) => HermitianOperator::diag(w.as_slice()),
            State::Quantum(h) => h.clone(),
        }
    }
}

fn check_alpha(kind: DivergenceKind) -> Result<()> {
    let bad = |a: f64| Err(Error::OutOfRange { what: "alpha", value: a });
    match kind {
        DivergenceKind::Petz(a) if !(0.0..1.0).contains(&a) => bad(a),
        DivergenceKind::Sandwiched(a) if a.is_nan() || a <= 1.0 => bad(a),
        DivergenceKind::LogEuclidean(a) | DivergenceKind::Maximal(a) if !(a > 0.0 && a < 1.0) => bad(a),
        _ => Ok(()),
    }
}

/// Evaluates a divergence on a pair of states of the same kind.
pub fn evaluate(kind: DivergenceKind, rho: &State, sigma: &State) -> Result<ExtReal> {
    check_alpha(kind)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    match (rho, sigma) {
        (State::Classical(r), State::Classical(s)) => {
            use classical as c;
            Ok(match kind {
                DivergenceKind::Relative => c::rel_entropy(r, s)?,
                DivergenceKind::Petz(a) => c::petz_renyi(r, s, a)?,
                DivergenceKind::Sandwiched(a) => c::sandwiched_renyi(r, s, a)?,
                // commuting inputs: both collapse to the Petz value
                DivergenceKind::LogEuclidean(a) | DivergenceKind::Maximal(a) => c::petz_renyi(r, s, a)?,
                DivergenceKind::MaxRel => c::max_rel_entropy(r, s)?,
                DivergenceKind::Chernoff => c::chernoff(r, s)?,
            })
        }
        (State::Quantum(r), State::Quantum(s)) => {
            use quantum as q;
            match kind {
                DivergenceKind::Relative => q::rel_entropy(r, s),
                DivergenceKind::Petz(a) => q::petz_renyi(r, s, a),
                DivergenceKind::Sandwiched(a) => q::sandwiched_renyi(r, s, a),
                DivergenceKind::LogEuclidean(a) => q::log_euclidean_renyi(r, s, a).map(ExtReal::Finite),
                DivergenceKind::Maximal(a) => q::maximal_renyi(r, s, a).map(ExtReal::Finite),
                DivergenceKind::MaxRel => q::max_rel_entropy(r, s),
                DivergenceKind::Chernoff => q::chernoff(r, s),
            }
        }
        _ => Err(Error::KindMismatch("classical and quantum states mixed".into())),
    }
}

/// `ψ(α)` for either kind of state.
pub fn psi_eval(rho: &State, sigma: &State, alpha: f64, family: Family) -> Result<f64> {
    match (rho, sigma) {
        (State::Classical(r), State::Classical(s)) => classical::psi_family(r, s, alpha, family),
        (State::Quantum(r), State::Quantum(s)) => match family {
            Family::Petz => quantum::psi_petz(r, s, alpha),
            Family::Sandwiched => quantum::psi_sandwiched(r, s, alpha),
        },
        _ => Err(Error::KindMismatch("classical and quantum states mixed".into())),
    }
}

/// `ψ̃(u) = (1 − u)·ψ(1/(1 − u))`; for the sandwiched family `u = 1` gives `D_∞`.
pub fn psi_tilde_eval(rho: &State, sigma: &State, u: f64, family: Family) -> Result<f64> {
    match (rho, sigma) {
        (State::Classical(r), State::Classical(s)) => classical::psi_tilde(r, s, u, family),
        (State::Quantum(r), State::Quantum(s)) => quantum::psi_tilde(r, s, u, family),
        _ => Err(Error::KindMismatch("classical and quantum states mixed".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_rejects_mixed_and_bad_alpha() {
        let c = State::Classical(ClassicalWeight::uniform(2));
        let q = State::Quantum(HermitianOperator::diag(&[0.5, 0.5]));
        assert!(matches!(evaluate(DivergenceKind::Relative, &c, &q), Err(Error::KindMismatch(_))));
        assert!(matches!(
            evaluate(DivergenceKind::Petz(1.5), &c, &c),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            evaluate(DivergenceKind::Sandwiched(0.5), &q, &q),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn classical_and_diagonal_quantum_agree() {
        let r = ClassicalWeight::probability(vec![0.5, 0.5]).unwrap();
        let s = ClassicalWeight::probability(vec![0.25, 0.75]).unwrap();
        let (cr, cs) = (State::Classical(r), State::Classical(s));
        let (qr, qs) = (State::Quantum(cr.to_operator()), State::Quantum(cs.to_operator()));
        for kind in [
            DivergenceKind::Relative,
            DivergenceKind::Petz(0.3),
            DivergenceKind::Sandwiched(2.0),
            DivergenceKind::Sandwiched(f64::INFINITY),
            DivergenceKind::LogEuclidean(0.4),
            DivergenceKind::Maximal(0.6),
            DivergenceKind::MaxRel,
            DivergenceKind::Chernoff,
        ] {
            let a = evaluate(kind, &cr, &cs).unwrap().unwrap();
            let b = evaluate(kind, &qr, &qs).unwrap().unwrap();
            assert!((a - b).abs() < 1e-9, "{kind:?}: {a} vs {b}");
        }
    }
}

//! Explicit constructions with certified numeric reports.
//!
//! Every report lists named quantities and a table of inequalities. Each row
//! stores both sides, so it can be re-checked from the serialized report alone.

mod coin;
mod interval;
mod pure;
mod quantum;
mod semiclassical;

pub use coin::{coin_example_report, coin_finite_n_check, coin_states, FiniteNCheck};
pub use interval::{
    interval_constructed_test, interval_example_report, interval_monte_carlo, random_cylinder_tests, CylinderErrors, CylinderTest,
    IntervalErrors, IntervalModel, McEstimate,
};
pub use pure::{pure_state_report, pure_state_steps, PureStep};
pub use quantum::{
    diff_delta, hat_triple, half_delta_state, minimal_report, minimal_triple, param_family, param_family_closed_form,
    stein_gap_report, top_diff_state, tune_direct_example, tune_stein_example, DiffDelta, DirectParams, HatTriple,
    ParamFamily, SteinParams,
};
pub use semiclassical::{pinch, random_semiclassical_instance, semiclassical_combine, to_projective, SemiclassicalOutcome};

use crate::ext::ExtReal;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Comparison asserted by a report row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "==")]
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "==",
        }
    }
}

/// One asserted inequality.
///
/// `slack` is `rhs − lhs` for `<`/`<=`, `lhs − rhs` for `>`/`>=`, and `−|lhs − rhs|`
/// for `==`. Non-strict rows pass iff `slack ≥ −tol`; strict rows pass iff
/// `slack > tol`, so `tol` is the required margin there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: ExtReal,
    pub relation: Relation,
    pub rhs: ExtReal,
    #[serde(with = "crate::ext::float_serde")]
    pub slack: f64,
    pub tol: f64,
    pub pass: bool,
    /// Informational rows are reported but do not affect [`CounterexampleReport::pass`].
    #[serde(default)]
    pub informational: bool,
}

fn signed_gap(hi: ExtReal, lo: ExtReal) -> f64 {
    match (hi, lo) {
        (ExtReal::PosInf, ExtReal::PosInf) => 0.0,
        (ExtReal::PosInf, _) => f64::INFINITY,
        (_, ExtReal::PosInf) => f64::NEG_INFINITY,
        (ExtReal::Finite(a), ExtReal::Finite(b)) => a - b,
    }
}

impl Inequality {
    pub fn new(name: impl Into<String>, lhs: ExtReal, relation: Relation, rhs: ExtReal, tol: f64) -> Self {
        let mut row = Self {
            name: name.into(),
            lhs,
            relation,
            rhs,
            slack: 0.0,
            tol,
            pass: false,
            informational: false,
        };
        (row.slack, row.pass) = row.evaluate();
        row
    }

    pub fn finite(name: impl Into<String>, lhs: f64, relation: Relation, rhs: f64, tol: f64) -> Self {
        Self::new(name, ExtReal::from_float(lhs), relation, ExtReal::from_float(rhs), tol)
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    /// Recomputes `(slack, pass)` from the stored sides.
    pub fn evaluate(&self) -> (f64, bool) {
        let slack = match self.relation {
            Relation::Le | Relation::Lt => signed_gap(self.rhs, self.lhs),
            Relation::Ge | Relation::Gt => signed_gap(self.lhs, self.rhs),
            Relation::Eq => -signed_gap(self.lhs, self.rhs).abs(),
        };
        let slack = if slack.is_nan() { f64::NEG_INFINITY } else { slack };
        let pass = match self.relation {
            Relation::Lt | Relation::Gt => slack > self.tol,
            _ => slack >= -self.tol,
        };
        (slack, pass)
    }

    /// Whether the stored slack and verdict agree with the stored sides.
    pub fn is_consistent(&self) -> bool {
        let (s, p) = self.evaluate();
        p == self.pass && (s == self.slack || (s - self.slack).abs() <= 1e-15 * s.abs().max(1.0))
    }
}

/// Named quantities and asserted inequalities for one construction.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub quantities: BTreeMap<String, ExtReal>,
    pub inequalities: Vec<Inequality>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl CounterexampleReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, name: impl Into<String>, v: f64) -> &mut Self {
        self.params.insert(name.into(), v);
        self
    }

    pub fn quantity(&mut self, name: impl Into<String>, v: impl Into<ExtReal>) -> &mut Self {
        self.quantities.insert(name.into(), v.into());
        self
    }

    pub fn push(&mut self, row: Inequality) -> &mut Self {
        self.inequalities.push(row);
        self
    }

    pub fn note(&mut self, s: impl Into<String>) -> &mut Self {
        self.notes.push(s.into());
        self
    }

    /// All non-informational rows pass.
    pub fn pass(&self) -> bool {
        self.inequalities.iter().filter(|r| !r.informational).all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Inequality> {
        self.inequalities.iter().filter(|r| !r.informational && !r.pass)
    }

    /// Smallest slack among asserted rows (relative to their pass threshold).
    pub fn worst_slack(&self) -> f64 {
        self.inequalities
            .iter()
            .filter(|r| !r.informational)
            .map(|r| r.slack)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn merge(&mut self, prefix: &str, other: CounterexampleReport) {
        for (k, v) in other.params {
            self.params.insert(format!("{prefix}.{k}"), v);
        }
        for (k, v) in other.quantities {
            self.quantities.insert(format!("{prefix}.{k}"), v);
        }
        for mut row in other.inequalities {
            row.name = format!("{prefix}: {}", row.name);
            self.inequalities.push(row);
        }
        self.notes.extend(other.notes);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_conventions() {
        let r = Inequality::finite("a", 1.0, Relation::Le, 2.0, 0.0);
        assert_eq!((r.slack, r.pass), (1.0, true));
        let r = Inequality::finite("b", 1.0, Relation::Gt, 1.0, 0.0);
        assert!(!r.pass);
        let r = Inequality::finite("c", 1.0, Relation::Eq, 1.0 + 1e-10, 1e-9);
        assert!(r.pass && r.slack < 0.0);
        let r = Inequality::new("d", ExtReal::PosInf, Relation::Ge, ExtReal::Finite(3.0), 0.0);
        assert!(r.pass && r.slack.is_infinite());
        let r = Inequality::finite("e", f64::NAN, Relation::Le, 0.0, 1.0);
        assert!(!r.pass);
    }

    #[test]
    fn informational_rows_do_not_fail() {
        let mut rep = CounterexampleReport::new("x");
        rep.push(Inequality::finite("lit", 2.0, Relation::Eq, 1.0, 0.0).informational());
        rep.push(Inequality::finite("ok", 1.0, Relation::Eq, 1.0, 0.0));
        assert!(rep.pass());
        let json = serde_json::to_string(&rep).unwrap();
        let back: CounterexampleReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rep);
        assert!(back.inequalities.iter().all(Inequality::is_consistent));
    }
}
